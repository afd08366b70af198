#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/commit_record.hpp"
#include "gitscale/time.hpp"

namespace gitscale {

/// Bookkeeping for one mining run. `commits_total` counts the commits that passed
/// the cutoff and carried usable metadata; it always equals the number of emitted
/// records plus `merges_excluded`.
struct MiningReport {
    std::string project_id;
    std::size_t commits_total = 0;
    std::size_t merges_excluded = 0;
    std::size_t binary_edits_skipped = 0;
    std::size_t out_of_order_commits_reordered = 0;
    std::size_t unparsable_commits_skipped = 0;
    std::size_t empty_identity_skipped = 0;
    std::size_t commits_after_cutoff = 0;
    Date cutoff{};
};

struct MiningResult {
    std::vector<CommitRecord> records;
    MiningReport report;
};

/// True for locators git has to clone first (URLs and scp-style `user@host:path`).
[[nodiscard]] bool is_remote_locator(std::string_view locator);

/// Walks every commit reachable from HEAD and returns the non-merge commits authored
/// on or before `cutoff` (UTC), sorted by author timestamp then commit id.
/// Throws RepositoryError when the locator is not a readable git repository.
[[nodiscard]] MiningResult extract_commits(const std::string& locator, Date cutoff,
                                           std::string project_id = {});

/// The report as a pretty-printed JSON document.
[[nodiscard]] std::string report_to_json(const MiningReport& report);

}  // namespace gitscale

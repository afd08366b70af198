#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/time.hpp"

namespace gitscale {

struct FileEdit {
    std::string path;
    bool is_binary = false;
    /// Character-level distance; always 0 for binary files.
    std::uint64_t levenshtein_distance = 0;

    friend bool operator==(const FileEdit&, const FileEdit&) = default;
};

/// One non-merge commit as seen by the analysis.
struct CommitRecord {
    std::string commit_id;
    std::string author_email;
    Instant timestamp{};
    bool is_merge = false;
    std::vector<FileEdit> file_edits;

    /// Number of modified files, binary ones included.
    [[nodiscard]] std::size_t files_modified() const noexcept { return file_edits.size(); }
    /// Sum of the per-file edit distances.
    [[nodiscard]] std::uint64_t total_distance() const noexcept;

    friend bool operator==(const CommitRecord&, const CommitRecord&) = default;
};

/// Lower-cases ASCII letters and trims surrounding whitespace.
[[nodiscard]] std::string normalize_email(std::string_view email);

/// Ordering used for persisted streams: timestamp, then commit id.
[[nodiscard]] bool record_order(const CommitRecord& a, const CommitRecord& b) noexcept;

/// Serializes one record as a single JSON line (no trailing newline).
[[nodiscard]] std::string to_json_line(const CommitRecord& record);

void write_records(std::span<const CommitRecord> records, std::ostream& out);
/// Reads a JSON Lines stream, validating every record. Throws SchemaError.
[[nodiscard]] std::vector<CommitRecord> read_records(std::istream& in);

void persist_records(std::span<const CommitRecord> records, const std::filesystem::path& destination);
[[nodiscard]] std::vector<CommitRecord> load_records(const std::filesystem::path& source);

}  // namespace gitscale

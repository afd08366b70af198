#include "gitscale/miner.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <optional>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "gitscale/edit_distance.hpp"
#include "gitscale/errors.hpp"
#include "git_process.hpp"

namespace gitscale {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kSubmoduleMode = "160000";

bool is_hex_id(std::string_view s) {
    return (s.size() == 40 || s.size() == 64) &&
           std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

bool is_null_id(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0'; });
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, end - start));
        start = end + 1;
    }
}

/// A bare clone in a temporary directory, removed on destruction.
class TemporaryClone {
public:
    explicit TemporaryClone(const std::string& url) {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("gitscale-clone-" + std::to_string(rd()) + std::to_string(rd()));
        const auto r = detail::run_git({"clone", "--bare", "--quiet", url, path_.string()});
        if (r.exit_code != 0) {
            std::error_code ec;
            fs::remove_all(path_, ec);
            throw RepositoryError("cannot clone '" + url + "': " + r.err);
        }
    }
    ~TemporaryClone() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TemporaryClone(const TemporaryClone&) = delete;
    TemporaryClone& operator=(const TemporaryClone&) = delete;

    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string trim_line(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

fs::path resolve_git_dir(const fs::path& repo) {
    std::error_code ec;
    if (!fs::exists(repo, ec)) throw RepositoryError("repository path does not exist: " + repo.string());
    const auto r = detail::run_git({"-C", repo.string(), "rev-parse", "--absolute-git-dir"});
    if (r.exit_code != 0) throw RepositoryError("not a readable git repository: " + repo.string());
    const fs::path git_dir = trim_line(r.out);
    const fs::path wanted = fs::canonical(repo, ec);
    // Refuse a plain directory nested inside some other repository.
    if (fs::canonical(git_dir, ec) != wanted) {
        const auto top = detail::run_git({"-C", repo.string(), "rev-parse", "--show-toplevel"});
        if (top.exit_code != 0 || fs::canonical(fs::path(trim_line(top.out)), ec) != wanted) {
            throw RepositoryError("not the root of a git repository: " + repo.string());
        }
    }
    return git_dir;
}

struct LogEntry {
    std::string id;
    std::vector<std::string> parents;
    std::string email;
    Instant timestamp;
};

struct RawChange {
    std::string old_mode, new_mode, old_id, new_id;
    char status = 'M';
    std::string path;
};

// Parses `git diff-tree --stdin -z --raw` output: a commit id token followed by
// ":<old mode> <new mode> <old id> <new id> <status>" tokens, each followed by one
// path (two for renames and copies).
std::unordered_map<std::string, std::vector<RawChange>> parse_diff_tree(std::string_view out) {
    std::vector<std::string_view> tokens = split(out, '\0');
    if (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
    std::unordered_map<std::string, std::vector<RawChange>> changes;
    std::vector<RawChange>* current = nullptr;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string_view tok = tokens[i];
        while (!tok.empty() && tok.front() == '\n') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == '\n') tok.remove_suffix(1);
        if (!tok.empty() && tok.front() == ':') {
            if (current == nullptr) throw RepositoryError("unexpected diff-tree output before a commit header");
            const std::vector<std::string_view> f = split(tok.substr(1), ' ');
            if (f.size() != 5 || f[4].empty()) throw RepositoryError("malformed diff-tree entry: " + std::string(tok));
            RawChange c{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]), f[4].front(), {}};
            const std::size_t path_count = (c.status == 'R' || c.status == 'C') ? 2 : 1;
            if (i + path_count >= tokens.size()) throw RepositoryError("truncated diff-tree entry");
            i += path_count;
            c.path = std::string(tokens[i]);
            current->push_back(std::move(c));
        } else if (is_hex_id(tok)) {
            current = &changes[std::string(tok)];
        } else if (!tok.empty()) {
            throw RepositoryError("unexpected diff-tree token: " + std::string(tok));
        }
    }
    return changes;
}

std::unordered_map<std::string, std::vector<RawChange>> read_changes(const fs::path& git_dir,
                                                                     const std::vector<const LogEntry*>& commits) {
    std::string input;
    for (const LogEntry* c : commits) input += c->id + '\n';
    const auto r = detail::run_git(
        {"--git-dir=" + git_dir.string(), "diff-tree", "--stdin", "-r", "-z", "--raw", "-M", "--root", "--always"},
        input);
    if (r.exit_code != 0) throw RepositoryError("git diff-tree failed: " + r.err);
    return parse_diff_tree(r.out);
}

std::vector<LogEntry> read_log(const fs::path& git_dir, std::size_t& unparsable) {
    const auto head = detail::run_git({"--git-dir=" + git_dir.string(), "rev-parse", "--verify", "-q", "HEAD^{commit}"});
    if (head.exit_code != 0) return {};  // no commits yet
    const auto r = detail::run_git({"--git-dir=" + git_dir.string(), "log", "--topo-order", "--reverse",
                                    "--format=%H%x1f%P%x1f%ae%x1f%at%x1e", "HEAD"});
    if (r.exit_code != 0) throw RepositoryError("git log failed: " + r.err);

    std::vector<LogEntry> entries;
    for (std::string_view chunk : split(r.out, '\x1e')) {
        while (!chunk.empty() && (chunk.front() == '\n' || chunk.front() == '\r')) chunk.remove_prefix(1);
        if (chunk.empty()) continue;
        const std::vector<std::string_view> f = split(chunk, '\x1f');
        std::int64_t seconds = 0;
        const bool ok = f.size() == 4 && is_hex_id(f[0]) &&
                        std::from_chars(f[3].data(), f[3].data() + f[3].size(), seconds).ptr == f[3].data() + f[3].size() &&
                        !f[3].empty();
        if (!ok) {
            ++unparsable;
            continue;
        }
        LogEntry e;
        e.id = std::string(f[0]);
        if (!f[1].empty()) {
            for (std::string_view p : split(f[1], ' ')) e.parents.emplace_back(p);
        }
        e.email = std::string(f[2]);
        e.timestamp = Instant{std::chrono::seconds{seconds}};
        entries.push_back(std::move(e));
    }
    return entries;
}

MiningResult mine_git_dir(const fs::path& git_dir, Date cutoff, std::string project_id) {
    MiningResult result;
    MiningReport& report = result.report;
    report.project_id = std::move(project_id);
    report.cutoff = cutoff;
    const Instant end = end_of(cutoff);

    const std::vector<LogEntry> log = read_log(git_dir, report.unparsable_commits_skipped);

    std::vector<const LogEntry*> kept;
    std::optional<Instant> latest;
    for (const LogEntry& e : log) {
        if (e.timestamp >= end) {
            ++report.commits_after_cutoff;
            continue;
        }
        if (e.parents.size() >= 2) {
            ++report.merges_excluded;
            continue;
        }
        if (normalize_email(e.email).empty()) {
            ++report.empty_identity_skipped;
            continue;
        }
        // Topological order puts parents first, so an earlier date than something
        // already walked means the dates are out of order.
        if (latest && e.timestamp < *latest) ++report.out_of_order_commits_reordered;
        if (!latest || e.timestamp > *latest) latest = e.timestamp;
        kept.push_back(&e);
    }

    const auto changes = kept.empty() ? decltype(read_changes(git_dir, kept)){} : read_changes(git_dir, kept);
    detail::BlobReader blobs(git_dir);
    auto read_blob = [&blobs](const std::string& id) { return is_null_id(id) ? std::string{} : blobs.read(id); };

    result.records.reserve(kept.size());
    for (const LogEntry* e : kept) {
        CommitRecord record;
        record.commit_id = e->id;
        record.author_email = normalize_email(e->email);
        record.timestamp = e->timestamp;
        if (const auto it = changes.find(e->id); it != changes.end()) {
            for (const RawChange& c : it->second) {
                if (c.old_mode == kSubmoduleMode || c.new_mode == kSubmoduleMode) continue;
                FileEdit edit;
                edit.path = c.path;
                if (c.old_id != c.new_id) {
                    const std::string before = read_blob(c.old_id);
                    const std::string after = read_blob(c.new_id);
                    edit.is_binary = looks_binary(before) || looks_binary(after);
                    if (edit.is_binary) {
                        ++report.binary_edits_skipped;
                    } else {
                        edit.levenshtein_distance = commit_edit_distance(before, after);
                    }
                }
                record.file_edits.push_back(std::move(edit));
            }
        }
        result.records.push_back(std::move(record));
    }
    std::sort(result.records.begin(), result.records.end(), record_order);
    report.commits_total = result.records.size() + report.merges_excluded;
    return result;
}

}  // namespace

bool is_remote_locator(std::string_view locator) {
    if (locator.find("://") != std::string_view::npos) return true;
    const std::size_t at = locator.find('@');
    const std::size_t colon = locator.find(':');
    return at != std::string_view::npos && colon != std::string_view::npos && at < colon &&
           locator.find('/') > colon;
}

MiningResult extract_commits(const std::string& locator, Date cutoff, std::string project_id) {
    if (!cutoff.ok()) throw InvalidArgument("invalid cutoff date");
    if (is_remote_locator(locator)) {
        const TemporaryClone clone(locator);
        return mine_git_dir(clone.path(), cutoff, std::move(project_id));
    }
    return mine_git_dir(resolve_git_dir(locator), cutoff, std::move(project_id));
}

std::string report_to_json(const MiningReport& report) {
    const nlohmann::ordered_json j = {
        {"project", report.project_id},
        {"cutoff", format_date(report.cutoff)},
        {"commits_total", report.commits_total},
        {"merges_excluded", report.merges_excluded},
        {"binary_edits_skipped", report.binary_edits_skipped},
        {"out_of_order_commits_reordered", report.out_of_order_commits_reordered},
        {"unparsable_commits_skipped", report.unparsable_commits_skipped},
        {"empty_identity_skipped", report.empty_identity_skipped},
        {"commits_after_cutoff", report.commits_after_cutoff},
    };
    return j.dump(2) + "\n";
}

}  // namespace gitscale

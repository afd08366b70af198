#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace testing_support {

struct FixtureCommit {
    std::string author_email;
    std::int64_t unix_time = 0;
    /// New contents by path; nullopt deletes the path.
    std::map<std::string, std::optional<std::string>> files;
    std::vector<std::pair<std::string, std::string>> renames;
    std::string message = "change";
    /// Marks returned by earlier commit() calls. The first is the parent on the
    /// branch; any further ones make this a merge commit. Empty: continue the branch.
    std::vector<int> parents;
};

/// Builds a git repository with exact timestamps through `git fast-import`.
class FixtureRepo {
public:
    /// An empty `dir` only builds the stream; finish() then has nowhere to import.
    explicit FixtureRepo(std::filesystem::path dir);

    /// Queues a commit on `master` and returns its mark.
    int commit(const FixtureCommit& c);
    /// Imports all queued commits and points HEAD at master.
    void finish();

    /// The raw fast-import stream built so far.
    [[nodiscard]] const std::string& stream() const { return stream_; }
    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::string stream_;
    int next_mark_ = 1;
    int last_mark_ = 0;
};

/// Creates an empty repository with `master` as its default branch.
void git_init(const std::filesystem::path& dir);
/// Runs git in `dir` with `input` on stdin; throws on a nonzero exit.
std::string git_in(const std::filesystem::path& dir, const std::vector<std::string>& args,
                   const std::string& input = {});

}  // namespace testing_support

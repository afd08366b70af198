#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace gitscale::detail {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs `git <args...>` to completion, feeding `input` on stdin.
CommandResult run_git(const std::vector<std::string>& args, const std::string& input = {});

/// A long-lived `git cat-file --batch` session for reading blob contents.
class BlobReader {
public:
    explicit BlobReader(const std::filesystem::path& git_dir);
    ~BlobReader();
    BlobReader(const BlobReader&) = delete;
    BlobReader& operator=(const BlobReader&) = delete;

    /// Returns the raw bytes of the object. Throws RepositoryError when missing.
    std::string read(const std::string& object_id);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gitscale::detail

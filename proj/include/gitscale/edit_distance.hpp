#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gitscale {

/// Unit-cost insert/delete/substitute distance over Unicode code points.
[[nodiscard]] std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// Decodes both arguments as UTF-8 (lossy) and compares code points.
[[nodiscard]] std::size_t levenshtein(std::string_view a, std::string_view b);

/// Decodes UTF-8, replacing each byte of an invalid sequence with U+FFFD.
[[nodiscard]] std::u32string decode_utf8_lossy(std::string_view bytes);

/// Number of bytes inspected for NUL when classifying content as binary.
inline constexpr std::size_t kBinaryProbeBytes = 8000;

/// True when the content has a NUL within the first kBinaryProbeBytes bytes, or is
/// non-empty and contains no valid UTF-8 sequence at all.
[[nodiscard]] bool looks_binary(std::string_view bytes);

/// Splits into lines with the terminating "\n" (and a preceding "\r") removed.
/// A trailing newline does not start an extra empty line.
[[nodiscard]] std::vector<std::u32string> split_lines(std::u32string_view text);

struct LineDistanceOptions {
    /// Largest (before lines x after lines) block aligned optimally in one piece.
    /// Bigger blocks are first split into hunks by a line diff.
    std::size_t exact_cell_limit = std::size_t{1} << 16;
    /// Edit-script length beyond which the line diff gives up and treats the block
    /// as a single hunk.
    std::size_t max_diff_edits = 2000;
};

/// Line-level distance. Identical lines cost nothing, a line that is only added or
/// only removed costs its length, and a removed line paired with an added line
/// costs their character Levenshtein distance. The pairing is the minimum-cost
/// alignment of the two line sequences; blocks beyond `exact_cell_limit` are
/// aligned hunk by hunk, which can only over-estimate the optimum.
[[nodiscard]] std::size_t line_edit_distance(std::span<const std::u32string> before,
                                             std::span<const std::u32string> after,
                                             const LineDistanceOptions& options = {});

/// Distance between two versions of a text file (UTF-8, lossy).
[[nodiscard]] std::size_t commit_edit_distance(std::string_view before, std::string_view after,
                                               const LineDistanceOptions& options = {});

enum class DiffOp { equal, remove, insert };

struct DiffEntry {
    DiffOp op;
    std::size_t before_index;  // valid for equal/remove
    std::size_t after_index;   // valid for equal/insert
};

/// Shortest edit script between two line sequences (Myers). Sets `complete` to false
/// and returns an empty script when more than `max_edits` edits are needed.
[[nodiscard]] std::vector<DiffEntry> diff_lines(std::span<const std::u32string> before,
                                                std::span<const std::u32string> after,
                                                std::size_t max_edits, bool& complete);

}  // namespace gitscale

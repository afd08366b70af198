#include "gitscale/edit_distance.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>

namespace gitscale {
namespace {

constexpr char32_t kReplacement = U'�';

// Length of the valid UTF-8 sequence starting at `i`, or 0 if invalid.
std::size_t utf8_sequence(std::string_view s, std::size_t i, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    std::size_t len = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
        min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
        min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
        min = 0x10000;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    return len;
}

template <typename Seq>
std::size_t levenshtein_impl(Seq a, Seq b) {
    // Common prefix and suffix never change the distance.
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    a.remove_prefix(prefix);
    b.remove_prefix(prefix);
    while (!a.empty() && !b.empty() && a.back() == b.back()) {
        a.remove_suffix(1);
        b.remove_suffix(1);
    }
    if (a.size() < b.size()) std::swap(a, b);
    if (b.empty()) return a.size();

    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({up + 1, row[j - 1] + 1, subst});
            diag = up;
        }
    }
    return row[b.size()];
}

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Minimum-cost alignment of two line blocks.
std::size_t align_block(std::span<const std::u32string> before,
                        std::span<const std::u32string> after) {
    const std::size_t n = before.size();
    const std::size_t m = after.size();
    std::vector<std::size_t> prev(m + 1);
    std::vector<std::size_t> cur(m + 1);
    prev[0] = 0;
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + after[j - 1].size();
    for (std::size_t i = 1; i <= n; ++i) {
        const std::u32string& line = before[i - 1];
        cur[0] = prev[0] + line.size();
        for (std::size_t j = 1; j <= m; ++j) {
            const std::u32string& other = after[j - 1];
            std::size_t best = std::min(prev[j] + line.size(), cur[j - 1] + other.size());
            if (line == other) {
                best = std::min(best, prev[j - 1]);
            } else if (prev[j - 1] + absdiff(line.size(), other.size()) < best) {
                best = std::min(best, prev[j - 1] + levenshtein(line, other));
            }
            cur[j] = best;
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

std::size_t positional_pairing(std::span<const std::u32string> before,
                               std::span<const std::u32string> after) {
    std::size_t total = 0;
    const std::size_t common = std::min(before.size(), after.size());
    for (std::size_t k = 0; k < common; ++k) total += levenshtein(before[k], after[k]);
    for (std::size_t k = common; k < before.size(); ++k) total += before[k].size();
    for (std::size_t k = common; k < after.size(); ++k) total += after[k].size();
    return total;
}

std::size_t hunk_cost(std::span<const std::u32string> removed,
                      std::span<const std::u32string> added, std::size_t cell_limit) {
    if (removed.empty() || added.empty() || removed.size() * added.size() <= cell_limit) {
        return align_block(removed, added);
    }
    return positional_pairing(removed, added);
}

}  // namespace

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
    return levenshtein_impl(a, b);
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::u32string da = decode_utf8_lossy(a);
    const std::u32string db = decode_utf8_lossy(b);
    return levenshtein_impl(std::u32string_view{da}, std::u32string_view{db});
}

std::u32string decode_utf8_lossy(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        char32_t cp = 0;
        const std::size_t len = utf8_sequence(bytes, i, cp);
        if (len == 0) {
            out.push_back(kReplacement);
            ++i;
        } else {
            out.push_back(cp);
            i += len;
        }
    }
    return out;
}

bool looks_binary(std::string_view bytes) {
    const std::string_view probe = bytes.substr(0, kBinaryProbeBytes);
    if (probe.find('\0') != std::string_view::npos) return true;
    if (bytes.empty()) return false;
    std::size_t i = 0;
    while (i < bytes.size()) {
        char32_t cp = 0;
        const std::size_t len = utf8_sequence(bytes, i, cp);
        if (len != 0) return false;
        ++i;
    }
    return true;
}

std::vector<std::u32string> split_lines(std::u32string_view text) {
    std::vector<std::u32string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(U'\n', start);
        const bool terminated = end != std::u32string_view::npos;
        if (!terminated) end = text.size();
        std::size_t stop = end;
        if (terminated && stop > start && text[stop - 1] == U'\r') --stop;
        lines.emplace_back(text.substr(start, stop - start));
        start = terminated ? end + 1 : end;
    }
    return lines;
}

std::vector<DiffEntry> diff_lines(std::span<const std::u32string> before,
                                  std::span<const std::u32string> after, std::size_t max_edits,
                                  bool& complete) {
    // Intern lines so the inner loop compares integers.
    std::unordered_map<std::u32string_view, std::int32_t> ids;
    auto intern = [&ids](std::span<const std::u32string> lines) {
        std::vector<std::int32_t> out;
        out.reserve(lines.size());
        for (const auto& line : lines) {
            const auto [it, inserted] =
                ids.try_emplace(std::u32string_view{line}, static_cast<std::int32_t>(ids.size()));
            out.push_back(it->second);
        }
        return out;
    };
    const std::vector<std::int32_t> a = intern(before);
    const std::vector<std::int32_t> b = intern(after);
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    const auto m = static_cast<std::ptrdiff_t>(b.size());
    const std::ptrdiff_t limit = std::min<std::ptrdiff_t>(n + m, static_cast<std::ptrdiff_t>(max_edits));

    // trace[d] holds V[-d-1 .. d+1] as it was at the start of step d.
    std::vector<std::vector<std::ptrdiff_t>> trace;
    std::vector<std::ptrdiff_t> v(static_cast<std::size_t>(2 * limit + 3), 0);
    const std::ptrdiff_t offset = limit + 1;
    auto at = [&](std::ptrdiff_t k) -> std::ptrdiff_t& { return v[static_cast<std::size_t>(k + offset)]; };

    std::ptrdiff_t found = -1;
    for (std::ptrdiff_t d = 0; d <= limit && found < 0; ++d) {
        trace.emplace_back(v.begin() + (offset - d - 1), v.begin() + (offset + d + 2));
        for (std::ptrdiff_t k = -d; k <= d; k += 2) {
            std::ptrdiff_t x = (k == -d || (k != d && at(k - 1) < at(k + 1))) ? at(k + 1) : at(k - 1) + 1;
            std::ptrdiff_t y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            at(k) = x;
            if (x >= n && y >= m) {
                found = d;
                break;
            }
        }
    }
    complete = found >= 0;
    if (!complete) return {};

    std::vector<DiffEntry> script;
    std::ptrdiff_t x = n;
    std::ptrdiff_t y = m;
    for (std::ptrdiff_t d = found; d >= 0; --d) {
        const auto& snap = trace[static_cast<std::size_t>(d)];
        auto old = [&](std::ptrdiff_t k) { return snap[static_cast<std::size_t>(k + d + 1)]; };
        const std::ptrdiff_t k = x - y;
        const bool down = k == -d || (k != d && old(k - 1) < old(k + 1));
        const std::ptrdiff_t prev_k = down ? k + 1 : k - 1;
        const std::ptrdiff_t prev_x = d == 0 ? 0 : old(prev_k);
        const std::ptrdiff_t prev_y = d == 0 ? 0 : prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            --x;
            --y;
            script.push_back({DiffOp::equal, static_cast<std::size_t>(x), static_cast<std::size_t>(y)});
        }
        if (d > 0) {
            if (down) {
                --y;
                script.push_back({DiffOp::insert, 0, static_cast<std::size_t>(y)});
            } else {
                --x;
                script.push_back({DiffOp::remove, static_cast<std::size_t>(x), 0});
            }
        }
    }
    std::reverse(script.begin(), script.end());
    return script;
}

std::size_t line_edit_distance(std::span<const std::u32string> before,
                               std::span<const std::u32string> after,
                               const LineDistanceOptions& options) {
    std::size_t prefix = 0;
    while (prefix < before.size() && prefix < after.size() && before[prefix] == after[prefix]) {
        ++prefix;
    }
    before = before.subspan(prefix);
    after = after.subspan(prefix);
    std::size_t suffix = 0;
    while (suffix < before.size() && suffix < after.size() &&
           before[before.size() - 1 - suffix] == after[after.size() - 1 - suffix]) {
        ++suffix;
    }
    before = before.first(before.size() - suffix);
    after = after.first(after.size() - suffix);

    if (before.empty() || after.empty() || before.size() * after.size() <= options.exact_cell_limit) {
        return align_block(before, after);
    }

    bool complete = false;
    const std::vector<DiffEntry> script = diff_lines(before, after, options.max_diff_edits, complete);
    if (!complete) return hunk_cost(before, after, options.exact_cell_limit);

    std::size_t total = 0;
    std::vector<std::u32string> removed;
    std::vector<std::u32string> added;
    auto flush = [&] {
        if (!removed.empty() || !added.empty()) {
            total += hunk_cost(removed, added, options.exact_cell_limit);
        }
        removed.clear();
        added.clear();
    };
    for (const DiffEntry& e : script) {
        switch (e.op) {
            case DiffOp::equal:
                flush();
                break;
            case DiffOp::remove:
                removed.push_back(before[e.before_index]);
                break;
            case DiffOp::insert:
                added.push_back(after[e.after_index]);
                break;
        }
    }
    flush();
    return total;
}

std::size_t commit_edit_distance(std::string_view before, std::string_view after,
                                 const LineDistanceOptions& options) {
    if (before == after) return 0;
    const std::vector<std::u32string> a = split_lines(decode_utf8_lossy(before));
    const std::vector<std::u32string> b = split_lines(decode_utf8_lossy(after));
    return line_edit_distance(a, b, options);
}

}  // namespace gitscale

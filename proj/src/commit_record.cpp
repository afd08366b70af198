#include "gitscale/commit_record.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "gitscale/errors.hpp"

namespace gitscale {

using nlohmann::ordered_json;

std::uint64_t CommitRecord::total_distance() const noexcept {
    return std::accumulate(file_edits.begin(), file_edits.end(), std::uint64_t{0},
                           [](std::uint64_t acc, const FileEdit& e) { return acc + e.levenshtein_distance; });
}

std::string normalize_email(std::string_view email) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    auto first = std::find_if(email.begin(), email.end(), not_space);
    auto last = std::find_if(email.rbegin(), email.rend(), not_space).base();
    std::string out;
    if (first < last) out.assign(first, last);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool record_order(const CommitRecord& a, const CommitRecord& b) noexcept {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.commit_id < b.commit_id;
}

std::string to_json_line(const CommitRecord& record) {
    ordered_json files = ordered_json::array();
    for (const FileEdit& e : record.file_edits) {
        files.push_back({{"path", e.path}, {"binary", e.is_binary}, {"lev", e.levenshtein_distance}});
    }
    const ordered_json j = {{"commit", record.commit_id},
                            {"author_email", record.author_email},
                            {"timestamp", format_iso8601(record.timestamp)},
                            {"files", std::move(files)}};
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

void write_records(std::span<const CommitRecord> records, std::ostream& out) {
    for (const CommitRecord& r : records) out << to_json_line(r) << '\n';
}

namespace {

const ordered_json& require(const ordered_json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(line, std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const ordered_json& obj, const char* key, std::size_t line) {
    const ordered_json& v = require(obj, key, line);
    if (!v.is_string()) throw SchemaError(line, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

CommitRecord parse_record(const std::string& text, std::size_t line) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(line, "record must be a JSON object");

    CommitRecord r;
    r.commit_id = require_string(j, "commit", line);
    if (r.commit_id.empty()) throw SchemaError(line, "empty commit id");
    r.author_email = require_string(j, "author_email", line);
    if (r.author_email.empty()) throw SchemaError(line, "empty author_email");
    if (normalize_email(r.author_email) != r.author_email) {
        throw SchemaError(line, "author_email is not normalized: '" + r.author_email + "'");
    }
    try {
        r.timestamp = parse_iso8601(require_string(j, "timestamp", line));
    } catch (const InvalidArgument& e) {
        throw SchemaError(line, e.what());
    }

    const ordered_json& files = require(j, "files", line);
    if (!files.is_array()) throw SchemaError(line, "field 'files' must be an array");
    for (const ordered_json& f : files) {
        if (!f.is_object()) throw SchemaError(line, "file entry must be an object");
        FileEdit e;
        e.path = require_string(f, "path", line);
        const ordered_json& binary = require(f, "binary", line);
        if (!binary.is_boolean()) throw SchemaError(line, "field 'binary' must be a boolean");
        e.is_binary = binary.get<bool>();
        const ordered_json& lev = require(f, "lev", line);
        if (lev.is_number_integer() && !lev.is_number_unsigned()) {
            throw SchemaError(line, "negative edit distance for '" + e.path + "'");
        }
        if (!lev.is_number_unsigned()) throw SchemaError(line, "field 'lev' must be a non-negative integer");
        e.levenshtein_distance = lev.get<std::uint64_t>();
        if (e.is_binary && e.levenshtein_distance != 0) {
            throw SchemaError(line, "binary file '" + e.path + "' carries a non-zero distance");
        }
        r.file_edits.push_back(std::move(e));
    }
    return r;
}

}  // namespace

std::vector<CommitRecord> read_records(std::istream& in) {
    std::vector<CommitRecord> records;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        CommitRecord r = parse_record(text, line);
        if (!records.empty() && !record_order(records.back(), r)) {
            throw SchemaError(line, "records are not sorted by (timestamp, commit)");
        }
        records.push_back(std::move(r));
    }
    return records;
}

void persist_records(std::span<const CommitRecord> records, const std::filesystem::path& destination) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write record file: " + destination.string());
    write_records(records, out);
    out.flush();
    if (!out) throw Error("failed while writing record file: " + destination.string());
}

std::vector<CommitRecord> load_records(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error("cannot open record file: " + source.string());
    return read_records(in);
}

}  // namespace gitscale

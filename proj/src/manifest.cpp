#include "gitscale/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gitscale/errors.hpp"

namespace gitscale {

using nlohmann::ordered_json;

namespace {

// Names double as directory and file names for record files.
bool safe_name(std::string_view s) {
    if (s.empty() || s.front() == '.') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '_' || c == '-';
    });
}

}  // namespace

void validate(const DatasetManifest& manifest) {
    if (!safe_name(manifest.name)) {
        throw InvalidArgument("manifest name '" + manifest.name + "' must be non-empty and use only letters, digits, '.', '_' or '-'");
    }
    std::set<std::string_view> ids;
    for (const ProjectEntry& p : manifest.projects) {
        if (!safe_name(p.id)) {
            throw InvalidArgument("manifest '" + manifest.name + "': project id '" + p.id +
                                  "' must be non-empty and use only letters, digits, '.', '_' or '-'");
        }
        if (!ids.insert(p.id).second) {
            throw InvalidArgument("manifest '" + manifest.name + "' repeats project id '" + p.id + "'");
        }
        if (!(std::chrono::sys_days{p.start} < std::chrono::sys_days{p.end})) {
            throw InvalidArgument("project '" + p.id + "': start must precede end");
        }
    }
}

DatasetManifest parse_manifest(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("manifest is not valid JSON: ") + e.what());
    }
    DatasetManifest m;
    try {
        m.name = j.at("name").get<std::string>();
        for (const ordered_json& p : j.at("projects")) {
            ProjectEntry e;
            e.id = p.at("id").get<std::string>();
            e.locator = p.value("locator", std::string{});
            e.start = parse_date(p.at("start").get<std::string>());
            e.end = parse_date(p.at("end").get<std::string>());
            m.projects.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed manifest: ") + e.what());
    }
    validate(m);
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open manifest: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str());
}

std::string manifest_to_json(const DatasetManifest& manifest) {
    ordered_json projects = ordered_json::array();
    for (const ProjectEntry& p : manifest.projects) {
        projects.push_back({{"id", p.id},
                            {"locator", p.locator},
                            {"start", format_date(p.start)},
                            {"end", format_date(p.end)}});
    }
    const ordered_json j = {{"name", manifest.name}, {"projects", std::move(projects)}};
    return j.dump(2) + "\n";
}

}  // namespace gitscale

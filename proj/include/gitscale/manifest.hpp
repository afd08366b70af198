#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/time.hpp"

namespace gitscale {

struct ProjectEntry {
    std::string id;
    /// Repository path or URL.
    std::string locator;
    /// First and last analysed day, both inclusive.
    Date start{};
    Date end{};

    friend bool operator==(const ProjectEntry&, const ProjectEntry&) = default;
};

/// A named sampling of projects, e.g. one study's dataset.
struct DatasetManifest {
    std::string name;
    std::vector<ProjectEntry> projects;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Checks file-name-safe name and ids, unique ids and start < end. Throws InvalidArgument.
void validate(const DatasetManifest& manifest);

[[nodiscard]] DatasetManifest parse_manifest(std::string_view json_text);
[[nodiscard]] DatasetManifest load_manifest(const std::filesystem::path& path);
[[nodiscard]] std::string manifest_to_json(const DatasetManifest& manifest);

}  // namespace gitscale

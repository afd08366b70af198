#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gitscale/bias_lab.hpp"

namespace gitscale {

/// Variants analysed when a run does not name any.
[[nodiscard]] std::vector<MethodSpec> default_methods();

/// Everything a run needs, loadable from a JSON file. Defaults:
/// all default_methods(), p threshold 0.01, grid 0..720 step 30, no outlier
/// trimming, no one-timer filter in sweeps, log-log sweeps, output in `out`,
/// records in `<output_dir>/records`, one job.
struct RunConfig {
    std::vector<std::filesystem::path> manifests;
    /// Empty means `<output_dir>/records`.
    std::filesystem::path records_dir;
    std::optional<Measure> measure;
    std::vector<MethodSpec> methods = default_methods();
    std::optional<double> p_threshold = kDefaultPThreshold;
    std::vector<int> front_load_grid = default_front_load_grid();
    double outlier_fraction = 0.0;
    bool one_timer_filter = false;
    Model sweep_model = Model::loglog;
    std::filesystem::path output_dir = "out";
    std::size_t jobs = 1;

    [[nodiscard]] std::filesystem::path effective_records_dir() const;
    [[nodiscard]] AnalysisOptions analysis_options() const;
    [[nodiscard]] SweepOptions sweep_options() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws InvalidArgument on the first invalid field.
void validate(const RunConfig& config);

[[nodiscard]] RunConfig parse_config(std::string_view json_text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string config_to_json(const RunConfig& config);

}  // namespace gitscale

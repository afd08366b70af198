#include "gitscale/config.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gitscale/errors.hpp"

namespace gitscale {

using nlohmann::ordered_json;

std::vector<MethodSpec> default_methods() {
    std::vector<MethodSpec> specs;
    for (const char* text : {"sornette:loglog:all:p_filtered", "sornette:loglog:all:unfiltered",
                             "scholtes:loglog:all:unfiltered", "scholtes:loglin:all:unfiltered",
                             "scholtes:loglog:no_one_timers:unfiltered", "scholtes:loglin:no_one_timers:unfiltered",
                             "scholtes:loglog:all:unfiltered:fl330"}) {
        specs.push_back(MethodSpec::parse(text));
    }
    return specs;
}

std::filesystem::path RunConfig::effective_records_dir() const {
    return records_dir.empty() ? output_dir / "records" : records_dir;
}

AnalysisOptions RunConfig::analysis_options() const { return {p_threshold, outlier_fraction, measure}; }

SweepOptions RunConfig::sweep_options() const {
    return {sweep_model, one_timer_filter ? Contributors::no_one_timers : Contributors::all, analysis_options()};
}

void validate(const RunConfig& config) {
    if (config.jobs < 1) throw InvalidArgument("jobs must be at least 1");
    if (config.methods.empty()) throw InvalidArgument("at least one method is required");
    if (config.p_threshold && !(*config.p_threshold > 0.0 && *config.p_threshold <= 1.0)) {
        throw InvalidArgument("p_threshold must lie in (0, 1]");
    }
    for (const MethodSpec& m : config.methods) {
        if (m.p_filter == PFilter::p_filtered && !config.p_threshold) {
            throw InvalidArgument("method " + m.to_string() + " needs a p_threshold");
        }
    }
    if (!(config.outlier_fraction >= 0.0 && config.outlier_fraction < 0.5)) {
        throw InvalidArgument("outlier_fraction must lie in [0, 0.5)");
    }
    if (config.front_load_grid.empty()) throw InvalidArgument("front_load_grid must not be empty");
    for (std::size_t k = 0; k < config.front_load_grid.size(); ++k) {
        if (config.front_load_grid[k] < 0) throw InvalidArgument("front_load_grid values must be non-negative");
        if (k > 0 && config.front_load_grid[k] <= config.front_load_grid[k - 1]) {
            throw InvalidArgument("front_load_grid must be strictly ascending");
        }
    }
    if (config.output_dir.empty()) throw InvalidArgument("output_dir must not be empty");
}

RunConfig parse_config(std::string_view json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");

    static const char* const known[] = {"manifests", "records_dir", "measure", "methods",
                                        "p_threshold", "front_load_grid", "outlier_fraction", "one_timer_filter",
                                        "sweep_model", "output_dir", "jobs"};
    for (const auto& item : j.items()) {
        if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
            throw InvalidArgument("unknown config field '" + item.key() + "'");
        }
    }

    RunConfig c;
    try {
        if (j.contains("manifests")) {
            for (const auto& m : j["manifests"]) c.manifests.emplace_back(m.get<std::string>());
        }
        if (j.contains("records_dir") && !j["records_dir"].is_null()) c.records_dir = j["records_dir"].get<std::string>();
        if (j.contains("measure") && !j["measure"].is_null()) c.measure = parse_measure(j["measure"].get<std::string>());
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j["methods"]) c.methods.push_back(MethodSpec::parse(m.get<std::string>()));
        }
        if (j.contains("p_threshold")) {
            c.p_threshold = j["p_threshold"].is_null() ? std::nullopt : std::optional<double>{j["p_threshold"].get<double>()};
        }
        if (j.contains("front_load_grid")) c.front_load_grid = j["front_load_grid"].get<std::vector<int>>();
        if (j.contains("outlier_fraction")) c.outlier_fraction = j["outlier_fraction"].get<double>();
        if (j.contains("one_timer_filter")) c.one_timer_filter = j["one_timer_filter"].get<bool>();
        if (j.contains("sweep_model")) c.sweep_model = parse_model(j["sweep_model"].get<std::string>());
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("jobs")) {
            const auto jobs = j["jobs"].get<std::int64_t>();
            if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
            c.jobs = static_cast<std::size_t>(jobs);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed config: ") + e.what());
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open config: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& c) {
    ordered_json manifests = ordered_json::array();
    for (const auto& m : c.manifests) manifests.push_back(m.string());
    ordered_json methods = ordered_json::array();
    for (const auto& m : c.methods) methods.push_back(m.to_string());
    ordered_json j;
    j["manifests"] = std::move(manifests);
    j["records_dir"] = c.records_dir.empty() ? ordered_json(nullptr) : ordered_json(c.records_dir.string());
    j["measure"] = c.measure ? ordered_json(std::string(to_string(*c.measure))) : ordered_json(nullptr);
    j["methods"] = std::move(methods);
    j["p_threshold"] = c.p_threshold ? ordered_json(*c.p_threshold) : ordered_json(nullptr);
    j["front_load_grid"] = c.front_load_grid;
    j["outlier_fraction"] = c.outlier_fraction;
    j["one_timer_filter"] = c.one_timer_filter;
    j["sweep_model"] = std::string(to_string(c.sweep_model));
    j["output_dir"] = c.output_dir.string();
    j["jobs"] = c.jobs;
    return j.dump(2) + "\n";
}

}  // namespace gitscale

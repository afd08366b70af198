#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gitscale/bias_lab.hpp"

namespace testing_support {

/// One toy project and the classification each method should give it.
struct ToyProject {
    std::string dataset;
    std::string id;
    gitscale::Classification sornette;
    gitscale::Classification scholtes;
};

/// The four toy projects: p1 super/super, p2 sub/sub, p3 super/sub, p4 sub/super
/// (Sornette/Scholtes). p1 and p3 belong to `sornette_toy`, p2 and p4 to `scholtes_toy`.
std::vector<ToyProject> toy_projects();

/// Writes manifests/, records/<dataset>/<id>.jsonl and toy_repo.fi under `dir`.
void write_toy_fixtures(const std::filesystem::path& dir);

/// The bundled copy under tests/fixtures/toy.
std::filesystem::path bundled_toy_fixtures();

/// Materialises toy_repo.fi as a git repository in `dir`.
void import_toy_repo(const std::filesystem::path& fixtures, const std::filesystem::path& dir);

}  // namespace testing_support

#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "scdl/corpus.hpp"
#include "scdl/model.hpp"
#include "scdl/resolver.hpp"

namespace scdl::testing {

std::string corpus_dir();
std::string golden_dir();
std::string fixture_dir();

std::string read_text(const std::string& path);

using Files = std::map<std::string, std::string>;

// Throws std::runtime_error when the manifest does not parse.
std::vector<ManifestEntry> corpus_manifest();
// Every *.scd under the corpus, sorted.
std::vector<std::string> corpus_files();

// Throws with rendered diagnostics when resolution fails.
ResolvedModel resolve_or_throw(const std::string& rootPath);

// n components c0..c{n-1}, up to `envCount` environment parties E0..,
// each unordered component pair coupled with probability `density`, each
// component coupled to a random environment party with probability
// `envDensity`.
SystemDecl random_system(std::mt19937& rng, int n, double density, int envCount = 0, double envDensity = 0.0);

// A unit satisfying check_unit_invariants, exercising every construct the
// formatter can emit.
ModelUnit random_unit(std::mt19937& rng);

// Recognizes the DOT subset export_dot emits.
struct DotShape {
    bool ok = false;
    std::string error;
    int nodes = 0;
    int edges = 0;
    std::vector<std::string> edgeLabels;
};
DotShape parse_dot(const std::string& text);

}  // namespace scdl::testing

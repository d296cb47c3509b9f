#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scdl/diagnostic.hpp"
#include "scdl/model.hpp"
#include "scdl/resolver.hpp"

namespace scdl {

struct CouplingEdge {
    CouplingEnd a;
    CouplingEnd b;
    std::optional<EnergyKind> energy;
    std::optional<std::string> label;
};

/// Undirected graph over composition ∪ environment, one edge per coupling.
struct CouplingGraph {
    std::vector<std::string> nodes;
    std::vector<CouplingEdge> edges;
};

CouplingGraph coupling_graph(const SystemDecl& system);

/// Fully qualified intrinsic property path -> value. Flags are 0 or 1.
using Valuation = std::map<std::string, double, std::less<>>;

/// Reads `key=value` lines. Blank lines and lines starting with '#' are
/// ignored. Malformed lines produce E-EVL-005.
Outcome<Valuation> parse_valuation(std::string_view text, const std::string& file);

/// Evaluates every derived (aggregate, or emergent with a derivation)
/// property at every level, bottom-up through the level tree. Keys of the
/// result are fully qualified property paths.
///
/// Fold semantics over the selected components that declare the property:
/// sum of no values is 0; count is the number of non-zero values (set
/// flags); min, max and avg of no values are E-EVL-003. Values are summed
/// in sorted order, so results do not depend on declaration order.
///
/// Errors: E-EVL-001 missing valuation entry; E-EVL-002 division by zero;
/// E-EVL-003 empty min/max/avg; E-EVL-004 derivation reference cycle.
Outcome<std::map<std::string, double>> evaluate_aggregates(const ResolvedModel& model, const Valuation& valuation);

}  // namespace scdl

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scdl/diagnostic.hpp"
#include "scdl/model.hpp"
#include "scdl/resolver.hpp"

namespace scdl {

/// Runs every check on every system and association at every level.
/// Diagnostics come back sorted by (file, startLine, startCol, code).
std::vector<Diagnostic> validate(const ResolvedModel& model);

/// BWW criterion via connectivity of the component coupling graph
/// (environment couplings ignored). Compositions of size <= 1 pass. On
/// failure the E-BWW-001 message lists one smallest disconnected part,
/// ties broken by its lexicographically first component.
std::optional<Diagnostic> check_bww_system(const SystemDecl& system);

inline constexpr std::size_t kMaxBruteForceComponents = 16;

/// Literal enumeration of all 2^(n-1) - 1 unordered nontrivial
/// bipartitions of the composition; true iff each one is crossed by a
/// component coupling. Throws std::invalid_argument above 16 components.
bool brute_force_bipartition_check(const SystemDecl& system);

struct BoundaryPartition {
    std::vector<std::string> boundary;  // coupled to at least one environment party
    std::vector<std::string> internal;
};

/// Both lists keep composition order.
BoundaryPartition classify_boundary(const SystemDecl& system);

/// E-KND-001 for each energy-typed coupling of a conceptual system.
std::vector<Diagnostic> check_kind_rules(const SystemDecl& system);

/// E-MAP-001 for every mechanism actor lacking a Counterpart mapping to a
/// structural entity, E-MAP-002 for mapping paths that do not resolve
/// inside their endpoint system, W-MAP-010 for structural entities no
/// Counterpart mapping reaches.
std::vector<Diagnostic> check_mapping_completeness(const SystemAssociation& assoc, const ResolvedModel& model);

/// `children` is the unit the system explodes into, if any; derivations are
/// checked against the properties its systems declare.
std::vector<Diagnostic> check_property_rules(const SystemDecl& system, const ModelUnit* children = nullptr);

/// W-CSM-001, W-CSM-002, W-ATOM-001.
std::vector<Diagnostic> check_cesm_completeness(const SystemDecl& system);
/// W-CSM-003.
std::vector<Diagnostic> check_cesm_completeness(const SystemAssociation& assoc);

}  // namespace scdl

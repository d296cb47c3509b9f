#pragma once

#include <optional>
#include <string>

#include "scdl/diagnostic.hpp"
#include "scdl/model.hpp"
#include "scdl/resolver.hpp"

namespace scdl {

inline constexpr const char* kScdVersion = "1.0";

/// Canonical JSON document for the whole level tree: keys sorted, arrays in
/// declaration order, child levels nested under each system's `explode`.
/// Byte-deterministic. See docs/json-schema.md.
std::string export_json(const ResolvedModel& model);

/// Undirected DOT graph of one level: a box per system (doubled border when
/// it explodes) and an edge per <<system>> association labeled with its
/// mapping count. Without `levelPath` the root level is rendered.
/// Errors: E-QRY-001 path does not name a system; E-QRY-002 it has no
/// explode link.
Outcome<std::string> export_dot(const ResolvedModel& model, const std::optional<ElementPath>& levelPath = std::nullopt);

}  // namespace scdl

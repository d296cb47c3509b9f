#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scdl/diagnostic.hpp"
#include "scdl/model.hpp"

namespace scdl {

inline constexpr int kMaxNestingDepth = 64;

struct ParseResult {
    // Present only when no error diagnostics were produced.
    std::optional<ModelUnit> unit;
    std::vector<Diagnostic> diagnostics;
};

/// Parses one `.scd` source. Syntax errors are recovered by skipping to the
/// next `;` or `}` at the same nesting depth, so one run reports every
/// independent error. A syntactically valid unit is then passed through
/// check_unit_invariants.
ParseResult parse(std::string_view source, const std::string& file);

/// Canonical SCDL text for a unit: 2-space indentation, one declaration per
/// line, fixed section order, LF line endings. parse(format(u)) == u and
/// format is idempotent.
std::string format(const ModelUnit& unit);

/// Canonical text of a derivation expression, minimal parentheses.
std::string format_expression(const DerivationExpr& expr);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

}  // namespace scdl

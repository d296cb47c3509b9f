#include "scdl/diagnostic.hpp"

#include <algorithm>
#include <tuple>

#include "json.hpp"

namespace scdl {

std::string_view to_string(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

Diagnostic make_error(std::string code, std::string message, SourceSpan span) {
    return Diagnostic{Severity::Error, std::move(code), std::move(message), std::move(span), {}};
}

Diagnostic make_warning(std::string code, std::string message, SourceSpan span) {
    return Diagnostic{Severity::Warning, std::move(code), std::move(message), std::move(span), {}};
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.file, a.span.startLine, a.span.startCol, a.code, a.message) <
               std::tie(b.span.file, b.span.startLine, b.span.startCol, b.code, b.message);
    });
}

std::string render_diagnostic(const Diagnostic& d) {
    std::string out = d.span.file;
    out += ':';
    out += std::to_string(d.span.startLine);
    out += ':';
    out += std::to_string(d.span.startCol);
    out += ": ";
    out += to_string(d.severity);
    out += '[';
    out += d.code;
    out += "]: ";
    out += d.message;
    return out;
}

std::string render_diagnostic_json(const Diagnostic& d) {
    nlohmann::json j = {
        {"file", d.span.file},
        {"line", d.span.startLine},
        {"col", d.span.startCol},
        {"severity", std::string(to_string(d.severity))},
        {"code", d.code},
        {"message", d.message},
    };
    return j.dump();
}

const std::vector<CatalogEntry>& diagnostic_catalog() {
    static const std::vector<CatalogEntry> catalog = {
        {"E-LEX-001", Severity::Error, "unrecognized character"},
        {"E-LEX-002", Severity::Error, "unterminated string or block comment"},
        {"E-PAR-001", Severity::Error, "unexpected token"},
        {"E-PAR-002", Severity::Error, "duplicate system name"},
        {"E-PAR-003", Severity::Error, "unknown keyword in section position"},
        {"E-PAR-004", Severity::Error, "association endpoint is not a declared system"},
        {"E-PAR-005", Severity::Error, "duplicate declaration"},
        {"E-PAR-006", Severity::Error, "reference to an undeclared name"},
        {"E-PAR-007", Severity::Error, "nesting depth exceeds 64"},
        {"E-PAR-008", Severity::Error, "malformed declaration"},
        {"E-DIM-009", Severity::Error, "interaction dimension not supported"},
        {"E-LVL-001", Severity::Error, "explode target fails to load or parse"},
        {"E-LVL-002", Severity::Error, "explode cycle"},
        {"E-LVL-003", Severity::Error, "child level does not match parent composition"},
        {"E-LVL-004", Severity::Error, "explode target shared by two systems"},
        {"E-QRY-001", Severity::Error, "path does not resolve"},
        {"E-QRY-002", Severity::Error, "system has no explode link"},
        {"E-BWW-001", Severity::Error, "composition is not a system under the BWW criterion"},
        {"E-KND-001", Severity::Error, "energy-typed coupling on a conceptual system"},
        {"E-MAP-001", Severity::Error, "mechanism actor without structural counterpart"},
        {"E-MAP-002", Severity::Error, "dangling mapping path"},
        {"W-MAP-010", Severity::Warning, "structural entity without functional counterpart"},
        {"E-PRP-001", Severity::Error, "aggregate property without derivation"},
        {"E-PRP-002", Severity::Error, "derivation references an undeclared component property"},
        {"W-PRP-003", Severity::Warning, "emergent property derived by a bare fold"},
        {"W-CSM-001", Severity::Warning, "concrete system without structure"},
        {"W-CSM-002", Severity::Warning, "concrete system without mechanism"},
        {"W-CSM-003", Severity::Warning, "system association without mappings"},
        {"W-ATOM-001", Severity::Warning, "system with empty composition"},
        {"E-EVL-001", Severity::Error, "missing valuation entry"},
        {"E-EVL-002", Severity::Error, "division by zero"},
        {"E-EVL-003", Severity::Error, "min/max/avg over an empty component set"},
        {"E-EVL-004", Severity::Error, "derivation reference cycle"},
        {"E-EVL-005", Severity::Error, "malformed valuation entry"},
    };
    return catalog;
}

bool is_catalog_code(std::string_view code) {
    const auto& catalog = diagnostic_catalog();
    return std::any_of(catalog.begin(), catalog.end(), [&](const CatalogEntry& e) { return e.code == code; });
}

}  // namespace scdl

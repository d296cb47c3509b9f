#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scdl {

/// Half-open source range. Lines and columns are 1-based; the end column
/// points one past the last character.
struct SourceSpan {
    std::string file;
    int startLine = 1;
    int startCol = 1;
    int endLine = 1;
    int endCol = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;
    // Diagnostics from a nested unit (E-LVL-001 carries the child's errors).
    std::vector<Diagnostic> related;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic make_error(std::string code, std::string message, SourceSpan span);
Diagnostic make_warning(std::string code, std::string message, SourceSpan span);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Canonical ordering: (file, startLine, startCol, code), message as the
/// final tiebreak so the order is total.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

/// `FILE:LINE:COL: SEVERITY[CODE]: MESSAGE`
std::string render_diagnostic(const Diagnostic& d);

/// One JSON object with keys file, line, col, severity, code, message.
std::string render_diagnostic_json(const Diagnostic& d);

/// A value or the diagnostics explaining its absence. Warnings may
/// accompany a value.
template <class T>
struct Outcome {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value(); }
};

/// Entry of the published diagnostic catalog.
struct CatalogEntry {
    std::string_view code;
    Severity severity;
    std::string_view summary;
};

const std::vector<CatalogEntry>& diagnostic_catalog();
bool is_catalog_code(std::string_view code);

}  // namespace scdl

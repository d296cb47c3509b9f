#include "scdl/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace scdl {

CouplingGraph coupling_graph(const SystemDecl& system) {
    CouplingGraph g;
    g.nodes = system.composition;
    g.nodes.insert(g.nodes.end(), system.environment.begin(), system.environment.end());
    for (const auto& c : system.structure) g.edges.push_back({c.endA, c.endB, c.energy, c.label});
    return g;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Neumaier-compensated sum over the values in ascending order.
double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    return sum + carry;
}

class Evaluator {
public:
    Evaluator(const ResolvedModel& model, const Valuation& valuation) : model_(model), valuation_(valuation) {}

    Outcome<std::map<std::string, double>> run() {
        for (const auto& entry : model_.systems()) {
            for (const auto& prop : entry.decl->properties) {
                if (prop.derivation) property(entry.path, *entry.decl, prop, prop.meta.span);
            }
        }
        Outcome<std::map<std::string, double>> out;
        sort_diagnostics(diagnostics_);
        out.diagnostics = std::move(diagnostics_);
        if (!has_errors(out.diagnostics)) out.value = std::move(derived_);
        return out;
    }

private:
    enum class State { Visiting, Done, Failed };

    void error(const char* code, std::string message, const SourceSpan& span, const std::string& key) {
        if (reported_.insert(std::string(code) + "|" + key).second) {
            diagnostics_.push_back(make_error(code, std::move(message), span));
        }
    }

    std::optional<double> property(const std::string& systemPath, const SystemDecl& system, const PropertyDecl& prop,
                                   const SourceSpan& requester) {
        const std::string key = systemPath + "." + prop.name;
        if (!prop.derivation) {
            auto it = valuation_.find(key);
            if (it == valuation_.end()) {
                error("E-EVL-001", "no valuation entry for '" + key + "'", requester, key);
                return std::nullopt;
            }
            return it->second;
        }

        auto [it, inserted] = state_.try_emplace(key, State::Visiting);
        if (!inserted) {
            switch (it->second) {
                case State::Done: return derived_.at(key);
                case State::Failed: return std::nullopt;
                case State::Visiting:
                    error("E-EVL-004", "derivation of '" + key + "' depends on itself", prop.meta.span, key);
                    return std::nullopt;
            }
        }
        auto value = expression(systemPath, system, *prop.derivation, prop, key);
        state_[key] = value ? State::Done : State::Failed;
        if (value) derived_[key] = *value;
        return value;
    }

    std::optional<double> expression(const std::string& systemPath, const SystemDecl& system,
                                     const DerivationExpr& expr, const PropertyDecl& owner, const std::string& key) {
        if (const auto* lit = std::get_if<NumberLiteral>(&expr.node)) return lit->value;
        if (const auto* fold = std::get_if<FoldNode>(&expr.node)) return this->fold(systemPath, system, *fold, owner, key);

        const auto& bin = std::get<BinaryNode>(expr.node);
        auto lhs = expression(systemPath, system, *bin.lhs, owner, key);
        auto rhs = expression(systemPath, system, *bin.rhs, owner, key);
        if (!lhs || !rhs) return std::nullopt;
        switch (bin.op) {
            case BinaryOp::Add: return *lhs + *rhs;
            case BinaryOp::Sub: return *lhs - *rhs;
            case BinaryOp::Mul: return *lhs * *rhs;
            case BinaryOp::Div:
                if (*rhs == 0.0) {
                    error("E-EVL-002", "division by zero in derivation of '" + key + "'", owner.meta.span, key);
                    return std::nullopt;
                }
                return *lhs / *rhs;
        }
        return std::nullopt;
    }

    std::optional<double> fold(const std::string& systemPath, const SystemDecl& system, const FoldNode& fold,
                               const PropertyDecl& owner, const std::string& key) {
        std::vector<std::string> selected;
        if (fold.component) {
            selected.push_back(*fold.component);
        } else {
            selected = system.composition;
        }

        std::vector<double> values;
        bool failed = false;
        for (const auto& component : selected) {
            const std::string componentPath = systemPath + "." + component;
            auto decl = model_.lookup(componentPath);
            const auto* child = decl ? std::get_if<const SystemDecl*>(&*decl) : nullptr;
            if (!child) continue;
            const PropertyDecl* prop = (*child)->find_property(fold.property);
            if (!prop) continue;
            auto v = property(componentPath, **child, *prop, owner.meta.span);
            if (v) {
                values.push_back(*v);
            } else {
                failed = true;
            }
        }
        if (failed) return std::nullopt;

        switch (fold.op) {
            case FoldOp::Sum: return stable_sum(values);
            case FoldOp::Count:
                return static_cast<double>(std::count_if(values.begin(), values.end(), [](double v) { return v != 0.0; }));
            case FoldOp::Min:
            case FoldOp::Max:
            case FoldOp::Avg:
                break;
        }
        if (values.empty()) {
            error("E-EVL-003",
                  std::string(to_string(fold.op)) + " over an empty component set in derivation of '" + key + "'",
                  owner.meta.span, key);
            return std::nullopt;
        }
        if (fold.op == FoldOp::Min) return *std::min_element(values.begin(), values.end());
        if (fold.op == FoldOp::Max) return *std::max_element(values.begin(), values.end());
        return stable_sum(values) / static_cast<double>(values.size());
    }

    const ResolvedModel& model_;
    const Valuation& valuation_;
    std::map<std::string, State> state_;
    std::map<std::string, double> derived_;
    std::set<std::string> reported_;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace

Outcome<Valuation> parse_valuation(std::string_view text, const std::string& file) {
    Outcome<Valuation> out;
    Valuation values;
    int lineNo = 0;
    while (!text.empty()) {
        ++lineNo;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const int width = static_cast<int>(line.size()) + 1;
        auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            out.diagnostics.push_back(
                make_error("E-EVL-005", "expected key=value", SourceSpan{file, lineNo, 1, lineNo, width}));
            continue;
        }
        const auto key = trim(body.substr(0, eq));
        const auto raw = trim(body.substr(eq + 1));
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        const auto segments = split_path(key);
        const bool pathOk = !segments.empty() && std::all_of(segments.begin(), segments.end(),
                                                             [](const std::string& s) { return is_identifier(s); });
        if (!pathOk || raw.empty() || ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(value)) {
            out.diagnostics.push_back(make_error("E-EVL-005", "malformed valuation entry '" + std::string(body) + "'",
                                                 SourceSpan{file, lineNo, 1, lineNo, width}));
            continue;
        }
        values[std::string(key)] = value;
    }
    if (!has_errors(out.diagnostics)) out.value = std::move(values);
    return out;
}

Outcome<std::map<std::string, double>> evaluate_aggregates(const ResolvedModel& model, const Valuation& valuation) {
    return Evaluator(model, valuation).run();
}

}  // namespace scdl

#include "scdl/model.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace scdl {

std::string_view to_string(SystemKind kind) {
    return kind == SystemKind::Concrete ? "concrete" : "conceptual";
}

std::string_view to_string(EnergyKind kind) {
    switch (kind) {
        case EnergyKind::Mechanical: return "mechanical";
        case EnergyKind::Thermal: return "thermal";
        case EnergyKind::Kinetic: return "kinetic";
        case EnergyKind::Potential: return "potential";
        case EnergyKind::Electric: return "electric";
        case EnergyKind::Magnetic: return "magnetic";
        case EnergyKind::Chemical: return "chemical";
    }
    return "mechanical";
}

std::optional<EnergyKind> energy_kind_from_string(std::string_view name) {
    for (EnergyKind kind : kAllEnergyKinds) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(PropertyClass cls) {
    switch (cls) {
        case PropertyClass::Intrinsic: return "intrinsic";
        case PropertyClass::Aggregate: return "aggregate";
        case PropertyClass::Emergent: return "emergent";
    }
    return "intrinsic";
}

std::string_view to_string(ValueType type) {
    switch (type) {
        case ValueType::Number: return "number";
        case ValueType::Text: return "text";
        case ValueType::Flag: return "flag";
    }
    return "number";
}

std::string_view to_string(FoldOp op) {
    switch (op) {
        case FoldOp::Sum: return "sum";
        case FoldOp::Count: return "count";
        case FoldOp::Min: return "min";
        case FoldOp::Max: return "max";
        case FoldOp::Avg: return "avg";
    }
    return "sum";
}

std::optional<FoldOp> fold_op_from_string(std::string_view name) {
    for (FoldOp op : {FoldOp::Sum, FoldOp::Count, FoldOp::Min, FoldOp::Max, FoldOp::Avg}) {
        if (to_string(op) == name) return op;
    }
    return std::nullopt;
}

char to_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
    }
    return '+';
}

std::string_view to_string(DimensionKind kind) {
    return kind == DimensionKind::Structural ? "structural" : "mechanism";
}

int expression_depth(const DerivationExpr& expr) {
    if (const auto* bin = std::get_if<BinaryNode>(&expr.node)) {
        return 1 + std::max(expression_depth(*bin->lhs), expression_depth(*bin->rhs));
    }
    return 1;
}

bool is_bare_fold(const DerivationExpr& expr) {
    return std::holds_alternative<FoldNode>(expr.node);
}

void collect_folds(const DerivationExpr& expr, std::vector<const FoldNode*>& out) {
    if (const auto* fold = std::get_if<FoldNode>(&expr.node)) {
        out.push_back(fold);
    } else if (const auto* bin = std::get_if<BinaryNode>(&expr.node)) {
        collect_folds(*bin->lhs, out);
        collect_folds(*bin->rhs, out);
    }
}

std::string to_string(const Card& card) {
    if (card.min == 1 && card.max == Card::Max::One) return "1";
    std::string out = card.min == 1 ? "1.." : "0..";
    out += card.max == Card::Max::One ? "1" : "*";
    return out;
}

std::optional<Card> card_from_string(std::string_view text) {
    if (text == "1") return Card{1, Card::Max::One};
    if (text == "0..1") return Card{0, Card::Max::One};
    if (text == "1..*") return Card{1, Card::Max::Many};
    if (text == "0..*" || text == "*") return Card{0, Card::Max::Many};
    return std::nullopt;
}

const DimensionFragment* SystemDecl::find_dimension(std::string_view fragment) const {
    auto it = std::find_if(dimensions.begin(), dimensions.end(),
                           [&](const DimensionFragment& d) { return d.name == fragment; });
    return it == dimensions.end() ? nullptr : &*it;
}

const PropertyDecl* SystemDecl::find_property(std::string_view property) const {
    auto it = std::find_if(properties.begin(), properties.end(),
                           [&](const PropertyDecl& p) { return p.name == property; });
    return it == properties.end() ? nullptr : &*it;
}

bool SystemDecl::has_component(std::string_view component) const {
    return std::find(composition.begin(), composition.end(), component) != composition.end();
}

const SystemDecl* ModelUnit::find_system(std::string_view system) const {
    auto it = std::find_if(systems.begin(), systems.end(), [&](const SystemDecl& s) { return s.name == system; });
    return it == systems.end() ? nullptr : &*it;
}

std::string join_path(const ElementPath& path) {
    std::string out;
    for (const auto& segment : path) {
        if (!out.empty()) out += '.';
        out += segment;
    }
    return out;
}

ElementPath split_path(std::string_view dotted) {
    ElementPath out;
    if (dotted.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto dot = dotted.find('.', start);
        out.emplace_back(dotted.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return out;
}

namespace {

constexpr std::array kReservedWords = {
    "scd",         "concrete",    "conceptual", "system",    "composition", "environment", "structure",
    "mechanism",   "properties",  "dimension",  "explode",   "intrinsic",   "aggregate",   "emergent",
    "association", "structural",  "interaction", "entity",   "link",        "actor",       "step",
    "flow",        "by",          "env",        "components", "counterpart",
};

class InvariantChecker {
public:
    explicit InvariantChecker(std::vector<Diagnostic>& out) : out_(out) {}

    void check(const ModelUnit& unit) {
        identifier(unit.name, unit.meta.span);
        std::set<std::string> systems;
        for (const auto& system : unit.systems) {
            if (!systems.insert(system.name).second) {
                error("E-PAR-002", "duplicate system name '" + system.name + "'", system.meta.span);
            }
            check(system);
        }
        for (const auto& assoc : unit.associations) {
            for (const auto* end : {&assoc.systemA, &assoc.systemB}) {
                if (!systems.count(*end)) {
                    error("E-PAR-004", "association endpoint '" + *end + "' is not a system declared in this unit",
                          assoc.meta.span);
                }
            }
            if (assoc.systemA == assoc.systemB) {
                error("E-PAR-008", "system association links '" + assoc.systemA + "' to itself", assoc.meta.span);
            }
            for (const auto& m : assoc.mappings) {
                if (m.cardA.has_value() != m.cardB.has_value()) {
                    error("E-PAR-008", "mapping gives a cardinality for only one end", m.meta.span);
                }
                for (const auto* path : {&m.pathA, &m.pathB}) {
                    if (path->empty()) error("E-PAR-008", "mapping path is empty", m.meta.span);
                }
            }
        }
    }

private:
    void error(const char* code, std::string message, const SourceSpan& span) {
        out_.push_back(make_error(code, std::move(message), span));
    }

    void identifier(const std::string& name, const SourceSpan& span) {
        if (!is_identifier(name) || is_reserved_word(name)) {
            error("E-PAR-008", "'" + name + "' is not a valid identifier", span);
        }
    }

    void unique(std::set<std::string>& seen, const std::string& name, std::string_view what, const SourceSpan& span) {
        if (!seen.insert(name).second) {
            error("E-PAR-005", "duplicate " + std::string(what) + " '" + name + "'", span);
        }
    }

    void check(const SystemDecl& system) {
        const auto& span = system.meta.span;
        identifier(system.name, span);

        std::set<std::string> components;
        for (const auto& c : system.composition) {
            identifier(c, span);
            unique(components, c, "component", span);
        }
        std::set<std::string> environment;
        for (const auto& e : system.environment) {
            identifier(e, span);
            unique(environment, e, "environment party", span);
            if (components.count(e)) {
                error("E-PAR-005", "'" + e + "' is declared both as component and as environment party", span);
            }
        }

        for (const auto& coupling : system.structure) {
            const auto& cspan = coupling.meta.span;
            for (const auto* end : {&coupling.endA, &coupling.endB}) {
                if (end->scope == EndScope::Component && !components.count(end->party)) {
                    error("E-PAR-006", "coupling end '" + end->party + "' is not a component of '" + system.name + "'",
                          cspan);
                } else if (end->scope == EndScope::Environment && !environment.count(end->party)) {
                    error("E-PAR-006",
                          "coupling end 'env." + end->party + "' is not in the environment of '" + system.name + "'",
                          cspan);
                }
            }
            if (coupling.endA == coupling.endB) {
                error("E-PAR-008", "coupling connects '" + coupling.endA.party + "' to itself", cspan);
            } else if (coupling.endA.scope == EndScope::Environment && coupling.endB.scope == EndScope::Environment) {
                error("E-PAR-008", "coupling between two environment parties", cspan);
            }
        }

        // Components, fragments and properties share the system's member namespace.
        std::set<std::string> members(components);
        std::set<std::string> fragments;
        for (const auto& dim : system.dimensions) {
            identifier(dim.name, dim.meta.span);
            unique(fragments, dim.name, "dimension fragment", dim.meta.span);
            if (components.count(dim.name)) {
                error("E-PAR-005", "dimension fragment '" + dim.name + "' collides with a component name",
                      dim.meta.span);
            }
            members.insert(dim.name);
            check(dim);
        }
        std::set<std::string> properties;
        for (const auto& prop : system.properties) {
            identifier(prop.name, prop.meta.span);
            unique(properties, prop.name, "property", prop.meta.span);
            if (members.count(prop.name)) {
                error("E-PAR-005", "property '" + prop.name + "' collides with a component or fragment name",
                      prop.meta.span);
            }
            if (prop.derivation) check(*prop.derivation, prop);
        }

        std::set<std::string> mechanisms;
        for (const auto& ref : system.mechanisms) {
            unique(mechanisms, ref.fragment, "mechanism reference", ref.meta.span);
            const auto* dim = system.find_dimension(ref.fragment);
            if (!dim) {
                error("E-PAR-006", "mechanism '" + ref.fragment + "' names no fragment of '" + system.name + "'",
                      ref.meta.span);
            } else if (dim->kind != DimensionKind::Mechanism) {
                error("E-PAR-008", "mechanism '" + ref.fragment + "' refers to a structural fragment", ref.meta.span);
            }
        }

        if (system.explode && system.explode->path.empty()) {
            error("E-PAR-008", "explode path is empty", system.explode->meta.span);
        }
    }

    void check(const DerivationExpr& expr, const PropertyDecl& prop) {
        if (expression_depth(expr) > kMaxDerivationDepth) {
            error("E-PAR-008", "derivation of '" + prop.name + "' is nested deeper than 8", prop.meta.span);
        }
        std::vector<const FoldNode*> folds;
        collect_folds(expr, folds);
        for (const auto* fold : folds) {
            if (fold->component) identifier(*fold->component, prop.meta.span);
            identifier(fold->property, prop.meta.span);
        }
    }

    void check(const DimensionFragment& dim) {
        const bool structural = dim.kind == DimensionKind::Structural;
        const bool hasStructural = !dim.entities.empty() || !dim.links.empty();
        const bool hasMechanism = !dim.actors.empty() || !dim.steps.empty() || !dim.flows.empty();
        if ((structural && hasMechanism) || (!structural && hasStructural)) {
            error("E-PAR-008", "fragment '" + dim.name + "' mixes structural and mechanism content", dim.meta.span);
        }

        std::set<std::string> entities;
        for (const auto& entity : dim.entities) {
            identifier(entity.name, entity.meta.span);
            unique(entities, entity.name, "entity", entity.meta.span);
            std::set<std::string> attributes;
            for (const auto& attr : entity.attributes) {
                identifier(attr.name, entity.meta.span);
                unique(attributes, attr.name, "attribute", entity.meta.span);
            }
        }
        for (const auto& link : dim.links) {
            for (const auto* end : {&link.endA, &link.endB}) {
                if (!entities.count(end->entity)) {
                    error("E-PAR-006", "link end '" + end->entity + "' is not an entity of '" + dim.name + "'",
                          link.meta.span);
                }
            }
        }

        std::set<std::string> actors;
        for (const auto& actor : dim.actors) {
            identifier(actor.name, actor.meta.span);
            unique(actors, actor.name, "actor", actor.meta.span);
        }
        std::set<std::string> steps;
        for (const auto& step : dim.steps) {
            identifier(step.name, step.meta.span);
            unique(steps, step.name, "step", step.meta.span);
            for (const auto& performer : step.performedBy) {
                if (!actors.count(performer)) {
                    error("E-PAR-006", "step '" + step.name + "' is performed by undeclared actor '" + performer + "'",
                          step.meta.span);
                }
            }
        }
        for (const auto& flow : dim.flows) {
            for (const auto* end : {&flow.fromStep, &flow.toStep}) {
                if (!steps.count(*end)) {
                    error("E-PAR-006", "flow references undeclared step '" + *end + "'", flow.meta.span);
                }
            }
            if (flow.fromStep == flow.toStep) {
                error("E-PAR-008", "flow from '" + flow.fromStep + "' to itself", flow.meta.span);
            }
        }
    }

    std::vector<Diagnostic>& out_;
};

}  // namespace

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(text.front())) return false;
    return std::all_of(text.begin() + 1, text.end(), [&](char c) { return alpha(c) || digit(c); });
}

bool is_reserved_word(std::string_view text) {
    return std::find(kReservedWords.begin(), kReservedWords.end(), text) != kReservedWords.end();
}

std::vector<Diagnostic> check_unit_invariants(const ModelUnit& unit) {
    std::vector<Diagnostic> out;
    InvariantChecker(out).check(unit);
    return out;
}

}  // namespace scdl

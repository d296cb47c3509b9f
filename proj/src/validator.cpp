#include "scdl/validator.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace scdl {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

std::optional<std::size_t> index_of(const std::vector<std::string>& names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

// Component-to-component couplings as index pairs into the composition.
std::vector<std::pair<std::size_t, std::size_t>> component_edges(const SystemDecl& system) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& c : system.structure) {
        if (c.endA.scope != EndScope::Component || c.endB.scope != EndScope::Component) continue;
        auto a = index_of(system.composition, c.endA.party);
        auto b = index_of(system.composition, c.endB.party);
        if (a && b) edges.emplace_back(*a, *b);
    }
    return edges;
}

std::string brace_list(const std::vector<std::string>& items) {
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out + "}";
}

}  // namespace

std::optional<Diagnostic> check_bww_system(const SystemDecl& system) {
    const auto& comp = system.composition;
    if (comp.size() <= 1) return std::nullopt;

    DisjointSets sets(comp.size());
    for (auto [a, b] : component_edges(system)) sets.unite(a, b);

    std::map<std::size_t, std::vector<std::string>> parts;
    for (std::size_t i = 0; i < comp.size(); ++i) parts[sets.find(i)].push_back(comp[i]);
    if (parts.size() == 1) return std::nullopt;

    std::vector<std::string> smallest;
    for (auto& [root, members] : parts) {
        std::sort(members.begin(), members.end());
        if (smallest.empty() || members.size() < smallest.size() ||
            (members.size() == smallest.size() && members.front() < smallest.front())) {
            smallest = members;
        }
    }
    return make_error("E-BWW-001",
                      "composition of '" + system.name + "' is not a system: " + brace_list(smallest) +
                          " has no coupling to the other components",
                      system.meta.span);
}

bool brute_force_bipartition_check(const SystemDecl& system) {
    const std::size_t n = system.composition.size();
    if (n > kMaxBruteForceComponents) {
        throw std::invalid_argument("brute_force_bipartition_check: composition larger than 16");
    }
    if (n <= 1) return true;

    const auto edges = component_edges(system);
    // The last component always sits on side 0, so each unordered
    // bipartition is visited once; mask 0 would leave side 1 empty.
    const std::uint32_t limit = std::uint32_t{1} << (n - 1);
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        auto side = [&](std::size_t i) { return i + 1 < n && ((mask >> i) & 1U); };
        bool crossed = std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return side(e.first) != side(e.second); });
        if (!crossed) return false;
    }
    return true;
}

BoundaryPartition classify_boundary(const SystemDecl& system) {
    BoundaryPartition out;
    for (const auto& component : system.composition) {
        bool touchesEnvironment = std::any_of(system.structure.begin(), system.structure.end(), [&](const Coupling& c) {
            return (c.endA.scope == EndScope::Component && c.endA.party == component &&
                    c.endB.scope == EndScope::Environment) ||
                   (c.endB.scope == EndScope::Component && c.endB.party == component &&
                    c.endA.scope == EndScope::Environment);
        });
        (touchesEnvironment ? out.boundary : out.internal).push_back(component);
    }
    return out;
}

std::vector<Diagnostic> check_kind_rules(const SystemDecl& system) {
    std::vector<Diagnostic> out;
    if (system.kind != SystemKind::Conceptual) return out;
    for (const auto& c : system.structure) {
        if (c.energy) {
            out.push_back(make_error("E-KND-001",
                                     "conceptual system '" + system.name + "' has a " +
                                         std::string(to_string(*c.energy)) +
                                         " coupling; conceptual systems do not possess energy",
                                     c.meta.span));
        }
    }
    return out;
}

namespace {

template <class T>
const T* declaration_as(const std::optional<Declaration>& decl) {
    if (!decl) return nullptr;
    auto* p = std::get_if<const T*>(&*decl);
    return p ? *p : nullptr;
}

bool is_element(const std::optional<Declaration>& decl) {
    return declaration_as<EntityDecl>(decl) || declaration_as<ActorDecl>(decl) || declaration_as<StepDecl>(decl);
}

bool has_fragment(const SystemDecl& system, DimensionKind kind) {
    return std::any_of(system.dimensions.begin(), system.dimensions.end(),
                       [&](const DimensionFragment& d) { return d.kind == kind; });
}

}  // namespace

std::vector<Diagnostic> check_mapping_completeness(const SystemAssociation& assoc, const ResolvedModel& model) {
    std::vector<Diagnostic> out;
    const Level& level = model.levels()[model.level_of(assoc).value_or(0)];
    auto resolve_end = [&](const ElementPath& path, const std::string& system) -> std::optional<Declaration> {
        if (path.size() != 3 || path.front() != system) return std::nullopt;
        return model.lookup(level.qualify(join_path(path)));
    };

    // Either orientation is accepted; the two ends must lie in different systems.
    for (const auto& m : assoc.mappings) {
        std::vector<std::string> owners;
        for (const auto* path : {&m.pathA, &m.pathB}) {
            std::string owner;
            for (const auto* system : {&assoc.systemA, &assoc.systemB}) {
                if (is_element(resolve_end(*path, *system))) owner = *system;
            }
            if (owner.empty()) {
                out.push_back(make_error("E-MAP-002",
                                         "mapping end '" + join_path(*path) + "' does not name a fragment element of '" +
                                             assoc.systemA + "' or '" + assoc.systemB + "'",
                                         m.meta.span));
            }
            owners.push_back(owner);
        }
        if (!owners[0].empty() && owners[0] == owners[1]) {
            out.push_back(make_error("E-MAP-002", "both mapping ends lie in '" + owners[0] + "'", m.meta.span));
        }
    }

    const SystemDecl* a = level.unit->find_system(assoc.systemA);
    const SystemDecl* b = level.unit->find_system(assoc.systemB);
    if (!a || !b) return out;

    auto directed = [&](const SystemDecl& mech, const SystemDecl& structural) {
        if (!has_fragment(mech, DimensionKind::Mechanism) || !has_fragment(structural, DimensionKind::Structural)) {
            return;
        }
        std::vector<ElementPath> coveredActors;
        std::vector<ElementPath> reachedEntities;
        for (const auto& m : assoc.mappings) {
            if (m.kind != MappingKind::Counterpart) continue;
            for (bool swap : {false, true}) {
                const ElementPath& mechEnd = swap ? m.pathB : m.pathA;
                const ElementPath& structEnd = swap ? m.pathA : m.pathB;
                auto actor = declaration_as<ActorDecl>(resolve_end(mechEnd, mech.name));
                auto entity = declaration_as<EntityDecl>(resolve_end(structEnd, structural.name));
                if (actor && entity) {
                    coveredActors.push_back(mechEnd);
                    reachedEntities.push_back(structEnd);
                }
            }
        }
        for (const auto& dim : mech.dimensions) {
            if (dim.kind != DimensionKind::Mechanism) continue;
            for (const auto& actor : dim.actors) {
                ElementPath path{mech.name, dim.name, actor.name};
                if (std::find(coveredActors.begin(), coveredActors.end(), path) == coveredActors.end()) {
                    out.push_back(make_error("E-MAP-001",
                                             "actor '" + join_path(path) + "' has no structural counterpart in '" +
                                                 structural.name + "'",
                                             assoc.meta.span));
                }
            }
        }
        for (const auto& dim : structural.dimensions) {
            if (dim.kind != DimensionKind::Structural) continue;
            for (const auto& entity : dim.entities) {
                ElementPath path{structural.name, dim.name, entity.name};
                if (std::find(reachedEntities.begin(), reachedEntities.end(), path) == reachedEntities.end()) {
                    out.push_back(make_warning("W-MAP-010",
                                               "entity '" + join_path(path) + "' has no functional counterpart in '" +
                                                   mech.name + "'",
                                               assoc.meta.span));
                }
            }
        }
    };
    directed(*a, *b);
    directed(*b, *a);
    return out;
}

std::vector<Diagnostic> check_property_rules(const SystemDecl& system, const ModelUnit* children) {
    std::vector<Diagnostic> out;
    auto declares = [&](const std::string& component, const std::string& property) {
        if (!children || !system.has_component(component)) return false;
        const SystemDecl* child = children->find_system(component);
        return child && child->find_property(property);
    };

    for (const auto& prop : system.properties) {
        const auto& span = prop.meta.span;
        if (prop.classification == PropertyClass::Aggregate && !prop.derivation) {
            out.push_back(make_error("E-PRP-001", "aggregate property '" + prop.name + "' has no derivation", span));
        }
        if (!prop.derivation) continue;

        std::vector<const FoldNode*> folds;
        collect_folds(*prop.derivation, folds);
        for (const auto* fold : folds) {
            if (fold->component) {
                if (!system.has_component(*fold->component)) {
                    out.push_back(make_error("E-PRP-002",
                                             "derivation of '" + prop.name + "' references '" + *fold->component +
                                                 "', which is not a component of '" + system.name + "'",
                                             span));
                } else if (!declares(*fold->component, fold->property)) {
                    out.push_back(make_error("E-PRP-002",
                                             "derivation of '" + prop.name + "' references '" + *fold->component + "." +
                                                 fold->property + "', but that component declares no such property",
                                             span));
                }
            } else {
                bool any = std::any_of(system.composition.begin(), system.composition.end(),
                                       [&](const std::string& c) { return declares(c, fold->property); });
                if (!any) {
                    out.push_back(make_error("E-PRP-002",
                                             "derivation of '" + prop.name + "' references 'components." +
                                                 fold->property + "', but no component declares '" + fold->property +
                                                 "'",
                                             span));
                }
            }
        }
        if (prop.classification == PropertyClass::Emergent && is_bare_fold(*prop.derivation)) {
            out.push_back(make_warning("W-PRP-003",
                                       "emergent property '" + prop.name +
                                           "' is a bare fold over its components; it may be an aggregate property",
                                       span));
        }
    }
    return out;
}

std::vector<Diagnostic> check_cesm_completeness(const SystemDecl& system) {
    std::vector<Diagnostic> out;
    const auto& span = system.meta.span;
    if (system.composition.empty()) {
        out.push_back(make_warning("W-ATOM-001",
                                   "system '" + system.name + "' has an empty composition (abstraction stop)", span));
    }
    if (system.kind == SystemKind::Concrete) {
        if (system.composition.size() >= 2 && system.structure.empty()) {
            out.push_back(make_warning("W-CSM-001", "concrete system '" + system.name + "' declares no structure", span));
        }
        if (system.mechanisms.empty()) {
            out.push_back(make_warning("W-CSM-002", "concrete system '" + system.name + "' declares no mechanism", span));
        }
    }
    return out;
}

std::vector<Diagnostic> check_cesm_completeness(const SystemAssociation& assoc) {
    std::vector<Diagnostic> out;
    if (assoc.mappings.empty()) {
        out.push_back(make_warning("W-CSM-003",
                                   "system association '" + assoc.systemA + "' -- '" + assoc.systemB +
                                       "' has no mappings",
                                   assoc.meta.span));
    }
    return out;
}

std::vector<Diagnostic> validate(const ResolvedModel& model) {
    std::vector<Diagnostic> out;
    auto append = [&](std::vector<Diagnostic> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };

    for (const auto& entry : model.systems()) {
        const SystemDecl& system = *entry.decl;
        if (auto d = check_bww_system(system)) out.push_back(std::move(*d));
        append(check_kind_rules(system));
        const Level* child = model.child_level(entry.path);
        append(check_property_rules(system, child ? child->unit.get() : nullptr));
        append(check_cesm_completeness(system));
    }
    for (const auto& level : model.levels()) {
        for (const auto& assoc : level.unit->associations) {
            append(check_cesm_completeness(assoc));
            append(check_mapping_completeness(assoc, model));
        }
    }
    sort_diagnostics(out);
    return out;
}

}  // namespace scdl

#pragma once

// Core domain types for System Composition Diagrams: systems described by
// their composition, environment, structure and mechanism (CESM), the
// dimension fragments attached to them, and <<system>> associations between
// sibling systems.
//
// All declaration types compare structurally: source locations and attached
// comments live in DeclMeta, which always compares equal.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scdl/diagnostic.hpp"

namespace scdl {

/// Location and leading comments of a declaration. Never participates in
/// equality.
struct DeclMeta {
    SourceSpan span;
    std::vector<std::string> comments;

    friend bool operator==(const DeclMeta&, const DeclMeta&) { return true; }
};

/// Shared immutable box with deep equality, for recursive value types.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

private:
    std::shared_ptr<const T> ptr_;
};

enum class SystemKind { Conceptual, Concrete };

enum class EnergyKind { Mechanical, Thermal, Kinetic, Potential, Electric, Magnetic, Chemical };

inline constexpr EnergyKind kAllEnergyKinds[] = {
    EnergyKind::Mechanical, EnergyKind::Thermal,  EnergyKind::Kinetic,  EnergyKind::Potential,
    EnergyKind::Electric,   EnergyKind::Magnetic, EnergyKind::Chemical,
};

std::string_view to_string(SystemKind kind);
std::string_view to_string(EnergyKind kind);
std::optional<EnergyKind> energy_kind_from_string(std::string_view name);

enum class EndScope { Component, Environment };

struct CouplingEnd {
    std::string party;
    EndScope scope = EndScope::Component;

    friend bool operator==(const CouplingEnd&, const CouplingEnd&) = default;
};

/// Undirected relation between two components, or a component and an
/// environment party.
struct Coupling {
    CouplingEnd endA;
    CouplingEnd endB;
    std::optional<EnergyKind> energy;
    std::optional<std::string> label;
    DeclMeta meta;

    friend bool operator==(const Coupling&, const Coupling&) = default;
};

enum class PropertyClass { Intrinsic, Aggregate, Emergent };
enum class ValueType { Number, Text, Flag };

std::string_view to_string(PropertyClass cls);
std::string_view to_string(ValueType type);

enum class FoldOp { Sum, Count, Min, Max, Avg };
enum class BinaryOp { Add, Sub, Mul, Div };

std::string_view to_string(FoldOp op);
std::optional<FoldOp> fold_op_from_string(std::string_view name);
char to_symbol(BinaryOp op);

struct DerivationExpr;

struct NumberLiteral {
    double value = 0.0;

    friend bool operator==(const NumberLiteral&, const NumberLiteral&) = default;
};

/// Fold of `property` over the components. With no `component` the fold
/// ranges over every component that declares the property; otherwise over
/// the single named component.
struct FoldNode {
    FoldOp op = FoldOp::Sum;
    std::optional<std::string> component;
    std::string property;

    friend bool operator==(const FoldNode&, const FoldNode&) = default;
};

struct BinaryNode {
    BinaryOp op = BinaryOp::Add;
    Box<DerivationExpr> lhs;
    Box<DerivationExpr> rhs;

    friend bool operator==(const BinaryNode&, const BinaryNode&) = default;
};

struct DerivationExpr {
    std::variant<NumberLiteral, FoldNode, BinaryNode> node;

    friend bool operator==(const DerivationExpr&, const DerivationExpr&) = default;
};

inline constexpr int kMaxDerivationDepth = 8;

int expression_depth(const DerivationExpr& expr);
bool is_bare_fold(const DerivationExpr& expr);
/// Visits every fold node, left to right.
void collect_folds(const DerivationExpr& expr, std::vector<const FoldNode*>& out);

struct PropertyDecl {
    std::string name;
    PropertyClass classification = PropertyClass::Intrinsic;
    ValueType valueType = ValueType::Number;
    std::optional<DerivationExpr> derivation;
    DeclMeta meta;

    friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

/// Cardinality bound in the '0', '1', '*' vocabulary.
struct Card {
    enum class Max { One, Many };
    int min = 0;
    Max max = Max::Many;

    friend bool operator==(const Card&, const Card&) = default;
};

std::string to_string(const Card& card);
std::optional<Card> card_from_string(std::string_view text);

struct Attribute {
    std::string name;
    ValueType valueType = ValueType::Text;

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct EntityDecl {
    std::string name;
    std::vector<Attribute> attributes;
    DeclMeta meta;

    friend bool operator==(const EntityDecl&, const EntityDecl&) = default;
};

struct AssociationEnd {
    std::string entity;
    Card card;

    friend bool operator==(const AssociationEnd&, const AssociationEnd&) = default;
};

struct EntityAssociation {
    AssociationEnd endA;
    AssociationEnd endB;
    std::optional<std::string> label;
    DeclMeta meta;

    friend bool operator==(const EntityAssociation&, const EntityAssociation&) = default;
};

struct ActorDecl {
    std::string name;
    std::string role;
    DeclMeta meta;

    friend bool operator==(const ActorDecl&, const ActorDecl&) = default;
};

struct StepDecl {
    std::string name;
    std::vector<std::string> performedBy;
    DeclMeta meta;

    friend bool operator==(const StepDecl&, const StepDecl&) = default;
};

struct FlowDecl {
    std::string fromStep;
    std::string toStep;
    DeclMeta meta;

    friend bool operator==(const FlowDecl&, const FlowDecl&) = default;
};

enum class DimensionKind { Structural, Mechanism };

std::string_view to_string(DimensionKind kind);

/// One perspective on a system: structural (entities and associations) or
/// mechanism (actors, steps and flows). Only the content matching `kind` is
/// populated.
struct DimensionFragment {
    DimensionKind kind = DimensionKind::Structural;
    std::string name;
    std::vector<EntityDecl> entities;
    std::vector<EntityAssociation> links;
    std::vector<ActorDecl> actors;
    std::vector<StepDecl> steps;
    std::vector<FlowDecl> flows;
    DeclMeta meta;

    friend bool operator==(const DimensionFragment&, const DimensionFragment&) = default;
};

/// Names a Mechanism fragment attached to the same system.
struct MechanismRef {
    std::string fragment;
    DeclMeta meta;

    friend bool operator==(const MechanismRef&, const MechanismRef&) = default;
};

struct ExplodeRef {
    std::string path;
    DeclMeta meta;

    friend bool operator==(const ExplodeRef&, const ExplodeRef&) = default;
};

struct SystemDecl {
    std::string name;
    SystemKind kind = SystemKind::Concrete;
    std::vector<std::string> composition;
    std::vector<std::string> environment;
    std::vector<Coupling> structure;
    std::vector<MechanismRef> mechanisms;
    std::vector<PropertyDecl> properties;
    std::vector<DimensionFragment> dimensions;
    std::optional<ExplodeRef> explode;
    DeclMeta meta;
    // Comments after the last section, before the closing brace.
    std::vector<std::string> trailingComments;
    // Leading comments of the composition, environment, structure and
    // properties sections.
    struct SectionComments {
        std::vector<std::string> composition;
        std::vector<std::string> environment;
        std::vector<std::string> structure;
        std::vector<std::string> properties;
    } sectionComments;

    const DimensionFragment* find_dimension(std::string_view fragment) const;
    const PropertyDecl* find_property(std::string_view property) const;
    bool has_component(std::string_view component) const;

    friend bool operator==(const SystemDecl& a, const SystemDecl& b) {
        return a.name == b.name && a.kind == b.kind && a.composition == b.composition &&
               a.environment == b.environment && a.structure == b.structure && a.mechanisms == b.mechanisms &&
               a.properties == b.properties && a.dimensions == b.dimensions && a.explode == b.explode;
    }
};

/// Dotted path such as `PersonAsEHR.EHR.Diagnosis`.
using ElementPath = std::vector<std::string>;

std::string join_path(const ElementPath& path);
/// Splits on '.'; an empty string yields an empty path.
ElementPath split_path(std::string_view dotted);

enum class MappingKind { Association, Counterpart };

struct MappingPair {
    ElementPath pathA;
    ElementPath pathB;
    MappingKind kind = MappingKind::Association;
    std::optional<Card> cardA;
    std::optional<Card> cardB;
    DeclMeta meta;

    friend bool operator==(const MappingPair&, const MappingPair&) = default;
};

/// <<system>>-stereotyped link between two sibling systems.
struct SystemAssociation {
    static constexpr std::string_view stereotype = "system";
    std::string systemA;
    std::string systemB;
    std::vector<MappingPair> mappings;
    DeclMeta meta;

    friend bool operator==(const SystemAssociation&, const SystemAssociation&) = default;
};

/// One parsed `.scd` file: a single composition level.
struct ModelUnit {
    std::string name;
    // Dotted path of the exploded parent system; "root" for the root unit.
    std::string levelId = "root";
    std::vector<SystemDecl> systems;
    std::vector<SystemAssociation> associations;
    std::string sourcePath;
    DeclMeta meta;
    std::vector<std::string> trailingComments;

    const SystemDecl* find_system(std::string_view system) const;

    // Structural: ignores levelId, sourcePath, spans and comments.
    friend bool operator==(const ModelUnit& a, const ModelUnit& b) {
        return a.name == b.name && a.systems == b.systems && a.associations == b.associations;
    }
};

bool is_identifier(std::string_view text);
bool is_reserved_word(std::string_view text);

/// The construction-level validation pass. Returns one diagnostic per
/// violated type invariant of the unit (identifier uniqueness, coupling
/// endpoint scoping, fragment content, association endpoints). An empty
/// result means the unit is well-formed.
std::vector<Diagnostic> check_unit_invariants(const ModelUnit& unit);

}  // namespace scdl

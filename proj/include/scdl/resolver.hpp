#pragma once

// Multi-level linking. A system may `explode` into a child `.scd` file whose
// top-level systems are exactly that system's components; the resolver loads
// the whole tree, checks parent/child consistency and builds a symbol table
// keyed by fully qualified dotted paths (`Person.PersonAsEHR.EHR.Diagnosis`).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scdl/diagnostic.hpp"
#include "scdl/model.hpp"

namespace scdl {

/// Source text provider for resolve(). Paths are forward-slash strings, already
/// joined with the referring file's directory.
class UnitLoader {
public:
    virtual ~UnitLoader() = default;
    virtual std::optional<std::string> load(const std::string& path) = 0;
};

class FileLoader final : public UnitLoader {
public:
    std::optional<std::string> load(const std::string& path) override;
};

/// In-memory file set, mostly for tests and tooling.
class MemoryLoader final : public UnitLoader {
public:
    MemoryLoader() = default;
    explicit MemoryLoader(std::map<std::string, std::string> files) : files_(std::move(files)) {}

    void add(std::string path, std::string source) { files_[std::move(path)] = std::move(source); }
    std::optional<std::string> load(const std::string& path) override;

    // Number of load() calls per path.
    const std::map<std::string, int>& load_counts() const { return counts_; }

private:
    std::map<std::string, std::string> files_;
    std::map<std::string, int> counts_;
};

/// One composition level: a loaded unit and where it hangs in the tree.
struct Level {
    std::shared_ptr<const ModelUnit> unit;
    // Dotted path of the exploded parent system; empty for the root level.
    std::string parentPath;
    std::string file;
    int depth = 0;

    std::string qualify(std::string_view name) const;
};

using Declaration = std::variant<const SystemDecl*, const DimensionFragment*, const EntityDecl*, const ActorDecl*,
                                 const StepDecl*, const PropertyDecl*>;

/// A system together with its fully qualified path and owning level.
struct SystemEntry {
    std::string path;
    const SystemDecl* decl = nullptr;
    std::size_t level = 0;
};

/// Linked level tree. Immutable; copies share the underlying units.
class ResolvedModel {
public:
    explicit ResolvedModel(std::vector<Level> levels);

    const ModelUnit& root() const { return *levels_.front().unit; }
    /// Depth-first pre-order of explode references, root first.
    const std::vector<Level>& levels() const { return levels_; }
    /// Child level of the exploded system at `systemPath`, if any.
    const Level* child_level(std::string_view systemPath) const;
    /// Number of levels on the longest root-to-leaf chain.
    int tree_depth() const;

    const std::map<std::string, Declaration, std::less<>>& symbols() const { return symbols_; }
    std::optional<Declaration> lookup(std::string_view qualifiedPath) const;

    /// Every system at every level, in level order then declaration order.
    const std::vector<SystemEntry>& systems() const { return systems_; }
    /// Level index owning the association, or nullopt when it belongs to no level.
    std::optional<std::size_t> level_of(const SystemAssociation& assoc) const;

private:
    std::vector<Level> levels_;
    std::map<std::string, std::size_t, std::less<>> levelTree_;
    std::map<std::string, Declaration, std::less<>> symbols_;
    std::vector<SystemEntry> systems_;
};

/// Loads the root and every explode target reachable from it (each file at
/// most once), links the level tree and checks it. Errors: E-LVL-001..004,
/// plus the root's own parse diagnostics.
Outcome<ResolvedModel> resolve(const std::string& rootPath, UnitLoader& loader);

/// The declaration at a fully qualified path, or nullopt.
std::optional<Declaration> resolve_element_path(const ResolvedModel& model, const ElementPath& path);

/// Result of drilling down from a system into its exploded child level.
struct DrillView {
    std::string systemPath;
    const Level* level = nullptr;
    // The parent's aggregate and emergent properties.
    std::vector<const PropertyDecl*> parentProperties;

    std::vector<std::string> system_names() const;
};

/// Errors: E-QRY-001 path does not name a system; E-QRY-002 no explode link.
Outcome<DrillView> drill_down(const ResolvedModel& model, const ElementPath& systemPath);

/// Joins `ref` onto the directory of `referrer` and normalizes the result.
std::string join_relative(const std::string& referrer, const std::string& ref);

}  // namespace scdl

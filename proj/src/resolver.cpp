#include "scdl/resolver.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "scdl/parser.hpp"

namespace scdl {

std::optional<std::string> FileLoader::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return buf.str();
}

std::optional<std::string> MemoryLoader::load(const std::string& path) {
    ++counts_[path];
    auto it = files_.find(path);
    if (it == files_.end()) return std::nullopt;
    return it->second;
}

std::string Level::qualify(std::string_view name) const {
    if (parentPath.empty()) return std::string(name);
    std::string out = parentPath;
    out += '.';
    out += name;
    return out;
}

std::string join_relative(const std::string& referrer, const std::string& ref) {
    namespace fs = std::filesystem;
    fs::path base = fs::path(referrer).parent_path();
    return (base / fs::path(ref)).lexically_normal().generic_string();
}

ResolvedModel::ResolvedModel(std::vector<Level> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const Level& level = levels_[i];
        if (i > 0) levelTree_.emplace(level.parentPath, i);
        for (const auto& system : level.unit->systems) {
            const std::string path = level.qualify(system.name);
            systems_.push_back({path, &system, i});
            symbols_.emplace(path, &system);
            for (const auto& dim : system.dimensions) {
                const std::string dimPath = path + "." + dim.name;
                symbols_.emplace(dimPath, &dim);
                for (const auto& e : dim.entities) symbols_.emplace(dimPath + "." + e.name, &e);
                for (const auto& a : dim.actors) symbols_.emplace(dimPath + "." + a.name, &a);
                for (const auto& s : dim.steps) symbols_.emplace(dimPath + "." + s.name, &s);
            }
            for (const auto& prop : system.properties) symbols_.emplace(path + "." + prop.name, &prop);
        }
    }
}

const Level* ResolvedModel::child_level(std::string_view systemPath) const {
    auto it = levelTree_.find(systemPath);
    return it == levelTree_.end() ? nullptr : &levels_[it->second];
}

int ResolvedModel::tree_depth() const {
    int deepest = 0;
    for (const auto& level : levels_) deepest = std::max(deepest, level.depth);
    return deepest + 1;
}

std::optional<Declaration> ResolvedModel::lookup(std::string_view qualifiedPath) const {
    auto it = symbols_.find(qualifiedPath);
    if (it == symbols_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> ResolvedModel::level_of(const SystemAssociation& assoc) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        for (const auto& candidate : levels_[i].unit->associations) {
            if (&candidate == &assoc) return i;
        }
    }
    return std::nullopt;
}

namespace {

class Resolver {
public:
    explicit Resolver(UnitLoader& loader) : loader_(loader) {}

    Outcome<ResolvedModel> run(const std::string& rootPath) {
        Outcome<ResolvedModel> out;
        const std::string root = std::filesystem::path(rootPath).lexically_normal().generic_string();
        auto text = loader_.load(root);
        if (!text) {
            out.diagnostics.push_back(make_error("E-LVL-001", "cannot load '" + root + "'", SourceSpan{root}));
            return out;
        }
        auto parsed = parse(*text, root);
        if (!parsed.unit) {
            out.diagnostics = std::move(parsed.diagnostics);
            return out;
        }
        loaded_.insert(root);
        add_level(std::move(*parsed.unit), "", root, 0);
        descend(0, {{root, levels_[0].unit->name}});

        sort_diagnostics(diagnostics_);
        out.diagnostics = std::move(diagnostics_);
        if (!has_errors(out.diagnostics)) out.value.emplace(std::move(levels_));
        return out;
    }

private:
    struct StackEntry {
        std::string file;
        std::string unitName;
    };

    void add_level(ModelUnit unit, std::string parentPath, std::string file, int depth) {
        unit.levelId = parentPath.empty() ? "root" : parentPath;
        levels_.push_back({std::make_shared<const ModelUnit>(std::move(unit)), std::move(parentPath), std::move(file),
                           depth});
    }

    // Depth-first pre-order over explode references of levels_[index].
    void descend(std::size_t index, std::vector<StackEntry> stack) {
        // Copy: levels_ grows while we iterate.
        const Level level = levels_[index];
        for (const auto& system : level.unit->systems) {
            if (!system.explode) continue;
            const auto& ref = *system.explode;
            const std::string target = join_relative(level.file, ref.path);

            auto onStack = std::find_if(stack.begin(), stack.end(), [&](const StackEntry& e) { return e.file == target; });
            if (onStack != stack.end()) {
                std::string cycle;
                for (auto it = onStack; it != stack.end(); ++it) cycle += it->file + " -> ";
                cycle += onStack->file;
                diagnostics_.push_back(make_error("E-LVL-002",
                                                  "explode cycle: " + cycle + " (via '" + system.name + "' exploding to '" +
                                                      ref.path + "')",
                                                  ref.meta.span));
                continue;
            }
            if (loaded_.count(target)) {
                diagnostics_.push_back(make_error(
                    "E-LVL-004", "'" + target + "' is already the child level of another system; '" + system.name +
                                     "' cannot share it",
                    ref.meta.span));
                continue;
            }
            loaded_.insert(target);

            auto text = loader_.load(target);
            if (!text) {
                diagnostics_.push_back(
                    make_error("E-LVL-001", "cannot load explode target '" + target + "'", ref.meta.span));
                continue;
            }
            auto parsed = parse(*text, target);
            if (!parsed.unit) {
                auto d = make_error("E-LVL-001", "explode target '" + target + "' has " +
                                                     std::to_string(parsed.diagnostics.size()) + " syntax error(s)",
                                    ref.meta.span);
                d.related = std::move(parsed.diagnostics);
                diagnostics_.push_back(std::move(d));
                continue;
            }

            check_names(system, *parsed.unit, target);
            const std::size_t child = levels_.size();
            add_level(std::move(*parsed.unit), level.qualify(system.name), target, level.depth + 1);
            auto childStack = stack;
            childStack.push_back({target, levels_[child].unit->name});
            descend(child, std::move(childStack));
        }
    }

    void check_names(const SystemDecl& parent, const ModelUnit& child, const std::string& file) {
        for (const auto& component : parent.composition) {
            if (!child.find_system(component)) {
                diagnostics_.push_back(make_error("E-LVL-003",
                                                  "child level '" + file + "' does not declare component '" +
                                                      component + "' of '" + parent.name + "'",
                                                  parent.explode->meta.span));
            }
        }
        for (const auto& system : child.systems) {
            if (!parent.has_component(system.name)) {
                diagnostics_.push_back(make_error("E-LVL-003",
                                                  "system '" + system.name + "' is not a component of parent '" +
                                                      parent.name + "'",
                                                  system.meta.span));
            }
        }
    }

    UnitLoader& loader_;
    std::vector<Level> levels_;
    std::set<std::string> loaded_;
    std::vector<Diagnostic> diagnostics_;
};

SourceSpan query_span(const ResolvedModel& model) {
    return SourceSpan{model.root().sourcePath};
}

}  // namespace

Outcome<ResolvedModel> resolve(const std::string& rootPath, UnitLoader& loader) {
    return Resolver(loader).run(rootPath);
}

std::optional<Declaration> resolve_element_path(const ResolvedModel& model, const ElementPath& path) {
    if (path.empty()) return std::nullopt;
    if (std::any_of(path.begin(), path.end(), [](const std::string& s) { return s.empty(); })) return std::nullopt;
    return model.lookup(join_path(path));
}

std::vector<std::string> DrillView::system_names() const {
    std::vector<std::string> names;
    if (level) {
        for (const auto& s : level->unit->systems) names.push_back(s.name);
    }
    return names;
}

Outcome<DrillView> drill_down(const ResolvedModel& model, const ElementPath& systemPath) {
    Outcome<DrillView> out;
    const std::string path = join_path(systemPath);
    auto decl = resolve_element_path(model, systemPath);
    const SystemDecl* const* system = decl ? std::get_if<const SystemDecl*>(&*decl) : nullptr;
    if (!system) {
        out.diagnostics.push_back(make_error("E-QRY-001", "'" + path + "' does not name a system", query_span(model)));
        return out;
    }
    const Level* level = model.child_level(path);
    if (!level) {
        out.diagnostics.push_back(
            make_error("E-QRY-002", "system '" + path + "' has no explode link", query_span(model)));
        return out;
    }
    DrillView view{path, level, {}};
    for (const auto& prop : (*system)->properties) {
        if (prop.classification != PropertyClass::Intrinsic) view.parentProperties.push_back(&prop);
    }
    out.value = std::move(view);
    return out;
}

}  // namespace scdl

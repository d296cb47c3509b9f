#include "scdl/export.hpp"

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "scdl/parser.hpp"

namespace scdl {

namespace {

using nlohmann::json;

json to_json(const SourceSpan& s) {
    return {{"file", s.file}, {"startLine", s.startLine}, {"startCol", s.startCol},
            {"endLine", s.endLine}, {"endCol", s.endCol}};
}

json optional_string(const std::optional<std::string>& s) {
    return s ? json(*s) : json(nullptr);
}

json to_json(const CouplingEnd& e) {
    return {{"party", e.party}, {"scope", e.scope == EndScope::Component ? "component" : "environment"}};
}

json to_json(const DimensionFragment& d) {
    json entities = json::array();
    for (const auto& e : d.entities) {
        json attributes = json::array();
        for (const auto& a : e.attributes) {
            attributes.push_back({{"name", a.name}, {"valueType", std::string(to_string(a.valueType))}});
        }
        entities.push_back({{"name", e.name}, {"attributes", attributes}, {"span", to_json(e.meta.span)}});
    }
    json links = json::array();
    for (const auto& l : d.links) {
        links.push_back({{"endA", {{"entity", l.endA.entity}, {"card", to_string(l.endA.card)}}},
                         {"endB", {{"entity", l.endB.entity}, {"card", to_string(l.endB.card)}}},
                         {"label", optional_string(l.label)},
                         {"span", to_json(l.meta.span)}});
    }
    json actors = json::array();
    for (const auto& a : d.actors) {
        actors.push_back({{"name", a.name}, {"role", a.role}, {"span", to_json(a.meta.span)}});
    }
    json steps = json::array();
    for (const auto& s : d.steps) {
        steps.push_back({{"name", s.name}, {"performedBy", s.performedBy}, {"span", to_json(s.meta.span)}});
    }
    json flows = json::array();
    for (const auto& f : d.flows) {
        flows.push_back({{"from", f.fromStep}, {"to", f.toStep}, {"span", to_json(f.meta.span)}});
    }
    return {{"kind", std::string(to_string(d.kind))},
            {"name", d.name},
            {"entities", entities},
            {"links", links},
            {"actors", actors},
            {"steps", steps},
            {"flows", flows},
            {"span", to_json(d.meta.span)}};
}

class JsonWriter {
public:
    explicit JsonWriter(const ResolvedModel& model) : model_(model) {}

    json unit(const Level& level) {
        const ModelUnit& u = *level.unit;
        json systems = json::array();
        for (const auto& s : u.systems) systems.push_back(system(level, s));
        json associations = json::array();
        for (const auto& a : u.associations) associations.push_back(association(a));
        return {{"name", u.name},
                {"levelId", u.levelId},
                {"sourcePath", u.sourcePath},
                {"systems", systems},
                {"associations", associations},
                {"span", to_json(u.meta.span)}};
    }

private:
    json system(const Level& level, const SystemDecl& s) {
        const std::string path = level.qualify(s.name);
        json structure = json::array();
        for (const auto& c : s.structure) {
            structure.push_back({{"endA", to_json(c.endA)},
                                 {"endB", to_json(c.endB)},
                                 {"energy", c.energy ? json(std::string(to_string(*c.energy))) : json(nullptr)},
                                 {"label", optional_string(c.label)},
                                 {"span", to_json(c.meta.span)}});
        }
        json mechanisms = json::array();
        for (const auto& m : s.mechanisms) mechanisms.push_back(m.fragment);
        json properties = json::array();
        for (const auto& p : s.properties) {
            properties.push_back({{"name", p.name},
                                  {"classification", std::string(to_string(p.classification))},
                                  {"valueType", std::string(to_string(p.valueType))},
                                  {"derivation", p.derivation ? json(format_expression(*p.derivation)) : json(nullptr)},
                                  {"span", to_json(p.meta.span)}});
        }
        json dimensions = json::array();
        for (const auto& d : s.dimensions) dimensions.push_back(to_json(d));

        json explode = nullptr;
        if (s.explode) {
            explode = {{"path", s.explode->path}, {"span", to_json(s.explode->meta.span)}, {"unit", nullptr}};
            if (const Level* child = model_.child_level(path)) {
                explode["file"] = child->file;
                explode["unit"] = unit(*child);
            }
        }
        return {{"name", s.name},
                {"path", path},
                {"kind", std::string(to_string(s.kind))},
                {"composition", s.composition},
                {"environment", s.environment},
                {"structure", structure},
                {"mechanisms", mechanisms},
                {"properties", properties},
                {"dimensions", dimensions},
                {"explode", explode},
                {"span", to_json(s.meta.span)}};
    }

    json association(const SystemAssociation& a) {
        json mappings = json::array();
        for (const auto& m : a.mappings) {
            mappings.push_back({{"kind", m.kind == MappingKind::Counterpart ? "counterpart" : "association"},
                                {"pathA", join_path(m.pathA)},
                                {"pathB", join_path(m.pathB)},
                                {"cardA", m.cardA ? json(to_string(*m.cardA)) : json(nullptr)},
                                {"cardB", m.cardB ? json(to_string(*m.cardB)) : json(nullptr)},
                                {"span", to_json(m.meta.span)}});
        }
        return {{"stereotype", std::string(SystemAssociation::stereotype)},
                {"systemA", a.systemA},
                {"systemB", a.systemB},
                {"mappings", mappings},
                {"span", to_json(a.meta.span)}};
    }

    const ResolvedModel& model_;
};

// File names are written relative to the root file's directory so the
// document does not depend on the working directory.
void rebase_files(json& j, const std::filesystem::path& base) {
    if (j.is_array()) {
        for (auto& item : j) rebase_files(item, base);
        return;
    }
    if (!j.is_object()) return;
    for (auto& [key, value] : j.items()) {
        if ((key == "file" || key == "sourcePath") && value.is_string()) {
            auto rel = std::filesystem::path(value.get<std::string>()).lexically_relative(base);
            if (!rel.empty()) value = rel.generic_string();
        } else {
            rebase_files(value, base);
        }
    }
}

std::string dot_id(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string export_json(const ResolvedModel& model) {
    JsonWriter writer(model);
    json levels = json::array();
    for (const auto& level : model.levels()) {
        json systems = json::array();
        for (const auto& s : level.unit->systems) systems.push_back(level.qualify(s.name));
        levels.push_back({{"levelId", level.unit->levelId},
                          {"parentPath", level.parentPath},
                          {"file", level.file},
                          {"depth", level.depth},
                          {"unit", level.unit->name},
                          {"systems", systems}});
    }
    json doc = {{"scdVersion", kScdVersion}, {"root", writer.unit(model.levels().front())}, {"levels", levels}};
    rebase_files(doc, std::filesystem::path(model.levels().front().file).parent_path());
    return doc.dump(2) + "\n";
}

Outcome<std::string> export_dot(const ResolvedModel& model, const std::optional<ElementPath>& levelPath) {
    Outcome<std::string> out;
    const Level* level = &model.levels().front();
    if (levelPath) {
        auto view = drill_down(model, *levelPath);
        if (!view.ok()) {
            out.diagnostics = std::move(view.diagnostics);
            return out;
        }
        level = view.value->level;
    }

    std::ostringstream dot;
    const std::string graphName = level->parentPath.empty() ? level->unit->name : level->parentPath;
    dot << "graph " << dot_id(graphName) << " {\n";
    dot << "  node [shape=box];\n";
    for (const auto& s : level->unit->systems) {
        const std::string path = level->qualify(s.name);
        dot << "  " << dot_id(path) << " [label=" << dot_id("«system» " + s.name);
        if (model.child_level(path)) dot << ", peripheries=2";
        if (!s.dimensions.empty()) {
            std::string tooltip;
            for (const auto& d : s.dimensions) {
                if (!tooltip.empty()) tooltip += "; ";
                tooltip += std::string(to_string(d.kind)) + ": " + d.name;
            }
            dot << ", tooltip=" << dot_id(tooltip);
        }
        dot << "];\n";
    }
    for (const auto& a : level->unit->associations) {
        const auto n = a.mappings.size();
        dot << "  " << dot_id(level->qualify(a.systemA)) << " -- " << dot_id(level->qualify(a.systemB))
            << " [label=" << dot_id(std::to_string(n) + (n == 1 ? " mapping" : " mappings")) << "];\n";
    }
    dot << "}\n";
    out.value = dot.str();
    return out;
}

}  // namespace scdl

#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scdl::testing {

namespace fs = std::filesystem;

std::string corpus_dir() { return SCDL_CORPUS_DIR; }
std::string golden_dir() { return SCDL_GOLDEN_DIR; }
std::string fixture_dir() { return SCDL_FIXTURE_DIR; }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<ManifestEntry> corpus_manifest() {
    const std::string path = corpus_dir() + "/manifest.txt";
    auto parsed = parse_manifest(read_text(path), path);
    if (!parsed.ok()) throw std::runtime_error("bad manifest " + path);
    return *parsed.value;
}

std::vector<std::string> corpus_files() {
    std::vector<std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(corpus_dir())) {
        if (e.is_regular_file() && e.path().extension() == ".scd") files.push_back(e.path().generic_string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

ResolvedModel resolve_or_throw(const std::string& rootPath) {
    FileLoader loader;
    auto r = resolve(rootPath, loader);
    if (!r.ok()) {
        std::string text = "resolution failed:";
        for (const auto& d : r.diagnostics) text += "\n" + render_diagnostic(d);
        throw std::runtime_error(text);
    }
    return std::move(*r.value);
}

namespace {

int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

std::vector<std::string> names(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

std::string random_text(std::mt19937& rng) {
    static const std::vector<std::string> pieces = {"a", "b", "z", " ", "\"", "\\", "\n", "\t", "é", "{", ";",
                                                    "/*", "//", "<<", "0..*", "-"};
    std::string s;
    for (int i = uniform(rng, 0, 8); i > 0; --i) s += pick(rng, pieces);
    return s;
}

std::optional<std::string> maybe_text(std::mt19937& rng) {
    if (coin(rng)) return std::nullopt;
    return random_text(rng);
}

std::vector<std::string> random_comments(std::mt19937& rng) {
    std::vector<std::string> out;
    if (coin(rng, 0.7)) return out;
    for (int i = uniform(rng, 1, 2); i > 0; --i) {
        out.push_back(coin(rng, 0.8) ? "// note " + std::to_string(uniform(rng, 0, 99)) : "/* block */");
    }
    return out;
}

// Sprinkles comments over every declaration that can carry them.
void add_comments(std::mt19937& rng, SystemDecl& s) {
    s.meta.comments = random_comments(rng);
    s.trailingComments = random_comments(rng);
    if (!s.composition.empty()) s.sectionComments.composition = random_comments(rng);
    if (!s.environment.empty()) s.sectionComments.environment = random_comments(rng);
    if (!s.structure.empty()) s.sectionComments.structure = random_comments(rng);
    if (!s.properties.empty()) s.sectionComments.properties = random_comments(rng);
    for (auto& c : s.structure) c.meta.comments = random_comments(rng);
    for (auto& m : s.mechanisms) m.meta.comments = random_comments(rng);
    for (auto& p : s.properties) p.meta.comments = random_comments(rng);
    if (s.explode) s.explode->meta.comments = random_comments(rng);
    for (auto& d : s.dimensions) {
        d.meta.comments = random_comments(rng);
        for (auto& e : d.entities) e.meta.comments = random_comments(rng);
        for (auto& l : d.links) l.meta.comments = random_comments(rng);
        for (auto& a : d.actors) a.meta.comments = random_comments(rng);
        for (auto& st : d.steps) st.meta.comments = random_comments(rng);
        for (auto& f : d.flows) f.meta.comments = random_comments(rng);
    }
}

Card random_card(std::mt19937& rng) {
    static const std::vector<std::string> forms = {"1", "0..1", "1..*", "0..*", "*"};
    return *card_from_string(pick(rng, forms));
}

double random_number(std::mt19937& rng) {
    switch (uniform(rng, 0, 4)) {
        case 0: return uniform(rng, 0, 100);
        case 1: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
        case 2: return uniform(rng, 1, 9) * 1e-7;
        case 3: return uniform(rng, 1, 9) * 1e21;
        default: return -uniform(rng, 1, 50);
    }
}

DerivationExpr random_expr(std::mt19937& rng, const std::vector<std::string>& components, int budget) {
    if (budget <= 1 || coin(rng, 0.4)) {
        if (coin(rng, 0.3)) return DerivationExpr{NumberLiteral{random_number(rng)}};
        FoldNode fold;
        fold.op = static_cast<FoldOp>(uniform(rng, 0, 4));
        if (!components.empty() && coin(rng, 0.3)) fold.component = pick(rng, components);
        fold.property = coin(rng) ? "weight" : "p" + std::to_string(uniform(rng, 0, 3));
        return DerivationExpr{fold};
    }
    BinaryNode bin{static_cast<BinaryOp>(uniform(rng, 0, 3)), random_expr(rng, components, budget - 1),
                   random_expr(rng, components, budget - 1)};
    return DerivationExpr{bin};
}

DimensionFragment random_fragment(std::mt19937& rng, const std::string& name) {
    DimensionFragment d;
    d.name = name;
    if (coin(rng)) {
        d.kind = DimensionKind::Structural;
        const auto entities = names("Ent", uniform(rng, 0, 4));
        for (const auto& e : entities) {
            EntityDecl entity{e, {}, {}};
            for (const auto& a : names("a", uniform(rng, 0, 3))) {
                entity.attributes.push_back({a, static_cast<ValueType>(uniform(rng, 0, 2))});
            }
            d.entities.push_back(entity);
        }
        if (!entities.empty()) {
            for (int i = uniform(rng, 0, 3); i > 0; --i) {
                d.links.push_back({{pick(rng, entities), random_card(rng)},
                                   {pick(rng, entities), random_card(rng)},
                                   maybe_text(rng),
                                   {}});
            }
        }
    } else {
        d.kind = DimensionKind::Mechanism;
        const auto actors = names("Act", uniform(rng, 0, 4));
        for (const auto& a : actors) d.actors.push_back({a, coin(rng) ? random_text(rng) : "", {}});
        const auto steps = names("St", uniform(rng, 0, 4));
        for (const auto& s : steps) {
            StepDecl step{s, {}, {}};
            for (const auto& a : actors) {
                if (coin(rng, 0.4)) step.performedBy.push_back(a);
            }
            d.steps.push_back(step);
        }
        if (steps.size() >= 2) {
            for (int i = uniform(rng, 0, 3); i > 0; --i) {
                auto from = pick(rng, steps);
                auto to = pick(rng, steps);
                if (from != to) d.flows.push_back({from, to, {}});
            }
        }
    }
    return d;
}

SystemDecl random_unit_system(std::mt19937& rng, const std::string& name) {
    SystemDecl s = random_system(rng, uniform(rng, 0, 5), 0.4, uniform(rng, 0, 2), 0.3);
    s.name = name;
    s.kind = coin(rng) ? SystemKind::Concrete : SystemKind::Conceptual;
    for (auto& c : s.structure) {
        if (coin(rng)) c.energy = kAllEnergyKinds[uniform(rng, 0, 6)];
        c.label = maybe_text(rng);
    }
    for (const auto& f : names("F", uniform(rng, 0, 2))) s.dimensions.push_back(random_fragment(rng, f));
    for (const auto& d : s.dimensions) {
        if (d.kind == DimensionKind::Mechanism && coin(rng, 0.7)) s.mechanisms.push_back({d.name, {}});
    }
    for (const auto& p : names("p", uniform(rng, 0, 3))) {
        PropertyDecl prop;
        prop.name = p;
        prop.classification = static_cast<PropertyClass>(uniform(rng, 0, 2));
        prop.valueType = static_cast<ValueType>(uniform(rng, 0, 2));
        if (prop.classification != PropertyClass::Intrinsic && coin(rng, 0.8)) {
            prop.derivation = random_expr(rng, s.composition, uniform(rng, 1, kMaxDerivationDepth));
        }
        s.properties.push_back(prop);
    }
    if (coin(rng, 0.3)) s.explode = ExplodeRef{"levels/" + name + ".scd", {}};
    add_comments(rng, s);
    return s;
}

}  // namespace

SystemDecl random_system(std::mt19937& rng, int n, double density, int envCount, double envDensity) {
    SystemDecl s;
    s.name = "S";
    s.composition = names("c", n);
    s.environment = names("E", envCount);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!coin(rng, density)) continue;
            Coupling c;
            c.endA = {s.composition[i], EndScope::Component};
            c.endB = {s.composition[j], EndScope::Component};
            if (coin(rng)) std::swap(c.endA, c.endB);
            s.structure.push_back(c);
        }
        if (envCount > 0 && coin(rng, envDensity)) {
            Coupling c;
            c.endA = {s.composition[i], EndScope::Component};
            c.endB = {pick(rng, s.environment), EndScope::Environment};
            if (coin(rng)) std::swap(c.endA, c.endB);
            s.structure.push_back(c);
        }
    }
    std::shuffle(s.structure.begin(), s.structure.end(), rng);
    return s;
}

ModelUnit random_unit(std::mt19937& rng) {
    ModelUnit u;
    u.name = "unit" + std::to_string(uniform(rng, 0, 99));
    u.meta.comments = random_comments(rng);
    const auto systems = names("Sys", uniform(rng, 0, 4));
    for (const auto& name : systems) u.systems.push_back(random_unit_system(rng, name));
    if (systems.size() >= 2) {
        for (int i = uniform(rng, 0, 2); i > 0; --i) {
            SystemAssociation a;
            a.systemA = pick(rng, systems);
            do a.systemB = pick(rng, systems);
            while (a.systemB == a.systemA);
            for (int m = uniform(rng, 0, 3); m > 0; --m) {
                MappingPair pair;
                for (auto* path : {&pair.pathA, &pair.pathB}) {
                    for (int k = uniform(rng, 1, 4); k > 0; --k) path->push_back("x" + std::to_string(uniform(rng, 0, 5)));
                }
                pair.kind = coin(rng) ? MappingKind::Counterpart : MappingKind::Association;
                if (coin(rng)) {
                    pair.cardA = random_card(rng);
                    pair.cardB = random_card(rng);
                }
                pair.meta.comments = random_comments(rng);
                a.mappings.push_back(pair);
            }
            a.meta.comments = random_comments(rng);
            u.associations.push_back(a);
        }
    }
    u.trailingComments = random_comments(rng);
    return u;
}

namespace {

// Tiny scanner for the emitted DOT subset.
class DotParser {
public:
    explicit DotParser(const std::string& text) : s_(text) {}

    DotShape run() {
        DotShape shape;
        try {
            word("graph");
            id();
            punct('{');
            while (true) {
                skip();
                if (peek() == '}') break;
                statement(shape);
            }
            punct('}');
            skip();
            if (i_ != s_.size()) fail("trailing content");
            shape.ok = true;
        } catch (const std::runtime_error& e) {
            shape.error = e.what();
        }
        return shape;
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error(what + " at offset " + std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() { return i_ < s_.size() ? s_[i_] : '\0'; }
    void punct(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }
    std::string bare() {
        skip();
        std::string out;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) out += s_[i_++];
        if (out.empty()) fail("expected word");
        return out;
    }
    void word(const std::string& w) {
        if (bare() != w) fail("expected " + w);
    }
    std::string id() {
        skip();
        if (peek() != '"') return bare();
        ++i_;
        std::string out;
        while (true) {
            if (i_ >= s_.size()) fail("unterminated string");
            char c = s_[i_++];
            if (c == '"') return out;
            if (c == '\\') {
                if (i_ >= s_.size()) fail("dangling escape");
                c = s_[i_++];
            }
            out += c;
        }
    }
    std::vector<std::pair<std::string, std::string>> attributes() {
        std::vector<std::pair<std::string, std::string>> out;
        punct('[');
        skip();
        while (peek() != ']') {
            auto key = bare();
            punct('=');
            out.emplace_back(key, id());
            skip();
            if (peek() == ',') ++i_;
            skip();
        }
        punct(']');
        return out;
    }
    void statement(DotShape& shape) {
        const std::size_t start = i_;
        if (peek() != '"' && bare() == "node") {
            attributes();
            punct(';');
            return;
        }
        i_ = start;
        id();
        skip();
        if (s_.compare(i_, 2, "--") == 0) {
            i_ += 2;
            id();
            for (auto& [k, v] : attributes()) {
                if (k == "label") shape.edgeLabels.push_back(v);
            }
            ++shape.edges;
        } else {
            attributes();
            ++shape.nodes;
        }
        punct(';');
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

DotShape parse_dot(const std::string& text) { return DotParser(text).run(); }

}  // namespace scdl::testing

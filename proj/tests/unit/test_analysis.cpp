#include <algorithm>
#include <random>

#include "doctest.h"
#include "printing.hpp"
#include "scdl/analysis.hpp"
#include "scdl/parser.hpp"
#include "support.hpp"

using namespace scdl;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.code);
    return out;
}

Valuation values(const std::string& text) {
    auto v = parse_valuation(text, "v.txt");
    REQUIRE(v.ok());
    return *v.value;
}

// Parent with one derived property over children carrying `w`.
MemoryLoader two_levels(const std::string& derivation, const std::vector<std::string>& children,
                        const std::string& childProps = "intrinsic w: number;") {
    std::string comp;
    for (const auto& c : children) comp += (comp.empty() ? "" : ", ") + c;
    std::string root = "scd r { conceptual system P { composition { " + comp + " } structure {";
    for (std::size_t i = 1; i < children.size(); ++i) root += " " + children[0] + " -- " + children[i] + ";";
    root += " } properties { aggregate x: number = " + derivation + "; } explode \"c.scd\"; } }";
    std::string child = "scd c {";
    for (const auto& c : children) {
        child += " conceptual system " + c + " { composition { k } properties { " + childProps + " } }";
    }
    child += " }";
    return MemoryLoader(testing::Files{{"r.scd", root}, {"c.scd", child}});
}

Outcome<std::map<std::string, double>> eval(MemoryLoader loader, const std::string& valuation) {
    auto r = resolve("r.scd", loader);
    for (const auto& d : r.diagnostics) INFO(render_diagnostic(d));
    REQUIRE(r.ok());
    return evaluate_aggregates(*r.value, values(valuation));
}

}  // namespace

TEST_CASE("coupling graph of the cell") {
    auto model = testing::resolve_or_throw(testing::corpus_dir() + "/cell/root.scd");
    auto g = coupling_graph(model.root().systems[0]);
    CHECK(g.nodes == std::vector<std::string>{"membrane", "cytoplasm", "Blood"});
    CHECK(g.edges.size() == 2);
}

TEST_CASE("coupling graph edge cases") {
    auto r = parse("scd m { conceptual system S { environment { E, F } } }", "t.scd");
    REQUIRE(r.unit);
    auto g = coupling_graph(r.unit->systems[0]);
    CHECK(g.nodes == std::vector<std::string>{"E", "F"});
    CHECK(g.edges.empty());

    std::string src = "scd m { concrete system S { composition { a, b } structure {";
    for (auto k : kAllEnergyKinds) src += " a -- b [" + std::string(to_string(k)) + "];";
    src += " } } }";
    auto seven = parse(src, "t.scd");
    REQUIRE(seven.unit);
    auto g7 = coupling_graph(seven.unit->systems[0]);
    REQUIRE(g7.edges.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(g7.edges[i].energy == kAllEnergyKinds[i]);
}

TEST_CASE("coupling graph conserves edges") {
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto s = testing::random_system(rng, 8, 0.3, 2, 0.5);
        CHECK(coupling_graph(s).edges.size() == s.structure.size());
    }
}

TEST_CASE("valuation parsing") {
    auto v = parse_valuation("# weights\n\nA.b.w = 2\nA.c.w=3.5\n", "v.txt");
    REQUIRE(v.ok());
    CHECK(v.value->at("A.b.w") == 2);
    CHECK(v.value->at("A.c.w") == 3.5);
    auto bad = parse_valuation("A.b.w=2\nnonsense\nA..w=1\nA.x=abc\n", "v.txt");
    CHECK(!bad.ok());
    CHECK(codes(bad.diagnostics) == std::vector<std::string>{"E-EVL-005", "E-EVL-005", "E-EVL-005"});
    CHECK(bad.diagnostics[0].span.startLine == 2);
}

TEST_CASE("sum of three weights") {
    auto out = eval(two_levels("sum(components.w)", {"a", "b", "c"}), "P.a.w=2\nP.b.w=3\nP.c.w=5\n");
    REQUIRE(out.ok());
    CHECK(out.value->at("P.x") == 10);
}

TEST_CASE("fold operators") {
    const std::string v = "P.a.w=2\nP.b.w=0\nP.c.w=7\n";
    auto at = [&](const std::string& expr) {
        auto out = eval(two_levels(expr, {"a", "b", "c"}), v);
        REQUIRE(out.ok());
        return out.value->at("P.x");
    };
    CHECK(at("count(components.w)") == 2);
    CHECK(at("min(components.w)") == 0);
    CHECK(at("max(components.w)") == 7);
    CHECK(at("avg(components.w)") == 3);
    CHECK(at("sum(a.w) * 10 + max(c.w) / 2") == doctest::Approx(23.5));
    CHECK(at("sum(components.w) - 2 * 3") == 3);
}

TEST_CASE("evaluation errors") {
    auto missing = eval(two_levels("sum(components.w)", {"a", "b"}), "P.a.w=1\n");
    CHECK(codes(missing.diagnostics) == std::vector<std::string>{"E-EVL-001"});
    CHECK(missing.diagnostics[0].message.find("P.b.w") != std::string::npos);

    auto div = eval(two_levels("1 / (sum(components.w) - 3)", {"a", "b"}), "P.a.w=1\nP.b.w=2\n");
    CHECK(codes(div.diagnostics) == std::vector<std::string>{"E-EVL-002"});

    auto empty = eval(two_levels("avg(components.v)", {"a", "b"}), "P.a.w=1\nP.b.w=2\n");
    CHECK(codes(empty.diagnostics) == std::vector<std::string>{"E-EVL-003"});

    auto zero = eval(two_levels("sum(components.v) + count(components.v)", {"a", "b"}), "P.a.w=1\nP.b.w=2\n");
    REQUIRE(zero.ok());
    CHECK(zero.value->at("P.x") == 0);
}

TEST_CASE("nested folds from leaves to root") {
    auto model = testing::resolve_or_throw(testing::fixture_dir() + "/nested/root.scd");
    auto out = evaluate_aggregates(model, values(testing::read_text(testing::fixture_dir() + "/nested/values.txt")));
    REQUIRE(out.ok());
    CHECK(out.value->at("Top.Left.total") == 3);
    CHECK(out.value->at("Top.Right.total") == 7);
    CHECK(out.value->at("Top.total") == 10);
}

TEST_CASE("healthcare variant count") {
    auto model = testing::resolve_or_throw(testing::corpus_dir() + "/healthcare/root.scd");
    auto out = evaluate_aggregates(
        model, values(testing::read_text(testing::corpus_dir() + "/healthcare/variants.values")));
    REQUIRE(out.ok());
    CHECK(out.value->at("Person.variantCount") == 3);
    CHECK(out.value->at("Person.PersonAsGenome.Variants.variantCount") == 3);
}

TEST_CASE("evaluation is independent of declaration order") {
    std::mt19937 rng(17);
    std::vector<std::string> children = {"a", "b", "c", "d", "e"};
    const std::string v = "P.a.w=0.1\nP.b.w=0.2\nP.c.w=0.3\nP.d.w=1e16\nP.e.w=-1e16\n";
    for (const auto* expr : {"sum(components.w)", "avg(components.w)", "min(components.w) + max(components.w)",
                             "count(components.w)"}) {
        auto reference = eval(two_levels(expr, children), v);
        REQUIRE(reference.ok());
        for (int i = 0; i < 20; ++i) {
            std::shuffle(children.begin(), children.end(), rng);
            auto out = eval(two_levels(expr, children), v);
            REQUIRE(out.ok());
            CHECK(*out.value == *reference.value);
        }
    }
}

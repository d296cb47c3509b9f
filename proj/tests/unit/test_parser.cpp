#include <algorithm>
#include <string>

#include "doctest.h"
#include "printing.hpp"
#include "scdl/parser.hpp"
#include "support.hpp"

using namespace scdl;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.code);
    return out;
}

ParseResult parse_ok(const std::string& src) {
    auto r = parse(src, "t.scd");
    INFO(src);
    for (const auto& d : r.diagnostics) INFO(render_diagnostic(d));
    REQUIRE(r.unit.has_value());
    REQUIRE(r.diagnostics.empty());
    return r;
}

}  // namespace

TEST_CASE("minimal model") {
    auto r = parse_ok("scd demo { concrete system Cell { } }");
    CHECK(r.unit->name == "demo");
    REQUIRE(r.unit->systems.size() == 1);
    const auto& cell = r.unit->systems[0];
    CHECK(cell.kind == SystemKind::Concrete);
    CHECK(cell.composition.empty());
    CHECK(cell.environment.empty());
    CHECK(cell.structure.empty());
    CHECK(!cell.explode);
}

TEST_CASE("healthcare person level parses to two systems and one mapping") {
    const auto path = testing::corpus_dir() + "/healthcare/person.scd";
    auto r = parse(testing::read_text(path), path);
    REQUIRE(r.unit);
    CHECK(r.unit->systems.size() == 2);
    REQUIRE(r.unit->associations.size() == 1);
    const auto& m = r.unit->associations[0].mappings;
    REQUIRE(m.size() == 1);
    CHECK(m[0].pathA.back() == "Diagnosis");
    CHECK(m[0].pathB.back() == "Disease");
    CHECK(m[0].kind == MappingKind::Association);
    CHECK(to_string(*m[0].cardA) == "0..*");
}

TEST_CASE("sections, couplings and dimensions") {
    auto r = parse_ok(R"(scd m {
  concrete system Cell {
    composition { membrane, cytoplasm }
    environment { Blood }
    structure {
      membrane -- env.Blood [chemical] "exchange";
      cytoplasm -- membrane;
    }
    mechanism Metabolism;
    properties {
      intrinsic mass: number;
      aggregate total: number = sum(components.mass) * 2;
      emergent alive: flag;
    }
    dimension mechanism Metabolism {
      actor T "transporter";
      actor U;
      step A by T, U;
      step B;
      flow A -> B;
    }
    dimension structural Parts {
      entity Protein { name: text; charged: flag; }
      link Protein [1] -- Protein [*] "binds";
    }
    explode "cell/level.scd";
  }
})");
    const auto& s = r.unit->systems[0];
    REQUIRE(s.structure.size() == 2);
    CHECK(s.structure[0].endB.scope == EndScope::Environment);
    CHECK(s.structure[0].energy == EnergyKind::Chemical);
    CHECK(s.structure[0].label == "exchange");
    CHECK(!s.structure[1].energy);
    REQUIRE(s.mechanisms.size() == 1);
    REQUIRE(s.properties.size() == 3);
    CHECK(s.properties[1].derivation.has_value());
    CHECK(!is_bare_fold(*s.properties[1].derivation));
    REQUIRE(s.dimensions.size() == 2);
    CHECK(s.dimensions[0].steps[0].performedBy == std::vector<std::string>{"T", "U"});
    CHECK(s.dimensions[1].links[0].endB.card == Card{0, Card::Max::Many});
    CHECK(s.explode->path == "cell/level.scd");
    CHECK(s.meta.span.startLine == 2);
}

TEST_CASE("all seven energy kinds parse") {
    std::string src = "scd m { concrete system S { composition { a, b } structure {";
    for (auto k : kAllEnergyKinds) src += " a -- b [" + std::string(to_string(k)) + "];";
    src += " } } }";
    auto r = parse_ok(src);
    REQUIRE(r.unit->systems[0].structure.size() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(r.unit->systems[0].structure[i].energy == kAllEnergyKinds[i]);
}

TEST_CASE("counterpart mappings") {
    auto r = parse_ok(R"(scd m {
  concrete system A { }
  conceptual system B { }
  association <<system>> A -- B {
    counterpart A.F.x <-> B.G.y;
    A.F.z <-> B.G.w [1, 0..1];
  }
})");
    const auto& m = r.unit->associations[0].mappings;
    CHECK(m[0].kind == MappingKind::Counterpart);
    CHECK(!m[0].cardA);
    CHECK(m[1].kind == MappingKind::Association);
    CHECK(m[1].cardB == Card{0, Card::Max::One});
}

TEST_CASE("missing closing brace reports once at end of file") {
    auto r = parse("scd m {\n  concrete system Cell {\n    composition { a }\n", "t.scd");
    CHECK(!r.unit);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].code == "E-PAR-001");
    CHECK(r.diagnostics[0].span.startLine == 4);
}

TEST_CASE("recovery reports independent errors") {
    auto r = parse(R"(scd m {
  concrete system A { composition { a b } }
  concrete system B { structure { x -- ; } }
  concrete system C { bogus { } }
})",
                   "t.scd");
    CHECK(!r.unit);
    CHECK(r.diagnostics.size() >= 3);
    auto cs = codes(r.diagnostics);
    CHECK(std::count(cs.begin(), cs.end(), "E-PAR-003") == 1);
}

TEST_CASE("k separated syntax errors yield at least k diagnostics") {
    for (int k = 1; k <= 6; ++k) {
        std::string src = "scd m {\n";
        for (int i = 0; i < k; ++i) {
            src += "  concrete system S" + std::to_string(i) + " { composition { , } }\n";
        }
        src += "}\n";
        auto r = parse(src, "t.scd");
        CHECK(static_cast<int>(r.diagnostics.size()) >= k);
    }
}

TEST_CASE("interaction dimensions are rejected") {
    auto r = parse("scd m { concrete system A { dimension interaction UI { } } }", "t.scd");
    CHECK(!r.unit);
    CHECK(codes(r.diagnostics) == std::vector<std::string>{"E-DIM-009"});
}

TEST_CASE("duplicate systems and unknown association endpoints") {
    auto dup = parse("scd m { conceptual system A { } conceptual system A { } }", "t.scd");
    CHECK(codes(dup.diagnostics) == std::vector<std::string>{"E-PAR-002"});
    auto end = parse("scd m { conceptual system A { } association <<system>> A -- Z { } }", "t.scd");
    CHECK(codes(end.diagnostics) == std::vector<std::string>{"E-PAR-004"});
}

TEST_CASE("construction invariants") {
    auto check = [](const std::string& body, const std::string& code) {
        auto r = parse("scd m { " + body + " }", "t.scd");
        INFO(body);
        CHECK(!r.unit);
        CHECK(codes(r.diagnostics) == std::vector<std::string>{code});
    };
    check("concrete system A { composition { a, a } }", "E-PAR-005");
    check("concrete system A { composition { a } environment { a } }", "E-PAR-005");
    check("concrete system A { composition { a } structure { a -- b; } }", "E-PAR-006");
    check("concrete system A { composition { a } structure { a -- env.X; } }", "E-PAR-006");
    check("concrete system A { composition { a } structure { a -- a; } }", "E-PAR-008");
    check("concrete system A { environment { X, Y } structure { env.X -- env.Y; } }", "E-PAR-008");
    check("concrete system A { mechanism M; }", "E-PAR-006");
    check("concrete system A { mechanism M; dimension structural M { } }", "E-PAR-008");
    check("concrete system A { dimension mechanism M { step s by ghost; } }", "E-PAR-006");
    check("concrete system A { dimension mechanism M { step s; flow s -> s; } }", "E-PAR-008");
    check("concrete system A { dimension structural M { entity X { } link X [1] -- Y [1]; } }", "E-PAR-006");
    check("concrete system A { composition { p } properties { intrinsic p: number; } }", "E-PAR-005");
    check("concrete system A { } concrete system B { } association <<system>> A -- A { }", "E-PAR-008");
    check("concrete system A { } concrete system B { } association <<system>> A -- B { A.x <-> B.y [1]; }",
          "E-PAR-001");
}

TEST_CASE("unknown section keyword") {
    auto r = parse("scd m { concrete system A { components { a } } }", "t.scd");
    CHECK(codes(r.diagnostics) == std::vector<std::string>{"E-PAR-003"});
}

TEST_CASE("nesting depth guard") {
    std::string expr;
    for (int i = 0; i < 80; ++i) expr += "(";
    expr += "1";
    for (int i = 0; i < 80; ++i) expr += ")";
    auto r = parse("scd m { conceptual system A { properties { aggregate x: number = " + expr + "; } } }",
                   "t.scd");
    CHECK(!r.unit);
    auto cs = codes(r.diagnostics);
    CHECK(std::count(cs.begin(), cs.end(), "E-PAR-007") == 1);
}

TEST_CASE("derivations deeper than eight are rejected") {
    std::string expr = "1";
    for (int i = 0; i < 9; ++i) expr = "(" + expr + " + 1)";
    auto r = parse("scd m { conceptual system A { properties { aggregate x: number = " + expr + "; } } }",
                   "t.scd");
    CHECK(codes(r.diagnostics) == std::vector<std::string>{"E-PAR-008"});
}

TEST_CASE("expression precedence") {
    auto r = parse_ok(
        "scd m { conceptual system A { properties { aggregate x: number = 1 + 2 * sum(components.w) - -3; } } }");
    const auto& e = *r.unit->systems[0].properties[0].derivation;
    CHECK(format_expression(e) == "1 + 2 * sum(components.w) - -3");
    const auto* top = std::get_if<BinaryNode>(&e.node);
    REQUIRE(top);
    CHECK(top->op == BinaryOp::Sub);
}

TEST_CASE("parse is deterministic") {
    const auto path = testing::corpus_dir() + "/coronavirus/broken.scd";
    const auto text = testing::read_text(path);
    auto a = parse(text, path);
    auto b = parse(text, path);
    REQUIRE(a.unit);
    CHECK(*a.unit == *b.unit);
}

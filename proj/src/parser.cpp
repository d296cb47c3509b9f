#include "scdl/parser.hpp"

#include <charconv>
#include <tuple>

#include "scdl/lexer.hpp"

namespace scdl {

namespace {

// Thrown after a diagnostic has been recorded; caught by the enclosing block
// loop, which resynchronizes.
struct SyntaxError {};

bool before(const SourceSpan& a, const SourceSpan& b) {
    return std::tie(a.startLine, a.startCol) < std::tie(b.startLine, b.startCol);
}

class Parser {
public:
    Parser(LexResult lexed, std::string file) : lex_(std::move(lexed)), file_(std::move(file)) {
        eof_.kind = TokenKind::EndOfFile;
        eof_.span = lex_.eof;
    }

    ParseResult run() {
        ParseResult result;
        result.diagnostics = std::move(lex_.diagnostics);
        ModelUnit unit;
        unit.sourcePath = file_;
        try {
            model(unit);
        } catch (const SyntaxError&) {
        }
        for (auto& d : diagnostics_) result.diagnostics.push_back(std::move(d));
        if (!has_errors(result.diagnostics)) {
            auto invariants = check_unit_invariants(unit);
            result.diagnostics.insert(result.diagnostics.end(), invariants.begin(), invariants.end());
        }
        sort_diagnostics(result.diagnostics);
        if (!has_errors(result.diagnostics)) result.unit = std::move(unit);
        return result;
    }

private:
    // ---- token access -------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        return pos_ + ahead < lex_.tokens.size() ? lex_.tokens[pos_ + ahead] : eof_;
    }
    bool at_eof() const { return pos_ >= lex_.tokens.size(); }
    bool at_punct(std::string_view p) const { return peek().is_punct(p); }
    bool at_keyword(std::string_view k) const { return peek().is_keyword(k); }

    const Token& take() {
        const Token& t = peek();
        if (!at_eof()) {
            if (t.is_punct("{") || t.is_punct("(")) {
                ++depth_;
            } else if (t.is_punct("}") || t.is_punct(")")) {
                --depth_;
            }
            ++pos_;
            last_ = t.span;
        }
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& message, const char* code = "E-PAR-001") {
        if (at.kind == TokenKind::EndOfFile) {
            // Unwinding at end of input would otherwise report once per open block.
            if (!eof_reported_) {
                eof_reported_ = true;
                diagnostics_.push_back(make_error(code, message + ", found end of file", at.span));
            }
        } else {
            diagnostics_.push_back(make_error(code, message + ", found '" + at.lexeme + "'", at.span));
        }
        throw SyntaxError{};
    }

    const Token& expect_punct(std::string_view p) {
        if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
        if ((p == "{" || p == "(") && depth_ >= kMaxNestingDepth) {
            fail(peek(), "nesting depth exceeds " + std::to_string(kMaxNestingDepth), "E-PAR-007");
        }
        return take();
    }

    const Token& expect_keyword(std::string_view k) {
        if (!at_keyword(k)) fail(peek(), "expected '" + std::string(k) + "'");
        return take();
    }

    std::string expect_identifier(std::string_view what = "identifier") {
        if (peek().kind != TokenKind::Identifier) fail(peek(), "expected " + std::string(what));
        return take().lexeme;
    }

    std::string expect_string() {
        if (peek().kind != TokenKind::String) fail(peek(), "expected string literal");
        return unquote(take().lexeme);
    }

    SourceSpan span_from(const SourceSpan& start) const {
        return {file_, start.startLine, start.startCol, last_.endLine, last_.endCol};
    }

    // Comments located before the next token that have not been attached yet.
    std::vector<std::string> leading_comments() {
        std::vector<std::string> out;
        const auto& next = peek().span;
        while (comment_ < lex_.comments.size() &&
               (at_eof() || before(lex_.comments[comment_].span, next))) {
            out.push_back(lex_.comments[comment_++].text);
        }
        return out;
    }

    // Skips to the next `;` or `}` at `block_depth`, the depth inside the
    // enclosing block. A `}` closing that block is left for the caller.
    void synchronize(int block_depth) {
        while (!at_eof()) {
            const Token& t = peek();
            if (t.is_punct("}")) {
                if (depth_ <= block_depth) return;
                take();
                if (depth_ == block_depth) return;
            } else if (t.is_punct(";") && depth_ <= block_depth) {
                take();
                return;
            } else {
                take();
            }
        }
    }

    template <class F>
    void block(F&& item) {
        const int inner = depth_;
        while (!at_eof() && !at_punct("}")) {
            const std::size_t start = pos_;
            try {
                item();
            } catch (const SyntaxError&) {
                synchronize(inner);
                if (pos_ == start && !at_eof() && !at_punct("}")) take();
            }
        }
    }

    // ---- grammar ------------------------------------------------------

    void model(ModelUnit& unit) {
        unit.meta.comments = leading_comments();
        const auto start = peek().span;
        expect_keyword("scd");
        unit.name = expect_identifier("model name");
        unit.meta.span = span_from(start);
        expect_punct("{");
        block([&] { item(unit); });
        auto trailing = leading_comments();
        unit.trailingComments.insert(unit.trailingComments.end(), trailing.begin(), trailing.end());
        expect_punct("}");
        if (!at_eof()) {
            const Token& extra = peek();
            diagnostics_.push_back(make_error("E-PAR-001", "unexpected '" + extra.lexeme + "' after model", extra.span));
        }
        auto rest = leading_comments();
        unit.trailingComments.insert(unit.trailingComments.end(), rest.begin(), rest.end());
    }

    void item(ModelUnit& unit) {
        auto comments = leading_comments();
        if (at_keyword("concrete") || at_keyword("conceptual")) {
            SystemDecl system;
            system.meta.comments = std::move(comments);
            system_decl(system);
            unit.systems.push_back(std::move(system));
        } else if (at_keyword("association")) {
            SystemAssociation assoc;
            assoc.meta.comments = std::move(comments);
            association(assoc);
            unit.associations.push_back(std::move(assoc));
        } else {
            fail(peek(), "expected system or association declaration");
        }
    }

    void system_decl(SystemDecl& system) {
        const auto start = peek().span;
        system.kind = take().is_keyword("concrete") ? SystemKind::Concrete : SystemKind::Conceptual;
        expect_keyword("system");
        system.name = expect_identifier("system name");
        system.meta.span = span_from(start);
        expect_punct("{");
        block([&] { section(system); });
        system.trailingComments = leading_comments();
        expect_punct("}");
    }

    void identifier_list(std::vector<std::string>& out) {
        expect_punct("{");
        if (!at_punct("}")) {
            out.push_back(expect_identifier());
            while (at_punct(",")) {
                take();
                if (at_punct("}")) break;
                out.push_back(expect_identifier());
            }
        }
        expect_punct("}");
    }

    void section(SystemDecl& system) {
        const Token& t = peek();
        auto keep = [&](std::vector<std::string>& into) {
            auto c = leading_comments();
            into.insert(into.end(), c.begin(), c.end());
            take();
        };
        if (t.is_keyword("composition")) {
            keep(system.sectionComments.composition);
            identifier_list(system.composition);
        } else if (t.is_keyword("environment")) {
            keep(system.sectionComments.environment);
            identifier_list(system.environment);
        } else if (t.is_keyword("structure")) {
            keep(system.sectionComments.structure);
            expect_punct("{");
            block([&] { system.structure.push_back(coupling()); });
            expect_punct("}");
        } else if (t.is_keyword("mechanism")) {
            MechanismRef ref;
            ref.meta.comments = leading_comments();
            const auto start = take().span;
            ref.fragment = expect_identifier("mechanism fragment name");
            expect_punct(";");
            ref.meta.span = span_from(start);
            system.mechanisms.push_back(std::move(ref));
        } else if (t.is_keyword("properties")) {
            keep(system.sectionComments.properties);
            expect_punct("{");
            block([&] { system.properties.push_back(property()); });
            expect_punct("}");
        } else if (t.is_keyword("dimension")) {
            system.dimensions.push_back(dimension());
        } else if (t.is_keyword("explode")) {
            ExplodeRef ref;
            ref.meta.comments = leading_comments();
            const auto start = take().span;
            ref.path = expect_string();
            expect_punct(";");
            ref.meta.span = span_from(start);
            if (system.explode) {
                diagnostics_.push_back(
                    make_error("E-PAR-005", "duplicate explode declaration in '" + system.name + "'", ref.meta.span));
            }
            system.explode = std::move(ref);
        } else if (t.kind == TokenKind::Keyword || t.kind == TokenKind::Identifier) {
            fail(t, "unknown section keyword '" + t.lexeme + "'; expected composition, environment, structure, "
                    "mechanism, properties, dimension or explode",
                 "E-PAR-003");
        } else {
            fail(t, "expected section");
        }
    }

    CouplingEnd coupling_end() {
        if (at_keyword("env")) {
            take();
            expect_punct(".");
            return {expect_identifier("environment party"), EndScope::Environment};
        }
        return {expect_identifier("component"), EndScope::Component};
    }

    Coupling coupling() {
        Coupling c;
        c.meta.comments = leading_comments();
        const auto start = peek().span;
        c.endA = coupling_end();
        expect_punct("--");
        c.endB = coupling_end();
        if (at_punct("[")) {
            take();
            const Token& kind = peek();
            auto energy = kind.kind == TokenKind::Identifier ? energy_kind_from_string(kind.lexeme) : std::nullopt;
            if (!energy) fail(kind, "expected energy kind");
            take();
            c.energy = energy;
            expect_punct("]");
        }
        if (peek().kind == TokenKind::String) c.label = expect_string();
        expect_punct(";");
        c.meta.span = span_from(start);
        return c;
    }

    ValueType value_type() {
        const Token& t = peek();
        if (t.kind == TokenKind::Identifier) {
            if (t.lexeme == "number") return take(), ValueType::Number;
            if (t.lexeme == "text") return take(), ValueType::Text;
            if (t.lexeme == "flag") return take(), ValueType::Flag;
        }
        fail(t, "expected value type (number, text or flag)");
    }

    PropertyDecl property() {
        PropertyDecl p;
        p.meta.comments = leading_comments();
        const auto start = peek().span;
        if (at_keyword("intrinsic")) {
            p.classification = PropertyClass::Intrinsic;
        } else if (at_keyword("aggregate")) {
            p.classification = PropertyClass::Aggregate;
        } else if (at_keyword("emergent")) {
            p.classification = PropertyClass::Emergent;
        } else {
            fail(peek(), "expected intrinsic, aggregate or emergent");
        }
        take();
        p.name = expect_identifier("property name");
        expect_punct(":");
        p.valueType = value_type();
        if (at_punct("=")) {
            take();
            p.derivation = expression();
        }
        expect_punct(";");
        p.meta.span = span_from(start);
        return p;
    }

    // expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)*
    DerivationExpr expression() {
        DerivationExpr lhs = term();
        while (at_punct("+") || at_punct("-")) {
            auto op = take().is_punct("+") ? BinaryOp::Add : BinaryOp::Sub;
            DerivationExpr rhs = term();
            lhs = DerivationExpr{BinaryNode{op, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    DerivationExpr term() {
        DerivationExpr lhs = factor();
        while (at_punct("*") || at_punct("/")) {
            auto op = take().is_punct("*") ? BinaryOp::Mul : BinaryOp::Div;
            DerivationExpr rhs = factor();
            lhs = DerivationExpr{BinaryNode{op, std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    double number_literal() {
        const Token& t = peek();
        if (t.kind != TokenKind::Number) fail(t, "expected number");
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), value);
        if (ec != std::errc{} || ptr != t.lexeme.data() + t.lexeme.size()) fail(t, "number out of range", "E-PAR-008");
        take();
        return value;
    }

    DerivationExpr factor() {
        const Token& t = peek();
        if (t.is_punct("(")) {
            expect_punct("(");
            DerivationExpr inner = expression();
            expect_punct(")");
            return inner;
        }
        if (t.is_punct("-") && peek(1).kind == TokenKind::Number) {
            take();
            return DerivationExpr{NumberLiteral{-number_literal()}};
        }
        if (t.kind == TokenKind::Number) return DerivationExpr{NumberLiteral{number_literal()}};
        if (t.kind == TokenKind::Identifier && peek(1).is_punct("(")) {
            auto op = fold_op_from_string(t.lexeme);
            if (!op) fail(t, "expected fold operator (sum, count, min, max or avg)");
            take();
            expect_punct("(");
            FoldNode fold{*op, std::nullopt, {}};
            if (at_keyword("components")) {
                take();
            } else {
                fold.component = expect_identifier("component");
            }
            expect_punct(".");
            fold.property = expect_identifier("component property");
            expect_punct(")");
            return DerivationExpr{std::move(fold)};
        }
        fail(t, "expected number, fold or '('");
    }

    Card card() {
        const Token& t = peek();
        std::optional<Card> parsed;
        if (t.kind == TokenKind::Cardinality || t.kind == TokenKind::Number || t.is_punct("*")) {
            parsed = card_from_string(t.lexeme);
        }
        if (!parsed) fail(t, "expected cardinality (0..1, 1, 1..*, 0..* or *)");
        take();
        return *parsed;
    }

    DimensionFragment dimension() {
        DimensionFragment dim;
        dim.meta.comments = leading_comments();
        const auto start = take().span;
        const Token& kind = peek();
        if (kind.is_keyword("structural")) {
            dim.kind = DimensionKind::Structural;
        } else if (kind.is_keyword("mechanism")) {
            dim.kind = DimensionKind::Mechanism;
        } else if (kind.is_keyword("interaction")) {
            fail(kind, "interaction dimension not supported", "E-DIM-009");
        } else {
            fail(kind, "expected dimension kind (structural or mechanism)");
        }
        take();
        dim.name = expect_identifier("fragment name");
        dim.meta.span = span_from(start);
        expect_punct("{");
        if (dim.kind == DimensionKind::Structural) {
            block([&] { structural_item(dim); });
        } else {
            block([&] { mechanism_item(dim); });
        }
        expect_punct("}");
        return dim;
    }

    void structural_item(DimensionFragment& dim) {
        auto comments = leading_comments();
        const auto start = peek().span;
        if (at_keyword("entity")) {
            take();
            EntityDecl entity;
            entity.meta.comments = std::move(comments);
            entity.name = expect_identifier("entity name");
            entity.meta.span = span_from(start);
            expect_punct("{");
            block([&] {
                Attribute attr;
                attr.name = expect_identifier("attribute name");
                expect_punct(":");
                attr.valueType = value_type();
                expect_punct(";");
                entity.attributes.push_back(std::move(attr));
            });
            expect_punct("}");
            dim.entities.push_back(std::move(entity));
        } else if (at_keyword("link")) {
            take();
            EntityAssociation link;
            link.meta.comments = std::move(comments);
            link.endA.entity = expect_identifier("entity");
            expect_punct("[");
            link.endA.card = card();
            expect_punct("]");
            expect_punct("--");
            link.endB.entity = expect_identifier("entity");
            expect_punct("[");
            link.endB.card = card();
            expect_punct("]");
            if (peek().kind == TokenKind::String) link.label = expect_string();
            expect_punct(";");
            link.meta.span = span_from(start);
            dim.links.push_back(std::move(link));
        } else {
            const Token& t = peek();
            fail(t, "expected entity or link in structural fragment",
                 t.kind == TokenKind::Keyword || t.kind == TokenKind::Identifier ? "E-PAR-003" : "E-PAR-001");
        }
    }

    void mechanism_item(DimensionFragment& dim) {
        auto comments = leading_comments();
        const auto start = peek().span;
        if (at_keyword("actor")) {
            take();
            ActorDecl actor;
            actor.meta.comments = std::move(comments);
            actor.name = expect_identifier("actor name");
            if (peek().kind == TokenKind::String) actor.role = expect_string();
            expect_punct(";");
            actor.meta.span = span_from(start);
            dim.actors.push_back(std::move(actor));
        } else if (at_keyword("step")) {
            take();
            StepDecl step;
            step.meta.comments = std::move(comments);
            step.name = expect_identifier("step name");
            if (at_keyword("by")) {
                take();
                step.performedBy.push_back(expect_identifier("actor"));
                while (at_punct(",")) {
                    take();
                    step.performedBy.push_back(expect_identifier("actor"));
                }
            }
            expect_punct(";");
            step.meta.span = span_from(start);
            dim.steps.push_back(std::move(step));
        } else if (at_keyword("flow")) {
            take();
            FlowDecl flow;
            flow.meta.comments = std::move(comments);
            flow.fromStep = expect_identifier("step");
            expect_punct("->");
            flow.toStep = expect_identifier("step");
            expect_punct(";");
            flow.meta.span = span_from(start);
            dim.flows.push_back(std::move(flow));
        } else {
            const Token& t = peek();
            fail(t, "expected actor, step or flow in mechanism fragment",
                 t.kind == TokenKind::Keyword || t.kind == TokenKind::Identifier ? "E-PAR-003" : "E-PAR-001");
        }
    }

    void association(SystemAssociation& assoc) {
        const auto start = take().span;
        expect_punct("<<");
        expect_keyword("system");
        expect_punct(">>");
        assoc.systemA = expect_identifier("system");
        expect_punct("--");
        assoc.systemB = expect_identifier("system");
        assoc.meta.span = span_from(start);
        expect_punct("{");
        block([&] { assoc.mappings.push_back(mapping()); });
        expect_punct("}");
    }

    ElementPath path() {
        ElementPath out{expect_identifier("path")};
        while (at_punct(".")) {
            take();
            out.push_back(expect_identifier("path segment"));
        }
        return out;
    }

    MappingPair mapping() {
        MappingPair m;
        m.meta.comments = leading_comments();
        const auto start = peek().span;
        if (at_keyword("counterpart")) {
            take();
            m.kind = MappingKind::Counterpart;
        }
        m.pathA = path();
        expect_punct("<->");
        m.pathB = path();
        if (at_punct("[")) {
            take();
            m.cardA = card();
            expect_punct(",");
            m.cardB = card();
            expect_punct("]");
        }
        expect_punct(";");
        m.meta.span = span_from(start);
        return m;
    }

    LexResult lex_;
    std::string file_;
    Token eof_;
    std::size_t pos_ = 0;
    std::size_t comment_ = 0;
    int depth_ = 0;
    bool eof_reported_ = false;
    SourceSpan last_;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace

ParseResult parse(std::string_view source, const std::string& file) {
    return Parser(tokenize(source, file), file).run();
}

}  // namespace scdl

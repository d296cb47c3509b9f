#include <charconv>
#include <sstream>

#include "scdl/lexer.hpp"
#include "scdl/parser.hpp"

namespace scdl {

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

namespace {

int precedence(BinaryOp op) {
    return op == BinaryOp::Add || op == BinaryOp::Sub ? 1 : 2;
}

int precedence(const DerivationExpr& expr) {
    if (const auto* bin = std::get_if<BinaryNode>(&expr.node)) return precedence(bin->op);
    return 3;
}

void write_expression(std::string& out, const DerivationExpr& expr) {
    if (const auto* lit = std::get_if<NumberLiteral>(&expr.node)) {
        out += format_number(lit->value);
    } else if (const auto* fold = std::get_if<FoldNode>(&expr.node)) {
        out += to_string(fold->op);
        out += '(';
        out += fold->component ? *fold->component : "components";
        out += '.';
        out += fold->property;
        out += ')';
    } else {
        const auto& bin = std::get<BinaryNode>(expr.node);
        const int prec = precedence(bin.op);
        // Operators associate left, so an equal-precedence right operand
        // needs parentheses to keep its grouping.
        const bool wrapLeft = precedence(*bin.lhs) < prec;
        const bool wrapRight = precedence(*bin.rhs) <= prec;
        if (wrapLeft) out += '(';
        write_expression(out, *bin.lhs);
        if (wrapLeft) out += ')';
        out += ' ';
        out += to_symbol(bin.op);
        out += ' ';
        if (wrapRight) out += '(';
        write_expression(out, *bin.rhs);
        if (wrapRight) out += ')';
    }
}

class Formatter {
public:
    std::string run(const ModelUnit& unit) {
        comments(unit.meta.comments, 0);
        out_ << "scd " << unit.name << " {";
        const bool empty = unit.systems.empty() && unit.associations.empty() && unit.trailingComments.empty();
        if (empty) {
            out_ << " }\n";
            return out_.str();
        }
        out_ << '\n';
        bool first = true;
        for (const auto& system : unit.systems) {
            if (!first) out_ << '\n';
            first = false;
            write(system);
        }
        for (const auto& assoc : unit.associations) {
            if (!first) out_ << '\n';
            first = false;
            write(assoc);
        }
        if (!unit.trailingComments.empty() && !first) out_ << '\n';
        comments(unit.trailingComments, 1);
        out_ << "}\n";
        return out_.str();
    }

private:
    void indent(int level) {
        for (int i = 0; i < level; ++i) out_ << "  ";
    }

    void comments(const std::vector<std::string>& lines, int level) {
        for (const auto& line : lines) {
            indent(level);
            out_ << line << '\n';
        }
    }

    static std::string list(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) out += ", ";
            out += item;
        }
        return out;
    }

    static std::string end(const CouplingEnd& e) {
        return e.scope == EndScope::Environment ? "env." + e.party : e.party;
    }

    void write(const SystemDecl& s) {
        comments(s.meta.comments, 1);
        indent(1);
        out_ << to_string(s.kind) << " system " << s.name << " {";
        const auto& sc = s.sectionComments;
        const bool empty = s.composition.empty() && s.environment.empty() && s.structure.empty() &&
                           s.mechanisms.empty() && s.properties.empty() && s.dimensions.empty() && !s.explode &&
                           s.trailingComments.empty() && sc.composition.empty() && sc.environment.empty() &&
                           sc.structure.empty() && sc.properties.empty();
        if (empty) {
            out_ << " }\n";
            return;
        }
        out_ << '\n';
        comments(sc.composition, 2);
        if (!s.composition.empty()) {
            indent(2);
            out_ << "composition { " << list(s.composition) << " }\n";
        }
        comments(sc.environment, 2);
        if (!s.environment.empty()) {
            indent(2);
            out_ << "environment { " << list(s.environment) << " }\n";
        }
        comments(sc.structure, 2);
        if (!s.structure.empty()) {
            indent(2);
            out_ << "structure {\n";
            for (const auto& c : s.structure) {
                comments(c.meta.comments, 3);
                indent(3);
                out_ << end(c.endA) << " -- " << end(c.endB);
                if (c.energy) out_ << " [" << to_string(*c.energy) << ']';
                if (c.label) out_ << ' ' << quote(*c.label);
                out_ << ";\n";
            }
            indent(2);
            out_ << "}\n";
        }
        for (const auto& m : s.mechanisms) {
            comments(m.meta.comments, 2);
            indent(2);
            out_ << "mechanism " << m.fragment << ";\n";
        }
        comments(sc.properties, 2);
        if (!s.properties.empty()) {
            indent(2);
            out_ << "properties {\n";
            for (const auto& p : s.properties) {
                comments(p.meta.comments, 3);
                indent(3);
                out_ << to_string(p.classification) << ' ' << p.name << ": " << to_string(p.valueType);
                if (p.derivation) out_ << " = " << format_expression(*p.derivation);
                out_ << ";\n";
            }
            indent(2);
            out_ << "}\n";
        }
        for (const auto& d : s.dimensions) write(d);
        if (s.explode) {
            comments(s.explode->meta.comments, 2);
            indent(2);
            out_ << "explode " << quote(s.explode->path) << ";\n";
        }
        comments(s.trailingComments, 2);
        indent(1);
        out_ << "}\n";
    }

    void write(const DimensionFragment& d) {
        comments(d.meta.comments, 2);
        indent(2);
        out_ << "dimension " << to_string(d.kind) << ' ' << d.name << " {";
        if (d.entities.empty() && d.links.empty() && d.actors.empty() && d.steps.empty() && d.flows.empty()) {
            out_ << " }\n";
            return;
        }
        out_ << '\n';
        for (const auto& e : d.entities) {
            comments(e.meta.comments, 3);
            indent(3);
            out_ << "entity " << e.name << " {";
            if (e.attributes.empty()) {
                out_ << " }\n";
                continue;
            }
            out_ << '\n';
            for (const auto& a : e.attributes) {
                indent(4);
                out_ << a.name << ": " << to_string(a.valueType) << ";\n";
            }
            indent(3);
            out_ << "}\n";
        }
        for (const auto& l : d.links) {
            comments(l.meta.comments, 3);
            indent(3);
            out_ << "link " << l.endA.entity << " [" << to_string(l.endA.card) << "] -- " << l.endB.entity << " ["
                 << to_string(l.endB.card) << ']';
            if (l.label) out_ << ' ' << quote(*l.label);
            out_ << ";\n";
        }
        for (const auto& a : d.actors) {
            comments(a.meta.comments, 3);
            indent(3);
            out_ << "actor " << a.name;
            if (!a.role.empty()) out_ << ' ' << quote(a.role);
            out_ << ";\n";
        }
        for (const auto& st : d.steps) {
            comments(st.meta.comments, 3);
            indent(3);
            out_ << "step " << st.name;
            if (!st.performedBy.empty()) out_ << " by " << list(st.performedBy);
            out_ << ";\n";
        }
        for (const auto& f : d.flows) {
            comments(f.meta.comments, 3);
            indent(3);
            out_ << "flow " << f.fromStep << " -> " << f.toStep << ";\n";
        }
        indent(2);
        out_ << "}\n";
    }

    void write(const SystemAssociation& a) {
        comments(a.meta.comments, 1);
        indent(1);
        out_ << "association <<system>> " << a.systemA << " -- " << a.systemB << " {";
        if (a.mappings.empty()) {
            out_ << " }\n";
            return;
        }
        out_ << '\n';
        for (const auto& m : a.mappings) {
            comments(m.meta.comments, 2);
            indent(2);
            if (m.kind == MappingKind::Counterpart) out_ << "counterpart ";
            out_ << join_path(m.pathA) << " <-> " << join_path(m.pathB);
            if (m.cardA && m.cardB) out_ << " [" << to_string(*m.cardA) << ", " << to_string(*m.cardB) << ']';
            out_ << ";\n";
        }
        indent(1);
        out_ << "}\n";
    }

    std::ostringstream out_;
};

}  // namespace

std::string format_expression(const DerivationExpr& expr) {
    std::string out;
    write_expression(out, expr);
    return out;
}

std::string format(const ModelUnit& unit) {
    return Formatter{}.run(unit);
}

}  // namespace scdl

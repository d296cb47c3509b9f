#include "scdl/lexer.hpp"

#include <array>

#include "scdl/model.hpp"

namespace scdl {

std::string_view to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Keyword: return "keyword";
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Punctuation: return "punctuation";
        case TokenKind::String: return "string-literal";
        case TokenKind::Number: return "number-literal";
        case TokenKind::Cardinality: return "cardinality-literal";
        case TokenKind::EndOfFile: return "end of file";
    }
    return "token";
}

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Longest first.
constexpr std::array<std::string_view, 21> kPunctuation = {
    "<->", "<<", ">>", "--", "->", "{", "}", "(", ")", "[", "]",
    ";",   ":",  ",",  ".",  "=",  "+", "-", "*", "/", "<",
};

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

    LexResult run() {
        LexResult out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                line_comment(out);
            } else if (c == '/' && peek(1) == '*') {
                block_comment(out);
            } else if (c == '"') {
                string(out);
            } else if (is_alpha(c)) {
                word(out);
            } else if (is_digit(c)) {
                number(out);
            } else if (!punctuation(out)) {
                auto start = mark();
                advance_char();
                out.diagnostics.push_back(make_error(
                    "E-LEX-001", "unrecognized character '" + std::string(src_.substr(start.offset, pos_ - start.offset)) + "'",
                    span_from(start)));
            }
        }
        out.eof = span_from(mark());
        return out;
    }

private:
    struct Mark {
        std::size_t offset;
        int line;
        int col;
    };

    char peek(std::size_t ahead) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }
    Mark mark() const { return {pos_, line_, col_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    // Advances over one UTF-8 encoded character.
    void advance_char() {
        advance();
        while (pos_ < src_.size() && (static_cast<unsigned char>(src_[pos_]) & 0xC0) == 0x80) advance();
    }

    SourceSpan span_from(const Mark& start) const { return {file_, start.line, start.col, line_, col_}; }

    void push(LexResult& out, TokenKind kind, const Mark& start) {
        out.tokens.push_back(Token{kind, std::string(src_.substr(start.offset, pos_ - start.offset)), span_from(start)});
    }

    void line_comment(LexResult& out) {
        auto start = mark();
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        auto text = src_.substr(start.offset, pos_ - start.offset);
        while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t')) {
            text.remove_suffix(1);
        }
        out.comments.push_back({std::string(text), span_from(start)});
    }

    void block_comment(LexResult& out) {
        auto start = mark();
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) {
            out.diagnostics.push_back(make_error("E-LEX-002", "unterminated block comment", span_from(start)));
            return;
        }
        advance();
        advance();
        out.comments.push_back({std::string(src_.substr(start.offset, pos_ - start.offset)), span_from(start)});
    }

    void string(LexResult& out) {
        auto start = mark();
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') advance();
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
            out.diagnostics.push_back(make_error("E-LEX-002", "unterminated string literal", span_from(start)));
            return;
        }
        advance();
        push(out, TokenKind::String, start);
    }

    void word(LexResult& out) {
        auto start = mark();
        while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) advance();
        auto text = src_.substr(start.offset, pos_ - start.offset);
        push(out, is_reserved_word(text) ? TokenKind::Keyword : TokenKind::Identifier, start);
    }

    void digits() {
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }

    // Number literal, or a cardinality range such as 0..1 / 1..*.
    void number(LexResult& out) {
        auto start = mark();
        digits();
        if (peek(0) == '.' && peek(1) == '.') {
            advance();
            advance();
            if (peek(0) == '*') {
                advance();
            } else if (is_digit(peek(0))) {
                digits();
            } else {
                out.diagnostics.push_back(
                    make_error("E-LEX-001", "malformed cardinality range", span_from(start)));
                return;
            }
            push(out, TokenKind::Cardinality, start);
            return;
        }
        if (peek(0) == '.' && is_digit(peek(1))) {
            advance();
            digits();
        }
        if ((peek(0) == 'e' || peek(0) == 'E') &&
            (is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && is_digit(peek(2))))) {
            advance();
            if (peek(0) == '+' || peek(0) == '-') advance();
            digits();
        }
        push(out, TokenKind::Number, start);
    }

    bool punctuation(LexResult& out) {
        for (auto p : kPunctuation) {
            if (src_.substr(pos_, p.size()) == p) {
                auto start = mark();
                for (std::size_t i = 0; i < p.size(); ++i) advance();
                push(out, TokenKind::Punctuation, start);
                return true;
            }
        }
        return false;
    }

    std::string_view src_;
    const std::string& file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

LexResult tokenize(std::string_view source, const std::string& file) {
    return Lexer(source, file).run();
}

std::string unquote(std::string_view lexeme) {
    std::string out;
    if (lexeme.size() < 2) return out;
    auto body = lexeme.substr(1, lexeme.size() - 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '\\' && i + 1 < body.size()) {
            char next = body[++i];
            switch (next) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: out += next; break;
            }
        } else {
            out += body[i];
        }
    }
    return out;
}

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c; break;
        }
    }
    out += '"';
    return out;
}

}  // namespace scdl

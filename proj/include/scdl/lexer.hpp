#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scdl/diagnostic.hpp"

namespace scdl {

enum class TokenKind { Keyword, Identifier, Punctuation, String, Number, Cardinality, EndOfFile };

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    // Raw source text; string literals keep their quotes.
    std::string lexeme;
    SourceSpan span;

    bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
    bool is_punct(std::string_view text) const { return is(TokenKind::Punctuation, text); }
    bool is_keyword(std::string_view text) const { return is(TokenKind::Keyword, text); }
};

struct Comment {
    std::string text;
    SourceSpan span;
};

struct LexResult {
    std::vector<Token> tokens;  // no trailing EndOfFile token
    std::vector<Comment> comments;
    std::vector<Diagnostic> diagnostics;
    // Zero-width span at end of input.
    SourceSpan eof;
};

/// Splits SCDL source into tokens. Whitespace and comments are skipped
/// (comments are reported separately). Unrecognized characters produce
/// E-LEX-001 and scanning resumes at the next character.
LexResult tokenize(std::string_view source, const std::string& file);

/// Decodes the body of a string literal lexeme (quotes included).
std::string unquote(std::string_view lexeme);
/// Inverse of unquote.
std::string quote(std::string_view text);

}  // namespace scdl

#include "rar/lexer.hpp"

#include <array>
#include <cctype>

namespace rar {

namespace {

// Longest match first.
constexpr std::array<std::string_view, 12> kMultiCharPunct = {
    "->", "..", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "::", "=>"};
constexpr std::string_view kSingleCharPunct = "{}()[];:,.=<>+-*/%!&|^";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_continuation_byte(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

class Lexer {
public:
  Lexer(std::string_view src, std::uint32_t file_id) : src_(src), file_id_(file_id) {}

  TokenizeResult run() {
    std::vector<Token> tokens;
    while (true) {
      skip_whitespace();
      if (at_end())
        break;
      const std::size_t begin = pos_;
      const Mark start = mark();
      const char c = src_[pos_];

      if (c == '/' && peek(1) == '/') {
        while (!at_end() && src_[pos_] != '\n')
          advance();
        tokens.push_back(make(TokenKind::Comment, begin, start));
      } else if (c == '/' && peek(1) == '*') {
        if (!block_comment())
          return LexError{LexError::Kind::UnterminatedComment, span(start, start),
                          "unterminated block comment"};
        tokens.push_back(make(TokenKind::Comment, begin, start));
      } else if (is_ident_start(c)) {
        while (!at_end() && is_ident_char(src_[pos_]))
          advance();
        const auto word = src_.substr(begin, pos_ - begin);
        tokens.push_back(make(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        // Digits and letters are swallowed together so that `12abc` is
        // one malformed literal for the parser to reject, not two tokens.
        while (!at_end() && is_ident_char(src_[pos_]))
          advance();
        tokens.push_back(make(TokenKind::IntLiteral, begin, start));
      } else if (c == '#') {
        advance();
        tokens.push_back(make(TokenKind::AttributeMarker, begin, start));
      } else if (auto len = punct_length(); len > 0) {
        for (std::size_t i = 0; i < len; ++i)
          advance();
        tokens.push_back(make(TokenKind::Punct, begin, start));
      } else {
        advance();
        while (!at_end() && is_continuation_byte(src_[pos_]))
          advance();
        return LexError{LexError::Kind::UnknownCharacter, span(start, start),
                        "unknown character '" + std::string(src_.substr(begin, pos_ - begin)) + "'"};
      }
    }
    return tokens;
  }

private:
  struct Mark {
    std::uint32_t line;
    std::uint32_t col;
  };

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  Mark mark() const { return {line_, col_}; }

  void advance() {
    if (!is_continuation_byte(src_[pos_]))
      last_mark_ = mark();
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if (!is_continuation_byte(c)) {
      ++col_;
    }
    // A multi-byte code point advances the column once, on its lead byte;
    // the continuation bytes that follow leave it alone.
  }

  void skip_whitespace() {
    while (!at_end() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                         src_[pos_] == '\r'))
      advance();
  }

  // Rust block comments nest.
  bool block_comment() {
    int depth = 0;
    while (!at_end()) {
      if (src_[pos_] == '/' && peek(1) == '*') {
        advance();
        advance();
        ++depth;
      } else if (src_[pos_] == '*' && peek(1) == '/') {
        advance();
        advance();
        if (--depth == 0)
          return true;
      } else {
        advance();
      }
    }
    return false;
  }

  std::size_t punct_length() const {
    const auto rest = src_.substr(pos_);
    for (auto p : kMultiCharPunct)
      if (rest.substr(0, p.size()) == p)
        return p.size();
    return kSingleCharPunct.find(src_[pos_]) != std::string_view::npos ? 1 : 0;
  }

  SourceSpan span(Mark start, Mark end) const {
    return SourceSpan{file_id_, start.line, start.col, end.line, end.col};
  }

  // Span end is the position of the last character of the lexeme.
  Token make(TokenKind kind, std::size_t begin, Mark start) const {
    return Token{kind, std::string(src_.substr(begin, pos_ - begin)), span(start, last_mark_), begin};
  }

  std::string_view src_;
  std::uint32_t file_id_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
  Mark last_mark_{1, 1};
};

} // namespace

TokenizeResult tokenize(std::string_view source, std::uint32_t file_id) {
  return Lexer(source, file_id).run();
}

std::string reconstruct(std::string_view source, const std::vector<Token> &tokens) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto &t : tokens) {
    out.append(source.substr(cursor, t.offset - cursor));
    out.append(t.lexeme);
    cursor = t.offset + t.lexeme.size();
  }
  out.append(source.substr(cursor));
  return out;
}

} // namespace rar

#include "rar/parser.hpp"

#include "rar/lexer.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace rar {

std::uint32_t FileTable::intern(const std::string &path) {
  for (std::size_t i = 0; i < paths_.size(); ++i)
    if (paths_[i] == path)
      return static_cast<std::uint32_t>(i);
  paths_.push_back(path);
  return static_cast<std::uint32_t>(paths_.size() - 1);
}

const std::string &FileTable::path(std::uint32_t file_id) const {
  static const std::string unknown = "<input>";
  return file_id < paths_.size() ? paths_[file_id] : unknown;
}

namespace {

constexpr int kMaxNesting = 200;

struct SyntaxError {
  SourceSpan span;
  std::string message;
};

std::optional<std::uint64_t> parse_int_lexeme(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc() || ptr != text.data() + text.size())
    return std::nullopt;
  return value;
}

class Parser {
public:
  explicit Parser(const std::vector<Token> &tokens) {
    for (const auto &t : tokens)
      if (t.kind != TokenKind::Comment)
        toks_.push_back(t);
    if (!toks_.empty()) {
      const auto &last = toks_.back().span;
      eof_span_ = SourceSpan{last.file_id, last.end_line, last.end_col + 1, last.end_line,
                             last.end_col + 1};
    }
  }

  Program program() {
    Program prog;
    while (!at_end())
      prog.items.push_back(item());
    return prog;
  }

private:
  //===--------------------------------------------------------------------===//
  // Token cursor
  //===--------------------------------------------------------------------===//

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token *peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }
  SourceSpan here() const { return at_end() ? eof_span_ : toks_[pos_].span; }
  SourceSpan prev_span() const { return pos_ > 0 ? toks_[pos_ - 1].span : eof_span_; }

  bool check(TokenKind kind, std::string_view text, std::size_t ahead = 0) const {
    const Token *t = peek(ahead);
    return t && t->is(kind, text);
  }
  bool check_punct(std::string_view p, std::size_t ahead = 0) const {
    return check(TokenKind::Punct, p, ahead);
  }
  bool check_kw(std::string_view k, std::size_t ahead = 0) const {
    return check(TokenKind::Keyword, k, ahead);
  }
  bool check_ident(std::string_view name) const { return check(TokenKind::Identifier, name); }

  [[noreturn]] void fail(const std::string &message) const { throw SyntaxError{here(), message}; }
  [[noreturn]] void fail_at(const SourceSpan &span, const std::string &message) const {
    throw SyntaxError{span, message};
  }

  std::string describe_current() const {
    return at_end() ? "end of input" : "'" + toks_[pos_].lexeme + "'";
  }

  const Token &bump() { return toks_[pos_++]; }

  const Token &expect_punct(std::string_view p) {
    if (!check_punct(p))
      fail("expected '" + std::string(p) + "', found " + describe_current());
    return bump();
  }
  const Token &expect_kw(std::string_view k) {
    if (!check_kw(k))
      fail("expected '" + std::string(k) + "', found " + describe_current());
    return bump();
  }
  const Token &expect_ident(std::string_view what) {
    if (at_end() || toks_[pos_].kind != TokenKind::Identifier)
      fail("expected " + std::string(what) + ", found " + describe_current());
    return bump();
  }
  bool eat_punct(std::string_view p) {
    if (!check_punct(p))
      return false;
    ++pos_;
    return true;
  }
  bool eat_kw(std::string_view k) {
    if (!check_kw(k))
      return false;
    ++pos_;
    return true;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser &p) : parser(p) {
      if (++parser.depth_ > kMaxNesting)
        parser.fail("nesting too deep");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser &parser;
  };

  std::uint64_t int_literal() {
    if (at_end() || toks_[pos_].kind != TokenKind::IntLiteral)
      fail("expected integer literal, found " + describe_current());
    const Token &t = bump();
    auto value = parse_int_lexeme(t.lexeme);
    if (!value)
      fail_at(t.span, "malformed integer literal '" + t.lexeme +
                          "' (only decimal and hexadecimal literals without suffixes are allowed)");
    return *value;
  }

  //===--------------------------------------------------------------------===//
  // Items
  //===--------------------------------------------------------------------===//

  Item item() {
    const SourceSpan start = here();
    bool copy_derive = false;
    if (check(TokenKind::AttributeMarker, "#")) {
      attribute();
      copy_derive = true;
      if (!check_kw("struct"))
        fail("the derive attribute may only precede a struct definition");
    }
    if (check_kw("const"))
      return const_def();
    if (check_kw("struct"))
      return record_def(start, copy_derive);
    if (check_kw("fn"))
      return fn_def();
    if (check_ident("static"))
      return static_def();
    fail("expected an item ('const', 'struct' or 'fn'), found " + describe_current());
  }

  // Only `#[derive(Copy, Clone)]` (either or both, any order) is accepted.
  void attribute() {
    bump();
    expect_punct("[");
    const Token &name = expect_ident("attribute name");
    if (name.lexeme != "derive")
      fail_at(name.span, "unsupported attribute '" + name.lexeme + "'");
    expect_punct("(");
    do {
      if (check_punct(")"))
        break;
      const Token &trait = expect_ident("derived trait");
      if (trait.lexeme != "Copy" && trait.lexeme != "Clone")
        fail_at(trait.span, "unsupported derive '" + trait.lexeme + "' (only Copy and Clone)");
    } while (eat_punct(","));
    expect_punct(")");
    expect_punct("]");
  }

  ConstDef const_def() {
    const SourceSpan start = bump().span;
    const Token &name = expect_ident("constant name");
    expect_punct(":");
    TypeExpr ty = type_expr();
    expect_punct("=");
    if (check_punct("-"))
      fail("constant values must be unsigned integer literals");
    const std::uint64_t value = int_literal();
    expect_punct(";");
    return ConstDef{name.lexeme, std::move(ty), value, SourceSpan::cover(start, prev_span()), name.span};
  }

  StaticDef static_def() {
    const SourceSpan start = bump().span;
    const bool is_mut = eat_kw("mut");
    const Token &name = expect_ident("static name");
    expect_punct(":");
    TypeExpr ty = type_expr();
    expect_punct("=");
    const std::uint64_t value = int_literal();
    expect_punct(";");
    return StaticDef{name.lexeme, std::move(ty), is_mut, value, SourceSpan::cover(start, prev_span()),
                     name.span};
  }

  RecordDef record_def(SourceSpan start, bool copy_derive) {
    expect_kw("struct");
    const Token &name = expect_ident("struct name");
    expect_punct("{");
    std::vector<RecordField> fields;
    while (!check_punct("}")) {
      const Token &fname = expect_ident("field name");
      expect_punct(":");
      TypeExpr ty = type_expr();
      fields.push_back(RecordField{fname.lexeme, std::move(ty), SourceSpan::cover(fname.span, prev_span())});
      if (!eat_punct(","))
        break;
    }
    expect_punct("}");
    return RecordDef{name.lexeme, std::move(fields), copy_derive, SourceSpan::cover(start, prev_span()),
                     name.span};
  }

  // Parameters accept both `mut name: T` (Rust) and `name: mut T` (the
  // style of the published listings).
  FnDef fn_def() {
    const SourceSpan start = bump().span;
    const Token &name = expect_ident("function name");
    expect_punct("(");
    std::vector<Param> params;
    while (!check_punct(")")) {
      const SourceSpan pstart = here();
      bool is_mut = eat_kw("mut");
      const Token &pname = expect_ident("parameter name");
      expect_punct(":");
      if (eat_kw("mut"))
        is_mut = true;
      TypeExpr ty = type_expr();
      params.push_back(Param{pname.lexeme, std::move(ty), is_mut, SourceSpan::cover(pstart, prev_span())});
      if (!eat_punct(","))
        break;
    }
    expect_punct(")");
    if (!check_punct("->"))
      fail("expected '->' and a return type, found " + describe_current());
    bump();
    TypeExpr ret = type_expr();
    Block body = block();
    return FnDef{name.lexeme, std::move(params), std::move(ret), std::move(body),
                 SourceSpan::cover(start, prev_span()), name.span};
  }

  //===--------------------------------------------------------------------===//
  // Types
  //===--------------------------------------------------------------------===//

  TypeExpr type_expr() {
    DepthGuard guard(*this);
    const SourceSpan start = here();
    if (at_end())
      fail("expected a type, found end of input");
    const Token &t = toks_[pos_];
    if (t.kind == TokenKind::Keyword) {
      const std::string &k = t.lexeme;
      auto width_of = [&](std::string_view digits) { return static_cast<unsigned>(std::stoul(std::string(digits))); };
      if (k == "usize" || k == "uint") {
        bump();
        return TypeExpr{type::UnsignedIndex{k == "uint"}, t.span};
      }
      if (k == "bool") {
        bump();
        return TypeExpr{type::Bool{}, t.span};
      }
      if (k.size() >= 2 && (k[0] == 'u' || k[0] == 'i') && std::isdigit(static_cast<unsigned char>(k[1]))) {
        bump();
        const unsigned w = width_of(std::string_view(k).substr(1));
        if (k[0] == 'u')
          return TypeExpr{type::UnsignedInt{w}, t.span};
        return TypeExpr{type::SignedInt{w}, t.span};
      }
      fail("expected a type, found " + describe_current());
    }
    if (t.kind == TokenKind::Identifier) {
      bump();
      return TypeExpr{type::Named{t.lexeme}, t.span};
    }
    if (check_punct("[")) {
      bump();
      TypeExpr elem = type_expr();
      expect_punct(";");
      std::variant<std::string, std::uint64_t> length;
      if (!at_end() && toks_[pos_].kind == TokenKind::Identifier)
        length = bump().lexeme;
      else
        length = int_literal();
      expect_punct("]");
      return TypeExpr{type::ArrayOf{std::move(elem), std::move(length)}, SourceSpan::cover(start, prev_span())};
    }
    if (check_punct("&") || check_punct("&&")) {
      if (check_punct("&&"))
        fail("expected a type, found '&&'");
      bump();
      const bool is_mut = eat_kw("mut");
      TypeExpr inner = type_expr();
      return TypeExpr{type::Reference{std::move(inner), is_mut}, SourceSpan::cover(start, prev_span())};
    }
    fail("expected a type, found " + describe_current());
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  Block block() {
    DepthGuard guard(*this);
    expect_punct("{");
    Block out;
    while (!check_punct("}")) {
      if (at_end())
        fail("expected '}' before end of input");
      out.push_back(statement());
    }
    bump();
    return out;
  }

  Stmt statement() {
    const SourceSpan start = here();
    if (eat_kw("let")) {
      const bool is_mut = eat_kw("mut");
      const Token &name = expect_ident("variable name");
      if (!check_punct(":"))
        fail("let bindings need an explicit type annotation");
      bump();
      TypeExpr ty = type_expr();
      std::optional<Expr> init;
      if (eat_punct("="))
        init = expression();
      expect_punct(";");
      return Stmt{stmt::Let{name.lexeme, std::move(ty), is_mut, std::move(init)},
                  SourceSpan::cover(start, prev_span())};
    }
    if (check_kw("if"))
      return if_statement();
    if (eat_kw("for")) {
      const Token &var = expect_ident("loop variable");
      expect_kw("in");
      Expr lower = expression();
      expect_punct("..");
      if (check_punct("="))
        fail("inclusive ranges are not supported; use 'lo..hi'");
      Expr upper = expression();
      Block body = block();
      return Stmt{stmt::ForRange{var.lexeme, var.span, std::move(lower), std::move(upper), std::move(body)},
                  SourceSpan::cover(start, prev_span())};
    }
    if (eat_kw("return")) {
      Expr value = expression();
      expect_punct(";");
      return Stmt{stmt::Return{std::move(value)}, SourceSpan::cover(start, prev_span())};
    }
    for (std::string_view unsupported : {"while", "loop", "break", "continue", "match"})
      if (check_ident(unsupported))
        fail("'" + std::string(unsupported) + "' is not part of the RAR subset");
    if (!at_end() && toks_[pos_].kind == TokenKind::Identifier) {
      LValue target = lvalue();
      expect_punct("=");
      Expr value = expression();
      expect_punct(";");
      return Stmt{stmt::Assign{std::move(target), std::move(value)}, SourceSpan::cover(start, prev_span())};
    }
    fail("expected a statement, found " + describe_current());
  }

  Stmt if_statement() {
    DepthGuard guard(*this);
    const SourceSpan start = expect_kw("if").span;
    Expr cond = expression();
    Block then_body = block();
    std::optional<Block> else_body;
    if (eat_kw("else")) {
      if (check_kw("if")) {
        Block chained;
        chained.push_back(if_statement());
        else_body = std::move(chained);
      } else {
        else_body = block();
      }
    }
    return Stmt{stmt::If{std::move(cond), std::move(then_body), std::move(else_body)},
                SourceSpan::cover(start, prev_span())};
  }

  LValue lvalue() {
    const Token &root = bump();
    LValue lv{root.lexeme, {}, root.span};
    while (true) {
      if (eat_punct(".")) {
        const Token &field = expect_ident("field name");
        lv.steps.emplace_back(LValue::Field{field.lexeme});
      } else if (eat_punct("[")) {
        Expr idx = expression();
        expect_punct("]");
        lv.steps.emplace_back(LValue::Subscript{std::move(idx)});
      } else {
        break;
      }
    }
    lv.span = SourceSpan::cover(lv.span, prev_span());
    return lv;
  }

  //===--------------------------------------------------------------------===//
  // Expressions (Rust precedence, lowest first)
  //===--------------------------------------------------------------------===//

  struct BinLevel {
    std::vector<std::pair<std::string_view, BinaryOp>> ops;
    bool non_associative;
  };

  static const std::vector<BinLevel> &levels() {
    static const std::vector<BinLevel> table = {
        {{{"||", BinaryOp::LogicalOr}}, false},
        {{{"&&", BinaryOp::LogicalAnd}}, false},
        {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le},
          {">", BinaryOp::Gt}, {">=", BinaryOp::Ge}},
         true},
        {{{"|", BinaryOp::BitOr}}, false},
        {{{"^", BinaryOp::BitXor}}, false},
        {{{"&", BinaryOp::BitAnd}}, false},
        {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}, false},
        {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}, false},
        {{{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Rem}}, false},
    };
    return table;
  }

  Expr expression() { return binary(0); }

  std::optional<BinaryOp> match_level(std::size_t level) const {
    if (at_end() || toks_[pos_].kind != TokenKind::Punct)
      return std::nullopt;
    for (const auto &[text, op] : levels()[level].ops)
      if (toks_[pos_].lexeme == text)
        return op;
    return std::nullopt;
  }

  Expr binary(std::size_t level) {
    if (level == levels().size())
      return cast();
    DepthGuard guard(*this);
    Expr lhs = binary(level + 1);
    bool seen = false;
    while (auto op = match_level(level)) {
      if (seen && levels()[level].non_associative)
        fail("comparison operators cannot be chained; add parentheses");
      bump();
      Expr rhs = binary(level + 1);
      const SourceSpan span = SourceSpan::cover(lhs.span, rhs.span);
      lhs = Expr{expr::Binary{*op, std::move(lhs), std::move(rhs)}, span};
      seen = true;
    }
    return lhs;
  }

  Expr cast() {
    Expr operand = unary();
    while (eat_kw("as")) {
      TypeExpr target = type_expr();
      const SourceSpan span = SourceSpan::cover(operand.span, target.span);
      operand = Expr{expr::Cast{std::move(operand), std::move(target)}, span};
    }
    return operand;
  }

  Expr unary() {
    DepthGuard guard(*this);
    const SourceSpan start = here();
    if (eat_punct("-")) {
      Expr operand = unary();
      const SourceSpan span = SourceSpan::cover(start, operand.span);
      return Expr{expr::Unary{UnaryOp::Neg, std::move(operand)}, span};
    }
    if (eat_punct("!")) {
      Expr operand = unary();
      const SourceSpan span = SourceSpan::cover(start, operand.span);
      return Expr{expr::Unary{UnaryOp::Not, std::move(operand)}, span};
    }
    if (check_punct("&") || check_punct("*"))
      fail("references and dereferences are not part of the RAR subset");
    return postfix();
  }

  Expr postfix() {
    Expr base = primary();
    while (true) {
      if (eat_punct(".")) {
        const Token &field = expect_ident("field name");
        if (check_punct("("))
          fail("method calls are not part of the RAR subset");
        const SourceSpan span = SourceSpan::cover(base.span, field.span);
        base = Expr{expr::FieldAccess{std::move(base), field.lexeme}, span};
      } else if (eat_punct("[")) {
        Expr idx = expression();
        expect_punct("]");
        const SourceSpan span = SourceSpan::cover(base.span, prev_span());
        base = Expr{expr::Index{std::move(base), std::move(idx)}, span};
      } else {
        return base;
      }
    }
  }

  Expr primary() {
    const SourceSpan start = here();
    if (at_end())
      fail("expected an expression, found end of input");
    const Token &t = toks_[pos_];
    if (t.kind == TokenKind::IntLiteral) {
      const std::uint64_t v = int_literal();
      return Expr{expr::IntLit{v, t.lexeme}, t.span};
    }
    if (eat_kw("true"))
      return Expr{expr::BoolLit{true}, t.span};
    if (eat_kw("false"))
      return Expr{expr::BoolLit{false}, t.span};
    if (t.kind == TokenKind::Identifier) {
      bump();
      if (eat_punct("(")) {
        std::vector<Expr> args;
        while (!check_punct(")")) {
          args.push_back(expression());
          if (!eat_punct(","))
            break;
        }
        expect_punct(")");
        return Expr{expr::Call{t.lexeme, std::move(args)}, SourceSpan::cover(start, prev_span())};
      }
      if (check_punct("!"))
        fail("macro invocations are not part of the RAR subset");
      return Expr{expr::VarRef{t.lexeme}, t.span};
    }
    if (eat_punct("(")) {
      Expr inner = expression();
      expect_punct(")");
      inner.span = SourceSpan::cover(start, prev_span());
      return inner;
    }
    fail("expected an expression, found " + describe_current());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  SourceSpan eof_span_{};
};

} // namespace

ParseResult parse(const std::vector<Token> &tokens) {
  Parser parser(tokens);
  try {
    return ParseResult{parser.program(), {}};
  } catch (const SyntaxError &err) {
    return ParseResult{std::nullopt, {Diagnostic{Severity::Error, "S001", err.message, err.span}}};
  }
}

ParseResult parse_source(std::string_view source, std::uint32_t file_id) {
  auto lexed = tokenize(source, file_id);
  if (const auto *err = std::get_if<LexError>(&lexed))
    return ParseResult{std::nullopt, {Diagnostic{Severity::Error, "S002", err->message, err->span}}};
  return parse(std::get<std::vector<Token>>(lexed));
}

std::variant<std::string, IoError> read_source_file(const std::filesystem::path &path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec))
    return IoError{path.string(), "is a directory"};
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return IoError{path.string(), "cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    return IoError{path.string(), "read error"};
  return buf.str();
}

std::variant<ParseResult, IoError> parse_file(const std::filesystem::path &path, FileTable &files) {
  auto source = read_source_file(path);
  if (auto *err = std::get_if<IoError>(&source))
    return *err;
  return parse_source(std::get<std::string>(source), files.intern(path.string()));
}

} // namespace rar

#include "rar/ast.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace rar {

SourceSpan SourceSpan::cover(const SourceSpan &a, const SourceSpan &b) {
  SourceSpan out = a;
  if (std::pair(b.start_line, b.start_col) < std::pair(a.start_line, a.start_col)) {
    out.start_line = b.start_line;
    out.start_col = b.start_col;
  }
  if (std::pair(b.end_line, b.end_col) > std::pair(a.end_line, a.end_col)) {
    out.end_line = b.end_line;
    out.end_col = b.end_col;
  }
  return out;
}

const char *to_string(TokenKind kind) {
  switch (kind) {
  case TokenKind::Identifier:
    return "Identifier";
  case TokenKind::IntLiteral:
    return "IntLiteral";
  case TokenKind::Keyword:
    return "Keyword";
  case TokenKind::Punct:
    return "Punct";
  case TokenKind::Comment:
    return "Comment";
  case TokenKind::AttributeMarker:
    return "AttributeMarker";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  static constexpr std::array<std::string_view, 24> keywords = {
      "const", "struct", "fn",  "let",   "mut", "if",  "else", "for",
      "in",    "return", "true", "false", "as",  "usize", "bool", "u8",
      "u16",   "u32",    "u64", "i8",    "i16", "i32", "i64",  "uint"};
  return std::find(keywords.begin(), keywords.end(), word) != keywords.end();
}

bool TypeExpr::is_scalar() const {
  return std::holds_alternative<type::UnsignedIndex>(node) ||
         std::holds_alternative<type::SignedInt>(node) ||
         std::holds_alternative<type::UnsignedInt>(node) ||
         std::holds_alternative<type::Bool>(node);
}

const char *spelling(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add:
    return "+";
  case BinaryOp::Sub:
    return "-";
  case BinaryOp::Mul:
    return "*";
  case BinaryOp::Div:
    return "/";
  case BinaryOp::Rem:
    return "%";
  case BinaryOp::Lt:
    return "<";
  case BinaryOp::Le:
    return "<=";
  case BinaryOp::Gt:
    return ">";
  case BinaryOp::Ge:
    return ">=";
  case BinaryOp::Eq:
    return "==";
  case BinaryOp::Ne:
    return "!=";
  case BinaryOp::LogicalAnd:
    return "&&";
  case BinaryOp::LogicalOr:
    return "||";
  case BinaryOp::BitAnd:
    return "&";
  case BinaryOp::BitOr:
    return "|";
  case BinaryOp::BitXor:
    return "^";
  case BinaryOp::Shl:
    return "<<";
  case BinaryOp::Shr:
    return ">>";
  }
  return "?";
}

const char *spelling(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

bool is_comparison(BinaryOp op) {
  switch (op) {
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge:
  case BinaryOp::Eq:
  case BinaryOp::Ne:
    return true;
  default:
    return false;
  }
}

bool is_logical(BinaryOp op) { return op == BinaryOp::LogicalAnd || op == BinaryOp::LogicalOr; }

Expr LValue::to_expr() const {
  Expr cur{expr::VarRef{root}, span};
  for (const auto &step : steps) {
    if (const auto *f = std::get_if<Field>(&step))
      cur = Expr{expr::FieldAccess{std::move(cur), f->name}, span};
    else
      cur = Expr{expr::Index{std::move(cur), std::get<Subscript>(step).index}, span};
  }
  return cur;
}

const SourceSpan &span_of(const Item &item) {
  return std::visit([](const auto &i) -> const SourceSpan & { return i.span; }, item);
}

const std::string &name_of(const Item &item) {
  return std::visit([](const auto &i) -> const std::string & { return i.name; }, item);
}

const char *to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic> &diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

//===----------------------------------------------------------------------===//
// render_ast
//===----------------------------------------------------------------------===//

namespace {

class Renderer {
public:
  std::string take() { return out_.str(); }

  void item(const Item &it) {
    std::visit(overloaded{
                   [&](const ConstDef &c) {
                     out_ << "(const " << c.name << ' ' << render_type(c.declared_type) << ' '
                          << c.value << ")\n";
                   },
                   [&](const StaticDef &s) {
                     out_ << "(static " << (s.is_mutable ? "mut " : "") << s.name << ' '
                          << render_type(s.declared_type) << ' ' << s.value << ")\n";
                   },
                   [&](const RecordDef &r) {
                     out_ << "(struct " << r.name << (r.copy_derive ? " copy" : "");
                     for (const auto &f : r.fields)
                       out_ << "\n  (field " << f.name << ' ' << render_type(f.type) << ')';
                     out_ << ")\n";
                   },
                   [&](const FnDef &f) {
                     out_ << "(fn " << f.name << " (";
                     for (std::size_t i = 0; i < f.params.size(); ++i) {
                       const auto &p = f.params[i];
                       out_ << (i ? " " : "") << "(param " << (p.is_mutable ? "mut " : "")
                            << p.name << ' ' << render_type(p.type) << ')';
                     }
                     out_ << ") " << render_type(f.return_type);
                     block(f.body, 1);
                     out_ << ")\n";
                   },
               },
               it);
  }

private:
  void indent(int depth) { out_ << '\n' << std::string(static_cast<std::size_t>(depth) * 2, ' '); }

  void block(const Block &body, int depth) {
    for (const auto &s : body)
      statement(s, depth);
  }

  void statement(const Stmt &s, int depth) {
    indent(depth);
    std::visit(overloaded{
                   [&](const stmt::Let &l) {
                     out_ << "(let " << (l.is_mutable ? "mut " : "") << l.name << ' '
                          << render_type(l.declared_type);
                     if (l.init)
                       out_ << ' ' << render_expr(*l.init);
                     out_ << ')';
                   },
                   [&](const stmt::Assign &a) {
                     out_ << "(assign " << render_expr(a.target.to_expr()) << ' '
                          << render_expr(a.value) << ')';
                   },
                   [&](const stmt::If &i) {
                     out_ << "(if " << render_expr(i.cond);
                     indent(depth + 1);
                     out_ << "(then";
                     block(i.then_body, depth + 2);
                     out_ << ')';
                     if (i.else_body) {
                       indent(depth + 1);
                       out_ << "(else";
                       block(*i.else_body, depth + 2);
                       out_ << ')';
                     }
                     out_ << ')';
                   },
                   [&](const stmt::ForRange &f) {
                     out_ << "(for " << f.var << ' ' << render_expr(f.lower) << ' '
                          << render_expr(f.upper);
                     block(f.body, depth + 1);
                     out_ << ')';
                   },
                   [&](const stmt::Return &r) { out_ << "(return " << render_expr(r.value) << ')'; },
               },
               s.node);
  }

  std::ostringstream out_;
};

} // namespace

std::string render_type(const TypeExpr &t) {
  return std::visit(
      overloaded{
          [](const type::UnsignedIndex &u) -> std::string { return u.spelled_uint ? "uint" : "usize"; },
          [](const type::SignedInt &s) -> std::string { return "i" + std::to_string(s.width); },
          [](const type::UnsignedInt &u) -> std::string { return "u" + std::to_string(u.width); },
          [](const type::Bool &) -> std::string { return "bool"; },
          [](const type::ArrayOf &a) -> std::string {
            std::string len = std::holds_alternative<std::string>(a.length)
                                  ? std::get<std::string>(a.length)
                                  : std::to_string(std::get<std::uint64_t>(a.length));
            return "(array " + render_type(*a.element) + ' ' + len + ')';
          },
          [](const type::Named &n) -> std::string { return n.name; },
          [](const type::Reference &r) -> std::string {
            return std::string(r.is_mutable ? "(ref-mut " : "(ref ") + render_type(*r.referent) + ')';
          },
      },
      t.node);
}

std::string render_expr(const Expr &e) {
  return std::visit(
      overloaded{
          [](const expr::IntLit &i) -> std::string { return std::to_string(i.value); },
          [](const expr::BoolLit &b) -> std::string { return b.value ? "true" : "false"; },
          [](const expr::VarRef &v) -> std::string { return "(var " + v.name + ')'; },
          [](const expr::FieldAccess &f) -> std::string {
            return "(field " + render_expr(*f.base) + ' ' + f.field + ')';
          },
          [](const expr::Index &i) -> std::string {
            return "(index " + render_expr(*i.base) + ' ' + render_expr(*i.index) + ')';
          },
          [](const expr::Call &c) -> std::string {
            std::string out = "(call " + c.callee;
            for (const auto &a : c.args)
              out += ' ' + render_expr(a);
            return out + ')';
          },
          [](const expr::Binary &b) -> std::string {
            return std::string("(") + spelling(b.op) + ' ' + render_expr(*b.lhs) + ' ' +
                   render_expr(*b.rhs) + ')';
          },
          [](const expr::Unary &u) -> std::string {
            return std::string("(") + spelling(u.op) + ' ' + render_expr(*u.operand) + ')';
          },
          [](const expr::Cast &c) -> std::string {
            return "(as " + render_expr(*c.operand) + ' ' + render_type(c.target) + ')';
          },
      },
      e.node);
}

std::string render_ast(const Program &program) {
  Renderer r;
  for (const auto &item : program.items)
    r.item(item);
  return r.take();
}

} // namespace rar

/// @file ast.hpp
/// @brief Syntax tree, token, span and diagnostic types for Restricted
/// Algorithmic Rust (RAR).
///
/// The tree is a plain value: every node owns its children through `Box`,
/// a deep-copying owning pointer, so a `Program` can be copied, compared
/// structurally by `render_ast`, and shared read-only between threads.
/// Every node produced by the parser carries the `SourceSpan` of the text
/// it was built from.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rar {

/// Visitor helper for `std::visit` over the node variants.
template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

//===----------------------------------------------------------------------===//
// Source positions
//===----------------------------------------------------------------------===//

/// 1-based line/column range. Columns count code points, not bytes.
struct SourceSpan {
  std::uint32_t file_id = 0;
  std::uint32_t start_line = 1;
  std::uint32_t start_col = 1;
  std::uint32_t end_line = 1;
  std::uint32_t end_col = 1;

  bool operator==(const SourceSpan &) const = default;

  /// Smallest span covering both `a` and `b` (same file assumed).
  static SourceSpan cover(const SourceSpan &a, const SourceSpan &b);
};

//===----------------------------------------------------------------------===//
// Tokens
//===----------------------------------------------------------------------===//

enum class TokenKind { Identifier, IntLiteral, Keyword, Punct, Comment, AttributeMarker };

const char *to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string lexeme;
  SourceSpan span;
  std::size_t offset = 0; ///< byte offset of the first lexeme byte

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
};

/// The fixed keyword list of the surface language.
bool is_keyword(std::string_view word);

//===----------------------------------------------------------------------===//
// Box: deep-copying owner for recursive variants
//===----------------------------------------------------------------------===//

template <typename T> class Box {
public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box &other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    if (this != &other)
      ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;
  ~Box() = default;

  T &operator*() { return *ptr_; }
  const T &operator*() const { return *ptr_; }
  T *operator->() { return ptr_.get(); }
  const T *operator->() const { return ptr_.get(); }

private:
  std::unique_ptr<T> ptr_;
};

//===----------------------------------------------------------------------===//
// Types
//===----------------------------------------------------------------------===//

struct TypeExpr;

namespace type {
/// `usize`, or the `uint` spelling accepted as an alias.
struct UnsignedIndex {
  bool spelled_uint = false;
};
struct SignedInt {
  unsigned width;
};
struct UnsignedInt {
  unsigned width;
};
struct Bool {};
/// `[element; length]`, where length is a constant name or a literal.
struct ArrayOf {
  Box<TypeExpr> element;
  std::variant<std::string, std::uint64_t> length;
};
struct Named {
  std::string name;
};
/// `&T` / `&mut T`. Parsed so the checker can reject it.
struct Reference {
  Box<TypeExpr> referent;
  bool is_mutable = false;
};
} // namespace type

struct TypeExpr {
  using Variant = std::variant<type::UnsignedIndex, type::SignedInt, type::UnsignedInt, type::Bool,
                               type::ArrayOf, type::Named, type::Reference>;
  Variant node;
  SourceSpan span;

  template <typename T> const T *as() const { return std::get_if<T>(&node); }
  bool is_scalar() const;
};

//===----------------------------------------------------------------------===//
// Expressions
//===----------------------------------------------------------------------===//

enum class BinaryOp {
  Add, Sub, Mul, Div, Rem,
  Lt, Le, Gt, Ge, Eq, Ne,
  LogicalAnd, LogicalOr,
  BitAnd, BitOr, BitXor, Shl, Shr,
};
enum class UnaryOp { Neg, Not };

const char *spelling(BinaryOp op);
const char *spelling(UnaryOp op);
bool is_comparison(BinaryOp op);
bool is_logical(BinaryOp op);

struct Expr;

namespace expr {
struct IntLit {
  std::uint64_t value;
  std::string lexeme; ///< original spelling (decimal or hex)
};
struct BoolLit {
  bool value;
};
struct VarRef {
  std::string name;
};
struct FieldAccess {
  Box<Expr> base;
  std::string field;
};
struct Index {
  Box<Expr> base;
  Box<Expr> index;
};
struct Call {
  std::string callee;
  std::vector<Expr> args;
};
struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
};
struct Unary {
  UnaryOp op;
  Box<Expr> operand;
};
struct Cast {
  Box<Expr> operand;
  TypeExpr target;
};
} // namespace expr

struct Expr {
  using Variant = std::variant<expr::IntLit, expr::BoolLit, expr::VarRef, expr::FieldAccess,
                               expr::Index, expr::Call, expr::Binary, expr::Unary, expr::Cast>;
  Variant node;
  SourceSpan span;

  template <typename T> const T *as() const { return std::get_if<T>(&node); }
};

//===----------------------------------------------------------------------===//
// Statements
//===----------------------------------------------------------------------===//

/// Assignment target: a variable extended by field/index steps.
struct LValue {
  struct Field {
    std::string name;
  };
  struct Subscript {
    Expr index;
  };
  using Step = std::variant<Field, Subscript>;

  std::string root;
  std::vector<Step> steps;
  SourceSpan span;

  /// The same path viewed as an expression.
  Expr to_expr() const;
};

struct Stmt;
using Block = std::vector<Stmt>;

namespace stmt {
struct Let {
  std::string name;
  TypeExpr declared_type;
  bool is_mutable = false;
  std::optional<Expr> init;
};
struct Assign {
  LValue target;
  Expr value;
};
struct If {
  Expr cond;
  Block then_body;
  std::optional<Block> else_body;
};
struct ForRange {
  std::string var;
  SourceSpan var_span;
  Expr lower;
  Expr upper;
  Block body;
};
struct Return {
  Expr value;
};
} // namespace stmt

struct Stmt {
  using Variant = std::variant<stmt::Let, stmt::Assign, stmt::If, stmt::ForRange, stmt::Return>;
  Variant node;
  SourceSpan span;

  template <typename T> const T *as() const { return std::get_if<T>(&node); }
};

//===----------------------------------------------------------------------===//
// Items
//===----------------------------------------------------------------------===//

struct ConstDef {
  std::string name;
  TypeExpr declared_type;
  std::uint64_t value;
  SourceSpan span;
  SourceSpan name_span;
};

struct RecordField {
  std::string name;
  TypeExpr type;
  SourceSpan span;
};

struct RecordDef {
  std::string name;
  std::vector<RecordField> fields;
  bool copy_derive = false;
  SourceSpan span;
  SourceSpan name_span;
};

struct Param {
  std::string name;
  TypeExpr type;
  bool is_mutable = false;
  SourceSpan span;
};

struct FnDef {
  std::string name;
  std::vector<Param> params;
  TypeExpr return_type;
  Block body;
  SourceSpan span;
  SourceSpan name_span;
};

/// `static [mut] NAME: T = v;`. Not part of the subset; kept in the tree so
/// the checker can report it with a span.
struct StaticDef {
  std::string name;
  TypeExpr declared_type;
  bool is_mutable = false;
  std::uint64_t value;
  SourceSpan span;
  SourceSpan name_span;
};

using Item = std::variant<ConstDef, RecordDef, FnDef, StaticDef>;

const SourceSpan &span_of(const Item &item);
const std::string &name_of(const Item &item);

struct Program {
  std::vector<Item> items;

  template <typename T> std::vector<const T *> all() const {
    std::vector<const T *> out;
    for (const auto &item : items)
      if (const auto *p = std::get_if<T>(&item))
        out.push_back(p);
    return out;
  }
};

//===----------------------------------------------------------------------===//
// Diagnostics
//===----------------------------------------------------------------------===//

enum class Severity { Error, Warning };

const char *to_string(Severity severity);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string rule_code;
  std::string message;
  SourceSpan span;

  bool operator==(const Diagnostic &) const = default;
};

bool has_errors(const std::vector<Diagnostic> &diags);

//===----------------------------------------------------------------------===//
// Debug rendering
//===----------------------------------------------------------------------===//

/// Stable S-expression dump of the tree, one item per top-level form.
/// Spans are not included, so two programs that differ only in layout
/// render identically.
std::string render_ast(const Program &program);
std::string render_type(const TypeExpr &type);
std::string render_expr(const Expr &expr);

} // namespace rar

// Scope tracking and expression typing shared by the checker and emitter.
// Internal header; not installed.

#pragma once

#include "rar/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rar::detail {

/// Result of typing an expression. An unsuffixed integer literal has no
/// type of its own and adapts to its context.
struct InferredType {
  std::optional<TypeExpr> type;
  bool int_literal = false;

  static InferredType unknown() { return {}; }
  static InferredType literal() { return {std::nullopt, true}; }
  static InferredType of(TypeExpr t) { return {std::move(t), false}; }
};

struct Binding {
  TypeExpr type;
  bool is_mutable = false;
  bool deferred_init = false; ///< `let x: T;` without initializer
  bool is_loop_var = false;
};

class TypeEnv {
public:
  explicit TypeEnv(const Program &program);

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }
  void bind(const std::string &name, Binding binding) { scopes_.back()[name] = std::move(binding); }

  const Binding *local(const std::string &name) const;
  const ConstDef *constant(const std::string &name) const;
  const StaticDef *global_static(const std::string &name) const;
  const RecordDef *record(const std::string &name) const;
  const FnDef *function(const std::string &name) const;
  /// Declaration order of a function, or -1.
  int function_index(const std::string &name) const;

  InferredType infer(const Expr &e) const;

  const std::map<std::string, std::uint64_t> &const_values() const { return const_values_; }

private:
  std::map<std::string, const ConstDef *> consts_;
  std::map<std::string, const StaticDef *> statics_;
  std::map<std::string, const RecordDef *> records_;
  std::map<std::string, std::pair<const FnDef *, int>> fns_;
  std::map<std::string, std::uint64_t> const_values_;
  std::vector<std::map<std::string, Binding>> scopes_;
};

TypeExpr make_type(TypeExpr::Variant v, const SourceSpan &span = {});
bool is_unsigned_index(const TypeExpr &t);
bool is_bool(const TypeExpr &t);
/// `&T` and `&mut T` viewed as `T`.
const TypeExpr &strip_references(const TypeExpr &t);

} // namespace rar::detail

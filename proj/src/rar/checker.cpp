#include "rar/checker.hpp"

#include "typing.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace rar {

using detail::Binding;
using detail::InferredType;
using detail::TypeEnv;

const std::vector<RuleInfo> &rule_table() {
  static const std::vector<RuleInfo> table = {
      {"R001", Severity::Error, "no reference-typed parameters, locals, fields or returns"},
      {"R002", Severity::Error, "no recursion, direct or mutual"},
      {"R003", Severity::Error,
       "loop bounds are compile-time constants; loop variable is not assigned; no return inside loops"},
      {"R004", Severity::Error, "array index expressions have type usize"},
      {"R005", Severity::Error, "no global state other than const items"},
      {"R006", Severity::Error, "every function returns on all paths"},
      {"R007", Severity::Error, "calls target functions defined in the same program, with matching arity"},
      {"R008", Severity::Error, "functions are defined before they are called"},
      {"R009", Severity::Error, "names resolve and are defined once"},
      {"R010", Severity::Error, "assignments target mutable bindings"},
      {"R011", Severity::Error, "only supported type forms are used"},
      {"R012", Severity::Warning, "'uint' is not a Rust type; it is read as 'usize'"},
      {"S001", Severity::Error, "syntax error"},
      {"S002", Severity::Error, "lexical error"},
  };
  return table;
}

const RuleInfo *find_rule(std::string_view code) {
  for (const auto &r : rule_table())
    if (r.code == code)
      return &r;
  return nullptr;
}

std::variant<std::uint64_t, ConstEvalError> evaluate_const(const Expr &e, const ConstEnv &env) {
  using Result = std::variant<std::uint64_t, ConstEvalError>;
  auto non_constant = [&] { return Result{ConstEvalError{ConstEvalError::Kind::NonConstant, e.span}}; };
  if (const auto *lit = e.as<expr::IntLit>())
    return lit->value;
  if (const auto *var = e.as<expr::VarRef>()) {
    auto it = env.find(var->name);
    if (it == env.end())
      return non_constant();
    return it->second;
  }
  const auto *bin = e.as<expr::Binary>();
  if (!bin || (bin->op != BinaryOp::Add && bin->op != BinaryOp::Sub && bin->op != BinaryOp::Mul))
    return non_constant();
  auto lhs = evaluate_const(*bin->lhs, env);
  if (std::holds_alternative<ConstEvalError>(lhs))
    return lhs;
  auto rhs = evaluate_const(*bin->rhs, env);
  if (std::holds_alternative<ConstEvalError>(rhs))
    return rhs;
  const std::uint64_t a = std::get<std::uint64_t>(lhs);
  const std::uint64_t b = std::get<std::uint64_t>(rhs);
  std::uint64_t out = 0;
  switch (bin->op) {
  case BinaryOp::Add:
    if (__builtin_add_overflow(a, b, &out))
      return ConstEvalError{ConstEvalError::Kind::Overflow, e.span};
    return out;
  case BinaryOp::Sub:
    if (b > a)
      return ConstEvalError{ConstEvalError::Kind::Underflow, e.span};
    return a - b;
  default:
    if (__builtin_mul_overflow(a, b, &out))
      return ConstEvalError{ConstEvalError::Kind::Overflow, e.span};
    return out;
  }
}

namespace {

std::uint64_t max_value(const TypeExpr &t) {
  if (t.as<type::UnsignedIndex>())
    return std::numeric_limits<std::uint64_t>::max();
  if (const auto *u = t.as<type::UnsignedInt>())
    return u->width >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << u->width) - 1;
  if (const auto *s = t.as<type::SignedInt>())
    return (std::uint64_t{1} << (s->width - 1)) - 1;
  return 0;
}

/// Strongly connected components of the call graph (Tarjan). Returns, for
/// each function index, the id of its component.
class CallGraph {
public:
  explicit CallGraph(std::size_t n) : edges_(n) {}

  void add_edge(int from, int to) { edges_[static_cast<std::size_t>(from)].insert(to); }
  bool has_self_loop(int v) const { return edges_[static_cast<std::size_t>(v)].count(v) > 0; }

  std::vector<int> components() {
    const std::size_t n = edges_.size();
    index_.assign(n, -1);
    low_.assign(n, 0);
    on_stack_.assign(n, false);
    comp_.assign(n, -1);
    for (std::size_t v = 0; v < n; ++v)
      if (index_[v] < 0)
        strongconnect(static_cast<int>(v));
    return comp_;
  }

private:
  void strongconnect(int v) {
    const auto uv = static_cast<std::size_t>(v);
    index_[uv] = low_[uv] = counter_++;
    stack_.push_back(v);
    on_stack_[uv] = true;
    for (int w : edges_[uv]) {
      const auto uw = static_cast<std::size_t>(w);
      if (index_[uw] < 0) {
        strongconnect(w);
        low_[uv] = std::min(low_[uv], low_[uw]);
      } else if (on_stack_[uw]) {
        low_[uv] = std::min(low_[uv], index_[uw]);
      }
    }
    if (low_[uv] == index_[uv]) {
      int w;
      do {
        w = stack_.back();
        stack_.pop_back();
        on_stack_[static_cast<std::size_t>(w)] = false;
        comp_[static_cast<std::size_t>(w)] = next_comp_;
      } while (w != v);
      ++next_comp_;
    }
  }

  std::vector<std::set<int>> edges_;
  std::vector<int> index_, low_, comp_, stack_;
  std::vector<bool> on_stack_;
  int counter_ = 0;
  int next_comp_ = 0;
};

void collect_calls(const Expr &e, const std::function<void(const expr::Call &, const Expr &)> &fn) {
  std::visit(overloaded{
                 [](const expr::IntLit &) {},
                 [](const expr::BoolLit &) {},
                 [](const expr::VarRef &) {},
                 [&](const expr::FieldAccess &f) { collect_calls(*f.base, fn); },
                 [&](const expr::Index &i) {
                   collect_calls(*i.base, fn);
                   collect_calls(*i.index, fn);
                 },
                 [&](const expr::Call &c) {
                   fn(c, e);
                   for (const auto &a : c.args)
                     collect_calls(a, fn);
                 },
                 [&](const expr::Binary &b) {
                   collect_calls(*b.lhs, fn);
                   collect_calls(*b.rhs, fn);
                 },
                 [&](const expr::Unary &u) { collect_calls(*u.operand, fn); },
                 [&](const expr::Cast &c) { collect_calls(*c.operand, fn); },
             },
             e.node);
}

void collect_calls(const Block &body, const std::function<void(const expr::Call &, const Expr &)> &fn) {
  for (const auto &s : body) {
    std::visit(overloaded{
                   [&](const stmt::Let &l) {
                     if (l.init)
                       collect_calls(*l.init, fn);
                   },
                   [&](const stmt::Assign &a) {
                     for (const auto &step : a.target.steps)
                       if (const auto *sub = std::get_if<LValue::Subscript>(&step))
                         collect_calls(sub->index, fn);
                     collect_calls(a.value, fn);
                   },
                   [&](const stmt::If &i) {
                     collect_calls(i.cond, fn);
                     collect_calls(i.then_body, fn);
                     if (i.else_body)
                       collect_calls(*i.else_body, fn);
                   },
                   [&](const stmt::ForRange &f) {
                     collect_calls(f.lower, fn);
                     collect_calls(f.upper, fn);
                     collect_calls(f.body, fn);
                   },
                   [&](const stmt::Return &r) { collect_calls(r.value, fn); },
               },
               s.node);
  }
}

bool always_returns(const Block &body) {
  for (const auto &s : body) {
    if (s.as<stmt::Return>())
      return true;
    if (const auto *i = s.as<stmt::If>())
      if (i->else_body && always_returns(i->then_body) && always_returns(*i->else_body))
        return true;
  }
  return false;
}

class Checker {
public:
  explicit Checker(const Program &program) : program_(program), env_(program) {}

  std::vector<Diagnostic> run() {
    analyse_call_graph();
    check_item_names();
    for (const auto &item : program_.items) {
      std::visit(overloaded{
                     [&](const ConstDef &c) { check_const(c); },
                     [&](const StaticDef &s) { check_static(s); },
                     [&](const RecordDef &r) { check_record(r); },
                     [&](const FnDef &f) { check_fn(f); },
                 },
                 item);
    }
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic &a, const Diagnostic &b) {
      return std::tie(a.span.start_line, a.span.start_col) < std::tie(b.span.start_line, b.span.start_col);
    });
    return std::move(diags_);
  }

private:
  void report(std::string_view code, const SourceSpan &span, std::string message) {
    const RuleInfo *rule = find_rule(code);
    diags_.push_back(Diagnostic{rule->severity, std::string(code), std::move(message), span});
  }

  //===--------------------------------------------------------------------===//
  // Program-wide checks
  //===--------------------------------------------------------------------===//

  void analyse_call_graph() {
    const auto fns = program_.all<FnDef>();
    CallGraph graph(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) {
      collect_calls(fns[i]->body, [&](const expr::Call &c, const Expr &) {
        const int callee = env_.function_index(c.callee);
        if (callee >= 0)
          graph.add_edge(static_cast<int>(i), callee);
      });
    }
    component_ = graph.components();
    std::map<int, std::vector<std::string>> members;
    for (std::size_t i = 0; i < fns.size(); ++i)
      members[component_[i]].push_back(fns[i]->name);
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const auto &group = members[component_[i]];
      if (group.size() > 1 || graph.has_self_loop(static_cast<int>(i))) {
        recursive_.insert(fns[i]->name);
        std::string names;
        for (const auto &n : group)
          names += (names.empty() ? "" : ", ") + n;
        report("R002", fns[i]->name_span,
               group.size() > 1 ? "function '" + fns[i]->name + "' is mutually recursive with: " + names
                                : "function '" + fns[i]->name + "' calls itself");
      }
    }
  }

  bool same_cycle(const std::string &a, const std::string &b) const {
    const int ia = env_.function_index(a);
    const int ib = env_.function_index(b);
    if (ia < 0 || ib < 0)
      return false;
    return component_[static_cast<std::size_t>(ia)] == component_[static_cast<std::size_t>(ib)] &&
           recursive_.count(a) > 0;
  }

  void check_item_names() {
    std::map<std::string, const Item *> values;
    std::map<std::string, const Item *> records;
    for (const auto &item : program_.items) {
      auto &ns = std::holds_alternative<RecordDef>(item) ? records : values;
      const auto &name = name_of(item);
      if (!ns.try_emplace(name, &item).second) {
        const SourceSpan span = std::visit([](const auto &i) { return i.name_span; }, item);
        report("R009", span, "'" + name + "' is defined more than once");
      }
    }
  }

  //===--------------------------------------------------------------------===//
  // Types
  //===--------------------------------------------------------------------===//

  enum class TypeSite { Param, Local, Return, Field, Constant, Cast };

  void check_type(const TypeExpr &t, TypeSite site) {
    if (const auto *u = t.as<type::UnsignedIndex>(); u && u->spelled_uint)
      report("R012", t.span, "'uint' is not a Rust type; treating it as 'usize'");
    if (const auto *r = t.as<type::Reference>()) {
      report("R001", t.span, "reference types are not allowed; pass and return aggregates by value");
      check_type(*r->referent, site);
      return;
    }
    if (const auto *n = t.as<type::Named>()) {
      if (!env_.record(n->name))
        report("R009", t.span, "unknown type '" + n->name + "'");
      else if (site == TypeSite::Field)
        report("R011", t.span, "nested record fields are not supported");
      else if (site == TypeSite::Constant || site == TypeSite::Cast)
        report("R011", t.span, "record type not allowed here");
      return;
    }
    if (const auto *a = t.as<type::ArrayOf>()) {
      if (site == TypeSite::Constant || site == TypeSite::Cast)
        report("R011", t.span, "array type not allowed here");
      if (!a->element->is_scalar())
        report("R011", a->element->span, "array elements must be scalars");
      check_type(*a->element, site);
      std::uint64_t length = 0;
      if (const auto *name = std::get_if<std::string>(&a->length)) {
        const ConstDef *c = env_.constant(*name);
        if (!c) {
          report("R009", t.span, "array length '" + *name + "' is not a defined constant");
          return;
        }
        length = c->value;
      } else {
        length = std::get<std::uint64_t>(a->length);
      }
      if (length == 0)
        report("R011", t.span, "array length must be positive");
      return;
    }
    if (site == TypeSite::Constant && t.as<type::Bool>())
      report("R011", t.span, "constants must have an integer type");
  }

  //===--------------------------------------------------------------------===//
  // Items
  //===--------------------------------------------------------------------===//

  void check_const(const ConstDef &c) {
    check_type(c.declared_type, TypeSite::Constant);
    if (c.declared_type.is_scalar() && !c.declared_type.as<type::Bool>() && c.value > max_value(c.declared_type))
      report("R011", c.span, "value " + std::to_string(c.value) + " does not fit in " + render_type(c.declared_type));
  }

  void check_static(const StaticDef &s) {
    report("R005", s.span,
           std::string(s.is_mutable ? "mutable global state" : "static items") +
               " not allowed; only const items may appear at top level");
    check_type(s.declared_type, TypeSite::Constant);
  }

  void check_record(const RecordDef &r) {
    std::set<std::string> seen;
    for (const auto &f : r.fields) {
      if (!seen.insert(f.name).second)
        report("R009", f.span, "field '" + f.name + "' is declared more than once");
      check_type(f.type, TypeSite::Field);
    }
  }

  void check_fn(const FnDef &f) {
    current_fn_ = &f;
    env_.push_scope();
    std::set<std::string> seen;
    for (const auto &p : f.params) {
      if (!seen.insert(p.name).second)
        report("R009", p.span, "parameter '" + p.name + "' is declared more than once");
      check_type(p.type, TypeSite::Param);
      env_.bind(p.name, Binding{p.type, p.is_mutable, false, false});
    }
    check_type(f.return_type, TypeSite::Return);
    block(f.body);
    if (!always_returns(f.body))
      report("R006", f.name_span, "function '" + f.name + "' does not return on every path");
    env_.pop_scope();
    current_fn_ = nullptr;
  }

  //===--------------------------------------------------------------------===//
  // Statements
  //===--------------------------------------------------------------------===//

  void block(const Block &body) {
    env_.push_scope();
    for (const auto &s : body)
      statement(s);
    env_.pop_scope();
  }

  void statement(const Stmt &s) {
    std::visit(overloaded{
                   [&](const stmt::Let &l) {
                     check_type(l.declared_type, TypeSite::Local);
                     if (l.init)
                       expression(*l.init);
                     env_.bind(l.name, Binding{l.declared_type, l.is_mutable, !l.init, false});
                   },
                   [&](const stmt::Assign &a) { assignment(a); },
                   [&](const stmt::If &i) {
                     expression(i.cond);
                     block(i.then_body);
                     if (i.else_body)
                       block(*i.else_body);
                   },
                   [&](const stmt::ForRange &f) { for_range(f); },
                   [&](const stmt::Return &r) {
                     if (loop_depth_ > 0)
                       report("R003", s.span, "return inside a loop body is not allowed");
                     expression(r.value);
                   },
               },
               s.node);
  }

  void assignment(const stmt::Assign &a) {
    const Binding *b = env_.local(a.target.root);
    if (!b) {
      if (env_.global_static(a.target.root))
        report("R005", a.target.span, "assignment to global state '" + a.target.root + "'");
      else if (env_.constant(a.target.root))
        report("R010", a.target.span, "cannot assign to constant '" + a.target.root + "'");
      else
        report("R009", a.target.span, "undefined variable '" + a.target.root + "'");
    } else if (b->is_loop_var) {
      report("R003", a.target.span, "loop variable '" + a.target.root + "' is assigned in the loop body");
    } else if (!b->is_mutable && !(b->deferred_init && a.target.steps.empty())) {
      report("R010", a.target.span, "cannot assign to immutable binding '" + a.target.root + "'");
    }
    // Walk the target path like an expression so index and field rules apply.
    if (b) {
      expression(a.target.to_expr());
    } else {
      for (const auto &step : a.target.steps)
        if (const auto *sub = std::get_if<LValue::Subscript>(&step))
          expression(sub->index);
    }
    expression(a.value);
  }

  void for_range(const stmt::ForRange &f) {
    for (const Expr *bound : {&f.lower, &f.upper}) {
      expression(*bound);
      auto value = evaluate_const(*bound, env_.const_values());
      if (const auto *err = std::get_if<ConstEvalError>(&value)) {
        switch (err->kind) {
        case ConstEvalError::Kind::NonConstant:
          report("R003", bound->span, "loop bound is not a compile-time constant");
          break;
        case ConstEvalError::Kind::Underflow:
          report("R003", bound->span, "loop bound underflows below zero");
          break;
        case ConstEvalError::Kind::Overflow:
          report("R003", bound->span, "loop bound overflows");
          break;
        }
      }
    }
    env_.push_scope();
    env_.bind(f.var, Binding{detail::make_type(type::UnsignedIndex{}, f.var_span), false, false, true});
    ++loop_depth_;
    block(f.body);
    --loop_depth_;
    env_.pop_scope();
  }

  //===--------------------------------------------------------------------===//
  // Expressions
  //===--------------------------------------------------------------------===//

  void expression(const Expr &e) {
    std::visit(overloaded{
                   [](const expr::IntLit &) {},
                   [](const expr::BoolLit &) {},
                   [&](const expr::VarRef &v) {
                     if (env_.local(v.name) || env_.constant(v.name))
                       return;
                     if (env_.global_static(v.name))
                       report("R005", e.span, "use of global state '" + v.name + "'");
                     else
                       report("R009", e.span, "undefined name '" + v.name + "'");
                   },
                   [&](const expr::FieldAccess &f) {
                     expression(*f.base);
                     auto base = env_.infer(*f.base);
                     if (!base.type)
                       return;
                     const auto *named = detail::strip_references(*base.type).as<type::Named>();
                     const RecordDef *rec = named ? env_.record(named->name) : nullptr;
                     if (!rec) {
                       report("R009", e.span, "field access '." + f.field + "' on a non-record value");
                       return;
                     }
                     for (const auto &field : rec->fields)
                       if (field.name == f.field)
                         return;
                     report("R009", e.span, "record '" + rec->name + "' has no field '" + f.field + "'");
                   },
                   [&](const expr::Index &i) {
                     expression(*i.base);
                     expression(*i.index);
                     auto base = env_.infer(*i.base);
                     if (base.type && !detail::strip_references(*base.type).as<type::ArrayOf>())
                       report("R009", e.span, "indexing a value that is not an array");
                     auto idx = env_.infer(*i.index);
                     if (idx.type && !detail::is_unsigned_index(*idx.type))
                       report("R004", i.index->span,
                              "array index has type " + render_type(*idx.type) + ", expected usize");
                   },
                   [&](const expr::Call &c) {
                     call(c, e);
                     for (const auto &a : c.args)
                       expression(a);
                   },
                   [&](const expr::Binary &b) {
                     expression(*b.lhs);
                     expression(*b.rhs);
                   },
                   [&](const expr::Unary &u) { expression(*u.operand); },
                   [&](const expr::Cast &c) {
                     expression(*c.operand);
                     check_type(c.target, TypeSite::Cast);
                   },
               },
               e.node);
  }

  void call(const expr::Call &c, const Expr &e) {
    const FnDef *callee = env_.function(c.callee);
    if (!callee) {
      report("R007", e.span, "call to '" + c.callee + "', which is not defined in this program");
      return;
    }
    if (callee->params.size() != c.args.size())
      report("R007", e.span,
             "'" + c.callee + "' takes " + std::to_string(callee->params.size()) + " argument(s), " +
                 std::to_string(c.args.size()) + " given");
    if (!current_fn_ || callee == current_fn_)
      return;
    if (env_.function_index(c.callee) > env_.function_index(current_fn_->name) &&
        !same_cycle(c.callee, current_fn_->name))
      report("R008", e.span, "'" + c.callee + "' is called before it is defined");
  }

  const Program &program_;
  TypeEnv env_;
  std::vector<Diagnostic> diags_;
  std::vector<int> component_;
  std::set<std::string> recursive_;
  const FnDef *current_fn_ = nullptr;
  int loop_depth_ = 0;
};

} // namespace

std::vector<Diagnostic> check_program(const Program &program) { return Checker(program).run(); }

} // namespace rar

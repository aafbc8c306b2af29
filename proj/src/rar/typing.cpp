#include "typing.hpp"

namespace rar::detail {

TypeEnv::TypeEnv(const Program &program) {
  int fn_index = 0;
  for (const auto &item : program.items) {
    std::visit(overloaded{
                   [&](const ConstDef &c) {
                     consts_.try_emplace(c.name, &c);
                     const_values_.try_emplace(c.name, c.value);
                   },
                   [&](const StaticDef &s) { statics_.try_emplace(s.name, &s); },
                   [&](const RecordDef &r) { records_.try_emplace(r.name, &r); },
                   [&](const FnDef &f) { fns_.try_emplace(f.name, &f, fn_index++); },
               },
               item);
  }
}

const Binding *TypeEnv::local(const std::string &name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    if (auto found = it->find(name); found != it->end())
      return &found->second;
  return nullptr;
}

const ConstDef *TypeEnv::constant(const std::string &name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : it->second;
}

const StaticDef *TypeEnv::global_static(const std::string &name) const {
  auto it = statics_.find(name);
  return it == statics_.end() ? nullptr : it->second;
}

const RecordDef *TypeEnv::record(const std::string &name) const {
  auto it = records_.find(name);
  return it == records_.end() ? nullptr : it->second;
}

const FnDef *TypeEnv::function(const std::string &name) const {
  auto it = fns_.find(name);
  return it == fns_.end() ? nullptr : it->second.first;
}

int TypeEnv::function_index(const std::string &name) const {
  auto it = fns_.find(name);
  return it == fns_.end() ? -1 : it->second.second;
}

TypeExpr make_type(TypeExpr::Variant v, const SourceSpan &span) { return TypeExpr{std::move(v), span}; }

bool is_unsigned_index(const TypeExpr &t) { return t.as<type::UnsignedIndex>() != nullptr; }
bool is_bool(const TypeExpr &t) { return t.as<type::Bool>() != nullptr; }

const TypeExpr &strip_references(const TypeExpr &t) {
  if (const auto *r = t.as<type::Reference>())
    return strip_references(*r->referent);
  return t;
}

InferredType TypeEnv::infer(const Expr &e) const {
  return std::visit(
      overloaded{
          [](const expr::IntLit &) { return InferredType::literal(); },
          [](const expr::BoolLit &) { return InferredType::of(make_type(type::Bool{})); },
          [&](const expr::VarRef &v) {
            if (const auto *b = local(v.name))
              return InferredType::of(b->type);
            if (const auto *c = constant(v.name))
              return InferredType::of(c->declared_type);
            if (const auto *s = global_static(v.name))
              return InferredType::of(s->declared_type);
            return InferredType::unknown();
          },
          [&](const expr::FieldAccess &f) {
            auto base = infer(*f.base);
            if (!base.type)
              return InferredType::unknown();
            const auto *named = strip_references(*base.type).as<type::Named>();
            const RecordDef *rec = named ? record(named->name) : nullptr;
            if (!rec)
              return InferredType::unknown();
            for (const auto &field : rec->fields)
              if (field.name == f.field)
                return InferredType::of(field.type);
            return InferredType::unknown();
          },
          [&](const expr::Index &i) {
            auto base = infer(*i.base);
            if (!base.type)
              return InferredType::unknown();
            if (const auto *arr = strip_references(*base.type).as<type::ArrayOf>())
              return InferredType::of(*arr->element);
            return InferredType::unknown();
          },
          [&](const expr::Call &c) {
            if (const auto *fn = function(c.callee))
              return InferredType::of(fn->return_type);
            return InferredType::unknown();
          },
          [&](const expr::Binary &b) {
            if (is_comparison(b.op) || is_logical(b.op))
              return InferredType::of(make_type(type::Bool{}));
            auto lhs = infer(*b.lhs);
            if (b.op == BinaryOp::Shl || b.op == BinaryOp::Shr)
              return lhs;
            if (lhs.type)
              return lhs;
            auto rhs = infer(*b.rhs);
            if (rhs.type)
              return rhs;
            if (lhs.int_literal && rhs.int_literal)
              return InferredType::literal();
            return InferredType::unknown();
          },
          [&](const expr::Unary &u) { return infer(*u.operand); },
          [](const expr::Cast &c) { return InferredType::of(c.target); },
      },
      e.node);
}

} // namespace rar::detail

#include "rar/emitter.hpp"

#include "typing.hpp"

#include <sstream>
#include <stdexcept>

namespace rar {

std::optional<Dialect> parse_dialect(std::string_view name) {
  if (name == "ac")
    return Dialect::AlgorithmicC;
  if (name == "vivado")
    return Dialect::VivadoHLS;
  if (name == "plain")
    return Dialect::PlainCxx;
  return std::nullopt;
}

const char *dialect_name(Dialect dialect) {
  switch (dialect) {
  case Dialect::AlgorithmicC:
    return "ac";
  case Dialect::VivadoHLS:
    return "vivado";
  case Dialect::PlainCxx:
    return "plain";
  }
  return "?";
}

std::string map_type(const TypeExpr &t) {
  return std::visit(overloaded{
                        [](const type::UnsignedIndex &) -> std::string { return "uint"; },
                        [](const type::SignedInt &s) -> std::string { return "si" + std::to_string(s.width); },
                        [](const type::UnsignedInt &u) -> std::string { return "ui" + std::to_string(u.width); },
                        [](const type::Bool &) -> std::string { return "bool"; },
                        [](const type::ArrayOf &a) -> std::string {
                          const std::string len = std::holds_alternative<std::string>(a.length)
                                                      ? std::get<std::string>(a.length)
                                                      : std::to_string(std::get<std::uint64_t>(a.length));
                          return "array<" + map_type(*a.element) + ", " + len + ">";
                        },
                        [](const type::Named &n) -> std::string { return n.name; },
                        // Rejected by the checker (R001); rendered as the referent.
                        [](const type::Reference &r) -> std::string { return map_type(*r.referent); },
                    },
                    t.node);
}

namespace {

constexpr std::string_view kBanner = "// Restricted Algorithmic C generated from RAR source. Do not edit.\n";

std::string bit_accurate_prologue(std::string_view default_symbol) {
  std::string out(kBanner);
  out += "\n#if !defined(RAC_USE_AC_INT) && !defined(RAC_USE_AP_INT)\n";
  out += "#define ";
  out += default_symbol;
  out += "\n#endif\n\n";
  out += "#if defined(RAC_USE_AC_INT)\n";
  out += "#include <ac_int.h>\n";
  for (int w : {8, 16, 32, 64})
    out += "typedef ac_int<" + std::to_string(w) + ", false> ui" + std::to_string(w) + ";\n";
  for (int w : {8, 16, 32, 64})
    out += "typedef ac_int<" + std::to_string(w) + ", true> si" + std::to_string(w) + ";\n";
  out += "#elif defined(RAC_USE_AP_INT)\n";
  out += "#include <ap_int.h>\n";
  for (int w : {8, 16, 32, 64})
    out += "typedef ap_uint<" + std::to_string(w) + "> ui" + std::to_string(w) + ";\n";
  for (int w : {8, 16, 32, 64})
    out += "typedef ap_int<" + std::to_string(w) + "> si" + std::to_string(w) + ";\n";
  out += "#endif\n\n";
  out += "typedef unsigned int uint;\n\n";
  out += "template <typename T, uint N> struct array {\n"
         "  T elts[N];\n"
         "  T &operator[](uint i) { return elts[i]; }\n"
         "  const T &operator[](uint i) const { return elts[i]; }\n"
         "};\n";
  return out;
}

// C++ binding strength, higher binds tighter.
int c_precedence(BinaryOp op) {
  switch (op) {
  case BinaryOp::Mul:
  case BinaryOp::Div:
  case BinaryOp::Rem:
    return 13;
  case BinaryOp::Add:
  case BinaryOp::Sub:
    return 12;
  case BinaryOp::Shl:
  case BinaryOp::Shr:
    return 11;
  case BinaryOp::Lt:
  case BinaryOp::Le:
  case BinaryOp::Gt:
  case BinaryOp::Ge:
    return 10;
  case BinaryOp::Eq:
  case BinaryOp::Ne:
    return 9;
  case BinaryOp::BitAnd:
    return 8;
  case BinaryOp::BitXor:
    return 7;
  case BinaryOp::BitOr:
    return 6;
  case BinaryOp::LogicalAnd:
    return 5;
  case BinaryOp::LogicalOr:
    return 4;
  }
  return 0;
}

constexpr int kUnaryPrec = 15;
constexpr int kPostfixPrec = 16;
constexpr int kAtomPrec = 17;

int c_precedence(const Expr &e) {
  if (const auto *b = e.as<expr::Binary>())
    return c_precedence(b->op);
  if (e.as<expr::Unary>() || e.as<expr::Cast>())
    return kUnaryPrec;
  if (e.as<expr::FieldAccess>() || e.as<expr::Index>() || e.as<expr::Call>())
    return kPostfixPrec;
  return kAtomPrec;
}

bool is_bitwise(BinaryOp op) {
  return op == BinaryOp::BitAnd || op == BinaryOp::BitOr || op == BinaryOp::BitXor;
}

// Mixes that are correct by precedence but that compilers flag with
// -Wparentheses, or that read ambiguously.
bool wants_clarifying_parens(BinaryOp parent, BinaryOp child) {
  if (parent == BinaryOp::LogicalOr && child == BinaryOp::LogicalAnd)
    return true;
  if (is_comparison(parent) && is_comparison(child))
    return true;
  if (is_bitwise(parent) && child != parent && !is_logical(child))
    return true;
  if ((parent == BinaryOp::Shl || parent == BinaryOp::Shr) && (child == BinaryOp::Add || child == BinaryOp::Sub))
    return true;
  return false;
}

class Emitter {
public:
  Emitter(const Program &program, const EmitOptions &opts) : program_(program), opts_(opts), env_(program) {}

  std::string run() {
    out_ << header_prologue(opts_.dialect);
    section<ConstDef>([&](const ConstDef &c) {
      out_ << "const " << map_type(c.declared_type) << ' ' << c.name << " = " << c.value << ";\n";
    });
    section<RecordDef>([&](const RecordDef &r) {
      out_ << "struct " << r.name << " {\n";
      for (const auto &f : r.fields)
        out_ << pad(1) << map_type(f.type) << ' ' << f.name << ";\n";
      out_ << "};\n";
    });
    for (const auto *fn : program_.all<FnDef>()) {
      out_ << '\n';
      function(*fn);
    }
    return out_.str();
  }

private:
  template <typename T, typename F> void section(F &&each) {
    const auto items = program_.all<T>();
    if (items.empty())
      return;
    out_ << '\n';
    for (const auto *item : items)
      each(*item);
  }

  std::string pad(int depth) const {
    return std::string(static_cast<std::size_t>(depth * opts_.indent_width), ' ');
  }

  void function(const FnDef &fn) {
    env_.push_scope();
    out_ << map_type(fn.return_type) << ' ' << fn.name << '(';
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      const auto &p = fn.params[i];
      out_ << (i ? ", " : "") << map_type(p.type) << ' ' << p.name;
      env_.bind(p.name, detail::Binding{p.type, p.is_mutable, false, false});
    }
    out_ << ") {\n";
    block(fn.body, 1);
    out_ << "}\n";
    env_.pop_scope();
  }

  void block(const Block &body, int depth) {
    env_.push_scope();
    for (const auto &s : body)
      statement(s, depth);
    env_.pop_scope();
  }

  void statement(const Stmt &s, int depth) {
    std::visit(overloaded{
                   [&](const stmt::Let &l) {
                     out_ << pad(depth) << map_type(l.declared_type) << ' ' << l.name;
                     if (l.init)
                       out_ << " = " << expression(*l.init);
                     out_ << ";\n";
                     env_.bind(l.name, detail::Binding{l.declared_type, l.is_mutable, !l.init, false});
                   },
                   [&](const stmt::Assign &a) {
                     out_ << pad(depth) << expression(a.target.to_expr()) << " = " << expression(a.value)
                          << ";\n";
                   },
                   [&](const stmt::If &i) {
                     out_ << pad(depth);
                     if_chain(i, depth);
                   },
                   [&](const stmt::ForRange &f) {
                     out_ << pad(depth) << "for (uint " << f.var << " = " << expression(f.lower) << "; "
                          << f.var << " < " << expression(f.upper) << "; " << f.var << "++) {\n";
                     env_.push_scope();
                     env_.bind(f.var, detail::Binding{detail::make_type(type::UnsignedIndex{}), false, false, true});
                     block(f.body, depth + 1);
                     env_.pop_scope();
                     out_ << pad(depth) << "}\n";
                   },
                   [&](const stmt::Return &r) { out_ << pad(depth) << "return " << expression(r.value) << ";\n"; },
               },
               s.node);
  }

  void if_chain(const stmt::If &i, int depth) {
    out_ << "if (" << expression(i.cond) << ") {\n";
    block(i.then_body, depth + 1);
    out_ << pad(depth) << '}';
    if (i.else_body) {
      const Block &els = *i.else_body;
      if (els.size() == 1 && els.front().as<stmt::If>()) {
        out_ << " else ";
        if_chain(*els.front().as<stmt::If>(), depth);
        return;
      }
      out_ << " else {\n";
      block(els, depth + 1);
      out_ << pad(depth) << '}';
    }
    out_ << '\n';
  }

  std::string wrap(const Expr &e, bool parens) const {
    const std::string inner = expression(e);
    return parens ? "(" + inner + ")" : inner;
  }

  std::string expression(const Expr &e) const {
    return std::visit(
        overloaded{
            [](const expr::IntLit &i) { return i.lexeme.empty() ? std::to_string(i.value) : i.lexeme; },
            [](const expr::BoolLit &b) { return std::string(b.value ? "true" : "false"); },
            [](const expr::VarRef &v) { return v.name; },
            [&](const expr::FieldAccess &f) {
              return wrap(*f.base, c_precedence(*f.base) < kPostfixPrec) + "." + f.field;
            },
            [&](const expr::Index &i) {
              return wrap(*i.base, c_precedence(*i.base) < kPostfixPrec) + "[" + expression(*i.index) + "]";
            },
            [&](const expr::Call &c) {
              std::string out = c.callee + "(";
              for (std::size_t k = 0; k < c.args.size(); ++k)
                out += (k ? ", " : "") + expression(c.args[k]);
              return out + ")";
            },
            [&](const expr::Binary &b) {
              const int prec = c_precedence(b.op);
              auto needs = [&](const Expr &child, bool right) {
                const int cp = c_precedence(child);
                if (cp < prec || (right && cp == prec))
                  return true;
                const auto *cb = child.as<expr::Binary>();
                return cb && wants_clarifying_parens(b.op, cb->op);
              };
              return wrap(*b.lhs, needs(*b.lhs, false)) + " " + spelling(b.op) + " " +
                     wrap(*b.rhs, needs(*b.rhs, true));
            },
            [&](const expr::Unary &u) {
              std::string op = "-";
              if (u.op == UnaryOp::Not) {
                const auto operand = env_.infer(*u.operand);
                op = (operand.type && !detail::is_bool(*operand.type)) || operand.int_literal ? "~" : "!";
              }
              const bool parens = c_precedence(*u.operand) < kUnaryPrec || u.operand->as<expr::Unary>() != nullptr;
              return op + wrap(*u.operand, parens);
            },
            [&](const expr::Cast &c) {
              return "(" + map_type(c.target) + ")" + wrap(*c.operand, c_precedence(*c.operand) < kUnaryPrec);
            },
        },
        e.node);
  }

  const Program &program_;
  EmitOptions opts_;
  detail::TypeEnv env_;
  std::ostringstream out_;
};

} // namespace

std::string header_prologue(Dialect dialect) {
  switch (dialect) {
  case Dialect::PlainCxx:
    return std::string(kBanner) + "\n#include \"rac_shim.h\"\n";
  case Dialect::AlgorithmicC:
    return bit_accurate_prologue("RAC_USE_AC_INT");
  case Dialect::VivadoHLS:
    return bit_accurate_prologue("RAC_USE_AP_INT");
  }
  return {};
}

std::string emit_program(const Program &program, const EmitOptions &opts) {
  if (opts.indent_width < 1 || opts.indent_width > 8)
    throw std::invalid_argument("indent width must lie in [1, 8]");
  return Emitter(program, opts).run();
}

} // namespace rar

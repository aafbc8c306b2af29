#include "rar/emitter.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace rar;
using testing_support::parse_ok;

namespace {

TypeExpr make(TypeExpr::Variant node) { return TypeExpr{std::move(node), {}}; }

// Statement kinds in source order, descending into nested blocks.
void ast_shape(const Block &block, std::vector<std::string> &out) {
  for (const auto &s : block) {
    std::visit(overloaded{[&](const stmt::Let &) { out.push_back("decl"); },
                          [&](const stmt::Assign &) { out.push_back("assign"); },
                          [&](const stmt::If &i) {
                            out.push_back("if");
                            ast_shape(i.then_body, out);
                            if (i.else_body)
                              ast_shape(*i.else_body, out);
                          },
                          [&](const stmt::ForRange &f) {
                            out.push_back("for");
                            ast_shape(f.body, out);
                          },
                          [&](const stmt::Return &) { out.push_back("return"); }},
               s.node);
  }
}

std::string trim(const std::string &line) {
  const auto first = line.find_first_not_of(' ');
  return first == std::string::npos ? "" : line.substr(first);
}

// Statement kinds of one emitted function body, read line by line.
std::vector<std::string> emitted_shape(const std::string &text, const std::string &fn_name) {
  static const std::set<std::string> type_words{"uint", "bool", "si8", "si16", "si32", "si64",
                                                "ui8",  "ui16", "ui32", "ui64", "Arrayset"};
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  bool inside = false;
  while (std::getline(in, line)) {
    if (!inside) {
      inside = line.find(" " + fn_name + "(") != std::string::npos && line.back() == '{';
      continue;
    }
    if (line == "}")
      break;
    const std::string t = trim(line);
    if (t.rfind("for (", 0) == 0)
      out.push_back("for");
    else if (t.rfind("if (", 0) == 0 || t.rfind("} else if (", 0) == 0)
      out.push_back("if");
    else if (t.rfind("return ", 0) == 0)
      out.push_back("return");
    else if (t == "}" || t == "} else {")
      continue;
    else if (type_words.count(t.substr(0, t.find(' '))) || t.rfind("array<", 0) == 0)
      out.push_back("decl");
    else if (!t.empty() && t.back() == ';')
      out.push_back("assign");
    else
      out.push_back("?" + t);
  }
  return out;
}

} // namespace

TEST(Emitter, MapType) {
  EXPECT_EQ(map_type(make(type::UnsignedIndex{})), "uint");
  EXPECT_EQ(map_type(make(type::UnsignedIndex{true})), "uint");
  EXPECT_EQ(map_type(make(type::SignedInt{64})), "si64");
  EXPECT_EQ(map_type(make(type::UnsignedInt{8})), "ui8");
  EXPECT_EQ(map_type(make(type::Bool{})), "bool");
  EXPECT_EQ(map_type(make(type::ArrayOf{make(type::UnsignedIndex{}), std::string("ARR_SZ")})),
            "array<uint, ARR_SZ>");
  EXPECT_EQ(map_type(make(type::ArrayOf{make(type::SignedInt{16}), std::uint64_t{4}})), "array<si16, 4>");
  EXPECT_EQ(map_type(make(type::Named{"Arrayset"})), "Arrayset");
}

TEST(Emitter, ConstantDefinition) {
  const std::string text = emit_program(parse_ok("const ARR_SZ: usize = 256;"));
  EXPECT_NE(text.find("const uint ARR_SZ = 256;\n"), std::string::npos);
}

TEST(Emitter, Prologues) {
  EXPECT_NE(header_prologue(Dialect::PlainCxx).find("#include \"rac_shim.h\""), std::string::npos);
  const std::string ac = header_prologue(Dialect::AlgorithmicC);
  const std::string vivado = header_prologue(Dialect::VivadoHLS);
  for (const auto &p : {ac, vivado}) {
    EXPECT_NE(p.find("#if defined(RAC_USE_AC_INT)"), std::string::npos);
    EXPECT_NE(p.find("#include <ac_int.h>"), std::string::npos);
    EXPECT_NE(p.find("#elif defined(RAC_USE_AP_INT)"), std::string::npos);
    EXPECT_NE(p.find("#include <ap_int.h>"), std::string::npos);
    EXPECT_EQ(p.find("rac_shim.h"), std::string::npos);
  }
  EXPECT_NE(ac.find("#define RAC_USE_AC_INT\n"), std::string::npos);
  EXPECT_EQ(ac.find("#define RAC_USE_AP_INT\n"), std::string::npos);
  EXPECT_NE(vivado.find("#define RAC_USE_AP_INT\n"), std::string::npos);
  EXPECT_EQ(vivado.find("#define RAC_USE_AC_INT\n"), std::string::npos);
}

TEST(Emitter, DialectNames) {
  for (Dialect d : {Dialect::AlgorithmicC, Dialect::VivadoHLS, Dialect::PlainCxx})
    EXPECT_EQ(parse_dialect(dialect_name(d)), d);
  EXPECT_FALSE(parse_dialect("hls").has_value());
}

TEST(Emitter, GoldenFiles) {
  const Program program = testing_support::corpus_program();
  for (const auto &[dialect, name] : {std::pair{Dialect::PlainCxx, "plain"}, std::pair{Dialect::AlgorithmicC, "ac"},
                                      std::pair{Dialect::VivadoHLS, "vivado"}}) {
    const std::string golden =
        testing_support::read_file(testing_support::kGoldenDir / ("arrayset." + std::string(name) + ".cpp"));
    EXPECT_EQ(emit_program(program, {dialect}), golden) << name;
  }
}

TEST(Emitter, Deterministic) {
  const Program program = testing_support::corpus_program();
  for (Dialect d : {Dialect::AlgorithmicC, Dialect::VivadoHLS, Dialect::PlainCxx})
    EXPECT_EQ(emit_program(program, {d}), emit_program(testing_support::corpus_program(), {d}));
}

TEST(Emitter, IndentWidth) {
  const Program program = parse_ok("fn f(x: u8) -> u8 { return x; }");
  EXPECT_NE(emit_program(program, {Dialect::PlainCxx, 4}).find("\n    return x;\n"), std::string::npos);
  EXPECT_NE(emit_program(program, {Dialect::PlainCxx, 1}).find("\n return x;\n"), std::string::npos);
  EXPECT_THROW(emit_program(program, {Dialect::PlainCxx, 0}), std::invalid_argument);
  EXPECT_THROW(emit_program(program, {Dialect::PlainCxx, 9}), std::invalid_argument);
}

TEST(Emitter, AsetAddShape) {
  const std::string text = emit_program(testing_support::corpus_program());
  const auto start = text.find("Arrayset aset_add(si64 val, Arrayset aset) {\n");
  ASSERT_NE(start, std::string::npos);
  const auto pop = text.find("aset.free_head = aset.anext[aset.free_head];", start);
  const auto store = text.find("aset.avals[curr_index] = val;", start);
  const auto link = text.find("aset.anext[curr_index] = aset.used_head;", start);
  const auto head = text.find("aset.used_head = curr_index;", start);
  ASSERT_NE(pop, std::string::npos);
  EXPECT_LT(pop, store);
  EXPECT_LT(store, link);
  EXPECT_LT(link, head);
}

TEST(Emitter, StatementOrderMatchesAst) {
  const Program program = testing_support::corpus_program();
  const std::string text = emit_program(program);
  for (const FnDef *fn : program.all<FnDef>()) {
    std::vector<std::string> expected;
    ast_shape(fn->body, expected);
    EXPECT_EQ(emitted_shape(text, fn->name), expected) << fn->name;
  }
}

TEST(Emitter, OrderOfSections) {
  const std::string text = emit_program(testing_support::corpus_program());
  const auto constant = text.find("const uint ARR_SZ");
  const auto record = text.find("struct Arrayset {");
  const auto init = text.find("Arrayset aset_init(");
  const auto del = text.find("Arrayset aset_del(");
  EXPECT_LT(constant, record);
  EXPECT_LT(record, init);
  EXPECT_LT(init, del);
  EXPECT_EQ(text.find("derive"), std::string::npos);
  EXPECT_EQ(text.find("//", 1), std::string::npos) << "comments are not carried through";
}

TEST(Emitter, ForLoop) {
  const std::string text =
      emit_program(parse_ok("fn f() -> usize { let mut s: usize = 0; for i in 0..4 { s = s + i; } return s; }"));
  EXPECT_NE(text.find("for (uint i = 0; i < 4; i++) {"), std::string::npos);
  EXPECT_NE(text.find("uint s = 0;"), std::string::npos);
}

TEST(Emitter, ParenthesesFollowRustPrecedence) {
  const std::string text = emit_program(parse_ok("fn f(a: u8, b: u8, c: u8) -> bool { return a & b == c; }"));
  EXPECT_NE(text.find("return (a & b) == c;"), std::string::npos) << text;
  const std::string shifts = emit_program(parse_ok("fn f(a: u8, b: u8) -> u8 { return a << 1 + b; }"));
  EXPECT_NE(shifts.find("return a << (1 + b);"), std::string::npos) << shifts;
}

TEST(Emitter, IntegerNotBecomesTilde) {
  const std::string text = emit_program(parse_ok("fn f(a: u8, b: bool) -> bool { return !b && (!a == 0); }"));
  EXPECT_NE(text.find("!b"), std::string::npos);
  EXPECT_NE(text.find("~a"), std::string::npos);
}

TEST(Emitter, Cast) {
  const std::string text = emit_program(parse_ok("fn f(a: u8) -> u64 { return a as u64; }"));
  EXPECT_NE(text.find("return (ui64)a;"), std::string::npos) << text;
}

#include "rar/lexer.hpp"
#include "rar/parser.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace rar;
using testing_support::parse_ok;

namespace {

const char *const kAsetAddListing = R"(fn aset_add(val: i64, aset: mut Arrayset) -> Arrayset {
  let curr_index: usize = aset.free_head;

  if (curr_index >= ARR_SZ) {
    return aset;                 // Full
  } else {
    if ((aset.used_head < ARR_SZ) && aset_is_element(val, aset)) {
      return aset;
    } else {

      aset.free_head = aset.anext[aset.free_head];
      aset.avals[curr_index] = val;
      aset.anext[curr_index] = aset.used_head;
      aset.used_head = curr_index;

      return aset;
    }
  }
}
)";

const char *const kAsetDelListing = R"(fn aset_del(val: i64, aset: mut Arrayset) -> Arrayset {
  let mut curr_index: usize = aset.used_head;
  let mut prev_index: usize;

  if (aset.used_head >= ARR_SZ) {
    return aset;                  // Empty
  } else {

    if (aset.avals[curr_index] == val) {
      aset.used_head = aset.anext[curr_index];
      aset.anext[curr_index] = aset.free_head;
      aset.free_head = curr_index;

      return aset;
    } else {
      prev_index = aset_element_prev_from(aset.used_head, val, aset);

      if (prev_index >= ARR_SZ) {
        return aset;
      } else {

        curr_index = aset.anext[prev_index];

        if (curr_index >= ARR_SZ) {
          return aset;
        } else {
          aset.anext[prev_index] = aset.anext[curr_index];
          aset.anext[curr_index] = aset.free_head;
          aset.free_head = curr_index;

          return aset;
        }
      }
    }
  }
}
)";

Diagnostic single_error(const std::string &source) {
  auto result = parse_source(source);
  EXPECT_FALSE(result.ok()) << source;
  EXPECT_EQ(result.diagnostics.size(), 1u) << source;
  if (result.diagnostics.empty())
    return {};
  EXPECT_EQ(result.diagnostics[0].severity, Severity::Error);
  return result.diagnostics[0];
}

// Every span reachable from the program, for bounds checking.
struct SpanCollector {
  std::vector<SourceSpan> spans;

  void type(const TypeExpr &t) {
    spans.push_back(t.span);
    if (auto *a = t.as<type::ArrayOf>())
      type(*a->element);
    if (auto *r = t.as<type::Reference>())
      type(*r->referent);
  }
  void expr(const Expr &e) {
    spans.push_back(e.span);
    std::visit(overloaded{[&](const expr::FieldAccess &f) { expr(*f.base); },
                          [&](const expr::Index &i) {
                            expr(*i.base);
                            expr(*i.index);
                          },
                          [&](const expr::Call &c) {
                            for (const auto &a : c.args)
                              expr(a);
                          },
                          [&](const expr::Binary &b) {
                            expr(*b.lhs);
                            expr(*b.rhs);
                          },
                          [&](const expr::Unary &u) { expr(*u.operand); },
                          [&](const expr::Cast &c) {
                            expr(*c.operand);
                            type(c.target);
                          },
                          [](const auto &) {}},
               e.node);
  }
  void block(const Block &b) {
    for (const auto &s : b)
      stmt(s);
  }
  void stmt(const Stmt &s) {
    spans.push_back(s.span);
    std::visit(overloaded{[&](const stmt::Let &l) {
                            type(l.declared_type);
                            if (l.init)
                              expr(*l.init);
                          },
                          [&](const stmt::Assign &a) {
                            spans.push_back(a.target.span);
                            expr(a.value);
                          },
                          [&](const stmt::If &i) {
                            expr(i.cond);
                            block(i.then_body);
                            if (i.else_body)
                              block(*i.else_body);
                          },
                          [&](const stmt::ForRange &f) {
                            spans.push_back(f.var_span);
                            expr(f.lower);
                            expr(f.upper);
                            block(f.body);
                          },
                          [&](const stmt::Return &r) { expr(r.value); }},
               s.node);
  }
  void program(const Program &p) {
    for (const auto &item : p.items) {
      spans.push_back(span_of(item));
      std::visit(overloaded{[&](const ConstDef &c) { type(c.declared_type); },
                            [&](const RecordDef &r) {
                              for (const auto &f : r.fields) {
                                spans.push_back(f.span);
                                type(f.type);
                              }
                            },
                            [&](const FnDef &f) {
                              for (const auto &p : f.params) {
                                spans.push_back(p.span);
                                type(p.type);
                              }
                              type(f.return_type);
                              block(f.body);
                            },
                            [&](const StaticDef &s) { type(s.declared_type); }},
                 item);
    }
  }
};

std::vector<std::size_t> line_lengths(const std::string &source) {
  std::vector<std::size_t> lengths{0};
  for (char c : source) {
    if (c == '\n')
      lengths.push_back(0);
    else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80)
      ++lengths.back();
  }
  return lengths;
}

} // namespace

TEST(Parser, AsetAddListing) {
  const Program program = parse_ok(kAsetAddListing);
  const auto fns = program.all<FnDef>();
  ASSERT_EQ(fns.size(), 1u);
  const FnDef &fn = *fns[0];
  EXPECT_EQ(fn.name, "aset_add");
  ASSERT_EQ(fn.params.size(), 2u);
  EXPECT_EQ(fn.params[0].name, "val");
  ASSERT_NE(fn.params[0].type.as<type::SignedInt>(), nullptr);
  EXPECT_EQ(fn.params[0].type.as<type::SignedInt>()->width, 64u);
  EXPECT_FALSE(fn.params[0].is_mutable);
  EXPECT_EQ(fn.params[1].name, "aset");
  ASSERT_NE(fn.params[1].type.as<type::Named>(), nullptr);
  EXPECT_EQ(fn.params[1].type.as<type::Named>()->name, "Arrayset");
  EXPECT_TRUE(fn.params[1].is_mutable);
  ASSERT_NE(fn.return_type.as<type::Named>(), nullptr);
  EXPECT_EQ(fn.return_type.as<type::Named>()->name, "Arrayset");
  ASSERT_EQ(fn.body.size(), 2u);
  EXPECT_NE(fn.body[0].as<stmt::Let>(), nullptr);
  EXPECT_NE(fn.body[1].as<stmt::If>(), nullptr);
}

TEST(Parser, AsetDelListing) {
  const Program program = parse_ok(kAsetDelListing);
  const FnDef &fn = *program.all<FnDef>().at(0);
  EXPECT_EQ(fn.name, "aset_del");
  ASSERT_EQ(fn.body.size(), 3u);
  const auto *deferred = fn.body[1].as<stmt::Let>();
  ASSERT_NE(deferred, nullptr);
  EXPECT_EQ(deferred->name, "prev_index");
  EXPECT_TRUE(deferred->is_mutable);
  EXPECT_FALSE(deferred->init.has_value());
}

TEST(Parser, RustParameterSpelling) {
  const Program program = parse_ok("fn f(mut aset: Arrayset) -> Arrayset { return aset; }");
  const FnDef &fn = *program.all<FnDef>().at(0);
  EXPECT_TRUE(fn.params[0].is_mutable);
}

TEST(Parser, RecordDeclaration) {
  const Program program = parse_ok(
      "struct Arrayset { anext: [usize; ARR_SZ], avals: [i64; ARR_SZ], free_head: usize, used_head: usize, }");
  const auto records = program.all<RecordDef>();
  ASSERT_EQ(records.size(), 1u);
  const RecordDef &r = *records[0];
  EXPECT_FALSE(r.copy_derive);
  std::vector<std::string> names;
  for (const auto &f : r.fields)
    names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"anext", "avals", "free_head", "used_head"}));
  const auto *arr = r.fields[0].type.as<type::ArrayOf>();
  ASSERT_NE(arr, nullptr);
  EXPECT_EQ(std::get<std::string>(arr->length), "ARR_SZ");
  EXPECT_NE(arr->element->as<type::UnsignedIndex>(), nullptr);
}

TEST(Parser, DeriveAttribute) {
  const Program program = parse_ok("#[derive(Copy, Clone)]\nstruct P { x: u8 }");
  EXPECT_TRUE(program.all<RecordDef>().at(0)->copy_derive);
}

TEST(Parser, OtherAttributesRejected) {
  EXPECT_EQ(single_error("#[inline]\nfn f() -> bool { return true; }").rule_code, "S001");
  EXPECT_EQ(single_error("#[derive(Debug)]\nstruct P { x: u8 }").rule_code, "S001");
}

TEST(Parser, TruncatedInputPointsAtEnd) {
  const auto d = single_error("fn f() ->");
  EXPECT_EQ(d.rule_code, "S001");
  EXPECT_EQ(d.span.start_line, 1u);
  EXPECT_EQ(d.span.start_col, 10u);
}

TEST(Parser, ErrorPointsAtOffendingToken) {
  const auto d = single_error("fn f() -> bool {\n  return 1 +;\n}");
  EXPECT_EQ(d.span.start_line, 2u);
  EXPECT_EQ(d.span.start_col, 13u);
}

TEST(Parser, LexicalErrorBecomesDiagnostic) { EXPECT_EQ(single_error("const A: u8 = $;").rule_code, "S002"); }

TEST(Parser, UnsupportedConstructs) {
  for (const char *source : {
           "fn f() -> u8 { while true { } return 0; }",
           "fn f() -> u8 { loop { } }",
           "fn f() -> u8 { for i in 0..=3 { } return 0; }",
           "fn f() -> u8 { let x = 0; return x; }",
           "fn f(x: u8) -> u8 { return x.min(3); }",
           "fn f() -> u8 { return 1.5; }",
           "fn f() { }",
           "fn f() -> u8 { match 1 { } }",
           "const A: u8 = 1 + 2;",
       })
    EXPECT_EQ(single_error(source).rule_code, "S001") << source;
}

TEST(Parser, RustPrecedence) {
  const Program program = parse_ok("fn f(a: u8, b: u8, c: u8) -> bool { return a & b == c || a < b && !true; }");
  const auto *ret = program.all<FnDef>().at(0)->body.at(0).as<stmt::Return>();
  ASSERT_NE(ret, nullptr);
  EXPECT_EQ(render_expr(ret->value), "(|| (== (& (var a) (var b)) (var c)) (&& (< (var a) (var b)) (! true)))");
}

TEST(Parser, ComparisonsDoNotChain) { EXPECT_EQ(single_error("fn f(a: u8) -> bool { return a < a < a; }").rule_code, "S001"); }

TEST(Parser, CastBindsTighterThanBinary) {
  const Program program = parse_ok("fn f(a: u8) -> u64 { return a as u64 + 1; }");
  const auto *ret = program.all<FnDef>().at(0)->body.at(0).as<stmt::Return>();
  EXPECT_EQ(render_expr(ret->value), "(+ (as (var a) u64) 1)");
}

TEST(Parser, ElseIfChain) {
  const Program program = parse_ok(
      "fn f(a: u8) -> u8 { if a == 0 { return 1; } else if a == 1 { return 2; } else { return 3; } }");
  const auto *outer = program.all<FnDef>().at(0)->body.at(0).as<stmt::If>();
  ASSERT_NE(outer, nullptr);
  ASSERT_TRUE(outer->else_body.has_value());
  ASSERT_EQ(outer->else_body->size(), 1u);
  EXPECT_NE(outer->else_body->at(0).as<stmt::If>(), nullptr);
}

TEST(Parser, CorpusItemCounts) {
  rar::FileTable files;
  auto parsed = parse_file(testing_support::kCorpusDir / "arrayset.rar", files);
  ASSERT_TRUE(std::holds_alternative<ParseResult>(parsed));
  const auto &result = std::get<ParseResult>(parsed);
  ASSERT_TRUE(result.ok());
  EXPECT_EQ(result.program->all<ConstDef>().size(), 1u);
  EXPECT_EQ(result.program->all<RecordDef>().size(), 1u);
  EXPECT_EQ(result.program->all<FnDef>().size(), 7u);
}

TEST(Parser, MissingFileIsIoError) {
  rar::FileTable files;
  auto parsed = parse_file(testing_support::kCorpusDir / "no_such_file.rar", files);
  EXPECT_TRUE(std::holds_alternative<IoError>(parsed));
}

TEST(Parser, DirectoryIsIoError) {
  rar::FileTable files;
  auto parsed = parse_file(testing_support::kCorpusDir, files);
  EXPECT_TRUE(std::holds_alternative<IoError>(parsed));
}

TEST(Parser, FileIdsMapBackToPaths) {
  rar::FileTable files;
  const auto path = testing_support::kCorpusDir / "arrayset.rar";
  auto parsed = parse_file(path, files);
  const auto &program = *std::get<ParseResult>(parsed).program;
  EXPECT_EQ(files.path(span_of(program.items[0]).file_id), path.string());
}

TEST(Parser, SpansLieWithinCorpusFile) {
  const std::string source = testing_support::read_file(testing_support::kCorpusDir / "arrayset.rar");
  const Program program = parse_ok(source);
  const auto lengths = line_lengths(source);
  SpanCollector collector;
  collector.program(program);
  ASSERT_GT(collector.spans.size(), 100u);
  for (const auto &s : collector.spans) {
    ASSERT_GE(s.start_line, 1u);
    ASSERT_LE(s.end_line, lengths.size());
    EXPECT_GE(s.start_col, 1u);
    EXPECT_LE(s.end_col, lengths[s.end_line - 1] + 1);
    EXPECT_LE(s.start_col, lengths[s.start_line - 1] + 1);
    EXPECT_TRUE(std::make_pair(s.start_line, s.start_col) <= std::make_pair(s.end_line, s.end_col));
  }
}

TEST(Parser, RenderAstEmptyProgram) { EXPECT_EQ(render_ast(Program{}), ""); }

TEST(Parser, RenderAstConstant) {
  const std::string dump = render_ast(parse_ok("const ARR_SZ: usize = 256;"));
  auto count = [&](const std::string &needle) {
    std::size_t n = 0;
    for (auto pos = dump.find(needle); pos != std::string::npos; pos = dump.find(needle, pos + 1))
      ++n;
    return n;
  };
  EXPECT_EQ(count("ARR_SZ"), 1u);
  EXPECT_EQ(count("usize"), 1u);
  EXPECT_EQ(count("256"), 1u);
}

TEST(Parser, RenderAstDeterministic) {
  const Program program = testing_support::corpus_program();
  const std::string first = render_ast(program);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, render_ast(program));
  EXPECT_EQ(first, render_ast(testing_support::corpus_program()));
}

TEST(Parser, ArbitraryBytesNeverCrash) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 3000; ++round) {
    std::string source;
    const int len = static_cast<int>(rng() % 64);
    for (int i = 0; i < len; ++i)
      source += static_cast<char>(rng() % 256);
    auto result = parse_source(source);
    EXPECT_TRUE(result.ok() || !result.diagnostics.empty());
  }
}

TEST(Parser, TokenDeletionsNeverCrash) {
  const std::string source = testing_support::read_file(testing_support::kCorpusDir / "arrayset.rar");
  auto tokens = std::get<std::vector<Token>>(tokenize(source));
  std::mt19937_64 rng(9);
  for (int round = 0; round < 500; ++round) {
    auto mutated = tokens;
    const int drops = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < drops && !mutated.empty(); ++i)
      mutated.erase(mutated.begin() + static_cast<std::ptrdiff_t>(rng() % mutated.size()));
    if (rng() % 2 && mutated.size() > 2)
      std::swap(mutated[rng() % mutated.size()], mutated[rng() % mutated.size()]);
    auto result = parse(mutated);
    EXPECT_TRUE(result.ok() || !result.diagnostics.empty());
  }
}

TEST(Parser, DeepNestingIsDiagnosed) {
  std::string source = "fn f() -> u8 { return ";
  source += std::string(5000, '(') + "1" + std::string(5000, ')') + "; }";
  auto result = parse_source(source);
  EXPECT_FALSE(result.ok());
  ASSERT_FALSE(result.diagnostics.empty());
  EXPECT_EQ(result.diagnostics[0].rule_code, "S001");
}

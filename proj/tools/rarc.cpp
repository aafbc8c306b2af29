// rarc: check, transpile, and test Restricted Algorithmic Rust sources.

#include "rar/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv) {
  namespace cli = rar::cli;

  CLI::App app{"RAR to RAC toolchain"};
  app.require_subcommand(1);

  std::vector<std::string> check_paths;
  bool json = false;
  auto *check = app.add_subcommand("check", "Report subset-rule diagnostics");
  check->add_option("paths", check_paths, "RAR source files")->required();
  check->add_flag("--json", json, "Emit diagnostics as JSON");

  std::string input, output, dialect_name = "plain";
  auto *transpile = app.add_subcommand("transpile", "Emit RAC C++ for a checked RAR file");
  transpile->add_option("path", input, "RAR source file")->required();
  transpile->add_option("-o", output, "Output path")->required();
  transpile->add_option("--dialect", dialect_name, "Header dialect")
      ->check(CLI::IsMember({"ac", "vivado", "plain"}));

  cli::CorpusTestOptions corpus_opts;
  auto *corpus = app.add_subcommand("corpus-test", "Property-check the reference Arrayset");
  corpus->add_option("--capacity", corpus_opts.capacity, "Capacity for the random run")->check(CLI::PositiveNumber);
  corpus->add_option("--seed", corpus_opts.seed, "Base seed");
  corpus->add_option("--iters", corpus_opts.iters, "Random sequences");

  cli::DifftestOptions diff_opts;
  std::string cc;
  auto *difftest = app.add_subcommand("difftest", "Compare compiled emitted code with the reference");
  difftest->add_option("--cc", cc, "Compiler command (default: RAR_CC, then c++/g++/clang++)");
  difftest->add_option("--seed", diff_opts.seed, "Seed");
  difftest->add_option("--iters", diff_opts.iters, "Operations");
  difftest->add_option("--capacity", diff_opts.capacity, "Capacity")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : cli::kExitEnvironment;
  }

  if (*check)
    return cli::cmd_check(check_paths, json, std::cout, std::cerr);
  if (*transpile)
    return cli::cmd_transpile(input, output, *rar::parse_dialect(dialect_name), std::cerr);
  if (*corpus)
    return cli::cmd_corpus_test(corpus_opts, arrayset::reference_ops(), std::cout, std::cerr);
  if (!cc.empty())
    diff_opts.cc = cc;
  diff_opts.corpus_dir = cli::default_corpus_dir();
  diff_opts.shim_dir = cli::default_shim_dir();
  return cli::cmd_difftest(diff_opts, std::cout, std::cerr);
}

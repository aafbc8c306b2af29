#include "rar/cli.hpp"

#include "arrayset/differential.hpp"
#include "arrayset/harness.hpp"
#include "rar/checker.hpp"
#include "rar/parser.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace rar::cli {

namespace fs = std::filesystem;

namespace {

std::string env_or_empty(const char *name) {
  const char *value = std::getenv(name);
  return value ? value : "";
}

std::string format_diagnostic(const std::string &file, const Diagnostic &d) {
  std::ostringstream ss;
  ss << file << ':' << d.span.start_line << ':' << d.span.start_col << ": " << to_string(d.severity) << ' '
     << d.rule_code << ": " << d.message;
  return ss.str();
}

struct CheckedFile {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
};

std::variant<CheckedFile, IoError> check_file(const std::string &path, FileTable &files) {
  auto parsed = parse_file(path, files);
  if (auto *io = std::get_if<IoError>(&parsed))
    return *io;
  auto &result = std::get<ParseResult>(parsed);
  CheckedFile checked;
  checked.diagnostics = std::move(result.diagnostics);
  if (result.program) {
    auto more = check_program(*result.program);
    checked.diagnostics.insert(checked.diagnostics.end(), more.begin(), more.end());
    checked.program = std::move(result.program);
  }
  return checked;
}

std::string seconds(std::chrono::duration<double> d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", d.count());
  return buf;
}

void print_failure(const arrayset::CheckReport &report, arrayset::Index capacity, const arrayset::SetOps &impl,
                   std::ostream &err) {
  const auto &first = report.failures.front();
  err << "property " << first.property << " failed at capacity " << capacity << ": " << first.detail << '\n';
  const auto minimized = arrayset::minimize_failure(first.ops, capacity, impl);
  err << "minimized counterexample (" << minimized.size() << " ops from aset_init):\n"
      << arrayset::format_op_script(minimized);
}

} // namespace

int cmd_check(const std::vector<std::string> &paths, bool json, std::ostream &out, std::ostream &err) {
  FileTable files;
  bool io_failed = false;
  bool has_error = false;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto &path : paths) {
    auto result = check_file(path, files);
    if (auto *io = std::get_if<IoError>(&result)) {
      err << io->path << ": " << io->message << '\n';
      io_failed = true;
      continue;
    }
    for (const auto &d : std::get<CheckedFile>(result).diagnostics) {
      has_error = has_error || d.severity == Severity::Error;
      const std::string &file = files.path(d.span.file_id);
      if (json) {
        records.push_back({{"file", file},
                           {"line", d.span.start_line},
                           {"column", d.span.start_col},
                           {"end_line", d.span.end_line},
                           {"end_column", d.span.end_col},
                           {"severity", to_string(d.severity)},
                           {"rule", d.rule_code},
                           {"message", d.message}});
      } else {
        out << format_diagnostic(file, d) << '\n';
      }
    }
  }
  if (json)
    out << records.dump(2) << '\n';
  if (io_failed)
    return kExitEnvironment;
  return has_error ? kExitFailure : kExitOk;
}

int cmd_transpile(const std::string &path, const std::string &out_path, Dialect dialect, std::ostream &err) {
  FileTable files;
  auto result = check_file(path, files);
  if (auto *io = std::get_if<IoError>(&result)) {
    err << io->path << ": " << io->message << '\n';
    return kExitEnvironment;
  }
  auto &checked = std::get<CheckedFile>(result);
  for (const auto &d : checked.diagnostics)
    err << format_diagnostic(files.path(d.span.file_id), d) << '\n';
  if (!checked.program || has_errors(checked.diagnostics))
    return kExitFailure;

  const std::string text = emit_program(*checked.program, EmitOptions{dialect});
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    err << out_path << ": cannot open for writing\n";
    return kExitEnvironment;
  }
  out << text;
  out.close();
  if (!out) {
    err << out_path << ": write failed\n";
    return kExitEnvironment;
  }
  return kExitOk;
}

const std::vector<ExhaustivePlan> &exhaustive_plans() {
  static const std::vector<ExhaustivePlan> plans{{1, 6, 3}, {2, 6, 4}, {3, 6, 4}, {4, 5, 5}};
  return plans;
}

int cmd_corpus_test(const CorpusTestOptions &opts, const arrayset::SetOps &impl, std::ostream &out,
                    std::ostream &err) {
  if (opts.capacity == 0) {
    err << "capacity must be at least 1\n";
    return kExitEnvironment;
  }
  arrayset::RandomCheckConfig config;
  config.seed = opts.seed;
  config.sequences = opts.iters;
  config.capacity = opts.capacity;
  const auto random = arrayset::random_check(config, impl);
  out << "random      capacity " << opts.capacity << "  seed " << opts.seed << "  sequences " << random.cases_run
      << "  steps " << random.steps_checked << "  failures " << random.failure_count << "  "
      << seconds(random.elapsed) << '\n';
  if (!random.passed()) {
    print_failure(random, opts.capacity, impl, err);
    return kExitFailure;
  }

  for (const auto &plan : exhaustive_plans()) {
    const auto report = arrayset::exhaustive_check(plan.capacity, plan.depth, plan.alphabet, impl);
    out << "exhaustive  capacity " << plan.capacity << "  depth " << plan.depth << "  alphabet " << plan.alphabet
        << "  sequences " << report.cases_run << "  failures " << report.failure_count << "  "
        << seconds(report.elapsed) << '\n';
    if (!report.passed()) {
      print_failure(report, plan.capacity, impl, err);
      return kExitFailure;
    }
  }
  return kExitOk;
}

bool command_invocable(const std::string &command) {
  std::istringstream in(command);
  std::string program;
  if (!(in >> program))
    return false;
  auto executable = [](const fs::path &p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && ::access(p.c_str(), X_OK) == 0;
  };
  if (program.find('/') != std::string::npos)
    return executable(program);
  std::istringstream path_list(env_or_empty("PATH"));
  for (std::string dir; std::getline(path_list, dir, ':');)
    if (!dir.empty() && executable(fs::path(dir) / program))
      return true;
  return false;
}

std::optional<std::string> resolve_compiler(const std::optional<std::string> &flag) {
  if (flag && !flag->empty())
    return flag;
  if (std::string env = env_or_empty("RAR_CC"); !env.empty())
    return env;
  for (const char *candidate : {"c++", "g++", "clang++"})
    if (command_invocable(candidate))
      return std::string(candidate);
  return std::nullopt;
}

fs::path default_corpus_dir() {
  if (std::string env = env_or_empty("RAR_CORPUS_DIR"); !env.empty())
    return env;
  return RAR_DEFAULT_CORPUS_DIR;
}

fs::path default_shim_dir() {
  if (std::string env = env_or_empty("RAR_SHIM_DIR"); !env.empty())
    return env;
  return RAR_DEFAULT_SHIM_DIR;
}

int cmd_difftest(const DifftestOptions &opts, std::ostream &out, std::ostream &err) {
  const auto cc = resolve_compiler(opts.cc);
  if (!cc) {
    err << "no C++ compiler found: pass --cc \"<compiler> [flags]\" or set RAR_CC\n";
    return kExitEnvironment;
  }
  if (!command_invocable(*cc)) {
    err << "compiler command '" << *cc << "' is not executable\n";
    return kExitEnvironment;
  }

  arrayset::DifferentialConfig config;
  config.corpus_dir = opts.corpus_dir;
  config.shim_dir = opts.shim_dir;
  config.compiler_command = *cc;
  config.seed = opts.seed;
  config.ops = opts.iters;
  config.capacity = opts.capacity;
  const auto report = arrayset::run_differential(config);

  out << "difftest  capacity " << opts.capacity << "  seed " << opts.seed << "  ops " << opts.iters << "  compared "
      << report.events_compared << "  " << arrayset::diff_status_name(report.status) << "  "
      << seconds(report.elapsed) << '\n';
  switch (report.status) {
  case arrayset::DiffStatus::Equal:
    return kExitOk;
  case arrayset::DiffStatus::Diverged:
    if (report.first_divergence)
      err << "first divergence at line " << *report.first_divergence << "\n  expected: " << report.expected_line
          << "\n  actual:   " << report.actual_line << '\n';
    if (!report.message.empty())
      err << report.message << '\n';
    return kExitFailure;
  case arrayset::DiffStatus::CompileFailed:
    err << "compiling the emitted corpus failed:\n" << report.message;
    return kExitFailure;
  case arrayset::DiffStatus::RunFailed:
    err << "the compiled trace program failed:\n" << report.message;
    return kExitFailure;
  case arrayset::DiffStatus::SetupFailed:
    err << report.message << '\n';
    return kExitEnvironment;
  }
  return kExitEnvironment;
}

} // namespace rar::cli

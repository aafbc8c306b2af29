#include "arrayset/differential.hpp"

#include "rar/checker.hpp"
#include "rar/emitter.hpp"
#include "rar/parser.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace arrayset {

namespace fs = std::filesystem;

const char *diff_status_name(DiffStatus status) {
  switch (status) {
  case DiffStatus::Equal:
    return "equal";
  case DiffStatus::Diverged:
    return "diverged";
  case DiffStatus::CompileFailed:
    return "compile-failed";
  case DiffStatus::RunFailed:
    return "run-failed";
  case DiffStatus::SetupFailed:
    return "setup-failed";
  }
  return "?";
}

std::string shell_quote(const std::string &text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::variant<std::string, std::string> emit_corpus_for_capacity(const fs::path &corpus_dir, Index capacity) {
  const fs::path path = corpus_dir / "arrayset.rar";
  rar::FileTable files;
  auto parsed = rar::parse_file(path, files);
  if (auto *io = std::get_if<rar::IoError>(&parsed))
    return std::variant<std::string, std::string>(std::in_place_index<1>, io->path + ": " + io->message);
  auto &result = std::get<rar::ParseResult>(parsed);
  if (!result.ok())
    return std::variant<std::string, std::string>(std::in_place_index<1>,
                                                  path.string() + ": " + result.diagnostics.front().message);
  rar::Program program = std::move(*result.program);
  const auto diagnostics = rar::check_program(program);
  if (rar::has_errors(diagnostics))
    return std::variant<std::string, std::string>(std::in_place_index<1>,
                                                  path.string() + " does not check clean: " +
                                                      diagnostics.front().rule_code + " " +
                                                      diagnostics.front().message);

  bool found = false;
  for (auto &item : program.items) {
    if (auto *c = std::get_if<rar::ConstDef>(&item); c && c->name == "ARR_SZ") {
      c->value = capacity;
      found = true;
    }
  }
  if (!found)
    return std::variant<std::string, std::string>(std::in_place_index<1>, path.string() + " defines no ARR_SZ");
  return std::variant<std::string, std::string>(std::in_place_index<0>, rar::emit_program(program));
}

namespace {

std::string read_all(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_all(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

std::vector<std::string> split_lines(const std::string &text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    lines.push_back(line);
  return lines;
}

class ScratchDir {
public:
  explicit ScratchDir(const std::optional<fs::path> &requested) {
    if (requested) {
      std::error_code ec;
      fs::create_directories(*requested, ec);
      path_ = *requested;
      return;
    }
    std::string pattern = (fs::temp_directory_path() / "rar-difftest-XXXXXX").string();
    if (::mkdtemp(pattern.data()))
      path_ = pattern;
    owned_ = true;
  }
  ~ScratchDir() {
    if (owned_ && !path_.empty()) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const fs::path &path() const { return path_; }

private:
  fs::path path_;
  bool owned_ = false;
};

DifferentialReport compare(const std::string &emitted, const DifferentialConfig &config) {
  DifferentialReport report;
  if (config.capacity == 0) {
    report.message = "capacity must be at least 1";
    return report;
  }
  for (const char *name : {"rac_shim.h", "trace_main.cpp"}) {
    if (!fs::is_regular_file(config.shim_dir / name)) {
      report.message = "shim file " + (config.shim_dir / name).string() + " not found";
      return report;
    }
  }
  ScratchDir scratch(config.work_dir);
  const fs::path &work = scratch.path();
  if (work.empty() || !fs::is_directory(work)) {
    report.message = "cannot create a scratch directory";
    return report;
  }

  const auto ops = random_ops(config.seed, config.ops, config.capacity);
  if (!write_all(work / "arrayset.cpp", emitted) || !write_all(work / "ops.txt", format_op_script(ops))) {
    report.message = "cannot write to " + work.string();
    return report;
  }

  const fs::path binary = work / "trace";
  const fs::path compile_log = work / "compile.log";
  const std::string compile = config.compiler_command + " -std=c++17 -I" + shell_quote(config.shim_dir.string()) +
                              " -I" + shell_quote(work.string()) + " " +
                              shell_quote((config.shim_dir / "trace_main.cpp").string()) + " -o " +
                              shell_quote(binary.string()) + " > " + shell_quote(compile_log.string()) + " 2>&1";
  if (std::system(compile.c_str()) != 0 || !fs::exists(binary)) {
    report.status = DiffStatus::CompileFailed;
    report.message = read_all(compile_log);
    return report;
  }

  const fs::path actual_path = work / "trace.txt";
  const fs::path run_log = work / "run.log";
  const std::string run = shell_quote(binary.string()) + " " + std::to_string(config.capacity) + " < " +
                          shell_quote((work / "ops.txt").string()) + " > " + shell_quote(actual_path.string()) +
                          " 2> " + shell_quote(run_log.string());
  if (std::system(run.c_str()) != 0) {
    report.status = DiffStatus::RunFailed;
    report.message = read_all(run_log);
    return report;
  }

  const std::string expected_text = format_trace(trace_run(ops, config.capacity));
  const std::string actual_text = read_all(actual_path);
  const auto expected = split_lines(expected_text);
  const auto actual = split_lines(actual_text);
  const std::size_t common = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < common; ++i) {
    ++report.events_compared;
    if (expected[i] != actual[i]) {
      report.status = DiffStatus::Diverged;
      report.first_divergence = i + 1;
      report.expected_line = expected[i];
      report.actual_line = actual[i];
      return report;
    }
  }
  if (expected.size() != actual.size()) {
    report.status = DiffStatus::Diverged;
    report.first_divergence = common + 1;
    if (common < expected.size())
      report.expected_line = expected[common];
    if (common < actual.size())
      report.actual_line = actual[common];
    report.message = "trace length " + std::to_string(actual.size()) + ", expected " + std::to_string(expected.size());
    return report;
  }
  if (expected_text != actual_text) {
    // Same lines but different bytes: line endings or a missing final newline.
    report.status = DiffStatus::Diverged;
    report.message = "traces differ in line termination";
    return report;
  }
  report.status = DiffStatus::Equal;
  return report;
}

} // namespace

DifferentialReport run_differential_on_source(const std::string &emitted, const DifferentialConfig &config) {
  const auto start = std::chrono::steady_clock::now();
  DifferentialReport report = compare(emitted, config);
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

DifferentialReport run_differential(const DifferentialConfig &config) {
  const auto start = std::chrono::steady_clock::now();
  auto emitted = emit_corpus_for_capacity(config.corpus_dir, config.capacity);
  if (emitted.index() == 1) {
    DifferentialReport report;
    report.message = std::get<1>(emitted);
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
  }
  DifferentialReport report = compare(std::get<0>(emitted), config);
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

} // namespace arrayset

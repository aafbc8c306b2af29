/// @file cli.hpp
/// @brief The `rarc` subcommands as library functions.
///
/// Exit statuses: 0 success, 1 a check or verification failure, 2 an
/// environment or I/O problem.

#pragma once

#include "arrayset/arrayset.hpp"
#include "rar/emitter.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEnvironment = 2;

/// One line per diagnostic, `<file>:<line>:<col>: <severity> <rule>: <message>`,
/// or with `json` a single array of objects. Clean input prints nothing in
/// text mode and `[]` in JSON mode.
int cmd_check(const std::vector<std::string> &paths, bool json, std::ostream &out, std::ostream &err);

/// Writes nothing to `out_path` unless the input checks clean.
int cmd_transpile(const std::string &path, const std::string &out_path, Dialect dialect, std::ostream &err);

struct CorpusTestOptions {
  arrayset::Index capacity = 256;
  std::uint64_t seed = 1;
  std::size_t iters = 10000; ///< random sequences
};

/// Exhaustive configuration per capacity: (capacity, depth, alphabet).
struct ExhaustivePlan {
  arrayset::Index capacity;
  std::size_t depth;
  std::size_t alphabet;
};
const std::vector<ExhaustivePlan> &exhaustive_plans();

/// Random sequences at `opts.capacity`, then every exhaustive plan. On
/// failure prints the minimized counterexample as an op script.
int cmd_corpus_test(const CorpusTestOptions &opts, const arrayset::SetOps &impl, std::ostream &out,
                    std::ostream &err);

struct DifftestOptions {
  std::optional<std::string> cc; ///< --cc
  std::uint64_t seed = 1;
  std::size_t iters = 10000; ///< ops in the trace
  arrayset::Index capacity = 256;
  std::filesystem::path corpus_dir;
  std::filesystem::path shim_dir;
};

/// `--cc`, else RAR_CC, else the first of c++, g++, clang++ on PATH.
std::optional<std::string> resolve_compiler(const std::optional<std::string> &flag);

/// The first word of `command` names an executable file, directly or via PATH.
bool command_invocable(const std::string &command);

int cmd_difftest(const DifftestOptions &opts, std::ostream &out, std::ostream &err);

/// Compiled-in defaults, overridable by RAR_CORPUS_DIR / RAR_SHIM_DIR.
std::filesystem::path default_corpus_dir();
std::filesystem::path default_shim_dir();

} // namespace rar::cli

/// @file differential.hpp
/// @brief Trace comparison between the reference set and the compiled
/// PlainCxx emission of corpus/arrayset.rar.
///
/// Compile contract with the shim directory:
///
///   work/arrayset.cpp   the emitted corpus, ARR_SZ set to the capacity
///   shim/rac_shim.h     included by the emitted file
///   shim/trace_main.cpp includes "arrayset.cpp"; reads an op script on
///                       stdin, takes the capacity as argv[1], and prints
///                       one trace line per op
///
///   <cc> -std=c++17 -I<shim> -I<work> <shim>/trace_main.cpp -o <work>/trace
///   <work>/trace <capacity> < ops.txt
///
/// `<cc>` is inserted verbatim so it may carry flags ("g++ -O2").

#pragma once

#include "arrayset/harness.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>

namespace arrayset {

enum class DiffStatus { Equal, Diverged, CompileFailed, RunFailed, SetupFailed };

const char *diff_status_name(DiffStatus status);

struct DifferentialConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path shim_dir;
  std::string compiler_command;
  std::uint64_t seed = 1;
  std::size_t ops = 10000;
  Index capacity = 256;
  /// Scratch directory; a fresh temporary one (removed afterwards) if unset.
  std::optional<std::filesystem::path> work_dir;
};

struct DifferentialReport {
  DiffStatus status = DiffStatus::SetupFailed;
  std::size_t events_compared = 0;
  /// 1-based line of the first mismatch, including a length mismatch.
  std::optional<std::size_t> first_divergence;
  std::string expected_line; ///< empty when the reference trace ended
  std::string actual_line;   ///< empty when the compiled trace ended
  std::string message;       ///< compiler or runtime output on failure
  std::chrono::duration<double> elapsed{0};

  bool equal() const { return status == DiffStatus::Equal; }
};

/// PlainCxx emission of `<corpus_dir>/arrayset.rar` with ARR_SZ replaced by
/// `capacity`; an error message if the file is unreadable or does not
/// check clean.
std::variant<std::string, std::string> emit_corpus_for_capacity(const std::filesystem::path &corpus_dir,
                                                                 Index capacity);

DifferentialReport run_differential(const DifferentialConfig &config);

/// As run_differential, but compiles `emitted` instead of the corpus. Used
/// to confirm that a tampered emission is caught.
DifferentialReport run_differential_on_source(const std::string &emitted, const DifferentialConfig &config);

/// Single-quotes `text` for a POSIX shell.
std::string shell_quote(const std::string &text);

} // namespace arrayset

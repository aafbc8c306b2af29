/// @file harness.hpp
/// @brief Operation scripts, traces, and the property-checking drivers.
///
/// Wire formats (shared with the compiled trace program, bit-exact):
///
///   op script   one op per line: `add <v>` | `del <v>` | `is <v>`
///   trace line  `<seq> <op> <v> <ret|-> <len> <len_free> <digest>`
///
/// `seq` counts from 1, `ret` is `true`/`false` for `is` and `-` otherwise,
/// and `digest` is 16 lowercase hex digits. Each line ends in a single
/// newline with no trailing whitespace.
///
/// Digest: 64-bit FNV-1a over 8-byte little-endian words, namely the
/// used-chain values from head to terminator followed by the free-chain
/// length. Values in free slots are not observable and are excluded.
///
/// Random operations: SplitMix64 seeded with the seed itself; for each op
/// draw `r1`, `r2`; tag = r1 % 3 (0 add, 1 del, 2 is), value =
/// r2 % value_range. value_range defaults to capacity + 3.

#pragma once

#include "arrayset/arrayset.hpp"
#include "arrayset/oracle.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arrayset {

enum class OpTag { Add, Del, IsElement };

struct OpRequest {
  OpTag tag;
  Value val;

  bool operator==(const OpRequest &) const = default;
};

const char *op_keyword(OpTag tag);
std::string to_string(const OpRequest &op);

struct TraceEvent {
  std::uint64_t seq;
  OpRequest op;
  std::optional<bool> ret;
  Index len;
  Index len_free;
  std::uint64_t digest;

  bool operator==(const TraceEvent &) const = default;
};

//===----------------------------------------------------------------------===//
// Scripts and traces
//===----------------------------------------------------------------------===//

struct ScriptError {
  std::size_t line; ///< 1-based
  std::string message;
};

std::variant<std::vector<OpRequest>, ScriptError> parse_op_script(std::string_view text);
std::string format_op_script(const std::vector<OpRequest> &ops);

std::uint64_t state_digest(const Arrayset &aset);

/// Applies `ops` to a fresh `aset_init(capacity)`, one event per op.
std::vector<TraceEvent> trace_run(const std::vector<OpRequest> &ops, Index capacity,
                                  const SetOps &impl = reference_ops());

std::string format_trace_line(const TraceEvent &event);
std::string format_trace(const std::vector<TraceEvent> &events);

//===----------------------------------------------------------------------===//
// Random operation sequences
//===----------------------------------------------------------------------===//

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

private:
  std::uint64_t state_;
};

std::vector<OpRequest> random_ops(std::uint64_t seed, std::size_t n, Index capacity,
                                  std::optional<std::uint64_t> value_range = std::nullopt);

//===----------------------------------------------------------------------===//
// Property checking
//===----------------------------------------------------------------------===//

struct Failure {
  std::string property; ///< "P1".."P8", "model", "shape"
  std::string detail;
  std::vector<OpRequest> ops; ///< from aset_init, ending with the offending op
};

struct CheckReport {
  std::uint64_t cases_run = 0;
  std::uint64_t steps_checked = 0;
  /// Times each property's hypothesis held and the property was evaluated.
  std::map<std::string, std::uint64_t> property_checks;
  std::vector<Failure> failures; ///< capped at kMaxRecordedFailures
  std::uint64_t failure_count = 0;
  std::chrono::duration<double> elapsed{0};

  static constexpr std::size_t kMaxRecordedFailures = 100;

  bool passed() const { return failure_count == 0; }
  void merge(const CheckReport &other);
  void add_failure(Failure failure);
};

/// Checks P1-P8 and model equivalence for every step of `ops` starting at
/// `aset_init(capacity)`. P8 is instantiated with `w` ranging over the
/// operand and `extra_witnesses`. Stops at the first failing step.
CheckReport check_sequence(const std::vector<OpRequest> &ops, Index capacity,
                           const SetOps &impl = reference_ops(),
                           const std::vector<Value> &extra_witnesses = {});

struct RandomCheckConfig {
  std::uint64_t seed = 1;
  std::size_t sequences = 10000;
  std::size_t steps = 128; ///< ops per sequence
  Index capacity = 256;
  std::optional<std::uint64_t> value_range;
  unsigned workers = 0; ///< 0: hardware concurrency
};

/// Sequence i uses random_ops(seed + i, steps, capacity, value_range).
CheckReport random_check(const RandomCheckConfig &config, const SetOps &impl = reference_ops());

/// Largest (3 * alphabet)^depth accepted by `exhaustive_check`.
inline constexpr std::uint64_t kExhaustiveLimit = 100'000'000;

/// Every op sequence of length `depth` over {add, del, is} x
/// {0 .. alphabet-1}, checked at every prefix. cases_run counts the
/// sequences, (3 * alphabet)^depth. A failing prefix is reported once and
/// its extensions are not explored. Throws std::invalid_argument when the
/// enumeration exceeds kExhaustiveLimit or capacity is 0.
CheckReport exhaustive_check(Index capacity, std::size_t depth, std::size_t alphabet,
                             const SetOps &impl = reference_ops());

/// Greedily drops ops while the sequence still fails some property.
std::vector<OpRequest> minimize_failure(std::vector<OpRequest> ops, Index capacity,
                                        const SetOps &impl = reference_ops());

} // namespace arrayset

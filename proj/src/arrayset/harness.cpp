#include "arrayset/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace arrayset {

const char *op_keyword(OpTag tag) {
  switch (tag) {
  case OpTag::Add:
    return "add";
  case OpTag::Del:
    return "del";
  case OpTag::IsElement:
    return "is";
  }
  return "?";
}

std::string to_string(const OpRequest &op) { return std::string(op_keyword(op.tag)) + " " + std::to_string(op.val); }

//===----------------------------------------------------------------------===//
// Scripts and traces
//===----------------------------------------------------------------------===//

std::variant<std::vector<OpRequest>, ScriptError> parse_op_script(std::string_view text) {
  std::vector<OpRequest> ops;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);

    std::istringstream in{std::string(line)};
    std::string keyword, value, extra;
    if (!(in >> keyword))
      continue; // blank line
    OpTag tag;
    if (keyword == "add")
      tag = OpTag::Add;
    else if (keyword == "del")
      tag = OpTag::Del;
    else if (keyword == "is")
      tag = OpTag::IsElement;
    else
      return ScriptError{line_no, "unknown operation '" + keyword + "'"};
    if (!(in >> value))
      return ScriptError{line_no, "missing value"};
    if (in >> extra)
      return ScriptError{line_no, "unexpected text after value"};
    Value v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
      return ScriptError{line_no, "value '" + value + "' is not a signed 64-bit integer"};
    ops.push_back(OpRequest{tag, v});
  }
  return ops;
}

std::string format_op_script(const std::vector<OpRequest> &ops) {
  std::string out;
  for (const auto &op : ops)
    out += to_string(op) + '\n';
  return out;
}

std::uint64_t state_digest(const Arrayset &aset) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix_word = [&](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      hash ^= (word >> (8 * byte)) & 0xFFU;
      hash *= 0x100000001b3ULL;
    }
  };
  const Index cap = aset.capacity();
  Index curr = aset.used_head;
  for (Index step = 0; step < cap && curr < cap; ++step) {
    mix_word(static_cast<std::uint64_t>(aset.avals[curr]));
    curr = aset.anext[curr];
  }
  mix_word(aset_len_free(aset));
  return hash;
}

std::vector<TraceEvent> trace_run(const std::vector<OpRequest> &ops, Index capacity, const SetOps &impl) {
  std::vector<TraceEvent> events;
  events.reserve(ops.size());
  Arrayset aset = aset_init(capacity);
  std::uint64_t seq = 0;
  for (const auto &op : ops) {
    std::optional<bool> ret;
    switch (op.tag) {
    case OpTag::Add:
      aset = impl.add(op.val, std::move(aset));
      break;
    case OpTag::Del:
      aset = impl.del(op.val, std::move(aset));
      break;
    case OpTag::IsElement:
      ret = impl.is_element(op.val, aset);
      break;
    }
    events.push_back(TraceEvent{++seq, op, ret, aset_len(aset), aset_len_free(aset), state_digest(aset)});
  }
  return events;
}

std::string format_trace_line(const TraceEvent &e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%" PRIu64 " %s %" PRId64 " %s %zu %zu %016" PRIx64, e.seq, op_keyword(e.op.tag),
                e.op.val, e.ret ? (*e.ret ? "true" : "false") : "-", e.len, e.len_free, e.digest);
  return buf;
}

std::string format_trace(const std::vector<TraceEvent> &events) {
  std::string out;
  for (const auto &e : events)
    out += format_trace_line(e) + '\n';
  return out;
}

//===----------------------------------------------------------------------===//
// Random operation sequences
//===----------------------------------------------------------------------===//

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<OpRequest> random_ops(std::uint64_t seed, std::size_t n, Index capacity,
                                  std::optional<std::uint64_t> value_range) {
  const std::uint64_t range = value_range.value_or(static_cast<std::uint64_t>(capacity) + 3);
  if (range == 0)
    throw std::invalid_argument("value range must be positive");
  SplitMix64 rng(seed);
  std::vector<OpRequest> ops;
  ops.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t r1 = rng.next();
    const std::uint64_t r2 = rng.next();
    ops.push_back(OpRequest{static_cast<OpTag>(r1 % 3), static_cast<Value>(r2 % range)});
  }
  return ops;
}

//===----------------------------------------------------------------------===//
// Property checking
//===----------------------------------------------------------------------===//

void CheckReport::add_failure(Failure failure) {
  ++failure_count;
  if (failures.size() < kMaxRecordedFailures)
    failures.push_back(std::move(failure));
}

void CheckReport::merge(const CheckReport &other) {
  cases_run += other.cases_run;
  steps_checked += other.steps_checked;
  for (const auto &[name, count] : other.property_checks)
    property_checks[name] += count;
  for (const auto &f : other.failures)
    if (failures.size() < kMaxRecordedFailures)
      failures.push_back(f);
  failure_count += other.failure_count;
  elapsed += other.elapsed;
}

namespace {

std::string show(const Model &m) {
  std::string out = "{";
  for (Value v : m)
    out += (out.size() > 1 ? ", " : "") + std::to_string(v);
  return out + "}";
}

struct Violation {
  std::string property;
  std::string detail;
};

/// One transition s --op--> next, checked against every property and
/// against an independently maintained mathematical set.
class StepChecker {
public:
  StepChecker(const SetOps &impl, const std::vector<Value> &witnesses, std::map<std::string, std::uint64_t> &counts)
      : impl_(impl), witnesses_(witnesses), counts_(counts) {}

  /// `model` is model_of(s); `oracle` is the set-level state, updated in
  /// place. On success `next`/`next_model` hold the successor.
  std::optional<Violation> step(const Arrayset &s, const Model &model, const OpRequest &op, Model &oracle,
                                Arrayset &next, Model &next_model) {
    const Index cap = s.capacity();
    const Value v = op.val;
    const Index len = aset_len(s);
    const bool good = good_statep(v, s);

    if (good && len < cap) {
      ++counts_["P1"];
      if (!impl_.is_element(v, impl_.add(v, s)))
        return Violation{"P1", "aset_is_element(" + std::to_string(v) + ", aset_add(" + std::to_string(v) +
                                   ", s)) is false for a good state with len " + std::to_string(len)};
    }

    if (good) {
      auto check_witness = [&](Value w) -> std::optional<Violation> {
        if (!no_dups(w, s))
          return std::nullopt;
        ++counts_["P8"];
        if (!good_statep(v, impl_.add(w, s)))
          return Violation{"P8", "good_statep(" + std::to_string(v) + ") lost by add " + std::to_string(w)};
        if (!good_statep(v, impl_.del(w, s)))
          return Violation{"P8", "good_statep(" + std::to_string(v) + ") lost by del " + std::to_string(w)};
        return std::nullopt;
      };
      if (auto bad = check_witness(v))
        return bad;
      for (Value w : witnesses_)
        if (w != v)
          if (auto bad = check_witness(w))
            return bad;
    }

    std::optional<bool> ret;
    switch (op.tag) {
    case OpTag::Add:
      next = impl_.add(v, s);
      break;
    case OpTag::Del:
      next = impl_.del(v, s);
      break;
    case OpTag::IsElement:
      ret = impl_.is_element(v, s);
      next = s;
      break;
    }

    if (!arraysetp(next))
      return Violation{"shape", "successor state violates the shape invariant"};
    ++counts_["P6"];
    if (!chains_partition(next))
      return Violation{"P6", "used and free chains do not partition the slots"};
    ++counts_["P5"];
    if (aset_len(next) + aset_len_free(next) != cap)
      return Violation{"P5", "aset_len + aset_len_free = " + std::to_string(aset_len(next) + aset_len_free(next)) +
                                 ", capacity " + std::to_string(cap)};
    ++counts_["P7"];
    if (!free_head_used_head_relation(next))
      return Violation{"P7", "free_head == used_head == " + std::to_string(next.free_head)};

    auto abstracted = model_of(next);
    if (!abstracted)
      return Violation{"model", "abstraction failed: used chain is cyclic or out of range"};
    next_model = std::move(*abstracted);

    const bool present = model.count(v) > 0;
    switch (op.tag) {
    case OpTag::Add: {
      if (len < cap) {
        ++counts_["P2"];
        Model expected = model;
        expected.insert(v);
        if (next_model != expected)
          return Violation{"P2", "model after add is " + show(next_model) + ", expected " + show(expected)};
      } else if (!present) {
        ++counts_["P2"];
        if (!(next == s))
          return Violation{"P2", "add into a full set changed the state"};
      }
      if (present) {
        ++counts_["P4"];
        if (!(next == s))
          return Violation{"P4", "add of a present value changed the state"};
      }
      if (!present && oracle.size() < cap)
        oracle.insert(v);
      break;
    }
    case OpTag::Del: {
      ++counts_["P3"];
      Model expected = model;
      expected.erase(v);
      if (next_model != expected)
        return Violation{"P3", "model after del is " + show(next_model) + ", expected " + show(expected)};
      if (!present) {
        ++counts_["P4"];
        if (!(next == s))
          return Violation{"P4", "del of an absent value changed the state"};
      }
      oracle.erase(v);
      break;
    }
    case OpTag::IsElement:
      if (*ret != (oracle.count(v) > 0))
        return Violation{"model", "aset_is_element returned " + std::string(*ret ? "true" : "false") +
                                      " but the set " + (oracle.count(v) ? "contains " : "lacks ") +
                                      std::to_string(v)};
      break;
    }

    ++counts_["model"];
    if (next_model != oracle)
      return Violation{"model", "abstraction " + show(next_model) + " differs from reference set " + show(oracle)};
    return std::nullopt;
  }

private:
  const SetOps &impl_;
  const std::vector<Value> &witnesses_;
  std::map<std::string, std::uint64_t> &counts_;
};

class Exhaustive {
public:
  Exhaustive(Index capacity, std::size_t depth, std::size_t alphabet, const SetOps &impl)
      : capacity_(capacity), depth_(depth), impl_(impl) {
    for (std::size_t v = 0; v < alphabet; ++v)
      values_.push_back(static_cast<Value>(v));
    for (OpTag tag : {OpTag::Add, OpTag::Del, OpTag::IsElement})
      for (Value v : values_)
        alphabet_.push_back(OpRequest{tag, v});
  }

  void run(CheckReport &report) {
    StepChecker checker(impl_, values_, report.property_checks);
    const Arrayset init = aset_init(capacity_);
    if (!chains_partition(init) || !free_head_used_head_relation(init))
      report.add_failure(Failure{"shape", "initial state is not well formed", {}});
    else if (depth_ > 0)
      dfs(checker, report, init, Model{}, Model{}, depth_);
  }

private:
  void dfs(StepChecker &checker, CheckReport &report, const Arrayset &s, const Model &model, const Model &oracle,
           std::size_t remaining) {
    for (const auto &op : alphabet_) {
      prefix_.push_back(op);
      Model next_oracle = oracle;
      Arrayset next;
      Model next_model;
      ++report.steps_checked;
      if (auto bad = checker.step(s, model, op, next_oracle, next, next_model))
        report.add_failure(Failure{bad->property, bad->detail, prefix_});
      else if (remaining > 1)
        dfs(checker, report, next, next_model, next_oracle, remaining - 1);
      prefix_.pop_back();
    }
  }

  Index capacity_;
  std::size_t depth_;
  const SetOps &impl_;
  std::vector<Value> values_;
  std::vector<OpRequest> alphabet_;
  std::vector<OpRequest> prefix_;
};

} // namespace

CheckReport check_sequence(const std::vector<OpRequest> &ops, Index capacity, const SetOps &impl,
                           const std::vector<Value> &extra_witnesses) {
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.cases_run = 1;
  StepChecker checker(impl, extra_witnesses, report.property_checks);
  Arrayset s = aset_init(capacity);
  Model model, oracle;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    Arrayset next;
    Model next_model;
    ++report.steps_checked;
    if (auto bad = checker.step(s, model, ops[i], oracle, next, next_model)) {
      report.add_failure(Failure{bad->property, bad->detail,
                                 std::vector<OpRequest>(ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(i) + 1)});
      break;
    }
    s = std::move(next);
    model = std::move(next_model);
  }
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

CheckReport random_check(const RandomCheckConfig &config, const SetOps &impl) {
  const auto start = std::chrono::steady_clock::now();
  unsigned workers = config.workers ? config.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(config.sequences, 1)));

  auto shard = [&](std::size_t begin, std::size_t end) {
    CheckReport part;
    for (std::size_t i = begin; i < end; ++i)
      part.merge(check_sequence(random_ops(config.seed + i, config.steps, config.capacity, config.value_range),
                                config.capacity, impl));
    return part;
  };

  std::vector<std::future<CheckReport>> parts;
  const std::size_t per = (config.sequences + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(config.sequences, w * per);
    const std::size_t end = std::min(config.sequences, begin + per);
    parts.push_back(std::async(std::launch::async, shard, begin, end));
  }
  CheckReport report;
  for (auto &part : parts)
    report.merge(part.get());
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

CheckReport exhaustive_check(Index capacity, std::size_t depth, std::size_t alphabet, const SetOps &impl) {
  if (capacity == 0)
    throw std::invalid_argument("capacity must be at least 1");
  std::uint64_t sequences = 1;
  for (std::size_t i = 0; i < depth; ++i) {
    sequences *= 3 * static_cast<std::uint64_t>(alphabet);
    if (sequences > kExhaustiveLimit)
      throw std::invalid_argument("exhaustive enumeration exceeds (3*alphabet)^depth <= 10^8");
  }
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  report.cases_run = sequences;
  Exhaustive(capacity, depth, alphabet, impl).run(report);
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

std::vector<OpRequest> minimize_failure(std::vector<OpRequest> ops, Index capacity, const SetOps &impl) {
  auto failing_prefix = [&](const std::vector<OpRequest> &candidate) -> std::optional<std::vector<OpRequest>> {
    auto report = check_sequence(candidate, capacity, impl);
    if (report.passed())
      return std::nullopt;
    return report.failures.front().ops;
  };
  auto current = failing_prefix(ops);
  if (!current)
    return ops;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (std::size_t i = 0; i < current->size(); ++i) {
      auto candidate = *current;
      candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto smaller = failing_prefix(candidate)) {
        current = std::move(smaller);
        shrunk = true;
        break;
      }
    }
  }
  return *current;
}

} // namespace arrayset

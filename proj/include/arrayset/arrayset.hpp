/// @file arrayset.hpp
/// @brief Reference implementation of the array-backed set.
///
/// One `anext` array threads two singly linked lists through the slots:
/// the used list (from `used_head`) whose slots hold set elements in
/// `avals`, and the free list (from `free_head`). The capacity value itself
/// terminates both lists. Operations take and return the whole state by
/// value, mirroring the RAR source in corpus/arrayset.rar statement for
/// statement; capacity is a runtime parameter here so small instances can
/// be enumerated exhaustively.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace arrayset {

using Value = std::int64_t;
using Index = std::size_t;

struct Arrayset {
  std::vector<Index> anext;
  std::vector<Value> avals;
  Index free_head = 0;
  Index used_head = 0;

  /// ARR_SZ: slot count, and the list terminator.
  Index capacity() const { return anext.size(); }

  bool operator==(const Arrayset &) const = default;
};

/// Every slot free, threaded in ascending order; avals zeroed.
/// Throws std::invalid_argument for capacity 0.
Arrayset aset_init(Index capacity);

Arrayset aset_add(Value val, Arrayset aset);
Arrayset aset_del(Value val, Arrayset aset);
bool aset_is_element(Value val, const Arrayset &aset);

/// First `previ` on the chain from `start` (inclusive, at most capacity
/// steps) with `avals[anext[previ]] == val`; capacity if there is none.
Index aset_element_prev_from(Index start, Value val, const Arrayset &aset);

/// Chain lengths from used_head / free_head, capped at capacity.
Index aset_len(const Arrayset &aset);
Index aset_len_free(const Arrayset &aset);

/// The three operations the harness drives. Swapping one out lets tests
/// confirm that a broken implementation is caught.
struct SetOps {
  std::string name;
  std::function<Arrayset(Value, Arrayset)> add;
  std::function<Arrayset(Value, Arrayset)> del;
  std::function<bool(Value, const Arrayset &)> is_element;
};

const SetOps &reference_ops();

} // namespace arrayset

#include "arrayset/arrayset.hpp"

#include <stdexcept>

namespace arrayset {

Arrayset aset_init(Index capacity) {
  if (capacity == 0)
    throw std::invalid_argument("arrayset capacity must be at least 1");
  Arrayset aset;
  aset.anext.resize(capacity);
  aset.avals.assign(capacity, 0);
  for (Index i = 0; i < capacity; ++i)
    aset.anext[i] = i + 1;
  aset.free_head = 0;
  aset.used_head = capacity;
  return aset;
}

bool aset_is_element(Value val, const Arrayset &aset) {
  const Index arr_sz = aset.capacity();
  Index curr_index = aset.used_head;
  bool found = false;
  for (Index step = 0; step < arr_sz; ++step) {
    if (!found && curr_index < arr_sz) {
      if (aset.avals[curr_index] == val)
        found = true;
      else
        curr_index = aset.anext[curr_index];
    }
  }
  return found;
}

Index aset_element_prev_from(Index start, Value val, const Arrayset &aset) {
  const Index arr_sz = aset.capacity();
  Index curr_index = start;
  Index prev_index = arr_sz;
  for (Index step = 0; step < arr_sz; ++step) {
    if (prev_index >= arr_sz && curr_index < arr_sz) {
      const Index next_index = aset.anext[curr_index];
      if (next_index < arr_sz && aset.avals[next_index] == val)
        prev_index = curr_index;
      else
        curr_index = next_index;
    }
  }
  return prev_index;
}

namespace {

Index chain_length(const Arrayset &aset, Index head) {
  const Index arr_sz = aset.capacity();
  Index curr_index = head;
  Index count = 0;
  for (Index step = 0; step < arr_sz; ++step) {
    if (curr_index < arr_sz) {
      ++count;
      curr_index = aset.anext[curr_index];
    }
  }
  return count;
}

} // namespace

Index aset_len(const Arrayset &aset) { return chain_length(aset, aset.used_head); }
Index aset_len_free(const Arrayset &aset) { return chain_length(aset, aset.free_head); }

Arrayset aset_add(Value val, Arrayset aset) {
  const Index arr_sz = aset.capacity();
  const Index curr_index = aset.free_head;

  if (curr_index >= arr_sz)
    return aset; // Full
  if (aset.used_head < arr_sz && aset_is_element(val, aset))
    return aset;

  aset.free_head = aset.anext[aset.free_head];
  aset.avals[curr_index] = val;
  aset.anext[curr_index] = aset.used_head;
  aset.used_head = curr_index;
  return aset;
}

Arrayset aset_del(Value val, Arrayset aset) {
  const Index arr_sz = aset.capacity();
  Index curr_index = aset.used_head;

  if (aset.used_head >= arr_sz)
    return aset; // Empty

  if (aset.avals[curr_index] == val) {
    aset.used_head = aset.anext[curr_index];
    aset.anext[curr_index] = aset.free_head;
    aset.free_head = curr_index;
    return aset;
  }

  const Index prev_index = aset_element_prev_from(aset.used_head, val, aset);
  if (prev_index >= arr_sz)
    return aset;

  curr_index = aset.anext[prev_index];
  if (curr_index >= arr_sz)
    return aset;

  aset.anext[prev_index] = aset.anext[curr_index];
  aset.anext[curr_index] = aset.free_head;
  aset.free_head = curr_index;
  return aset;
}

const SetOps &reference_ops() {
  static const SetOps ops{"reference", aset_add, aset_del, aset_is_element};
  return ops;
}

} // namespace arrayset

#include "arrayset/oracle.hpp"

#include <algorithm>

namespace arrayset {

std::optional<std::vector<Index>> walk_chain(const Arrayset &aset, Index head) {
  const Index cap = aset.capacity();
  std::vector<bool> seen(cap, false);
  std::vector<Index> chain;
  Index curr = head;
  while (curr != cap) {
    if (curr > cap || seen[curr])
      return std::nullopt;
    seen[curr] = true;
    chain.push_back(curr);
    curr = aset.anext[curr];
  }
  return chain;
}

std::optional<Model> model_of(const Arrayset &aset) {
  auto chain = walk_chain(aset, aset.used_head);
  if (!chain || aset.avals.size() != aset.capacity())
    return std::nullopt;
  Model model;
  for (Index i : *chain)
    model.insert(aset.avals[i]);
  return model;
}

bool arraysetp(const Arrayset &aset) {
  const Index cap = aset.capacity();
  if (cap == 0 || aset.avals.size() != cap)
    return false;
  if (aset.free_head > cap || aset.used_head > cap)
    return false;
  return std::all_of(aset.anext.begin(), aset.anext.end(), [cap](Index link) { return link <= cap; });
}

bool free_head_used_head_relation(const Arrayset &aset) { return aset.free_head != aset.used_head; }

namespace {

// Used-chain values along the bounded walk the set operations themselves
// perform (at most capacity steps).
std::vector<Value> used_values(const Arrayset &aset) {
  const Index cap = aset.capacity();
  std::vector<Value> out;
  Index curr = aset.used_head;
  for (Index step = 0; step < cap && curr < cap; ++step) {
    out.push_back(aset.avals[curr]);
    curr = aset.anext[curr];
  }
  return out;
}

} // namespace

bool no_dups(Value val, const Arrayset &aset) {
  const auto values = used_values(aset);
  return std::count(values.begin(), values.end(), val) <= 1;
}

bool all_distinct(const Arrayset &aset) {
  auto values = used_values(aset);
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

bool good_statep(Value val, const Arrayset &aset) {
  return arraysetp(aset) && free_head_used_head_relation(aset) && no_dups(val, aset) &&
         aset_len(aset) + aset_len_free(aset) == aset.capacity();
}

bool chains_partition(const Arrayset &aset) {
  if (!arraysetp(aset))
    return false;
  const auto used = walk_chain(aset, aset.used_head);
  const auto free = walk_chain(aset, aset.free_head);
  if (!used || !free || used->size() + free->size() != aset.capacity())
    return false;
  std::vector<bool> covered(aset.capacity(), false);
  for (const auto *chain : {&*used, &*free}) {
    for (Index i : *chain) {
      if (covered[i])
        return false;
      covered[i] = true;
    }
  }
  return true;
}

} // namespace arrayset

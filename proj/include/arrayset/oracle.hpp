/// @file oracle.hpp
/// @brief Abstraction function and executable state predicates.
///
/// `model_of` maps a concrete state to the mathematical set it represents.
/// The predicates are the well-formedness conditions the operations must
/// preserve; `good_statep` is the hypothesis of the add-membership
/// property.

#pragma once

#include "arrayset/arrayset.hpp"

#include <optional>
#include <set>
#include <vector>

namespace arrayset {

using Model = std::set<Value>;

/// Slot indices along a chain, head first. nullopt if the chain revisits a
/// slot or holds a link beyond the terminator.
std::optional<std::vector<Index>> walk_chain(const Arrayset &aset, Index head);

/// Values at used-chain slots; nullopt when the used chain is broken.
std::optional<Model> model_of(const Arrayset &aset);

/// Shape: both arrays hold capacity >= 1 entries; heads and links <= capacity.
bool arraysetp(const Arrayset &aset);
bool free_head_used_head_relation(const Arrayset &aset);
/// `val` occurs at most once among used-chain values.
bool no_dups(Value val, const Arrayset &aset);
/// Every used-chain value is distinct. Stronger than `no_dups` for any one
/// value; not part of `good_statep`.
bool all_distinct(const Arrayset &aset);
bool good_statep(Value val, const Arrayset &aset);
/// Used and free chains are acyclic, terminator-ended, disjoint, and
/// together visit every slot exactly once.
bool chains_partition(const Arrayset &aset);

} // namespace arrayset

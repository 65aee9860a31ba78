#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coso/user_set.hpp"

namespace coso {

// A set partition of a carrier X (a subset of the ground set). Blocks are
// kept sorted by least element, so equal partitions compare equal.
class Partition {
 public:
  Partition() = default;
  // Throws DomainError unless the blocks are nonempty, disjoint and cover
  // the carrier.
  Partition(UserSet carrier, std::vector<UserSet> blocks);

  static Partition singletons(UserSet carrier);
  static Partition whole(UserSet carrier);

  UserSet carrier() const { return carrier_; }
  const std::vector<UserSet>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool is_singletons() const { return blocks_.size() == static_cast<std::size_t>(carrier_.size()); }
  // Block containing ground position i; throws DomainError if i is outside.
  UserSet block_of(int index) const;
  bool has_block(UserSet block) const;
  std::vector<UserSet> nonsingleton_blocks() const;

  // Every block of *this lies inside a block of other (same carrier).
  bool is_finer_or_equal(const Partition& other) const;

  // Replaces the listed blocks by their union.
  Partition merged(const std::vector<UserSet>& parts) const;
  // Adds a new singleton {index} outside the carrier.
  Partition extended(int index) const;

  bool operator==(const Partition&) const = default;

 private:
  UserSet carrier_;
  std::vector<UserSet> blocks_;
};

// Coarsest common refinement.
Partition meet(const Partition& p, const Partition& q);

bool is_strictly_finer(const Partition& p, const Partition& q);

// Blocks of p contained in c; c must be a union of blocks of p.
std::vector<UserSet> restrict_blocks(UserSet c, const Partition& p);

// Number of partitions of an n-set.
std::uint64_t bell_number(int n);

// Calls fn on every partition of x once, in restricted-growth-string order
// (the single-block partition first). Throws LimitError when |x| exceeds
// the exhaustive limit.
void enumerate_partitions(UserSet x, const std::function<void(const Partition&)>& fn);

// Restricted growth strings of length n whose first `prefix_len` entries are
// fixed to `prefix`; fn receives the full string. Building block for the
// split enumeration in the parallel kernels.
void enumerate_rgs(int n, const std::vector<std::uint8_t>& prefix,
                   const std::function<void(const std::vector<std::uint8_t>&)>& fn);

// All valid RGS prefixes of the given length.
std::vector<std::vector<std::uint8_t>> rgs_prefixes(int n, int length);

// Partition of x described by a restricted growth string over its members.
Partition partition_from_rgs(UserSet x, const std::vector<std::uint8_t>& rgs);

}  // namespace coso

#include "coso/partition.hpp"

#include <algorithm>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

namespace coso {

namespace {

void sort_blocks(std::vector<UserSet>& blocks) {
  std::sort(blocks.begin(), blocks.end(), [](UserSet a, UserSet b) { return a.canonical_less(b); });
}

}  // namespace

Partition::Partition(UserSet carrier, std::vector<UserSet> blocks) : carrier_(carrier), blocks_(std::move(blocks)) {
  UserSet seen;
  for (auto b : blocks_) {
    if (b.empty()) throw DomainError("partition has an empty block");
    if (b.intersects(seen)) throw DomainError("partition blocks overlap");
    seen |= b;
  }
  if (seen != carrier_) throw DomainError("partition blocks do not cover the carrier");
  sort_blocks(blocks_);
}

Partition Partition::singletons(UserSet carrier) {
  std::vector<UserSet> blocks;
  carrier.for_each([&](int i) { blocks.push_back(UserSet::single(i)); });
  return Partition(carrier, std::move(blocks));
}

Partition Partition::whole(UserSet carrier) {
  if (carrier.empty()) return Partition();
  return Partition(carrier, {carrier});
}

UserSet Partition::block_of(int index) const {
  for (auto b : blocks_) {
    if (b.contains(index)) return b;
  }
  throw DomainError("position outside the partition carrier");
}

bool Partition::has_block(UserSet block) const {
  return std::find(blocks_.begin(), blocks_.end(), block) != blocks_.end();
}

std::vector<UserSet> Partition::nonsingleton_blocks() const {
  std::vector<UserSet> out;
  for (auto b : blocks_) {
    if (b.size() > 1) out.push_back(b);
  }
  return out;
}

bool Partition::is_finer_or_equal(const Partition& other) const {
  if (carrier_ != other.carrier_) throw DomainError("partition carrier mismatch");
  for (auto b : blocks_) {
    if (!b.subset_of(other.block_of(b.least()))) return false;
  }
  return true;
}

Partition Partition::merged(const std::vector<UserSet>& parts) const {
  UserSet u;
  std::vector<UserSet> rest;
  for (auto b : blocks_) {
    if (std::find(parts.begin(), parts.end(), b) != parts.end()) {
      u |= b;
    } else {
      rest.push_back(b);
    }
  }
  if (!u.empty()) rest.push_back(u);
  return Partition(carrier_, std::move(rest));
}

Partition Partition::extended(int index) const {
  if (carrier_.contains(index)) throw DomainError("position already in the carrier");
  auto blocks = blocks_;
  blocks.push_back(UserSet::single(index));
  return Partition(carrier_.with(index), std::move(blocks));
}

Partition meet(const Partition& p, const Partition& q) {
  if (p.carrier() != q.carrier()) throw DomainError("partition carrier mismatch");
  std::vector<UserSet> blocks;
  for (auto a : p.blocks()) {
    for (auto b : q.blocks()) {
      if ((a & b).empty()) continue;
      blocks.push_back(a & b);
    }
  }
  return Partition(p.carrier(), std::move(blocks));
}

bool is_strictly_finer(const Partition& p, const Partition& q) { return p != q && p.is_finer_or_equal(q); }

std::vector<UserSet> restrict_blocks(UserSet c, const Partition& p) {
  std::vector<UserSet> out;
  UserSet covered;
  for (auto b : p.blocks()) {
    if (b.subset_of(c)) {
      out.push_back(b);
      covered |= b;
    } else if (b.intersects(c)) {
      throw DomainError("subset is not a union of partition blocks");
    }
  }
  if (covered != c) throw DomainError("subset is not a union of partition blocks");
  return out;
}

std::uint64_t bell_number(int n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

void enumerate_rgs(int n, const std::vector<std::uint8_t>& prefix,
                   const std::function<void(const std::vector<std::uint8_t>&)>& fn) {
  std::vector<std::uint8_t> a(prefix);
  a.resize(static_cast<std::size_t>(n), 0);
  const int fixed = static_cast<int>(prefix.size());
  if (n == 0) {
    fn(a);
    return;
  }
  std::vector<std::uint8_t> mx(static_cast<std::size_t>(n), 0);  // max of a[0..k-1]
  auto recompute = [&](int from) {
    for (int k = std::max(from, 1); k < n; ++k) mx[k] = std::max(mx[k - 1], a[k - 1]);
  };
  for (int k = fixed; k < n; ++k) a[k] = 0;
  recompute(1);
  while (true) {
    fn(a);
    int k = n - 1;
    while (k >= fixed && k > 0 && a[k] > mx[k]) --k;
    if (k < fixed || k == 0) return;
    ++a[k];
    for (int j = k + 1; j < n; ++j) a[j] = 0;
    recompute(k + 1);
  }
}

std::vector<std::vector<std::uint8_t>> rgs_prefixes(int n, int length) {
  length = std::min(length, n);
  std::vector<std::vector<std::uint8_t>> out;
  enumerate_rgs(length, {}, [&](const std::vector<std::uint8_t>& a) { out.push_back(a); });
  return out;
}

Partition partition_from_rgs(UserSet x, const std::vector<std::uint8_t>& rgs) {
  std::vector<UserSet> blocks;
  std::size_t k = 0;
  x.for_each([&](int i) {
    const std::size_t label = rgs[k++];
    if (label >= blocks.size()) blocks.resize(label + 1);
    blocks[label] = blocks[label].with(i);
  });
  return Partition(x, std::move(blocks));
}

void enumerate_partitions(UserSet x, const std::function<void(const Partition&)>& fn) {
  if (x.size() > exhaustive_limit()) {
    throw LimitError("partition enumeration over " + std::to_string(x.size()) + " users exceeds the limit of " +
                     std::to_string(exhaustive_limit()));
  }
  enumerate_rgs(x.size(), {}, [&](const std::vector<std::uint8_t>& a) { fn(partition_from_rgs(x, a)); });
}

}  // namespace coso

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace coso {

// A subset of the ground set, addressed by ground-set position (not user id).
// Ground sets are capped at 32 users; the solvers impose tighter caps.
class UserSet {
 public:
  using Mask = std::uint32_t;
  static constexpr int kCapacity = 32;

  constexpr UserSet() = default;
  constexpr explicit UserSet(Mask mask) : mask_(mask) {}

  static constexpr UserSet single(int index) { return UserSet(Mask{1} << index); }
  // {0, 1, ..., n-1}
  static constexpr UserSet first(int n) {
    return UserSet(n >= kCapacity ? ~Mask{0} : ((Mask{1} << n) - 1));
  }

  constexpr Mask mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int index) const { return (mask_ >> index) & 1U; }
  constexpr bool subset_of(UserSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool intersects(UserSet other) const { return (mask_ & other.mask_) != 0; }
  // Position of the least member; -1 when empty.
  constexpr int least() const { return mask_ == 0 ? -1 : std::countr_zero(mask_); }

  constexpr UserSet with(int index) const { return UserSet(mask_ | (Mask{1} << index)); }
  constexpr UserSet without(int index) const { return UserSet(mask_ & ~(Mask{1} << index)); }

  constexpr UserSet operator|(UserSet o) const { return UserSet(mask_ | o.mask_); }
  constexpr UserSet operator&(UserSet o) const { return UserSet(mask_ & o.mask_); }
  constexpr UserSet operator-(UserSet o) const { return UserSet(mask_ & ~o.mask_); }
  constexpr UserSet& operator|=(UserSet o) { mask_ |= o.mask_; return *this; }
  constexpr UserSet& operator&=(UserSet o) { mask_ &= o.mask_; return *this; }

  constexpr bool operator==(const UserSet&) const = default;

  // Ordering used for canonical display: by least element, then by mask.
  constexpr bool canonical_less(UserSet other) const {
    const int a = least();
    const int b = other.least();
    if (a != b) return a < b;
    return mask_ < other.mask_;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Mask m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (Mask m = mask_; m != 0; m &= m - 1) fn(std::countr_zero(m));
  }

 private:
  Mask mask_ = 0;
};

}  // namespace coso

template <>
struct std::hash<coso::UserSet> {
  std::size_t operator()(coso::UserSet s) const noexcept { return std::hash<std::uint32_t>{}(s.mask()); }
};

#pragma once

// Shared fixtures and independent brute-force references for the tests.
// Nothing here calls into the library's own solvers.

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/omniscience.hpp"
#include "coso/partition.hpp"
#include "coso/rational.hpp"

namespace coso::test {

inline Rational q(const char* s) { return parse_rational(s); }

// Example 1: five users observing subsets of ten independent bits.
inline EntropyOracle example1() {
  return EntropyOracle::from_bits({1, 2, 3, 4, 5}, {{"b", "c", "d", "h", "i"},
                                                    {"e", "f", "h", "i"},
                                                    {"b", "c", "e", "j"},
                                                    {"a", "b", "c", "d", "f", "g", "i", "j"},
                                                    {"a", "b", "c", "f", "i", "j"}});
}

inline EntropyOracle independent(int n) {
  std::vector<int> ids;
  std::vector<std::vector<std::string>> labels;
  for (int i = 1; i <= n; ++i) {
    ids.push_back(i);
    labels.push_back({"x" + std::to_string(i), "y" + std::to_string(i)});
  }
  labels[0].push_back("z");
  return EntropyOracle::from_bits(ids, labels);
}

// Random bits instance with 3..max_users users; every user sees at least one bit.
inline EntropyOracle random_bits(std::uint64_t seed, int max_users = 6) {
  std::mt19937_64 rng(seed);
  const int n = 3 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_users - 2));
  const int pool = 5 + static_cast<int>(rng() % 6);
  std::vector<int> ids;
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ids.push_back(i + 1);
    for (int b = 0; b < pool; ++b) {
      if (rng() % 5 < 2) labels[static_cast<std::size_t>(i)].push_back("b" + std::to_string(b));
    }
    if (labels[static_cast<std::size_t>(i)].empty()) {
      labels[static_cast<std::size_t>(i)].push_back("b" + std::to_string(rng() % static_cast<std::uint64_t>(pool)));
    }
  }
  return EntropyOracle::from_bits(ids, labels);
}

inline RateVector rv(std::initializer_list<const char*> values) {
  RateVector r;
  for (const char* v : values) r.push_back(parse_rational(v));
  return r;
}

using Blocks = std::vector<UserSet>;

inline Blocks sorted_blocks(Blocks b) {
  std::sort(b.begin(), b.end(), [](UserSet x, UserSet y) { return x.mask() < y.mask(); });
  return b;
}

// All set partitions of x, blocks as masks.
inline void each_partition(UserSet x, const std::function<void(const Blocks&)>& fn) {
  std::vector<int> elems = x.members();
  Blocks cur;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == elems.size()) {
      fn(cur);
      return;
    }
    const UserSet e = UserSet::single(elems[k]);
    for (std::size_t j = 0, n = cur.size(); j < n; ++j) {
      cur[j] |= e;
      rec(k + 1);
      cur[j] = cur[j] - e;
    }
    cur.push_back(e);
    rec(k + 1);
    cur.pop_back();
  };
  if (!x.empty()) rec(0);
}

inline Blocks meet_blocks(const Blocks& a, const Blocks& b) {
  Blocks out;
  for (auto x : a) {
    for (auto y : b) {
      if ((x & y).mask() != 0) out.push_back(x & y);
    }
  }
  return sorted_blocks(out);
}

struct BruteTruncation {
  Rational value;
  Blocks finest;
};

// min over partitions of x of sum (alpha - H(V) + H(C)), with the meet of all minimizers.
inline BruteTruncation brute_dilworth(const EntropyOracle& o, UserSet x, const Rational& alpha) {
  BruteTruncation best;
  bool first = true;
  each_partition(x, [&](const Blocks& p) {
    Rational v = 0;
    for (auto c : p) v += alpha - o.total() + o.entropy(c);
    if (first || v < best.value) {
      best = {v, sorted_blocks(p)};
      first = false;
    } else if (v == best.value) {
      best.finest = meet_blocks(best.finest, p);
    }
  });
  return best;
}

// R_ACO(x) from Eq. (1); x must have at least two members.
inline Rational brute_racoo(const EntropyOracle& o, UserSet x) {
  Rational best = -1;
  each_partition(x, [&](const Blocks& p) {
    if (p.size() < 2) return;
    Rational s = 0;
    for (auto c : p) s += o.entropy(x) - o.entropy(c);
    s /= static_cast<long long>(p.size() - 1);
    if (s > best) best = s;
  });
  return best;
}

inline Rational brute_r(const EntropyOracle& o, UserSet x, Model m) {
  if (x.size() < 2) return 0;
  const Rational r = brute_racoo(o, x);
  return m == Model::kAco ? r : ceil(r);
}

// CO region of x: r(Y) >= H(x) - H(x \ Y) for every nonempty proper Y of x.
inline bool brute_in_region(const EntropyOracle& o, UserSet x, const RateVector& r) {
  const auto m = x.members();
  for (std::uint32_t s = 1; s + 1 < (1U << m.size()); ++s) {
    UserSet y;
    Rational sum = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (s >> k & 1U) {
        y = y.with(m[k]);
        sum += r[static_cast<std::size_t>(m[k])];
      }
    }
    if (sum < o.entropy(x) - o.entropy(x - y)) return false;
  }
  return true;
}

// Theorem 1 by brute force: nonsingleton proper X with H(V) - H(X) + R(X) <= R(V).
inline std::vector<UserSet> brute_complimentary(const EntropyOracle& o, Model m) {
  const Rational rv = brute_r(o, o.ground(), m);
  std::vector<UserSet> out;
  for (std::uint32_t s = 1; s < o.ground().mask(); ++s) {
    const UserSet x(s);
    if (x.size() < 2) continue;
    if (o.total() - o.entropy(x) + brute_r(o, x, m) <= rv) out.push_back(x);
  }
  return out;
}

inline std::vector<UserSet> as_sorted(std::vector<UserSet> v) {
  std::sort(v.begin(), v.end(), [](UserSet a, UserSet b) { return a.mask() < b.mask(); });
  return v;
}

}  // namespace coso::test

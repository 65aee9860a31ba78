#include "coso/kernels.hpp"

#include <exception>
#include <optional>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coso {

namespace {

// Runs fn(0..n-1), in parallel when asked. The first exception thrown by any
// iteration is rethrown on the calling thread.
template <typename Fn>
void run_range(long long n, Exec exec, Fn&& fn) {
  if (exec == Exec::kSerial) {
    for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(coso_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<PwlFn> fusion_cost_table(const EntropyOracle& oracle, int phi, const std::vector<UserSet>& blocks,
                                     const std::vector<PwlFn>& rates, Exec exec) {
  const std::size_t k = blocks.size();
  const std::size_t count = std::size_t{1} << k;
  const Rational& lo = rates.at(static_cast<std::size_t>(phi)).lo();
  const Rational& hi = rates.at(static_cast<std::size_t>(phi)).hi();

  std::vector<PwlFn> block_sum;
  for (auto b : blocks) {
    PwlFn s = PwlFn::constant(Rational(0), lo, hi);
    b.for_each([&](int j) { s += rates[static_cast<std::size_t>(j)]; });
    block_sum.push_back(std::move(s));
  }

  std::vector<PwlFn> out(count);
  auto eval = [&](std::size_t s) {
    UserSet u = UserSet::single(phi);
    PwlFn sum = rates[static_cast<std::size_t>(phi)];
    for (std::size_t b = 0; b < k; ++b) {
      if ((s >> b) & 1U) {
        u |= blocks[b];
        sum += block_sum[b];
      }
    }
    out[s] = PwlFn::affine(Rational(1), oracle.entropy(u) - oracle.total(), lo, hi) - sum;
  };

  run_range(static_cast<long long>(count), exec, eval);
  return out;
}

namespace {

// Running best over a stream of partitions: optimum value and meet of the
// optimizers. `maximize` flips the comparison.
struct Best {
  std::optional<Rational> value;
  std::optional<Partition> meet_of;

  void offer(const Rational& v, UserSet x, const std::vector<std::uint8_t>& rgs, bool maximize) {
    if (value && (maximize ? v < *value : v > *value)) return;
    Partition p = partition_from_rgs(x, rgs);
    if (!value || v != *value) {
      value = v;
      meet_of = std::move(p);
    } else {
      meet_of = meet(*meet_of, p);
    }
  }

  void absorb(const Best& o, bool maximize) {
    if (!o.value) return;
    if (!value || (maximize ? *o.value > *value : *o.value < *value)) {
      *this = o;
    } else if (*o.value == *value) {
      meet_of = meet(*meet_of, *o.meet_of);
    }
  }
};

// Runs `score` over every partition of x (as an RGS plus block masks),
// splitting the enumeration by RGS prefix. Returns the combined Best.
template <typename Score>
Best scan_partitions(UserSet x, bool maximize, Exec exec, Score score) {
  const int n = x.size();
  if (n > exhaustive_limit()) {
    throw LimitError("partition enumeration over " + std::to_string(n) + " users exceeds the limit of " +
                     std::to_string(exhaustive_limit()));
  }
  const std::vector<int> members = x.members();
  auto prefixes = rgs_prefixes(n, exec == Exec::kParallel ? std::min(n, 5) : 0);
  std::vector<Best> partial(prefixes.size());

  auto run = [&](std::size_t t) {
    Best local;
    std::vector<UserSet> masks;
    enumerate_rgs(n, prefixes[t], [&](const std::vector<std::uint8_t>& a) {
      masks.assign(static_cast<std::size_t>(n), UserSet());
      std::size_t used = 0;
      for (int k = 0; k < n; ++k) {
        masks[a[k]] = masks[a[k]].with(members[static_cast<std::size_t>(k)]);
        used = std::max<std::size_t>(used, std::size_t{a[k]} + 1);
      }
      masks.resize(used);
      std::optional<Rational> v = score(masks);
      if (v) local.offer(*v, x, a, maximize);
    });
    partial[t] = std::move(local);
  };

  run_range(static_cast<long long>(prefixes.size()), exec, run);

  Best best;
  for (const auto& b : partial) best.absorb(b, maximize);
  return best;
}

}  // namespace

TruncationValue dilworth_bruteforce(const EntropyOracle& oracle, UserSet x, const Rational& alpha, Exec exec) {
  if (x.empty() || !x.subset_of(oracle.ground())) throw DomainError("truncation carrier must be a nonempty subset of V");
  const Rational shift = alpha - oracle.total();
  Best best = scan_partitions(x, false, exec, [&](const std::vector<UserSet>& blocks) -> std::optional<Rational> {
    Rational v = shift * static_cast<int>(blocks.size());
    for (auto b : blocks) v += oracle.entropy(b);
    return v;
  });
  return {*best.value, *best.meet_of};
}

TruncationValue eq1_bruteforce(const EntropyOracle& oracle, UserSet x, Exec exec) {
  if (x.size() < 2 || !x.subset_of(oracle.ground())) throw DomainError("minimum sum-rate needs at least two users");
  const Rational& hx = oracle.entropy(x);
  Best best = scan_partitions(x, true, exec, [&](const std::vector<UserSet>& blocks) -> std::optional<Rational> {
    if (blocks.size() < 2) return std::nullopt;
    Rational v;
    for (auto b : blocks) v += hx - oracle.entropy(b);
    return v / static_cast<int>(blocks.size() - 1);
  });
  // The finest maximizer must itself attain the maximum.
  const auto& blocks = best.meet_of->blocks();
  Rational check;
  for (auto b : blocks) check += hx - oracle.entropy(b);
  if (blocks.size() < 2 || check / static_cast<int>(blocks.size() - 1) != *best.value) {
    throw InternalError("meet of the sum-rate maximizers is not a maximizer");
  }
  return {*best.value, *best.meet_of};
}

std::vector<UserSet> filter_subsets(const std::vector<UserSet>& subsets, const std::function<bool(UserSet)>& keep,
                                    Exec exec) {
  std::vector<char> flags(subsets.size(), 0);
  run_range(static_cast<long long>(subsets.size()), exec, [&](std::size_t i) { flags[i] = keep(subsets[i]); });
  std::vector<UserSet> out;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (flags[i]) out.push_back(subsets[i]);
  }
  return out;
}

}  // namespace coso

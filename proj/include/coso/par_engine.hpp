#pragma once

#include <cstddef>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/kernels.hpp"
#include "coso/partition.hpp"
#include "coso/pwl.hpp"

namespace coso {

// Residual entropy F_alpha(X) = alpha - H(V) + H(X) as a function of alpha
// on [0, H(V)].
PwlFn residual_entropy(const EntropyOracle& oracle, UserSet x);

// State after processing the prefix V_i of the ordering.
struct ParSnapshot {
  UserSet prefix;
  Segmented<Partition> partition;  // Q_alpha(V_i)
  std::vector<PwlFn> rates;        // by ground position; positions past V_i still hold alpha - H(V)
};

struct ParStats {
  // Per step: number of fusion families evaluated, and number of lower
  // envelopes taken (one per segment of the incoming partition).
  std::vector<std::size_t> families;
  std::vector<std::size_t> envelopes;
};

struct ParOutput {
  std::vector<int> ordering;  // ground positions, phi_1 first
  std::vector<PwlFn> rates;   // r_{alpha,i} by ground position
  Segmented<Partition> partition;
  std::vector<ParSnapshot> snapshots;  // snapshots[i-1] is the state after V_i
  ParStats stats;

  Rational rate(int index, const Rational& alpha) const { return rates.at(static_cast<std::size_t>(index))(alpha); }
  std::vector<Rational> rates_at(const Rational& alpha) const;
  // r_alpha(X) read from the final profile.
  Rational sum_at(UserSet x, const Rational& alpha) const;
};

// Incremental form of the parametric algorithm: one user per advance().
class ParEngine {
 public:
  // `ordering` lists ground positions; must be a permutation of V.
  ParEngine(const EntropyOracle& oracle, std::vector<int> ordering, Exec exec = Exec::kParallel);

  bool done() const { return out_.snapshots.size() == out_.ordering.size(); }
  std::size_t step() const { return out_.snapshots.size(); }
  const ParSnapshot& state() const { return out_.snapshots.back(); }
  void advance();
  ParOutput finish();

 private:
  const EntropyOracle* oracle_;
  Exec exec_;
  ParOutput out_;
};

ParOutput par(const EntropyOracle& oracle, const std::vector<int>& ordering, Exec exec = Exec::kParallel);

// Ordering of ground positions from a list of user ids; throws DomainError
// unless it is a permutation of V.
std::vector<int> ordering_from_ids(const EntropyOracle& oracle, const std::vector<int>& ids);
std::vector<int> identity_ordering(const EntropyOracle& oracle);

// F_alpha(U) - r_alpha(U) for U the union of `family`, which must contain
// the singleton {phi}.
PwlFn fusion_cost(const EntropyOracle& oracle, const std::vector<PwlFn>& rates, int phi,
                  const std::vector<UserSet>& family);

TruncationValue dilworth_truncation_bruteforce(const EntropyOracle& oracle, UserSet x, const Rational& alpha,
                                               Exec exec = Exec::kParallel);

// Principal sequence of partitions. Index j runs 0..p: alphas[0] = H(V) and
// partitions[0] = {V}; alphas[j] is the right end of the segment on which
// partitions[j] is the finest minimizer.
struct Psp {
  std::vector<Rational> alphas;
  std::vector<Partition> partitions;

  std::size_t p() const { return partitions.size() - 1; }
  const Rational& min_sum_rate() const { return alphas.at(1); }
  const Partition& fundamental() const { return partitions.at(1); }
  // Critical points ascending: alpha^(p), ..., alpha^(1).
  std::vector<Rational> critical_points() const;
};

Psp extract_psp(const ParOutput& out);
Psp psp_from_segments(const Segmented<Partition>& q, const Rational& top);

}  // namespace coso

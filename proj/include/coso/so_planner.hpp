#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/kernels.hpp"
#include "coso/omniscience.hpp"
#include "coso/par_engine.hpp"

namespace coso {

// Sum over the singleton partition: sum_i (H(V) - H({i})) / (|V| - 1).
Rational singleton_bound(const EntropyOracle& oracle);

// max over the singleton partition and the bipartitions ({i}, V \ {i});
// rounded up for nco.
Rational lower_bound(const EntropyOracle& oracle, Model model);

// Nonsingleton proper subsets in display order: by size, then by sorted
// user ids.
std::vector<UserSet> candidate_subsets(const EntropyOracle& oracle);
void sort_for_display(const EntropyOracle& oracle, std::vector<UserSet>& sets);

// All complimentary subsets by the exact condition
//   H(V) - H(X) + R(X) <= R(V)
// with R the model's minimum sum-rate, each found by partition enumeration.
std::vector<UserSet> complimentary_oracle(const EntropyOracle& oracle, Model model, Exec exec = Exec::kParallel);

// Sufficient test F_lb(X) = F^_lb(X). For nco the bound must be an integer.
bool is_complimentary_sufficient(const EntropyOracle& oracle, UserSet x, const Rational& alpha_lb, Model model,
                                 Method method = Method::kBruteForce);

// Every nonsingleton proper subset passing the sufficient test.
std::vector<UserSet> detect_complimentary(const EntropyOracle& oracle, const Rational& alpha_lb, Model model,
                                          Exec exec = Exec::kParallel);

struct TwoStageResult {
  Rational alpha_lb;
  bool found = false;
  std::size_t step = 0;   // prefix length i at which C appeared
  UserSet subset;         // C
  Rational alpha_hat;
  RateVector rates;       // r_{alpha_hat, C}, zero outside C
  std::optional<ParOutput> global;  // set when nothing was found
};

// Prefix-by-prefix search for a complimentary subset. `alpha_lb` defaults to
// the singleton bound (rounded up for nco).
TwoStageResult two_stage(const EntropyOracle& oracle, const std::vector<int>& ordering, Model model,
                         std::optional<Rational> alpha_lb = std::nullopt);

// Who receives the extra rate a merged block owes at a later stage.
struct DeltaPolicy {
  enum class Kind { kMinRate, kSmallestIndex, kExplicit, kRandom };
  Kind kind = Kind::kMinRate;
  std::vector<int> recipients;  // user ids, for kExplicit
  std::uint64_t seed = 0;       // for kRandom
};

std::string to_string(const DeltaPolicy& policy);
// "min-rate", "smallest-index", "explicit:4,5", "random"; the seed is set
// separately.
DeltaPolicy parse_policy(const std::string& text, std::uint64_t seed = 0);

// Picks one ground position in `block`.
int choose_recipient(const DeltaPolicy& policy, const EntropyOracle& oracle, UserSet block, const RateVector& rates,
                     std::mt19937_64& rng);

struct SoStage {
  std::vector<UserSet> targets;  // disjoint; one entry for nco plans
  RateVector rates;              // cumulative r^(k)
  Rational alpha;                // alpha^(p-k+1) for aco, the integer alpha~^(k) for nco
};

struct SoPlan {
  Model model = Model::kAco;
  std::vector<SoStage> stages;
  std::vector<int> ordering;        // first PAR call, ground positions
  std::vector<int> rerun_ordering;  // nco: Phi-bar, empty when the first run was reused
  DeltaPolicy policy;
};

SoPlan multi_stage_aco(const EntropyOracle& oracle, const std::vector<int>& ordering, const DeltaPolicy& policy);

struct NcoOptions {
  // Reuse the first run when its rates are already monotone on the chosen
  // chain instead of rerunning with Phi-bar.
  bool reuse_first_run = false;
};

SoPlan multi_stage_nco(const EntropyOracle& oracle, const std::vector<int>& ordering, const DeltaPolicy& policy,
                       NcoOptions options = {});

}  // namespace coso

#pragma once

// Randomized property suites over seeded bits instances. Each returns an
// empty string on success, otherwise a description of the first failure.

#include <sstream>
#include <string>

#include "coso/omniscience.hpp"
#include "coso/par_engine.hpp"
#include "coso/plan_validate.hpp"
#include "coso/so_planner.hpp"
#include "support.hpp"

namespace coso::test {

constexpr int kPropertyInstances = 100;

inline std::string describe(std::uint64_t seed, const std::string& what) {
  return "seed " + std::to_string(seed) + ": " + what;
}

inline bool subset_of(const std::vector<UserSet>& a, const std::vector<UserSet>& b) {
  return std::all_of(a.begin(), a.end(), [&](UserSet x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

// (a) PAR segmentation equals the brute-force finest Dilworth minimizer.
inline std::string prop_segmentation(std::uint64_t seed) {
  const auto o = random_bits(seed);
  const ParOutput out = par(o, identity_ordering(o));
  for (int k = 0; k < 20; ++k) {
    const Rational alpha = o.total() * k / 19;
    const auto bf = brute_dilworth(o, o.ground(), alpha);
    if (sorted_blocks(out.partition.at(alpha).blocks()) != bf.finest) {
      return describe(seed, "partition differs at alpha " + to_string(alpha));
    }
    if (out.sum_at(o.ground(), alpha) != bf.value) return describe(seed, "r(V) differs at alpha " + to_string(alpha));
  }
  return {};
}

// (b) Eq. (1) by brute force equals the first critical point.
inline std::string prop_eq1(std::uint64_t seed) {
  const auto o = random_bits(seed);
  const Psp p = extract_psp(par(o, identity_ordering(o)));
  if (p.min_sum_rate() != brute_racoo(o, o.ground())) return describe(seed, "alpha^(1) != Eq. (1)");
  return {};
}

// (c) Lemma 1 soundness, Corollary 2 monotonicity and Lemma 2 completeness.
inline std::string prop_detection(std::uint64_t seed) {
  const auto o = random_bits(seed);
  for (auto model : {Model::kAco, Model::kNco}) {
    const auto exact = brute_complimentary(o, model);
    const Rational r = brute_r(o, o.ground(), model);
    std::vector<UserSet> prev;
    for (int k = 0; k <= 8; ++k) {
      Rational lb = r * k / 8;
      if (model == Model::kNco) lb = floor(lb);
      const auto det = detect_complimentary(o, lb, model);
      if (!subset_of(det, exact)) return describe(seed, "detection at " + to_string(lb) + " not complimentary");
      if (!subset_of(prev, det)) return describe(seed, "detection shrank at " + to_string(lb));
      prev = det;
    }
    Rational sb = singleton_bound(o);
    if (model == Model::kNco) sb = ceil(sb);
    if (detect_complimentary(o, sb, model).empty() && !exact.empty()) {
      return describe(seed, "nothing detected at the singleton bound but complimentary subsets exist");
    }
  }
  if (!subset_of(brute_complimentary(o, Model::kAco), brute_complimentary(o, Model::kNco))) {
    return describe(seed, "aco complimentary set not inside the nco one");
  }
  return {};
}

// (d) Both planners produce valid plans; routed increments on merged blocks are positive.
inline std::string prop_plans(std::uint64_t seed) {
  const auto o = random_bits(seed);
  for (const char* policy : {"min-rate", "smallest-index", "random"}) {
    const DeltaPolicy dp = parse_policy(policy, seed);
    const SoPlan a = multi_stage_aco(o, identity_ordering(o), dp);
    const PlanReport ra = validate_plan(o, a);
    for (const auto& c : ra.checks) {
      if (!c.pass) return describe(seed, std::string("aco ") + policy + " fails " + c.name + ": " + c.detail);
    }
    for (std::size_t k = 1; k < a.stages.size(); ++k) {
      for (auto prev : a.stages[k - 1].targets) {
        bool inside = false;
        for (auto c : a.stages[k].targets) inside = inside || (prev.subset_of(c) && prev != c);
        if (inside && !(sum_over(a.stages[k].rates, prev) > sum_over(a.stages[k - 1].rates, prev))) {
          return describe(seed, "non-positive increment on a merged block");
        }
      }
    }
    const SoPlan n = multi_stage_nco(o, identity_ordering(o), dp);
    const PlanReport rn = validate_plan(o, n);
    for (const auto& c : rn.checks) {
      if (!c.pass) return describe(seed, std::string("nco ") + policy + " fails " + c.name + ": " + c.detail);
    }
  }
  return {};
}

// (e) The PSP does not depend on the ordering.
inline std::string prop_ordering(std::uint64_t seed) {
  const auto o = random_bits(seed);
  const Psp base = extract_psp(par(o, identity_ordering(o)));
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  for (int t = 0; t < 3; ++t) {
    auto phi = identity_ordering(o);
    std::shuffle(phi.begin(), phi.end(), rng);
    const Psp p = extract_psp(par(o, phi));
    if (p.alphas != base.alphas || p.partitions != base.partitions) return describe(seed, "PSP changed with ordering");
  }
  return {};
}

// (f) alpha-hat = H(V) - H(C) + R(C) whenever two_stage finds C.
inline std::string prop_alpha_hat(std::uint64_t seed) {
  const auto o = random_bits(seed);
  std::mt19937_64 rng(seed);
  auto phi = identity_ordering(o);
  std::shuffle(phi.begin(), phi.end(), rng);
  for (auto model : {Model::kAco, Model::kNco}) {
    const TwoStageResult r = two_stage(o, phi, model);
    if (!r.found) continue;
    const Rational want = o.total() - o.entropy(r.subset) + brute_r(o, r.subset, model);
    if (r.alpha_hat != want) {
      return describe(seed, to_string(model) + " alpha-hat " + to_string(r.alpha_hat) + " != " + to_string(want));
    }
    if (sum_over(r.rates, r.subset) != brute_r(o, r.subset, model) || !brute_in_region(o, r.subset, r.rates)) {
      return describe(seed, to_string(model) + " local rates not optimal");
    }
  }
  return {};
}

struct PropertySuite {
  const char* name;
  std::string (*run)(std::uint64_t);
};

inline const std::vector<PropertySuite>& property_suites() {
  static const std::vector<PropertySuite> suites{
      {"a: PAR segmentation = brute-force Dilworth", prop_segmentation},
      {"b: Eq. (1) = alpha^(1)", prop_eq1},
      {"c: detection soundness, monotonicity, completeness", prop_detection},
      {"d: planner outputs validate", prop_plans},
      {"e: PSP ordering invariance", prop_ordering},
      {"f: alpha-hat identity", prop_alpha_hat},
  };
  return suites;
}

}  // namespace coso::test

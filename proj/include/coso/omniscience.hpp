#pragma once

#include <string>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/kernels.hpp"
#include "coso/partition.hpp"

namespace coso {

enum class Model { kAco, kNco };
std::string to_string(Model model);
Model parse_model(const std::string& text);

// Rate vectors are indexed by ground position and always span all of V;
// coordinates outside the carrier under discussion are zero.
using RateVector = std::vector<Rational>;

Rational sum_over(const RateVector& r, UserSet x);

enum class Method { kPsp, kBruteForce };

struct MinSumRate {
  Rational value;
  Partition finest;  // finest maximizer of Eq. (1), i.e. the fundamental partition of X
};

// R_ACO(X). The PSP path runs the parametric engine on the subsystem X; the
// brute-force path enumerates all partitions of X.
MinSumRate min_sum_rate_aco(const EntropyOracle& oracle, UserSet x, Method method = Method::kPsp,
                            Exec exec = Exec::kParallel);
Rational min_sum_rate_nco(const EntropyOracle& oracle, UserSet x, Method method = Method::kPsp);
Rational min_sum_rate(const EntropyOracle& oracle, UserSet x, Model model, Method method = Method::kPsp);

// r(C) >= H(X) - H(X \ C) for every nonempty proper C of X.
bool in_co_region(const EntropyOracle& oracle, UserSet x, const RateVector& r);

// r_{alpha,X} at alpha = R_ACO(X) or R_NCO(X) from the parametric engine on
// the subsystem X. `ordering` lists ground positions; members of X are taken
// in that order (defaults to ascending).
RateVector optimal_rate_vector(const EntropyOracle& oracle, UserSet x, Model model,
                               const std::vector<int>& ordering = {});

// Maps a set over the positions of oracle.restrict_to(x) back to V.
UserSet lift(UserSet sub, UserSet x);
// Inverse of lift; `set` must lie inside x.
UserSet project(UserSet set, UserSet x);

}  // namespace coso

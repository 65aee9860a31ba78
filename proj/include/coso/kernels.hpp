#pragma once

#include <functional>
#include <vector>

#include "coso/entropy_oracle.hpp"
#include "coso/partition.hpp"
#include "coso/pwl.hpp"

namespace coso {

// Every hot loop exists in two forms: a plain serial reference and an
// OpenMP version. Both return identical results; tests compare them.
enum class Exec { kSerial, kParallel };

// Fusion costs for all families {phi} u S, S a subset of `blocks`. Entry s
// (bit k of s selects blocks[k]) is F_alpha(U) - r_alpha(U) with U the union.
// `rates` is indexed by ground position and must share one domain.
std::vector<PwlFn> fusion_cost_table(const EntropyOracle& oracle, int phi, const std::vector<UserSet>& blocks,
                                     const std::vector<PwlFn>& rates, Exec exec);

struct TruncationValue {
  Rational value;
  Partition finest;  // meet of all minimizers
};

// min over partitions P of X of sum_{C in P} (alpha - H(V) + H(C)).
TruncationValue dilworth_bruteforce(const EntropyOracle& oracle, UserSet x, const Rational& alpha, Exec exec);

// max over partitions P of X with |P| > 1 of sum_{C in P} (H(X) - H(C)) / (|P| - 1),
// with the meet of all maximizers (which is itself a maximizer).
TruncationValue eq1_bruteforce(const EntropyOracle& oracle, UserSet x, Exec exec);

// Order-preserving filter over a list of subsets.
std::vector<UserSet> filter_subsets(const std::vector<UserSet>& subsets, const std::function<bool(UserSet)>& keep,
                                    Exec exec);

// Number of worker threads the parallel kernels will use.
int kernel_threads();

}  // namespace coso

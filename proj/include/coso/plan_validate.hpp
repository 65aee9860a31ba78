#pragma once

#include <string>
#include <vector>

#include "coso/so_planner.hpp"

namespace coso {

struct PlanCheck {
  std::string name;
  bool pass = true;
  std::string detail;  // first failure, empty on pass
};

struct PlanReport {
  std::vector<PlanCheck> checks;
  bool ok() const;
  const PlanCheck& at(const std::string& name) const;
};

// Conditions checked, one entry each:
//   nesting        target chain grows and ends at {V}; aco stages may keep the
//                  same union when only super-users fuse, nco stages must grow
//   complimentary  every proper target meets H(V) - H(C) + R(C) <= R(V)
//   co-region      r^(k) restricted to each target is in its CO region, and
//                  is zero outside the stage's targets
//   monotonicity   r^(k+1) >= r^(k) coordinatewise
//   optimality     final sum-rate equals the model's minimum
//   integrality    nco only: every cumulative vector is integral
PlanReport validate_plan(const EntropyOracle& oracle, const SoPlan& plan);

}  // namespace coso

#include "coso/plan_validate.hpp"

#include <map>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

namespace coso {

bool PlanReport::ok() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const PlanCheck& PlanReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw DomainError("no check named " + name);
}

namespace {

std::string stage_name(std::size_t k) { return "stage " + std::to_string(k + 1); }

std::string set_name(const EntropyOracle& oracle, UserSet s) {
  std::string out = "{";
  bool first = true;
  for (int id : oracle.ids_of(s)) {
    if (!first) out += ",";
    out += std::to_string(id);
    first = false;
  }
  return out + "}";
}

void fail(PlanCheck& c, const std::string& why) {
  if (c.pass) c.detail = why;
  c.pass = false;
}

}  // namespace

PlanReport validate_plan(const EntropyOracle& oracle, const SoPlan& plan) {
  const std::size_t n = static_cast<std::size_t>(oracle.size());
  PlanCheck nesting{"nesting"};
  PlanCheck compl_{"complimentary"};
  PlanCheck region{"co-region"};
  PlanCheck mono{"monotonicity"};
  PlanCheck optimal{"optimality"};
  PlanCheck integral{"integrality"};

  if (plan.stages.empty()) fail(nesting, "plan has no stages");
  for (const auto& st : plan.stages) {
    if (st.rates.size() != n) throw DomainError("plan rate vectors do not match the instance");
  }

  // Minimum sum-rates are computed once per distinct target.
  const bool exhaustive = oracle.size() <= exhaustive_limit();
  const Method method = exhaustive ? Method::kBruteForce : Method::kPsp;
  std::map<UserSet::Mask, Rational> rate_cache;
  auto rate_of = [&](UserSet c) -> const Rational& {
    auto it = rate_cache.find(c.mask());
    if (it == rate_cache.end()) it = rate_cache.emplace(c.mask(), min_sum_rate(oracle, c, plan.model, method)).first;
    return it->second;
  };

  UserSet prev_union;
  const std::vector<UserSet>* prev_targets = nullptr;
  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    const SoStage& st = plan.stages[k];
    UserSet u;
    for (auto c : st.targets) {
      if (c.size() < 2) fail(nesting, stage_name(k) + " has a singleton target");
      if (c.intersects(u)) fail(nesting, stage_name(k) + " has overlapping targets");
      u |= c;
    }
    if (plan.model == Model::kNco && st.targets.size() != 1) {
      fail(nesting, stage_name(k) + " must have exactly one target");
    }
    if (!prev_union.subset_of(u) || (plan.model == Model::kNco && prev_union == u)) {
      fail(nesting, stage_name(k) + " does not extend the previous target union");
    }
    if (prev_targets) {
      for (auto c : *prev_targets) {
        bool inside = false;
        for (auto d : st.targets) inside = inside || c.subset_of(d);
        if (!inside) fail(nesting, stage_name(k) + " splits earlier target " + set_name(oracle, c));
      }
    }

    for (auto c : st.targets) {
      if (c == oracle.ground() || c.size() < 2) continue;
      const Rational lhs = oracle.total() - oracle.entropy(c) + rate_of(c);
      if (lhs > rate_of(oracle.ground())) fail(compl_, set_name(oracle, c) + " is not complimentary");
    }

    for (auto c : st.targets) {
      if (!in_co_region(oracle, c, st.rates)) {
        fail(region, stage_name(k) + ": rates miss local omniscience in " + set_name(oracle, c));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!u.contains(static_cast<int>(i)) && st.rates[i] != 0) {
        fail(region, stage_name(k) + ": user " + std::to_string(oracle.user_id(static_cast<int>(i))) +
                         " transmits outside the targets");
      }
    }

    if (k > 0) {
      const SoStage& before = plan.stages[k - 1];
      for (std::size_t i = 0; i < n; ++i) {
        if (st.rates[i] < before.rates[i]) {
          fail(mono, stage_name(k) + ": rate of user " + std::to_string(oracle.user_id(static_cast<int>(i))) +
                         " decreases");
        }
      }
    }

    if (plan.model == Model::kNco) {
      for (const auto& v : st.rates) {
        if (!is_integer(v)) fail(integral, stage_name(k) + " has a fractional rate");
      }
    }
    prev_union = u;
    prev_targets = &st.targets;
  }

  if (!plan.stages.empty()) {
    const SoStage& last = plan.stages.back();
    if (last.targets.size() != 1 || last.targets.front() != oracle.ground()) {
      fail(nesting, "final stage does not target all of V");
    }
    const Rational total = sum_over(last.rates, oracle.ground());
    if (total != rate_of(oracle.ground())) {
      fail(optimal, "final sum-rate " + to_string(total) + " differs from the minimum " +
                        to_string(rate_of(oracle.ground())));
    }
    if (!in_co_region(oracle, oracle.ground(), last.rates)) fail(optimal, "final rates miss global omniscience");
  }

  PlanReport report;
  report.checks = {nesting, compl_, region, mono, optimal};
  if (plan.model == Model::kNco) report.checks.push_back(integral);
  return report;
}

}  // namespace coso

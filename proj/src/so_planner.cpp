#include "coso/so_planner.hpp"

#include <algorithm>
#include <sstream>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

namespace coso {

Rational singleton_bound(const EntropyOracle& oracle) {
  const int n = oracle.size();
  Rational s;
  for (int i = 0; i < n; ++i) s += oracle.total() - oracle.entropy(UserSet::single(i));
  return s / (n - 1);
}

Rational lower_bound(const EntropyOracle& oracle, Model model) {
  Rational best = singleton_bound(oracle);
  const Rational& hv = oracle.total();
  for (int i = 0; i < oracle.size(); ++i) {
    const UserSet s = UserSet::single(i);
    const Rational cut = hv - oracle.entropy(s) + hv - oracle.entropy(oracle.ground() - s);
    if (cut > best) best = cut;
  }
  return model == Model::kAco ? best : ceil(best);
}

void sort_for_display(const EntropyOracle& oracle, std::vector<UserSet>& sets) {
  std::sort(sets.begin(), sets.end(), [&](UserSet a, UserSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto ia = oracle.ids_of(a);
    auto ib = oracle.ids_of(b);
    std::sort(ia.begin(), ia.end());
    std::sort(ib.begin(), ib.end());
    return ia < ib;
  });
}

std::vector<UserSet> candidate_subsets(const EntropyOracle& oracle) {
  std::vector<UserSet> out;
  const UserSet::Mask full = oracle.ground().mask();
  for (UserSet::Mask m = 1; m < full; ++m) {
    if (UserSet(m).size() > 1) out.emplace_back(m);
  }
  sort_for_display(oracle, out);
  return out;
}

namespace {

void require_exhaustive(const EntropyOracle& oracle) {
  if (oracle.size() > exhaustive_limit()) {
    throw LimitError("exhaustive search over " + std::to_string(oracle.size()) + " users exceeds the limit of " +
                     std::to_string(exhaustive_limit()));
  }
}

Rational model_rate(const Rational& aco, Model model) { return model == Model::kAco ? aco : ceil(aco); }

}  // namespace

std::vector<UserSet> complimentary_oracle(const EntropyOracle& oracle, Model model, Exec exec) {
  require_exhaustive(oracle);
  const Rational rv = model_rate(eq1_bruteforce(oracle, oracle.ground(), exec).value, model);
  const Rational& hv = oracle.total();
  return filter_subsets(candidate_subsets(oracle), [&](UserSet x) {
    const Rational rx = model_rate(eq1_bruteforce(oracle, x, Exec::kSerial).value, model);
    return hv - oracle.entropy(x) + rx <= rv;
  }, exec);
}

bool is_complimentary_sufficient(const EntropyOracle& oracle, UserSet x, const Rational& alpha_lb, Model model,
                                 Method method) {
  if (x.size() < 2 || x == oracle.ground() || !x.subset_of(oracle.ground())) {
    throw DomainError("candidate must be a nonsingleton proper subset of V");
  }
  if (model == Model::kNco && !is_integer(alpha_lb)) {
    throw DomainError("the non-asymptotic model needs an integer lower bound");
  }
  const Rational fx = alpha_lb - oracle.total() + oracle.entropy(x);
  if (method == Method::kBruteForce) {
    return dilworth_bruteforce(oracle, x, alpha_lb, Exec::kSerial).value == fx;
  }
  // On the subsystem X, F_alpha restricts to the residual entropy at
  // alpha' = alpha - H(V) + H(X), and {X} is a minimizer iff alpha' >= R_ACO(X).
  return fx >= min_sum_rate_aco(oracle, x, Method::kPsp, Exec::kSerial).value;
}

std::vector<UserSet> detect_complimentary(const EntropyOracle& oracle, const Rational& alpha_lb, Model model,
                                          Exec exec) {
  if (model == Model::kNco && !is_integer(alpha_lb)) {
    throw DomainError("the non-asymptotic model needs an integer lower bound");
  }
  return filter_subsets(candidate_subsets(oracle), [&](UserSet x) {
    const Method m = x.size() <= exhaustive_limit() ? Method::kBruteForce : Method::kPsp;
    return is_complimentary_sufficient(oracle, x, alpha_lb, model, m);
  }, exec);
}

TwoStageResult two_stage(const EntropyOracle& oracle, const std::vector<int>& ordering, Model model,
                         std::optional<Rational> alpha_lb) {
  TwoStageResult res;
  res.alpha_lb = alpha_lb ? *alpha_lb : model_rate(singleton_bound(oracle), model);
  if (res.alpha_lb < 0 || res.alpha_lb > oracle.total()) throw DomainError("lower bound outside [0, H(V)]");
  if (model == Model::kNco && !is_integer(res.alpha_lb)) {
    throw DomainError("the non-asymptotic model needs an integer lower bound");
  }
  res.rates.assign(static_cast<std::size_t>(oracle.size()), Rational(0));

  ParEngine engine(oracle, ordering);
  while (!engine.done()) {
    engine.advance();
    const ParSnapshot& s = engine.state();
    auto blocks = s.partition.at(res.alpha_lb).nonsingleton_blocks();
    if (blocks.empty()) continue;
    const UserSet c = blocks.front();
    std::size_t piece = 0;
    while (!c.subset_of(s.partition.value(piece).block_of(c.least()))) ++piece;
    Rational alpha = s.partition.piece_lo(piece);
    if (model == Model::kNco) alpha = ceil(alpha);
    res.found = true;
    res.step = engine.step();
    res.subset = c;
    res.alpha_hat = alpha;
    c.for_each([&](int i) { res.rates[static_cast<std::size_t>(i)] = s.rates[static_cast<std::size_t>(i)](alpha); });
    return res;
  }
  res.step = engine.step();
  res.global = engine.finish();
  return res;
}

std::string to_string(const DeltaPolicy& policy) {
  switch (policy.kind) {
    case DeltaPolicy::Kind::kMinRate:
      return "min-rate";
    case DeltaPolicy::Kind::kSmallestIndex:
      return "smallest-index";
    case DeltaPolicy::Kind::kRandom:
      return "random";
    case DeltaPolicy::Kind::kExplicit: {
      std::string s = "explicit:";
      for (std::size_t k = 0; k < policy.recipients.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(policy.recipients[k]);
      }
      return s;
    }
  }
  return "min-rate";
}

DeltaPolicy parse_policy(const std::string& text, std::uint64_t seed) {
  DeltaPolicy p;
  p.seed = seed;
  if (text == "min-rate") return p;
  if (text == "smallest-index") {
    p.kind = DeltaPolicy::Kind::kSmallestIndex;
    return p;
  }
  if (text == "random") {
    p.kind = DeltaPolicy::Kind::kRandom;
    return p;
  }
  const std::string prefix = "explicit:";
  if (text.rfind(prefix, 0) == 0) {
    p.kind = DeltaPolicy::Kind::kExplicit;
    std::stringstream ss(text.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        p.recipients.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw DomainError("bad recipient id '" + item + "' in policy");
      }
    }
    if (p.recipients.empty()) throw DomainError("explicit policy needs at least one recipient");
    return p;
  }
  throw DomainError("unknown policy '" + text + "'");
}

int choose_recipient(const DeltaPolicy& policy, const EntropyOracle& oracle, UserSet block, const RateVector& rates,
                     std::mt19937_64& rng) {
  std::vector<int> members = block.members();
  std::sort(members.begin(), members.end(),
            [&](int a, int b) { return oracle.user_id(a) < oracle.user_id(b); });
  auto min_rate = [&] {
    int best = members.front();
    for (int i : members) {
      if (rates[static_cast<std::size_t>(i)] < rates[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
  };
  switch (policy.kind) {
    case DeltaPolicy::Kind::kMinRate:
      return min_rate();
    case DeltaPolicy::Kind::kSmallestIndex:
      return members.front();
    case DeltaPolicy::Kind::kRandom:
      return members[static_cast<std::size_t>(rng() % members.size())];
    case DeltaPolicy::Kind::kExplicit:
      for (int id : policy.recipients) {
        for (int i : members) {
          if (oracle.user_id(i) == id) return i;
        }
      }
      return min_rate();
  }
  return min_rate();
}

SoPlan multi_stage_aco(const EntropyOracle& oracle, const std::vector<int>& ordering, const DeltaPolicy& policy) {
  SoPlan plan;
  plan.model = Model::kAco;
  plan.ordering = ordering;
  plan.policy = policy;
  std::mt19937_64 rng(policy.seed);

  const ParOutput out = par(oracle, ordering);
  const Psp psp = extract_psp(out);
  const std::size_t p = psp.p();
  RateVector r(static_cast<std::size_t>(oracle.size()), Rational(0));
  for (std::size_t k = 1; k <= p; ++k) {
    const Partition& prev = psp.partitions[p - k + 1];
    const Rational& alpha = psp.alphas[p - k + 1];
    SoStage stage;
    stage.targets = psp.partitions[p - k].nonsingleton_blocks();
    stage.alpha = alpha;
    for (auto c : stage.targets) {
      const auto parts = restrict_blocks(c, prev);
      if (parts.size() == 1) continue;
      for (auto part : parts) {
        if (part.size() == 1) {
          r[static_cast<std::size_t>(part.least())] = out.rate(part.least(), alpha);
          continue;
        }
        const Rational delta = out.sum_at(part, alpha) - sum_over(r, part);
        r[static_cast<std::size_t>(choose_recipient(policy, oracle, part, r, rng))] += delta;
      }
    }
    stage.rates = r;
    plan.stages.push_back(std::move(stage));
  }
  return plan;
}

SoPlan multi_stage_nco(const EntropyOracle& oracle, const std::vector<int>& ordering, const DeltaPolicy& policy,
                       NcoOptions options) {
  SoPlan plan;
  plan.model = Model::kNco;
  plan.ordering = ordering;
  plan.policy = policy;
  std::mt19937_64 rng(policy.seed);

  const ParOutput first = par(oracle, ordering);
  const Psp psp = extract_psp(first);
  std::vector<Rational> alphas;
  std::vector<UserSet> chain;
  UserSet prev;
  for (std::size_t j = psp.p(); j >= 1; --j) {
    const Rational m = ceil(psp.alphas[j]);
    // The last interval also admits its right end so that alpha^(1) = H(V)
    // still yields a final stage.
    const bool has_integer = j == 1 ? m <= psp.alphas[0] : m < psp.alphas[j - 1];
    if (!has_integer) continue;
    std::optional<UserSet> pick;
    for (auto b : psp.partitions[j - 1].blocks()) {
      const bool grows = prev.empty() ? b.size() > 1 : (prev.subset_of(b) && prev != b);
      if (grows) {
        pick = b;
        break;
      }
    }
    if (!pick) continue;
    alphas.push_back(m);
    chain.push_back(*pick);
    prev = *pick;
  }
  if (chain.empty() || chain.back() != oracle.ground()) {
    throw DomainError("no integer sum-rate reaches global omniscience for this source");
  }

  auto by_id = [&](UserSet s) {
    std::vector<int> v = s.members();
    std::sort(v.begin(), v.end(), [&](int a, int b) { return oracle.user_id(a) < oracle.user_id(b); });
    return v;
  };
  std::vector<int> phibar;
  UserSet seen;
  for (auto x : chain) {
    for (int i : by_id(x - seen)) phibar.push_back(i);
    seen |= x;
  }

  bool reuse = phibar == ordering;
  if (!reuse && options.reuse_first_run) {
    reuse = true;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
      if (first.sum_at(chain[k], alphas[k + 1]) < first.sum_at(chain[k], alphas[k])) reuse = false;
    }
  }
  const ParOutput second = reuse ? ParOutput{} : par(oracle, phibar);
  const ParOutput& bar = reuse ? first : second;
  if (!reuse) plan.rerun_ordering = phibar;

  RateVector r(static_cast<std::size_t>(oracle.size()), Rational(0));
  prev = UserSet();
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Rational& alpha = alphas[k];
    if (!prev.empty()) {
      const Rational delta = bar.sum_at(prev, alpha) - sum_over(r, prev);
      r[static_cast<std::size_t>(choose_recipient(policy, oracle, prev, r, rng))] += delta;
    }
    (chain[k] - prev).for_each([&](int i) { r[static_cast<std::size_t>(i)] = bar.rate(i, alpha); });
    plan.stages.push_back({{chain[k]}, r, alpha});
    prev = chain[k];
  }
  return plan;
}

}  // namespace coso

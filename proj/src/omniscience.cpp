#include "coso/omniscience.hpp"

#include "coso/errors.hpp"
#include "coso/par_engine.hpp"

namespace coso {

std::string to_string(Model model) { return model == Model::kAco ? "aco" : "nco"; }

Model parse_model(const std::string& text) {
  if (text == "aco") return Model::kAco;
  if (text == "nco") return Model::kNco;
  throw DomainError("unknown model '" + text + "' (expected aco or nco)");
}

Rational sum_over(const RateVector& r, UserSet x) {
  Rational s;
  x.for_each([&](int i) { s += r.at(static_cast<std::size_t>(i)); });
  return s;
}

UserSet lift(UserSet sub, UserSet x) {
  const std::vector<int> members = x.members();
  UserSet out;
  sub.for_each([&](int k) { out = out.with(members.at(static_cast<std::size_t>(k))); });
  return out;
}

UserSet project(UserSet set, UserSet x) {
  if (!set.subset_of(x)) throw DomainError("set is not inside the subsystem");
  UserSet out;
  int k = 0;
  x.for_each([&](int i) {
    if (set.contains(i)) out = out.with(k);
    ++k;
  });
  return out;
}

namespace {

Partition lift(const Partition& p, UserSet x) {
  std::vector<UserSet> blocks;
  for (auto b : p.blocks()) blocks.push_back(lift(b, x));
  return Partition(x, std::move(blocks));
}

void check_carrier(const EntropyOracle& oracle, UserSet x) {
  if (!x.subset_of(oracle.ground())) throw DomainError("subset is not inside V");
  if (x.size() < 2) throw DomainError("minimum sum-rate needs at least two users");
}

}  // namespace

MinSumRate min_sum_rate_aco(const EntropyOracle& oracle, UserSet x, Method method, Exec exec) {
  check_carrier(oracle, x);
  if (method == Method::kBruteForce) {
    auto t = eq1_bruteforce(oracle, x, exec);
    return {t.value, t.finest};
  }
  const EntropyOracle sub = oracle.restrict_to(x);
  const Psp psp = extract_psp(par(sub, identity_ordering(sub), exec));
  return {psp.min_sum_rate(), lift(psp.fundamental(), x)};
}

Rational min_sum_rate_nco(const EntropyOracle& oracle, UserSet x, Method method) {
  return ceil(min_sum_rate_aco(oracle, x, method).value);
}

Rational min_sum_rate(const EntropyOracle& oracle, UserSet x, Model model, Method method) {
  return model == Model::kAco ? min_sum_rate_aco(oracle, x, method).value : min_sum_rate_nco(oracle, x, method);
}

bool in_co_region(const EntropyOracle& oracle, UserSet x, const RateVector& r) {
  if (!x.subset_of(oracle.ground()) || r.size() != static_cast<std::size_t>(oracle.size())) {
    throw DomainError("rate vector carrier mismatch");
  }
  const Rational& hx = oracle.entropy(x);
  const UserSet::Mask full = x.mask();
  // Proper nonempty submasks of x.
  for (UserSet::Mask c = (full - 1) & full; c != 0; c = (c - 1) & full) {
    const UserSet cs(c);
    if (sum_over(r, cs) < hx - oracle.entropy(x - cs)) return false;
  }
  return true;
}

RateVector optimal_rate_vector(const EntropyOracle& oracle, UserSet x, Model model,
                               const std::vector<int>& ordering) {
  check_carrier(oracle, x);
  const EntropyOracle sub = oracle.restrict_to(x);
  std::vector<int> order;
  for (int i : ordering) {
    if (x.contains(i)) order.push_back(project(UserSet::single(i), x).least());
  }
  if (order.empty()) order = identity_ordering(sub);
  const ParOutput out = par(sub, order);
  Rational alpha = extract_psp(out).min_sum_rate();
  if (model == Model::kNco) alpha = ceil(alpha);
  RateVector r(static_cast<std::size_t>(oracle.size()));
  int k = 0;
  x.for_each([&](int i) { r[static_cast<std::size_t>(i)] = out.rate(k++, alpha); });
  return r;
}

}  // namespace coso

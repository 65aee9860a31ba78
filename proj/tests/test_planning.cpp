#include <gtest/gtest.h>

#include "coso/errors.hpp"
#include "coso/omniscience.hpp"
#include "coso/par_engine.hpp"
#include "coso/plan_validate.hpp"
#include "coso/serialize.hpp"
#include "coso/so_planner.hpp"
#include "support.hpp"

using namespace coso;
using test::q;
using test::rv;

namespace {

std::vector<UserSet> sets(const EntropyOracle& o, std::vector<std::vector<int>> ids) {
  std::vector<UserSet> out;
  for (const auto& s : ids) out.push_back(o.set_of(s));
  return out;
}

// Example 1 with every entropy divided by three.
EntropyOracle example1_thirds() {
  const auto o = test::example1();
  std::vector<Rational> values;
  for (std::uint32_t m = 0; m < 32; ++m) values.push_back(o.entropy(UserSet(m)) / 3);
  return EntropyOracle::from_table(o.users(), values);
}

std::vector<RateVector> cumulative(const SoPlan& p) {
  std::vector<RateVector> out;
  for (const auto& st : p.stages) out.push_back(st.rates);
  return out;
}

}  // namespace

TEST(MinSumRate, Example1) {
  const auto o = test::example1();
  EXPECT_EQ(min_sum_rate(o, o.ground(), Model::kAco), q("13/2"));
  EXPECT_EQ(min_sum_rate(o, o.ground(), Model::kNco), 7);
  EXPECT_EQ(min_sum_rate(o, o.set_of({4, 5}), Model::kAco), 2);
  EXPECT_EQ(min_sum_rate(o, o.set_of({1, 4, 5}), Model::kAco), 5);
  const auto bf = min_sum_rate_aco(o, o.ground(), Method::kBruteForce);
  EXPECT_EQ(bf.value, q("13/2"));
  EXPECT_EQ(bf.finest, Partition(o.ground(), sets(o, {{1, 4, 5}, {2}, {3}})));
}

TEST(MinSumRate, PspAndBruteForceAgreeOnSubsets) {
  const auto o = test::example1();
  for (std::uint32_t m = 1; m < 32; ++m) {
    const UserSet x(m);
    if (x.size() < 2) continue;
    EXPECT_EQ(min_sum_rate_aco(o, x, Method::kPsp).value, test::brute_racoo(o, x)) << m;
    EXPECT_EQ(min_sum_rate_aco(o, x, Method::kBruteForce).value, test::brute_racoo(o, x)) << m;
  }
}

TEST(Region, MembershipMatchesBruteForce) {
  const auto o = test::example1();
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    RateVector r;
    for (int i = 0; i < 5; ++i) r.push_back(Rational(static_cast<int>(rng() % 9), 2));
    const UserSet x(static_cast<UserSet::Mask>(1 + rng() % 31));
    if (x.size() < 2) continue;
    for (int i = 0; i < 5; ++i) {
      if (!x.contains(i)) r[static_cast<std::size_t>(i)] = 0;
    }
    EXPECT_EQ(in_co_region(o, x, r), test::brute_in_region(o, x, r));
  }
  EXPECT_TRUE(in_co_region(o, o.ground(), rv({"1", "1/2", "1/2", "9/2", "0"})));
  EXPECT_FALSE(in_co_region(o, o.ground(), rv({"1", "1/2", "1/2", "4", "0"})));
}

TEST(Region, OptimalRateVectors) {
  const auto o = test::example1();
  for (auto model : {Model::kAco, Model::kNco}) {
    for (std::uint32_t m = 1; m < 32; ++m) {
      const UserSet x(m);
      if (x.size() < 2) continue;
      const RateVector r = optimal_rate_vector(o, x, model);
      EXPECT_TRUE(test::brute_in_region(o, x, r));
      EXPECT_EQ(sum_over(r, x), test::brute_r(o, x, model));
      if (model == Model::kNco) {
        for (const auto& v : r) EXPECT_TRUE(is_integer(v));
      }
    }
  }
}

TEST(Bounds, Example1) {
  const auto o = test::example1();
  EXPECT_EQ(singleton_bound(o), q("23/4"));
  EXPECT_EQ(lower_bound(o, Model::kAco), 6);
  EXPECT_EQ(lower_bound(o, Model::kNco), 6);
}

TEST(Complimentary, Example1Oracles) {
  const auto o = test::example1();
  EXPECT_EQ(complimentary_oracle(o, Model::kAco), sets(o, {{1, 4}, {4, 5}, {1, 4, 5}, {1, 2, 3, 4}}));
  const auto nco = complimentary_oracle(o, Model::kNco);
  EXPECT_EQ(nco.size(), 18U);
  EXPECT_EQ(test::as_sorted(nco), test::as_sorted(test::brute_complimentary(o, Model::kNco)));
  EXPECT_EQ(test::as_sorted(complimentary_oracle(o, Model::kAco)),
            test::as_sorted(test::brute_complimentary(o, Model::kAco)));
}

TEST(Complimentary, Lemma1Detection) {
  const auto o = test::example1();
  EXPECT_EQ(detect_complimentary(o, q("23/4"), Model::kAco), sets(o, {{4, 5}}));
  EXPECT_EQ(detect_complimentary(o, Rational(6), Model::kAco), sets(o, {{1, 4}, {4, 5}, {1, 4, 5}}));
  // The PSP path of the sufficient test agrees with the brute force one.
  for (std::uint32_t m = 1; m < 31; ++m) {
    const UserSet x(m);
    if (x.size() < 2) continue;
    for (const char* lb : {"23/4", "6", "13/2"}) {
      EXPECT_EQ(is_complimentary_sufficient(o, x, q(lb), Model::kAco, Method::kBruteForce),
                is_complimentary_sufficient(o, x, q(lb), Model::kAco, Method::kPsp));
    }
  }
}

TEST(Complimentary, IndependentSourceTiesEverywhere) {
  // R_ACO(X) = H(X) for every X, so H(V) - H(X) + R(X) = R(V): every
  // nonsingleton proper subset meets the condition with equality.
  const auto o = test::independent(4);
  const auto all = complimentary_oracle(o, Model::kAco);
  EXPECT_EQ(all.size(), 10U);
  EXPECT_EQ(test::as_sorted(all), test::as_sorted(test::brute_complimentary(o, Model::kAco)));
  // The finest Dilworth minimizer at the singleton bound stays all singletons.
  const Psp p = extract_psp(par(o, identity_ordering(o)));
  EXPECT_EQ(singleton_bound(o), p.min_sum_rate());
  EXPECT_EQ(p.fundamental(), Partition::singletons(o.ground()));
}

TEST(TwoStage, Example3) {
  const auto o = test::example1();
  const auto a = two_stage(o, ordering_from_ids(o, {4, 5, 2, 3, 1}), Model::kAco);
  ASSERT_TRUE(a.found);
  EXPECT_EQ(a.alpha_lb, q("23/4"));
  EXPECT_EQ(a.step, 2U);
  EXPECT_EQ(a.subset, o.set_of({4, 5}));
  EXPECT_EQ(a.alpha_hat, 4);
  EXPECT_EQ(a.rates, rv({"0", "0", "0", "2", "0"}));

  const auto b = two_stage(o, ordering_from_ids(o, {5, 1, 4, 2, 3}), Model::kAco, q("25/4"));
  ASSERT_TRUE(b.found);
  EXPECT_EQ(b.step, 3U);
  EXPECT_EQ(b.subset, o.set_of({1, 4, 5}));
  EXPECT_EQ(b.alpha_hat, 6);
  EXPECT_EQ(b.rates, rv({"1", "0", "0", "2", "2"}));

  const auto n = two_stage(o, ordering_from_ids(o, {4, 5, 2, 3, 1}), Model::kNco);
  ASSERT_TRUE(n.found);
  EXPECT_EQ(n.alpha_lb, 6);
  EXPECT_EQ(n.subset, o.set_of({4, 5}));
  EXPECT_EQ(n.alpha_hat, 4);
}

TEST(TwoStage, NothingFoundFallsBackToGlobal) {
  const auto o = test::independent(3);
  const auto r = two_stage(o, identity_ordering(o), Model::kAco);
  EXPECT_FALSE(r.found);
  ASSERT_TRUE(r.global.has_value());
  EXPECT_EQ(extract_psp(*r.global).min_sum_rate(), o.total());
}

TEST(TwoStage, BadLowerBound) {
  const auto o = test::example1();
  EXPECT_THROW(two_stage(o, identity_ordering(o), Model::kAco, Rational(11)), DomainError);
  EXPECT_THROW(two_stage(o, identity_ordering(o), Model::kNco, q("13/2")), DomainError);
}

TEST(Policy, ParseAndChoose) {
  const auto o = test::example1();
  std::mt19937_64 rng(1);
  const RateVector r = rv({"1", "0", "0", "2", "2"});
  const UserSet block = o.set_of({1, 4, 5});
  EXPECT_EQ(choose_recipient(parse_policy("min-rate"), o, block, r, rng), o.index_of(1));
  EXPECT_EQ(choose_recipient(parse_policy("min-rate"), o, o.set_of({4, 5}), r, rng), o.index_of(4));
  EXPECT_EQ(choose_recipient(parse_policy("smallest-index"), o, o.set_of({4, 5}), r, rng), o.index_of(4));
  EXPECT_EQ(choose_recipient(parse_policy("explicit:5"), o, block, r, rng), o.index_of(5));
  EXPECT_EQ(choose_recipient(parse_policy("explicit:3"), o, block, r, rng), o.index_of(1));
  const int pick = choose_recipient(parse_policy("random", 9), o, block, r, rng);
  EXPECT_TRUE(block.contains(pick));
  EXPECT_EQ(to_string(parse_policy("explicit:4,5")), "explicit:4,5");
  EXPECT_THROW(parse_policy("fastest"), DomainError);
  EXPECT_THROW(parse_policy("explicit:"), DomainError);
}

TEST(MultiStage, AcoExample4) {
  const auto o = test::example1();
  const auto phi = ordering_from_ids(o, {4, 5, 2, 3, 1});
  const SoPlan e = multi_stage_aco(o, phi, parse_policy("explicit:4"));
  EXPECT_EQ(cumulative(e), (std::vector<RateVector>{rv({"0", "0", "0", "2", "0"}), rv({"1", "0", "0", "4", "0"}),
                                                    rv({"1", "1/2", "1/2", "9/2", "0"})}));
  EXPECT_EQ(e.stages[0].targets, sets(o, {{4, 5}}));
  EXPECT_EQ(e.stages[1].targets, sets(o, {{1, 4, 5}}));
  EXPECT_EQ(e.stages[2].alpha, q("13/2"));
  const SoPlan m = multi_stage_aco(o, phi, parse_policy("min-rate"));
  EXPECT_EQ(cumulative(m), (std::vector<RateVector>{rv({"0", "0", "0", "2", "0"}), rv({"1", "0", "0", "2", "2"}),
                                                    rv({"3/2", "1/2", "1/2", "2", "2"})}));
  EXPECT_TRUE(validate_plan(o, e).ok());
  EXPECT_TRUE(validate_plan(o, m).ok());
}

TEST(MultiStage, NcoExample5) {
  const auto o = test::example1();
  const auto phi = ordering_from_ids(o, {4, 5, 2, 3, 1});
  const SoPlan e = multi_stage_nco(o, phi, parse_policy("explicit:4"));
  ASSERT_EQ(e.stages.size(), 3U);
  EXPECT_EQ(e.stages[0].alpha, 4);
  EXPECT_EQ(e.stages[1].alpha, 6);
  EXPECT_EQ(e.stages[2].alpha, 7);
  EXPECT_EQ(e.rerun_ordering, ordering_from_ids(o, {4, 5, 1, 2, 3}));
  EXPECT_EQ(cumulative(e), (std::vector<RateVector>{rv({"0", "0", "0", "2", "0"}), rv({"1", "0", "0", "4", "0"}),
                                                    rv({"1", "1", "0", "5", "0"})}));
  const SoPlan m = multi_stage_nco(o, phi, parse_policy("min-rate"));
  EXPECT_EQ(m.stages.back().rates, rv({"2", "1", "0", "2", "2"}));
  const auto report = validate_plan(o, e);
  EXPECT_TRUE(report.ok());
  EXPECT_TRUE(report.at("integrality").pass);
  EXPECT_TRUE(validate_plan(o, m).ok());
}

TEST(MultiStage, NcoSkipsIntervalsWithoutIntegers) {
  // Critical points 7/2, 4, 9/2: [7/2, 4) holds no integer.
  const auto o = EntropyOracle::from_bits({1, 2, 3, 4, 5, 6}, {{"b0", "b2"},
                                                               {"b2", "b3", "b4", "b5"},
                                                               {"b1", "b3", "b5"},
                                                               {"b3", "b5"},
                                                               {"b0", "b5"},
                                                               {"b1", "b2", "b4"}});
  const Psp p = extract_psp(par(o, identity_ordering(o)));
  EXPECT_EQ(p.critical_points(), (std::vector<Rational>{q("7/2"), 4, q("9/2")}));
  const SoPlan plan = multi_stage_nco(o, identity_ordering(o), parse_policy("min-rate"));
  ASSERT_EQ(plan.stages.size(), 2U);
  EXPECT_EQ(plan.stages[0].alpha, 4);
  EXPECT_EQ(plan.stages[1].alpha, 5);
  EXPECT_EQ(plan.stages[1].targets, std::vector<UserSet>{o.ground()});
  EXPECT_TRUE(validate_plan(o, plan).ok());
}

TEST(MultiStage, NcoRationalEntropiesNeedNotBeIntegral) {
  // Entropies in thirds: stages still nest and are optimal, but rates are fractional.
  const auto o = example1_thirds();
  const SoPlan plan = multi_stage_nco(o, identity_ordering(o), parse_policy("min-rate"));
  ASSERT_EQ(plan.stages.size(), 2U);
  EXPECT_EQ(plan.stages[0].alpha, 2);
  EXPECT_EQ(plan.stages[0].targets, sets(o, {{1, 4, 5}}));
  const auto r = validate_plan(o, plan);
  EXPECT_TRUE(r.at("nesting").pass);
  EXPECT_TRUE(r.at("optimality").pass);
  EXPECT_FALSE(r.at("integrality").pass);
}

TEST(MultiStage, IndependentSourceIsOneStage) {
  const auto o = test::independent(3);
  const SoPlan p = multi_stage_aco(o, identity_ordering(o), {});
  ASSERT_EQ(p.stages.size(), 1U);
  EXPECT_EQ(p.stages[0].targets, std::vector<UserSet>{o.ground()});
  EXPECT_EQ(sum_over(p.stages[0].rates, o.ground()), o.total());
  EXPECT_TRUE(test::brute_in_region(o, o.ground(), p.stages[0].rates));
}

TEST(MultiStage, ReuseFirstRunWhenMonotone) {
  const auto o = test::example1();
  const auto phi = ordering_from_ids(o, {4, 5, 1, 2, 3});
  const SoPlan p = multi_stage_nco(o, phi, parse_policy("explicit:4"), {true});
  EXPECT_TRUE(p.rerun_ordering.empty());
  EXPECT_EQ(p.stages.back().rates, rv({"1", "1", "0", "5", "0"}));
}

TEST(Validate, DetectsTamperedPlans) {
  const auto o = test::example1();
  SoPlan p = multi_stage_aco(o, ordering_from_ids(o, {4, 5, 2, 3, 1}), parse_policy("explicit:4"));
  SoPlan lower = p;
  lower.stages[1].rates[static_cast<std::size_t>(o.index_of(4))] = 1;
  const auto r = validate_plan(o, lower);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.at("monotonicity").pass);

  SoPlan short_plan = p;
  short_plan.stages.pop_back();
  EXPECT_FALSE(validate_plan(o, short_plan).at("nesting").pass);

  SoPlan bad_target = p;
  bad_target.stages[0].targets = sets(o, {{2, 3}});
  EXPECT_FALSE(validate_plan(o, bad_target).ok());

  SoPlan leak = p;
  leak.stages[0].rates[static_cast<std::size_t>(o.index_of(2))] = 1;
  EXPECT_FALSE(validate_plan(o, leak).at("co-region").pass);

  SoPlan fractional = multi_stage_nco(o, ordering_from_ids(o, {4, 5, 2, 3, 1}), {});
  fractional.stages[0].rates[static_cast<std::size_t>(o.index_of(4))] = q("5/2");
  EXPECT_FALSE(validate_plan(o, fractional).at("integrality").pass);
}

TEST(Validate, PlanJsonRoundTrip) {
  const auto o = test::example1();
  const SoPlan p = multi_stage_nco(o, ordering_from_ids(o, {4, 5, 2, 3, 1}), parse_policy("explicit:4"));
  const SoPlan back = plan_from(o, Json::parse(plan_json(o, p).dump()));
  EXPECT_EQ(cumulative(back), cumulative(p));
  ASSERT_EQ(back.stages.size(), p.stages.size());
  for (std::size_t k = 0; k < p.stages.size(); ++k) {
    EXPECT_EQ(back.stages[k].targets, p.stages[k].targets);
    EXPECT_EQ(back.stages[k].alpha, p.stages[k].alpha);
  }
  EXPECT_EQ(back.model, Model::kNco);
  EXPECT_TRUE(validate_plan(o, back).ok());
}

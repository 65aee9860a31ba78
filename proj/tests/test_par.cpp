#include <gtest/gtest.h>

#include "coso/errors.hpp"
#include "coso/par_engine.hpp"
#include "support.hpp"

using namespace coso;
using test::q;

namespace {

// Rates table: bounds b_0..b_m and per user a list of affine parts.
std::vector<PwlFn> profile(const std::vector<Rational>& bounds, const std::vector<std::vector<Affine>>& rows) {
  std::vector<PwlFn> out(rows.front().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<Affine> parts;
    for (const auto& row : rows) parts.push_back(row[i]);
    out[i] = PwlFn::from_pieces(bounds, parts);
  }
  return out;
}

Affine a(int slope, int intercept) { return {Rational(slope), Rational(intercept)}; }
Affine c(int v) { return {Rational(0), Rational(v)}; }

Partition part(const EntropyOracle& o, std::vector<std::vector<int>> blocks) {
  std::vector<UserSet> b;
  for (const auto& ids : blocks) b.push_back(o.set_of(ids));
  return Partition(o.ground(), b);
}

}  // namespace

TEST(Par, Example1Psp) {
  const auto o = test::example1();
  const ParOutput out = par(o, ordering_from_ids(o, {4, 5, 2, 3, 1}));
  const Psp p = extract_psp(out);
  EXPECT_EQ(p.critical_points(), (std::vector<Rational>{4, 6, q("13/2")}));
  ASSERT_EQ(p.p(), 3U);
  EXPECT_EQ(p.partitions[3], Partition::singletons(o.ground()));
  EXPECT_EQ(p.partitions[2], part(o, {{1}, {2}, {3}, {4, 5}}));
  EXPECT_EQ(p.partitions[1], part(o, {{1, 4, 5}, {2}, {3}}));
  EXPECT_EQ(p.partitions[0], Partition::whole(o.ground()));
  EXPECT_EQ(p.min_sum_rate(), q("13/2"));
}

TEST(Par, Example4RateProfile) {
  const auto o = test::example1();
  const ParOutput out = par(o, ordering_from_ids(o, {4, 5, 2, 3, 1}));
  const auto want = profile({0, 4, 6, q("13/2"), 7, 8, 10}, {
                                                                {a(1, -5), a(1, -6), a(1, -6), a(1, -2), a(1, -4)},
                                                                {a(1, -5), a(1, -6), a(1, -6), a(1, -2), c(0)},
                                                                {c(1), a(1, -6), a(1, -6), a(1, -2), c(0)},
                                                                {a(-2, 14), a(1, -6), a(1, -6), a(1, -2), c(0)},
                                                                {c(0), a(1, -6), a(-1, 8), a(1, -2), c(0)},
                                                                {c(0), c(2), c(0), a(1, -2), c(0)},
                                                            });
  for (int i = 0; i < 5; ++i) EXPECT_EQ(out.rates[static_cast<std::size_t>(i)], want[static_cast<std::size_t>(i)]) << i;
}

TEST(Par, Example5RateProfile) {
  const auto o = test::example1();
  const ParOutput out = par(o, ordering_from_ids(o, {4, 5, 1, 2, 3}));
  // r_1 is 1 on (6, 6.5]; alpha - 5 there would break continuity at 6.5.
  const auto want = profile({0, 4, 6, q("13/2"), 7, 10}, {
                                                          {a(1, -5), a(1, -6), a(1, -6), a(1, -2), a(1, -4)},
                                                          {a(1, -5), a(1, -6), a(1, -6), a(1, -2), c(0)},
                                                          {c(1), a(1, -6), a(1, -6), a(1, -2), c(0)},
                                                          {c(1), a(1, -6), a(-1, 7), a(1, -2), c(0)},
                                                          {c(1), c(1), c(0), a(1, -2), c(0)},
                                                      });
  for (int i = 0; i < 5; ++i) EXPECT_EQ(out.rates[static_cast<std::size_t>(i)], want[static_cast<std::size_t>(i)]) << i;
}

TEST(Par, Example3Snapshots) {
  const auto o = test::example1();
  const ParOutput out = par(o, ordering_from_ids(o, {4, 5, 2, 3, 1}));
  // After V_2 = {4,5}: {{5}} then singletons then {4,5}.
  const ParSnapshot& s2 = out.snapshots[1];
  EXPECT_EQ(s2.prefix, o.set_of({4, 5}));
  EXPECT_EQ(s2.partition.at(Rational(3)).size(), 2U);
  EXPECT_EQ(s2.partition.at(q("23/4")), Partition::whole(o.set_of({4, 5})));
  EXPECT_EQ(s2.rates[static_cast<std::size_t>(o.index_of(4))](Rational(4)), 2);
  EXPECT_EQ(s2.rates[static_cast<std::size_t>(o.index_of(5))](Rational(4)), 0);
  // Positions past the prefix keep alpha - H(V).
  EXPECT_EQ(s2.rates[0](Rational(3)), -7);
}

TEST(Par, TwoIdenticalUsers) {
  const auto o = EntropyOracle::from_table({1, 2}, {0, 1, 1, 1});
  const ParOutput out = par(o, identity_ordering(o));
  const Psp p = extract_psp(out);
  ASSERT_EQ(p.p(), 1U);
  EXPECT_EQ(p.min_sum_rate(), 0);
  EXPECT_EQ(out.partition.at(Rational(0)), Partition::singletons(o.ground()));
  EXPECT_EQ(out.partition.at(q("1/2")), Partition::whole(o.ground()));
  EXPECT_EQ(out.rates[0], PwlFn::affine(1, 0, 0, 1));
  EXPECT_EQ(out.rates[1], PwlFn::constant(0, 0, 1));
  // Independent check of the single critical point.
  EXPECT_EQ(test::brute_racoo(o, o.ground()), 0);
}

TEST(Par, IndependentSource) {
  const auto o = test::independent(4);
  const Psp p = extract_psp(par(o, identity_ordering(o)));
  ASSERT_EQ(p.p(), 1U);
  EXPECT_EQ(p.min_sum_rate(), o.total());
  EXPECT_EQ(p.fundamental(), Partition::singletons(o.ground()));
}

TEST(Par, SegmentationMatchesBruteForce) {
  const auto o = test::example1();
  const ParOutput out = par(o, ordering_from_ids(o, {2, 4, 1, 5, 3}));
  for (int k = 0; k <= 40; ++k) {
    const Rational alpha(k, 4);
    const auto bf = test::brute_dilworth(o, o.ground(), alpha);
    EXPECT_EQ(out.sum_at(o.ground(), alpha), bf.value) << alpha;
    EXPECT_EQ(test::sorted_blocks(out.partition.at(alpha).blocks()), bf.finest) << alpha;
  }
}

TEST(Par, EngineStepsAndStats) {
  const auto o = test::example1();
  ParEngine e(o, ordering_from_ids(o, {4, 5, 2, 3, 1}));
  // The first user is placed on construction.
  std::size_t steps = 1;
  EXPECT_EQ(e.step(), 1U);
  while (!e.done()) {
    e.advance();
    ++steps;
    EXPECT_EQ(e.state().prefix.size(), static_cast<int>(steps));
    for (const auto& r : e.state().rates) EXPECT_TRUE(r.is_continuous());
  }
  const ParOutput out = e.finish();
  EXPECT_EQ(steps, 5U);
  ASSERT_EQ(out.stats.envelopes.size(), 5U);
  // Envelope calls per prefix never exceed |V|.
  for (auto n : out.stats.envelopes) EXPECT_LE(n, 5U);
}

TEST(Par, SerialAndParallelAgree) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto o = test::random_bits(seed);
    const ParOutput s = par(o, identity_ordering(o), Exec::kSerial);
    const ParOutput p = par(o, identity_ordering(o), Exec::kParallel);
    EXPECT_EQ(s.rates, p.rates);
    EXPECT_TRUE(s.partition == p.partition);
  }
}

TEST(Par, Errors) {
  const auto o = test::example1();
  EXPECT_THROW(ordering_from_ids(o, {1, 2, 3}), DomainError);
  EXPECT_THROW(ordering_from_ids(o, {1, 2, 3, 4, 4}), DomainError);
  EXPECT_THROW(ordering_from_ids(o, {1, 2, 3, 4, 9}), DomainError);
  std::vector<PwlFn> rates(5, PwlFn::constant(0, 0, 10));
  EXPECT_THROW(fusion_cost(o, rates, 0, {UserSet(0b10)}), DomainError);
}

TEST(Par, FusionCostOfSingleton) {
  // Step 2 of Example 3: {5} alone has constant cost 6.
  const auto o = test::example1();
  const int i4 = o.index_of(4);
  const int i5 = o.index_of(5);
  std::vector<PwlFn> rates(5, residual_entropy(o, UserSet()));
  rates[static_cast<std::size_t>(i4)] = residual_entropy(o, UserSet::single(i4));
  const PwlFn f = fusion_cost(o, rates, i5, {UserSet::single(i5)});
  EXPECT_EQ(f, PwlFn::constant(6, 0, 10));
}

TEST(Par, DilworthBruteForceKernel) {
  const auto o = test::example1();
  for (int k = 0; k <= 20; ++k) {
    const Rational alpha(k, 2);
    const auto lib = dilworth_truncation_bruteforce(o, o.ground(), alpha, Exec::kSerial);
    const auto ref = test::brute_dilworth(o, o.ground(), alpha);
    EXPECT_EQ(lib.value, ref.value);
    EXPECT_EQ(test::sorted_blocks(lib.finest.blocks()), ref.finest);
  }
}

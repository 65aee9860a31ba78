#include <gtest/gtest.h>

#include "properties.hpp"

using namespace coso::test;

class Property : public ::testing::TestWithParam<std::size_t> {};

TEST_P(Property, HoldsOnRandomInstances) {
  const auto& suite = property_suites()[GetParam()];
  for (std::uint64_t seed = 0; seed < kPropertyInstances; ++seed) {
    const std::string failure = suite.run(seed);
    ASSERT_TRUE(failure.empty()) << suite.name << ": " << failure;
  }
}

INSTANTIATE_TEST_SUITE_P(Suites, Property, ::testing::Range<std::size_t>(0, 6));

/*
   Copyright 2026 The critwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "critwalk/rng.hpp"

namespace critwalk {
namespace {

// Known-answer vectors for Philox4x32-10 published with the Random123 library.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox::philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (philox::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox::philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                         {0xffffffff, 0xffffffff});
  EXPECT_EQ(out, (philox::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox::philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                         {0xa4093822, 0x299f31d0});
  EXPECT_EQ(out, (philox::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Seed, ParsesDecimalAndHex) {
  EXPECT_EQ(parse_seed("42"), 42u);
  EXPECT_EQ(parse_seed("0x2A"), 42u);
  EXPECT_EQ(parse_seed("18446744073709551615"), ~std::uint64_t{0});
  EXPECT_THROW(parse_seed(""), std::invalid_argument);
  EXPECT_THROW(parse_seed("12a"), std::invalid_argument);
  EXPECT_THROW(parse_seed("0x"), std::invalid_argument);
  EXPECT_THROW(parse_seed("-1"), std::invalid_argument);
}

TEST(Streams, PurposesAndStreamsAreSeparated) {
  const RngSeed s{7, 3};
  std::set<std::uint64_t> seen;
  for (auto purpose : {Purpose::kEdgeUniform, Purpose::kGraphBuild, Purpose::kBranching}) {
    for (std::uint64_t stream = 0; stream < 4; ++stream) {
      seen.insert(random_bits(s.with_stream(stream), purpose, 0));
    }
  }
  EXPECT_EQ(seen.size(), 12u);
  EXPECT_EQ(random_bits(s, Purpose::kGeneric, 5), random_bits(s, Purpose::kGeneric, 5));
}

TEST(Engine, UniformInUnitInterval) {
  CounterEngine eng({1, 0}, Purpose::kGeneric);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = eng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12 / 1e5) ~ 9.1e-4
  EXPECT_NEAR(sum / 100000, 0.5, 4 * 9.2e-4);
}

TEST(Engine, BelowIsUnbiased) {
  CounterEngine eng({2, 0}, Purpose::kGeneric);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) {
    const auto x = eng.below(7);
    ASSERT_LT(x, 7u);
    ++counts[x];
  }
  double chi2 = 0;
  for (int c : counts) {
    chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  }
  EXPECT_LT(chi2, 22.46);  // 99.9% quantile, 6 degrees of freedom
  EXPECT_THROW(eng.below(0), std::invalid_argument);
}

TEST(Engine, WorksWithStandardDistributions) {
  CounterEngine a({3, 1}, Purpose::kGeneric);
  CounterEngine b({3, 1}, Purpose::kGeneric);
  std::binomial_distribution<int> bin(20, 0.3);
  std::binomial_distribution<int> bin2(20, 0.3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(bin(a), bin2(b));
  }
}

}  // namespace
}  // namespace critwalk

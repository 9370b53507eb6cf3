// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "sparselab/rng.hpp"

namespace sparselab {
namespace {

TEST(Rng, KnownSplitMixValues) {
  // Reference outputs of SplitMix64 seeded at 0 (first two draws).
  EXPECT_EQ(mix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(mix64(0x9e3779b97f4a7c15ULL), 0x6e789e6aa1b965f4ULL);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(Rng(7).next_u64(), c.next_u64());
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    s += v;
    s2 += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Rng, UniformRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, SampleWithoutReplacement) {
  Rng rng(5);
  auto s = rng.sample_without_replacement(10, 10);
  EXPECT_EQ(std::set<int>(s.begin(), s.end()).size(), 10u);
  EXPECT_TRUE(rng.sample_without_replacement(10, 0).empty());
  EXPECT_THROW(rng.sample_without_replacement(3, 4), InvalidDimension);
}

}  // namespace
}  // namespace sparselab

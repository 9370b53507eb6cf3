// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "sparselab/ensembles.hpp"

namespace sparselab {
namespace {

double max_rel_dev(const Vector& got, const Vector& want) {
  return ((got - want).array().abs() / want.array().abs()).maxCoeff();
}

TEST(Ensembles, Type2LawSmall) {
  const auto p = gen_parent(4, SpectrumSpec::type2(16.0), 1);
  Vector want(4);
  want << 1.0, std::pow(16.0, -1.0 / 3.0), std::pow(16.0, -2.0 / 3.0), 1.0 / 16.0;
  EXPECT_LE(max_rel_dev(singular_spectrum(p), want), 1e-10);
}

TEST(Ensembles, Type3LawSmall) {
  const auto p = gen_parent(3, SpectrumSpec::type3(100.0), 2);
  Vector want(3);
  want << 1.0, std::pow(100.0, -3.0 / 8.0), 0.01;
  EXPECT_LE(max_rel_dev(singular_spectrum(p), want), 1e-10);
}

TEST(Ensembles, SpectrumLawHoldsAtModerateSize) {
  for (auto spec : {SpectrumSpec::type2(1e4), SpectrumSpec::type3(1e4), SpectrumSpec::type2(50.0, 3.0)}) {
    const auto p = gen_parent(120, spec, 99);
    const Vector s = singular_spectrum(p);
    EXPECT_LE(max_rel_dev(s, spectrum_law(spec, 120)), 1e-10) << to_string(spec);
    EXPECT_NEAR(s[0] / s[119], spec.kappa, 1e-10 * spec.kappa);
  }
}

TEST(Ensembles, Type1Moments) {
  const auto p = gen_parent(200, SpectrumSpec::type1(), 5);
  const double mean = p.entries.mean();
  const double var = (p.entries.array() - mean).square().sum() / (p.entries.size() - 1);
  EXPECT_LE(std::abs(mean), 3.0 / 200.0);
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(Ensembles, Determinism) {
  const auto a = gen_parent(30, SpectrumSpec::type3(1e3), 42);
  const auto b = gen_parent(30, SpectrumSpec::type3(1e3), 42);
  EXPECT_TRUE((a.entries.array() == b.entries.array()).all());
  const auto c = gen_parent(30, SpectrumSpec::type3(1e3), 43);
  EXPECT_FALSE((a.entries.array() == c.entries.array()).all());
}

TEST(Ensembles, InvalidInputs) {
  EXPECT_THROW(gen_parent(1, SpectrumSpec::type1(), 0), InvalidDimension);
  EXPECT_THROW(gen_parent(4, SpectrumSpec::type2(1.0), 0), InvalidArgument);
  EXPECT_THROW(gen_parent(4, SpectrumSpec{SpectrumKind::Type1, 1.0, 0.0}, 0), InvalidArgument);
  const auto p = gen_parent(5, SpectrumSpec::type1(), 0);
  EXPECT_THROW(subsample_rows(p, 6, 0), InvalidDimension);
  EXPECT_THROW(subsample_rows(p, 0, 0), InvalidDimension);
}

TEST(Ensembles, FullSubsampleIsPermutation) {
  const auto p = gen_parent(40, SpectrumSpec::type2(1e3), 3);
  const auto k = subsample_rows(p, 40, 4);
  std::set<int> rows(k.row_indices.begin(), k.row_indices.end());
  EXPECT_EQ(rows.size(), 40u);
  EXPECT_LE((singular_spectrum(k) - singular_spectrum(p)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ensembles, SingleRowSpectrum) {
  const auto p = gen_parent(10, SpectrumSpec::type1(), 8);
  const auto k = subsample_rows(p, 1, 9);
  ASSERT_EQ(k.rows(), 1);
  EXPECT_TRUE((k.entries.row(0).array() == p.entries.row(k.row_indices[0]).array()).all());
  EXPECT_NEAR(singular_spectrum(k)[0], k.entries.row(0).norm(), 1e-12);
}

TEST(Ensembles, RowsCopiedInSampledOrder) {
  const auto p = gen_parent(25, SpectrumSpec::type3(10.0), 10);
  const auto k = subsample_rows(p, 12, 11);
  for (int i = 0; i < 12; ++i)
    EXPECT_TRUE((k.entries.row(i).array() == p.entries.row(k.row_indices[i]).array()).all());
}

TEST(Ensembles, SubsamplingInterlaces) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = gen_parent(50, seed % 2 ? SpectrumSpec::type2(1e4) : SpectrumSpec::type1(), seed);
    const Vector sp = singular_spectrum(p);
    const int m = 5 + static_cast<int>(seed) * 4;
    const Vector sk = singular_spectrum(subsample_rows(p, m, seed + 100));
    for (int i = 0; i < m; ++i) EXPECT_LE(sk[i], sp[i] * (1 + 1e-12) + 1e-14);
  }
}

TEST(Ensembles, SingularSpectrumBasics) {
  EXPECT_TRUE(singular_spectrum(Matrix::Identity(3, 3)).isApprox(Vector::Ones(3)));
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 0, 5;
  Vector want(3);
  want << 5, 3, 0;
  EXPECT_LE((singular_spectrum(d) - want).cwiseAbs().maxCoeff(), 1e-14);
  Vector norm = singular_spectrum(d, true);
  EXPECT_DOUBLE_EQ(norm[0], 1.0);
  EXPECT_NEAR(norm[1], 0.6, 1e-15);
}

TEST(Ensembles, SubsampledSpectrumSitsAboveParentLaw) {
  // Reduced-size analogue of the 400 x 800 curve; the full-size golden check
  // lives in test_spectrum_golden.
  const int n = 200, m = 100;
  const auto spec = SpectrumSpec::type2(1e4);
  const Vector mean = mean_normalized_spectrum(n, m, spec, 10, 77);
  const Vector law = spectrum_law(spec, n);
  for (int i = 1; i < m; ++i) EXPECT_LT(mean[i], mean[i - 1]);
  for (int i = 0; i < m; ++i) {
    const int parent_index = static_cast<int>(std::lround(static_cast<double>(i) / (m - 1) * (n - 1)));
    EXPECT_GE(mean[i], law[parent_index] * (1 - 1e-12));
  }
}

TEST(Ensembles, SpectrumCsvFormat) {
  Vector s(2);
  s << 4.0, 1.0;
  std::ostringstream os;
  write_spectrum_csv(os, s);
  EXPECT_EQ(os.str(), "index,singular_value,normalized_value\n1,4,1\n2,1,0.25\n");
}

}  // namespace
}  // namespace sparselab

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "dipole_fixture.hpp"
#include "sparselab/magtomo/experiment.hpp"

namespace sparselab::magtomo {
namespace {

Eigen::VectorXd random_field(int cells, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd f(cells);
  for (auto& v : f) v = rng.uniform(-1.0, 1.0);
  return f;
}

PatchGrid small_grid(int resolution = 16) {
  PatchGrid g;
  g.resolution = resolution;
  return g;
}

TEST(Geometry, MapExamples) {
  const double r = 0.09;
  EXPECT_TRUE(cubed_sphere_map(0.0, 0.0, r).isApprox(Vec3(0, 0, r)));
  const Vec3 p = cubed_sphere_map(std::numbers::pi / 4, 0.0, r);
  EXPECT_NEAR(p.x(), r / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(p.y(), 0.0, 1e-15);
  EXPECT_NEAR(p.z(), r / std::sqrt(2.0), 1e-15);
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const double xi = rng.uniform(-1.5, 1.5), eta = rng.uniform(-1.5, 1.5);
    EXPECT_NEAR(cubed_sphere_map(xi, eta, r).norm(), r, 1e-12 * r);
  }
}

TEST(Geometry, TangentsAndAreaElement) {
  const double r = 0.0895, h = 1e-6;
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const double xi = rng.uniform(-1.0, 1.0), eta = rng.uniform(-1.0, 1.0);
    const auto [pxi, peta] = cubed_sphere_tangents(xi, eta, r);
    const Vec3 fd_xi = (cubed_sphere_map(xi + h, eta, r) - cubed_sphere_map(xi - h, eta, r)) / (2 * h);
    const Vec3 fd_eta = (cubed_sphere_map(xi, eta + h, r) - cubed_sphere_map(xi, eta - h, r)) / (2 * h);
    EXPECT_LE((pxi - fd_xi).norm(), 1e-7 * pxi.norm());
    EXPECT_LE((peta - fd_eta).norm(), 1e-7 * peta.norm());
    EXPECT_NEAR(cubed_sphere_area_element(xi, eta, r), pxi.cross(peta).norm(), 1e-12 * r * r);
  }
}

TEST(Geometry, PatchGrid) {
  const PatchGrid g;
  EXPECT_EQ(g.cells(), 4096);
  EXPECT_DOUBLE_EQ(g.r_mid(), 0.0895);
  EXPECT_GT(g.center(0), g.coord_min);
  EXPECT_LT(g.center(63), g.coord_max);
  for (int j = 0; j < 64; j += 7)
    for (int i = 0; i < 64; i += 5) EXPECT_NEAR(g.position(i, j).norm(), g.r_mid(), 1e-12 * g.r_mid());
  const double frac = g.solid_angle_fraction();
  EXPECT_GT(frac, 0.25);
  EXPECT_LT(frac, 0.30);
}

TEST(Geometry, RandomSensors) {
  const PatchGrid g;
  const auto s = random_sensors(g, 1000, 5);
  ASSERT_EQ(s.size(), 1000u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec3& p = s.positions[i];
    EXPECT_NEAR(p.norm(), 0.1, 1e-12);
    EXPECT_NEAR(s.normals[i].dot(p.normalized()), 1.0, 1e-12);
    const double xi = std::atan2(p.x(), p.z()), eta = std::atan2(p.y(), p.z());
    EXPECT_GE(xi, g.coord_min);
    EXPECT_LE(xi, g.coord_max);
    EXPECT_GE(eta, g.coord_min);
    EXPECT_LE(eta, g.coord_max);
  }
  EXPECT_THROW(random_sensors(g, 0, 1), InvalidArgument);
}

TEST(Current, ConstantStreamGivesNoCurrent) {
  const auto g = small_grid();
  const StreamField f{g.resolution, Eigen::VectorXd::Constant(g.cells(), 3.5)};
  const auto j = stream_to_current(f, g);
  EXPECT_EQ(j.norm(), 0.0);
}

TEST(Current, DeltaCirculatesAroundItsCell) {
  const auto g = small_grid();
  auto f = StreamField::zeros(g.resolution);
  const int ci = 7, cj = 9;
  f.values[g.flat(ci, cj)] = 1.0;
  const auto j = stream_to_current(f, g);
  int nonzero = 0;
  for (int jj = 0; jj < g.resolution; ++jj)
    for (int ii = 0; ii < g.resolution; ++ii) {
      const double mag = j.J[static_cast<std::size_t>(g.flat(ii, jj))].norm();
      if (mag == 0.0) continue;
      ++nonzero;
      EXPECT_EQ(std::abs(ii - ci) + std::abs(jj - cj), 1);
    }
  EXPECT_EQ(nonzero, 4);
  // opposite neighbours carry opposite contravariant flow
  EXPECT_LT(j.j_eta[g.flat(ci + 1, cj)] * j.j_eta[g.flat(ci - 1, cj)], 0.0);
  EXPECT_LT(j.j_xi[g.flat(ci, cj + 1)] * j.j_xi[g.flat(ci, cj - 1)], 0.0);
}

TEST(Current, TangentialAndDivergenceFree) {
  const PatchGrid g;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const StreamField f{g.resolution, random_field(g.cells(), seed)};
    const auto j = stream_to_current(f, g);
    for (int jj = 0; jj < g.resolution; ++jj)
      for (int ii = 0; ii < g.resolution; ++ii) {
        const Vec3& v = j.J[static_cast<std::size_t>(g.flat(ii, jj))];
        EXPECT_LE(std::abs(v.dot(g.position(ii, jj).normalized())), 1e-12 * std::max(v.norm(), 1e-300));
      }
    EXPECT_LE(relative_divergence(j, g), 1e-8);
  }
}

TEST(Current, ResolutionMismatchThrows) {
  EXPECT_THROW(stream_to_current(StreamField::zeros(8), small_grid(16)), InvalidDimension);
}

TEST(BiotSavart, ZeroCurrentZeroField) {
  const auto g = small_grid();
  const auto s = random_sensors(g, 20, 1);
  const auto b = biot_savart_normal(stream_to_current(StreamField::zeros(g.resolution), g), g, s);
  EXPECT_EQ(b.norm(), 0.0);
}

TEST(BiotSavart, Linearity) {
  const auto g = small_grid();
  const auto s = random_sensors(g, 30, 2);
  const StreamField f1{g.resolution, random_field(g.cells(), 1)}, f2{g.resolution, random_field(g.cells(), 2)};
  const StreamField sum{g.resolution, f1.values + f2.values};
  const auto b1 = biot_savart_normal(stream_to_current(f1, g), g, s);
  const auto b2 = biot_savart_normal(stream_to_current(f2, g), g, s);
  const auto b12 = biot_savart_normal(stream_to_current(sum, g), g, s);
  EXPECT_LE((b12 - b1 - b2).norm(), 1e-12 * b12.norm());
}

TEST(BiotSavart, SensorInsideShellIsSingular) {
  const auto g = small_grid();
  SensorSet s;
  s.add(g.position(4, 4) * 1.001, g.position(4, 4));
  const StreamField f{g.resolution, random_field(g.cells(), 1)};
  EXPECT_THROW(biot_savart_normal(stream_to_current(f, g), g, s), SingularKernel);
  EXPECT_THROW(stream_response_matrix(g, s), SingularKernel);
}

TEST(BiotSavart, FarFieldOfCurrentBumpIsDipole) {
  const auto bump = fixture::make_current_bump();
  // discrete moment from the current itself agrees with t * integral(F dA)
  Vec3 m = Vec3::Zero();
  for (int j = 0; j < bump.grid.resolution; ++j)
    for (int i = 0; i < bump.grid.resolution; ++i)
      m += 0.5 * bump.grid.position(i, j).cross(bump.current.J[static_cast<std::size_t>(bump.grid.flat(i, j))]) *
           bump.grid.area(i, j) * bump.grid.thickness();
  EXPECT_LE((m - bump.moment).norm(), 1e-3 * bump.moment.norm());
  EXPECT_LE(fixture::max_dipole_deviation(bump, 30.0, 60.0, 60, 11), 0.01);
  // higher multipoles and the patch curvature fade faster than 1 / r
  const double near = fixture::max_dipole_deviation(bump, 15.0, 15.0, 60, 12);
  const double far = fixture::max_dipole_deviation(bump, 30.0, 30.0, 60, 12);
  EXPECT_GT(near / far, 2.0);
}

TEST(BiotSavart, RingOracleAgreesWithDipoleFormula) {
  // the ideal loop itself departs from the dipole formula by (3/2)(a/r)^2 on axis
  const double a = 1e-3;
  const auto ring = oracle::ring_field(a, 1.0, Vec3(0, 0, 10 * a));
  const auto dip = oracle::dipole_field(Vec3(0, 0, std::numbers::pi * a * a), Vec3(0, 0, 10 * a));
  EXPECT_NEAR(ring.z() / dip.z(), std::pow(1.01, -1.5), 1e-6);
  const auto far_ring = oracle::ring_field(a, 1.0, Vec3(0.0, 0.0, 200 * a));
  const auto far_dip = oracle::dipole_field(Vec3(0, 0, std::numbers::pi * a * a), Vec3(0, 0, 200 * a));
  EXPECT_NEAR(far_ring.z() / far_dip.z(), 1.0, 1e-4);
}

TEST(Wavelet, PerfectReconstruction) {
  for (int side : {1, 2, 4, 8, 64}) {
    const auto x = random_field(side * side, static_cast<std::uint64_t>(side));
    EXPECT_LE((cdf42_inverse(cdf42_forward(x)) - x).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((cdf42_forward(cdf42_inverse(x)) - x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Wavelet, ConstantHasNoDetails) {
  const auto c = cdf42_forward(Eigen::VectorXd::Constant(64 * 64, -1.25));
  EXPECT_LE(c.tail(c.size() - 1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(c[0], -1.25 * 64, 1e-12);  // sqrt 2 per axis and level
}

TEST(Wavelet, OneDimensionalLiftingOnLinearRamp) {
  // the four-tap predictor is exact on cubics, so interior details vanish
  std::vector<double> x(32), work;
  for (int i = 0; i < 32; ++i) x[static_cast<std::size_t>(i)] = 0.3 * i * i * i - i + 2.0;
  detail::lift_forward(x.data(), 32, 1, work);
  for (int i = 17; i < 30; ++i) EXPECT_NEAR(x[static_cast<std::size_t>(i)], 0.0, 1e-9);
}

TEST(Wavelet, SparseModelRoundTrip) {
  const auto model = gen_signal(4096, 60, 8);
  const auto field = cdf42_inverse(model.dense);
  const auto back = cdf42_forward(field);
  EXPECT_LE((back - model.dense).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Wavelet, RejectsUnsupportedSizes) {
  EXPECT_THROW(cdf42_forward(Eigen::VectorXd::Zero(36)), UnsupportedSize);
  EXPECT_THROW(cdf42_inverse(Eigen::VectorXd::Zero(50)), UnsupportedSize);
  EXPECT_THROW(cdf42_forward(Eigen::VectorXd::Zero(0)), UnsupportedSize);
}

TEST(Design, CompositionAndColumnOrder) {
  const auto g = small_grid(16);
  const auto s = random_sensors(g, 60, 4);
  const auto a = build_design_matrix(g, s, 1);
  ASSERT_EQ(a.rows(), 60);
  ASSERT_EQ(a.cols(), 256);
  EXPECT_TRUE(a.entries.allFinite());
  for (std::uint64_t seed : {1u, 2u}) {
    const auto f = random_field(g.cells(), seed);
    const auto direct = biot_savart_normal(stream_to_current({g.resolution, f}, g), g, s);
    const Eigen::VectorXd via = a.entries * cdf42_forward(f);
    EXPECT_LE((via - direct).norm(), 1e-10 * direct.norm());
  }
  for (int col : {0, 1, 17, 255}) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(g.cells());
    e[col] = 1.0;
    const auto direct = biot_savart_normal(stream_to_current({g.resolution, cdf42_inverse(e)}, g), g, s);
    EXPECT_LE((a.entries.col(col) - direct).norm(), 1e-10 * std::max(direct.norm(), a.entries.norm() * 1e-6));
  }
}

TEST(Design, ResponseMatrixAdjoint) {
  const auto g = small_grid(16);
  const auto s = random_sensors(g, 40, 6);
  const auto G = stream_response_matrix(g, s, 2);
  const auto x = random_field(g.cells(), 1);
  const auto y = random_field(40, 2);
  // <G x, y> against the transpose assembled from the forward map column by column
  Eigen::MatrixXd cols(40, g.cells());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(g.cells());
  for (int c = 0; c < g.cells(); ++c) {
    e[c] = 1.0;
    cols.col(c) = biot_savart_normal(stream_to_current({g.resolution, e}, g), g, s);
    e[c] = 0.0;
  }
  const double lhs = (G * x).dot(y), rhs = x.dot(cols.transpose() * y);
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
}

TEST(Design, BinaryRoundTrip) {
  Eigen::MatrixXd m(3, 2);
  m << 1, 2, 3, 4, 5, -6.5e-300;
  std::stringstream ss;
  write_matrix_binary(ss, m);
  EXPECT_EQ(ss.str().size(), 8u + 16u + 6u * 8u);
  EXPECT_EQ(read_matrix_binary(ss), m);
  std::stringstream bad("not a matrix");
  EXPECT_THROW(read_matrix_binary(bad), IoError);
}

TEST(Experiment, SmallRunMeetsDiscrepancy) {
  TomoConfig cfg;
  cfg.resolution = 16;
  cfg.sensors = 120;
  cfg.nonzeros = 8;
  cfg.placement = CoefficientPlacement::Coarse;
  cfg.coarse_side = 8;
  const auto setup = make_tomo_setup(cfg);
  const auto rep = run_tomo_experiment(setup, 3);
  EXPECT_EQ(rep.model.k(), 8);
  for (int p : rep.model.support) EXPECT_LT(p % 16, 8);
  const double tol = 1e-4 * rep.data.norm();
  EXPECT_EQ(rep.l1.status, SolveStatus::Converged);
  EXPECT_NEAR(rep.l1.residual_norm, rep.noise_norm, tol);
  EXPECT_EQ(rep.l2.status, SolveStatus::Converged);
  EXPECT_NEAR(rep.l2.residual_norm, rep.noise_norm, 1e-6 * rep.data.norm());
  EXPECT_TRUE(std::isfinite(rep.l1_error));
  EXPECT_TRUE(std::isfinite(rep.l2_error));
  // same seed, same report
  const auto again = run_tomo_experiment(setup, 3);
  EXPECT_EQ(again.l1.x, rep.l1.x);
  EXPECT_EQ(again.l2.x, rep.l2.x);
}

TEST(Experiment, FieldSvg) {
  const auto g = small_grid(16);
  std::ostringstream os;
  write_field_svg(os, g, random_field(g.cells(), 1), "F", "cfg");
  const auto s = os.str();
  EXPECT_NE(s.find("<svg"), std::string::npos);
  EXPECT_NE(s.find("<path"), std::string::npos);
  EXPECT_THROW(write_field_svg(os, g, Eigen::VectorXd::Zero(3), "F"), InvalidDimension);
}

}  // namespace
}  // namespace sparselab::magtomo

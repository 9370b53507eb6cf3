// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Tangential surface current J = curl(F r_hat) on the patch.
//
// With covariant tangents P_xi, P_eta and area element sqrt(g), the
// contravariant components are J^xi = D_eta F / sqrt(g) and
// J^eta = -D_xi F / sqrt(g), and the surface divergence is
// (D_xi(sqrt(g) J^xi) + D_eta(sqrt(g) J^eta)) / sqrt(g). D_xi and D_eta act
// on different axes with the same 1-D stencil, so they commute and the
// discrete divergence cancels identically.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sparselab/error.hpp"
#include "sparselab/magtomo/geometry.hpp"

namespace sparselab::magtomo {

struct StreamField {
  int resolution = 0;
  Eigen::VectorXd values;  // flat, eta slow

  static StreamField zeros(int resolution) {
    return {resolution, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(resolution) * resolution)};
  }
};

struct CurrentField {
  int resolution = 0;
  std::vector<Vec3> J;  // A/m^2 at cell centers
  /// Contravariant components, kept to evaluate the divergence exactly.
  Eigen::VectorXd j_xi, j_eta;

  double norm() const {
    double s = 0.0;
    for (const auto& v : J) s += v.squaredNorm();
    return std::sqrt(s);
  }
};

namespace detail {

/// 1-D difference along an axis: centered inside, one-sided at both ends.
/// `at(k)` returns the sample at position k along the axis.
template <class At>
double axis_difference(At at, int k, int n, double h) {
  if (n == 1) return 0.0;
  if (k == 0) return (at(1) - at(0)) / h;
  if (k == n - 1) return (at(n - 1) - at(n - 2)) / h;
  return (at(k + 1) - at(k - 1)) / (2.0 * h);
}

inline Eigen::VectorXd diff_xi(const PatchGrid& g, const Eigen::VectorXd& f) {
  const int n = g.resolution;
  Eigen::VectorXd out(f.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out[g.flat(i, j)] = axis_difference([&](int k) { return f[g.flat(k, j)]; }, i, n, g.step());
  return out;
}

inline Eigen::VectorXd diff_eta(const PatchGrid& g, const Eigen::VectorXd& f) {
  const int n = g.resolution;
  Eigen::VectorXd out(f.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out[g.flat(i, j)] = axis_difference([&](int k) { return f[g.flat(i, k)]; }, j, n, g.step());
  return out;
}

}  // namespace detail

inline CurrentField stream_to_current(const StreamField& F, const PatchGrid& grid) {
  if (F.resolution != grid.resolution || F.values.size() != grid.cells())
    throw InvalidDimension("stream_to_current: field and grid resolution differ");
  const Eigen::VectorXd dxi = detail::diff_xi(grid, F.values);
  const Eigen::VectorXd deta = detail::diff_eta(grid, F.values);
  CurrentField out;
  out.resolution = grid.resolution;
  out.J.resize(static_cast<std::size_t>(grid.cells()));
  out.j_xi.resize(grid.cells());
  out.j_eta.resize(grid.cells());
  const double r = grid.r_mid();
  for (int j = 0; j < grid.resolution; ++j) {
    for (int i = 0; i < grid.resolution; ++i) {
      const int c = grid.flat(i, j);
      const double xi = grid.center(i), eta = grid.center(j);
      const double sg = cubed_sphere_area_element(xi, eta, r);
      const auto [pxi, peta] = cubed_sphere_tangents(xi, eta, r);
      out.j_xi[c] = deta[c] / sg;
      out.j_eta[c] = -dxi[c] / sg;
      out.J[static_cast<std::size_t>(c)] = out.j_xi[c] * pxi + out.j_eta[c] * peta;
    }
  }
  return out;
}

/// Discrete surface divergence (1/m times the units of J) at cell centers.
inline Eigen::VectorXd surface_divergence(const CurrentField& J, const PatchGrid& grid) {
  if (J.resolution != grid.resolution) throw InvalidDimension("surface_divergence: resolution mismatch");
  const double r = grid.r_mid();
  Eigen::VectorXd fx(grid.cells()), fy(grid.cells()), sg(grid.cells());
  for (int j = 0; j < grid.resolution; ++j)
    for (int i = 0; i < grid.resolution; ++i) {
      const int c = grid.flat(i, j);
      sg[c] = cubed_sphere_area_element(grid.center(i), grid.center(j), r);
      fx[c] = sg[c] * J.j_xi[c];
      fy[c] = sg[c] * J.j_eta[c];
    }
  return (detail::diff_xi(grid, fx) + detail::diff_eta(grid, fy)).cwiseQuotient(sg);
}

/// Divergence made dimensionless by the cell size, relative to ||J||.
inline double relative_divergence(const CurrentField& J, const PatchGrid& grid) {
  const double norm = J.norm();
  if (norm == 0.0) return 0.0;
  return surface_divergence(J, grid).norm() * grid.r_mid() * grid.step() / norm;
}

}  // namespace sparselab::magtomo

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Cubed-sphere patch: (xi, eta) in [-pi/3, pi/3]^2 mapped to
//
//   x = r tan(xi) / s,  y = r tan(eta) / s,  z = r / s,
//   s = sqrt(1 + tan^2 xi + tan^2 eta),
//
// whose coordinate lines are great circles at equal angular spacing.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sparselab/error.hpp"
#include "sparselab/rng.hpp"

namespace sparselab::magtomo {

using Vec3 = Eigen::Vector3d;

inline Vec3 cubed_sphere_map(double xi, double eta, double r) {
  const double a = std::tan(xi), b = std::tan(eta);
  const double s = std::sqrt(1.0 + a * a + b * b);
  return Vec3(r * a / s, r * b / s, r / s);
}

/// d/dxi and d/deta of cubed_sphere_map.
inline std::pair<Vec3, Vec3> cubed_sphere_tangents(double xi, double eta, double r) {
  const double a = std::tan(xi), b = std::tan(eta);
  const double s2 = 1.0 + a * a + b * b, s = std::sqrt(s2), s3 = s2 * s;
  const Vec3 p(a, b, 1.0);
  const Vec3 da = r * (Vec3::UnitX() / s - (a / s3) * p);
  const Vec3 db = r * (Vec3::UnitY() / s - (b / s3) * p);
  return {(1.0 + a * a) * da, (1.0 + b * b) * db};
}

/// Area element |P_xi x P_eta| = r^2 (1 + a^2)(1 + b^2) / s^3.
inline double cubed_sphere_area_element(double xi, double eta, double r) {
  const double a = std::tan(xi), b = std::tan(eta);
  const double s2 = 1.0 + a * a + b * b;
  return r * r * (1.0 + a * a) * (1.0 + b * b) / (s2 * std::sqrt(s2));
}

struct PatchGrid {
  int resolution = 64;
  double coord_min = -std::numbers::pi / 3.0;
  double coord_max = std::numbers::pi / 3.0;
  double r_inner = 0.089;
  double r_outer = 0.090;

  double r_mid() const { return 0.5 * (r_inner + r_outer); }
  double thickness() const { return r_outer - r_inner; }
  double step() const { return (coord_max - coord_min) / resolution; }
  double center(int i) const { return coord_min + (i + 0.5) * step(); }
  int cells() const { return resolution * resolution; }

  /// Flat index of cell (i along xi, j along eta); fields are stored with
  /// eta as the slow axis.
  int flat(int i, int j) const { return j * resolution + i; }

  Vec3 position(int i, int j) const { return cubed_sphere_map(center(i), center(j), r_mid()); }
  double area(int i, int j) const {
    return cubed_sphere_area_element(center(i), center(j), r_mid()) * step() * step();
  }

  /// Fraction of the full sphere's solid angle covered by the patch
  /// (midpoint quadrature on the unit sphere).
  double solid_angle_fraction() const {
    double sum = 0.0;
    for (int j = 0; j < resolution; ++j)
      for (int i = 0; i < resolution; ++i) sum += cubed_sphere_area_element(center(i), center(j), 1.0);
    return sum * step() * step() / (4.0 * std::numbers::pi);
  }
};

struct SensorSet {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;  // unit, outward

  std::size_t size() const { return positions.size(); }

  void add(const Vec3& p, const Vec3& normal) {
    positions.push_back(p);
    normals.push_back(normal.normalized());
  }
};

/// `count` sensors at radius `radius`, (xi, eta) uniform over the patch,
/// each measuring the radial field component.
inline SensorSet random_sensors(const PatchGrid& grid, int count, std::uint64_t seed, double radius = 0.1) {
  if (count < 1) throw InvalidArgument("random_sensors: count must be positive");
  Rng rng(seed);
  SensorSet out;
  for (int s = 0; s < count; ++s) {
    const double xi = rng.uniform(grid.coord_min, grid.coord_max);
    const double eta = rng.uniform(grid.coord_min, grid.coord_max);
    const Vec3 p = cubed_sphere_map(xi, eta, radius);
    out.add(p, p);
  }
  return out;
}

}  // namespace sparselab::magtomo

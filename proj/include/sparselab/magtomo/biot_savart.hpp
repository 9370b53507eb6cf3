// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Thin-shell Biot-Savart forward map: the shell is collapsed onto r_mid and
// each cell contributes
//
//   mu0/4pi * J x (r - r') / |r - r'|^3 * area * thickness.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "sparselab/error.hpp"
#include "sparselab/magtomo/current.hpp"
#include "sparselab/magtomo/geometry.hpp"

namespace sparselab::magtomo {

inline constexpr double kMu0Over4Pi = 1e-7;
inline constexpr double kMinSensorDistance = 0.005;

namespace detail {

/// Vector w with B_n = w . J for the contribution of one cell.
inline Vec3 normal_kernel(const Vec3& sensor, const Vec3& normal, const Vec3& source, double volume) {
  const Vec3 d = sensor - source;
  const double r = d.norm();
  if (r < kMinSensorDistance) throw SingularKernel("biot_savart: sensor too close to the current shell");
  // n . (J x d) = J . (d x n)
  return d.cross(normal) * (kMu0Over4Pi * volume / (r * r * r));
}

}  // namespace detail

/// Normal magnetic field at every sensor.
inline Eigen::VectorXd biot_savart_normal(const CurrentField& J, const PatchGrid& grid, const SensorSet& sensors) {
  if (J.resolution != grid.resolution || static_cast<int>(J.J.size()) != grid.cells())
    throw InvalidDimension("biot_savart_normal: current and grid resolution differ");
  std::vector<Vec3> pos(J.J.size());
  std::vector<double> vol(J.J.size());
  for (int j = 0; j < grid.resolution; ++j)
    for (int i = 0; i < grid.resolution; ++i) {
      const auto c = static_cast<std::size_t>(grid.flat(i, j));
      pos[c] = grid.position(i, j);
      vol[c] = grid.area(i, j) * grid.thickness();
    }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sensors.size()));
  for (std::size_t s = 0; s < sensors.size(); ++s) {
    double b = 0.0;
    for (std::size_t c = 0; c < J.J.size(); ++c)
      b += detail::normal_kernel(sensors.positions[s], sensors.normals[s], pos[c], vol[c]).dot(J.J[c]);
    out[static_cast<Eigen::Index>(s)] = b;
  }
  return out;
}

}  // namespace sparselab::magtomo

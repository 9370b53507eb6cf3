// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "sparselab/rng.hpp"

namespace sparselab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Singular values in descending order.
inline Vector singular_values(const Matrix& a) {
  if (a.size() == 0) return Vector();
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

/// Spectral norm of a linear operator given only its products, by power
/// iteration on A^T A. Stops when the estimate changes by less than `rel_tol`.
inline double operator_norm(const std::function<Vector(const Vector&)>& apply,
                            const std::function<Vector(const Vector&)>& apply_adjoint,
                            Eigen::Index cols, double rel_tol = 1e-6,
                            int max_iter = 10000, std::uint64_t seed = 0x5eed) {
  Rng rng(seed);
  Vector v(cols);
  for (Eigen::Index i = 0; i < cols; ++i) v[i] = rng.normal();
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = apply_adjoint(apply(v));
    const double nrm = w.norm();
    if (nrm == 0.0) return 0.0;
    const double next = std::sqrt(nrm);
    v = w / nrm;
    if (it > 0 && std::abs(next - estimate) <= rel_tol * next) return next;
    estimate = next;
  }
  return estimate;
}

inline double operator_norm(const Matrix& a, double rel_tol = 1e-6) {
  return operator_norm([&](const Vector& x) -> Vector { return a * x; },
                       [&](const Vector& x) -> Vector { return a.transpose() * x; },
                       a.cols(), rel_tol);
}

}  // namespace sparselab

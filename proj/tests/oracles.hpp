// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Reference solvers used only by the tests. They share no code with the
// library solvers they check.

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace sparselab::oracle {

struct CdResult {
  Eigen::VectorXd x;
  double duality_gap = 0.0;
  int sweeps = 0;
};

/// Cyclic coordinate descent on ||Kx - y||^2 + 2 lambda ||x||_1, run until the
/// duality gap of the half-scaled problem is below `gap_tol` and a full sweep
/// changes no coordinate by more than `step_tol` (relative).
inline CdResult coordinate_descent_lasso(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double lambda,
                                         double gap_tol = 1e-12, double step_tol = 1e-15,
                                         int max_sweeps = 2000000) {
  const Eigen::Index n = k.cols();
  Eigen::VectorXd col_sq = k.colwise().squaredNorm().transpose();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = y;
  CdResult out;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    double max_step = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_sq[j] == 0.0) continue;
      const double old = x[j];
      const double z = old + k.col(j).dot(r) / col_sq[j];
      const double tau = lambda / col_sq[j];
      const double next = z > tau ? z - tau : (z < -tau ? z + tau : 0.0);
      if (next != old) {
        r -= (next - old) * k.col(j);
        x[j] = next;
        max_step = std::max(max_step, std::abs(next - old));
      }
    }
    out.sweeps = sweep;
    if (sweep % 50 == 0 || max_step == 0.0) r = y - k * x;
    const double scale = std::max(x.cwiseAbs().maxCoeff(), 1e-300);
    if (max_step <= step_tol * scale) {
      r = y - k * x;
      const double corr = (k.transpose() * r).cwiseAbs().maxCoeff();
      const Eigen::VectorXd theta = r / std::max(1.0, corr / lambda);
      const double primal = 0.5 * r.squaredNorm() + lambda * x.lpNorm<1>();
      const double dual = 0.5 * y.squaredNorm() - 0.5 * (y - theta).squaredNorm();
      out.duality_gap = primal - dual;
      if (out.duality_gap <= gap_tol * std::max(1.0, primal)) break;
    }
  }
  out.x = x;
  return out;
}

/// Dense solve of (K^T K + lambda2 I) x = K^T y.
inline Eigen::VectorXd dense_ridge(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double lambda2) {
  Eigen::MatrixXd a = k.transpose() * k;
  a.diagonal().array() += lambda2;
  return a.ldlt().solve(k.transpose() * y);
}

/// Point magnetic dipole: mu0/4pi (3 (m.u) u - m) / r^3 at offset d from it.
inline Eigen::Vector3d dipole_field(const Eigen::Vector3d& m, const Eigen::Vector3d& d) {
  const double r = d.norm();
  const Eigen::Vector3d u = d / r;
  return 1e-7 * (3.0 * m.dot(u) * u - m) / (r * r * r);
}

/// Exact field of a circular loop of radius a carrying current I in the
/// z = 0 plane, centred at the origin, by a fine line integral.
inline Eigen::Vector3d ring_field(double a, double current, const Eigen::Vector3d& p, int segments = 20000) {
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  const double dt = 2.0 * 3.14159265358979323846 / segments;
  for (int s = 0; s < segments; ++s) {
    const double t = (s + 0.5) * dt;
    const Eigen::Vector3d q(a * std::cos(t), a * std::sin(t), 0.0);
    const Eigen::Vector3d dl(-a * std::sin(t) * dt, a * std::cos(t) * dt, 0.0);
    const Eigen::Vector3d d = p - q;
    b += dl.cross(d) / std::pow(d.norm(), 3);
  }
  return 1e-7 * current * b;
}

}  // namespace sparselab::oracle

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "sparselab/linalg.hpp"

namespace sparselab {

enum class SolveStatus { Converged, TargetUnreachable, MaxIterations, DegeneratePath };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::TargetUnreachable: return "target_unreachable";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::DegeneratePath: return "degenerate_path";
  }
  return "unknown";
}

/// A minimizer of ||Kx - y||^2 + 2 lambda ||x||_1.
struct Solution {
  Vector x;
  double lambda = 0.0;
  double residual_norm = 0.0;
  SolveStatus status = SolveStatus::Converged;
  int work = 0;  // breakpoints for the path solver, iterations for FISTA

  bool converged() const { return status == SolveStatus::Converged; }
};

/// Elementwise sign(v) * max(|v| - tau, 0).
inline Vector soft_threshold(const Vector& v, double tau) {
  return v.unaryExpr([tau](double a) {
    const double mag = std::abs(a) - tau;
    return mag > 0.0 ? std::copysign(mag, a) : 0.0;
  });
}

/// ||Kx - y||^2 + 2 lambda ||x||_1.
inline double l1_objective(const Matrix& k, const Vector& y, const Vector& x, double lambda) {
  return (k * x - y).squaredNorm() + 2.0 * lambda * x.lpNorm<1>();
}

struct KktReport {
  double max_inactive_ratio = 0.0;  // max |c_i| / lambda over i with x_i == 0
  double max_active_deviation = 0.0;  // max |c_i - lambda sign(x_i)| / lambda over the support
  bool sign_mismatch = false;
};

/// Optimality certificate at lambda, with c = K^T (y - K x).
inline KktReport check_kkt(const Matrix& k, const Vector& y, const Vector& x, double lambda) {
  KktReport rep;
  const Vector c = k.transpose() * (y - k * x);
  const double scale = lambda > 0.0 ? lambda : 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rep.max_inactive_ratio = std::max(rep.max_inactive_ratio, std::abs(c[i]) / scale);
    } else {
      const double target = lambda * (x[i] > 0.0 ? 1.0 : -1.0);
      rep.max_active_deviation = std::max(rep.max_active_deviation, std::abs(c[i] - target) / scale);
      if (lambda > 0.0 && c[i] * x[i] < 0.0) rep.sign_mismatch = true;
    }
  }
  return rep;
}

inline bool kkt_holds(const KktReport& r, double tol = 1e-8) {
  return r.max_inactive_ratio <= 1.0 + tol && r.max_active_deviation <= tol && !r.sign_mismatch;
}

/// CSV `index,value` for the nonzero entries.
inline void write_solution_csv(std::ostream& os, const Vector& x) {
  os << "index,value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(i), x[i]);
    os << buf;
  }
}

}  // namespace sparselab

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// FISTA for min ||Kx - y||^2 + 2 lambda ||x||_1, run in the equivalent form
// 1/2 ||Kx - y||^2 + lambda ||x||_1 with step 1/L, L >= ||K||^2. Momentum is
// reset whenever it points uphill (gradient-based adaptive restart).

#include <algorithm>
#include <cmath>

#include "sparselab/linalg.hpp"
#include "sparselab/solvers/solution.hpp"

namespace sparselab {

struct FistaOptions {
  int max_iter = 20000;
  double tol = 1e-10;       // relative iterate change
  double lipschitz = 0.0;   // 0: estimate ||K||^2 by power iteration
  bool adaptive_restart = true;
  Vector warm_start;        // empty: start from zero
};

/// ||K||^2 from power iteration (relative accuracy 1e-6), padded so it is an
/// upper bound in practice.
inline double fista_lipschitz(const Matrix& k) {
  const double nrm = operator_norm(k, 1e-7);
  return nrm * nrm * (1.0 + 1e-4);
}

inline Solution fista(const Matrix& k, const Vector& y, double lambda, const FistaOptions& opt = {}) {
  if (!(lambda > 0.0)) throw InvalidArgument("fista: lambda must be positive");
  if (y.size() != k.rows()) throw InvalidDimension("fista: data length must equal the row count");
  const Eigen::Index n = k.cols();
  const Vector kty = k.transpose() * y;

  Solution sol;
  sol.lambda = lambda;
  if (lambda >= kty.cwiseAbs().maxCoeff() && opt.warm_start.size() == 0) {
    sol.x = Vector::Zero(n);
    sol.residual_norm = y.norm();
    return sol;
  }

  const double lip = opt.lipschitz > 0.0 ? opt.lipschitz : fista_lipschitz(k);
  const double step = 1.0 / lip;
  Vector x = opt.warm_start.size() == n ? opt.warm_start : Vector::Zero(n);
  Vector z = x;
  Vector x_prev = x;
  double t = 1.0;
  sol.status = SolveStatus::MaxIterations;

  for (int it = 1; it <= opt.max_iter; ++it) {
    const Vector grad = k.transpose() * (k * z) - kty;
    x_prev.swap(x);
    x = soft_threshold(z - step * grad, lambda * step);
    const Vector dx = x - x_prev;
    sol.work = it;

    const double change = dx.norm();
    const double scale = std::max(x.norm(), 1e-300);
    if (change <= opt.tol * scale || (change == 0.0)) {
      sol.status = SolveStatus::Converged;
      break;
    }
    if (opt.adaptive_restart && (z - x).dot(dx) > 0.0) {
      t = 1.0;
      z = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = x + ((t - 1.0) / t_next) * dx;
    t = t_next;
  }
  sol.x = std::move(x);
  sol.residual_norm = (k * sol.x - y).norm();
  return sol;
}

struct FistaDiscrepancyOptions {
  FistaOptions inner;            // warm_start and lipschitz are managed here
  double residual_tol = 1e-4;    // |residual - target| <= residual_tol * ||y||
  double shrink = 0.5;           // lambda factor while bracketing
  int max_outer = 80;
};

/// FISTA with lambda tuned so ||K x - y|| = target. The residual grows with
/// lambda, so the root is bracketed by shrinking lambda from ||K^T y||_inf
/// and refined by Illinois regula falsi in log lambda; every solve is warm
/// started from the previous one. `work` sums the inner iterations.
inline Solution fista_discrepancy(const Matrix& k, const Vector& y, double target,
                                  const FistaDiscrepancyOptions& opt = {}) {
  if (y.size() != k.rows()) throw InvalidDimension("fista_discrepancy: data length must equal the row count");
  if (!(target >= 0.0)) throw InvalidArgument("fista_discrepancy: target must be nonnegative");
  const double y_norm = y.norm();
  const double lambda_max = (k.transpose() * y).cwiseAbs().maxCoeff();
  Solution best;
  best.x = Vector::Zero(k.cols());
  best.lambda = lambda_max;
  best.residual_norm = y_norm;
  if (target >= y_norm || lambda_max == 0.0) {
    if (target < y_norm) best.status = SolveStatus::TargetUnreachable;
    return best;
  }

  FistaOptions inner = opt.inner;
  if (!(inner.lipschitz > 0.0)) inner.lipschitz = fista_lipschitz(k);
  const double tol = opt.residual_tol * y_norm;
  int work = 0;
  Vector warm = Vector::Zero(k.cols());
  auto eval = [&](double log_lambda) {
    inner.warm_start = warm;
    auto sol = fista(k, y, std::exp(log_lambda), inner);
    work += sol.work;
    warm = sol.x;
    const double g = sol.residual_norm - target;
    if (std::abs(g) < std::abs(best.residual_norm - target)) best = std::move(sol);
    return g;
  };

  double hi = std::log(lambda_max), g_hi = y_norm - target;
  double lo = hi, g_lo = g_hi;
  const double floor = hi + std::log(1e-14);
  while (g_lo > 0.0) {
    if (lo <= floor) {
      best.work = work;
      best.status = SolveStatus::TargetUnreachable;
      return best;
    }
    hi = lo;
    g_hi = g_lo;
    lo += std::log(opt.shrink);
    g_lo = eval(lo);
  }

  double g_mid = g_lo;
  int side = 0;
  for (int outer = 0; outer < opt.max_outer && std::abs(g_mid) > tol; ++outer) {
    const double mid = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    g_mid = eval(mid);
    if (g_mid > 0.0) {
      hi = mid;
      g_hi = g_mid;
      if (side == 1) g_lo *= 0.5;
      side = 1;
    } else {
      lo = mid;
      g_lo = g_mid;
      if (side == -1) g_hi *= 0.5;
      side = -1;
    }
  }
  best.work = work;
  if (std::abs(best.residual_norm - target) > tol) best.status = SolveStatus::MaxIterations;
  return best;
}

}  // namespace sparselab

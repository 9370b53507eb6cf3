// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// l2-penalized least squares, min ||Kx - y||^2 + lambda2 ||x||^2, solved by
// conjugate gradients, with lambda2 tuned so the residual norm hits a target.

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparselab/error.hpp"
#include "sparselab/linalg.hpp"
#include "sparselab/solvers/solution.hpp"

namespace sparselab {

struct RidgeSolution {
  Vector x;
  double lambda2 = 0.0;
  double residual_norm = 0.0;
  int cg_iterations = 0;  // total over every inner solve
  SolveStatus status = SolveStatus::Converged;
};

struct RidgeOptions {
  double cg_tol = 1e-10;          // on ||(K^T K + lambda2 I) x - K^T y|| / ||K^T y||
  int max_cg = 0;                 // per inner solve; 0: 4 n + 100
  double residual_tol = 1e-6;     // |residual - target| <= residual_tol * ||y||
  int max_outer = 200;
};

struct CgResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

/// Conjugate gradients for a symmetric positive definite `apply`, starting
/// from `x0` and stopping once ||b - A x|| <= stop.
template <class Apply>
CgResult conjugate_gradient(Apply&& apply, const Vector& b, Vector x0, double stop, int max_iter) {
  CgResult out{std::move(x0), 0, false};
  Vector r = b - apply(out.x);
  Vector p = r;
  double rr = r.squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= stop) {
      // Confirm against the true residual; the recursion drifts on long runs.
      r = b - apply(out.x);
      rr = r.squaredNorm();
      if (std::sqrt(rr) <= stop) {
        out.converged = true;
        return out;
      }
      p = r;
    }
    const Vector ap = apply(p);
    const double alpha = rr / p.dot(ap);
    out.x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++out.iterations;
  }
  out.converged = (b - apply(out.x)).norm() <= stop;
  return out;
}

}  // namespace detail

/// CG on the regularized normal equations, starting from `x0`.
inline CgResult ridge_cg(const Matrix& k, const Vector& y, double lambda2, const Vector& x0, double tol,
                         int max_iter) {
  const Vector b = k.transpose() * y;
  const double b_norm = b.norm();
  if (b_norm == 0.0) return {Vector::Zero(k.cols()), 0, true};
  auto apply = [&](const Vector& v) -> Vector { return k.transpose() * (k * v) + lambda2 * v; };
  return detail::conjugate_gradient(apply, b, x0.size() == k.cols() ? x0 : Vector::Zero(k.cols()), tol * b_norm,
                                    max_iter);
}

/// Fixed-lambda2 ridge minimizer.
inline RidgeSolution ridge_solve(const Matrix& k, const Vector& y, double lambda2, const RidgeOptions& opt = {}) {
  if (!(lambda2 > 0.0)) throw InvalidArgument("ridge_solve: lambda2 must be positive");
  const int max_cg = opt.max_cg > 0 ? opt.max_cg : 4 * static_cast<int>(k.cols()) + 100;
  auto cg = ridge_cg(k, y, lambda2, Vector(), opt.cg_tol, max_cg);
  RidgeSolution sol;
  sol.residual_norm = (k * cg.x - y).norm();
  sol.x = std::move(cg.x);
  sol.lambda2 = lambda2;
  sol.cg_iterations = cg.iterations;
  sol.status = cg.converged ? SolveStatus::Converged : SolveStatus::MaxIterations;
  return sol;
}

/// Ridge with lambda2 chosen so ||K x - y|| = target (discrepancy principle).
/// The residual is increasing in lambda2; the root is bracketed in log lambda2,
/// narrowed by bisection and finished with the Illinois variant of regula falsi.
/// Wide matrices are solved in data space, x = K^T z with
/// (K K^T + lambda2 I) z = y, which is the same minimizer.
inline RidgeSolution ridge_discrepancy(const Matrix& k, const Vector& y, double target,
                                       const RidgeOptions& opt = {}) {
  if (y.size() != k.rows()) throw InvalidDimension("ridge_discrepancy: data length must equal the row count");
  const double y_norm = y.norm();
  if (!(target >= 0.0)) throw InvalidArgument("ridge_discrepancy: target must be nonnegative");
  RidgeSolution sol;
  if (target >= y_norm) {
    sol.x = Vector::Zero(k.cols());
    sol.lambda2 = std::numeric_limits<double>::infinity();
    sol.residual_norm = y_norm;
    return sol;
  }
  const double kty_norm = (k.transpose() * y).norm();
  if (kty_norm == 0.0) {
    sol.x = Vector::Zero(k.cols());
    sol.lambda2 = 0.0;
    sol.residual_norm = y_norm;
    sol.status = SolveStatus::TargetUnreachable;
    return sol;
  }
  const int max_cg = opt.max_cg > 0 ? opt.max_cg : 4 * static_cast<int>(k.cols()) + 100;
  const double tol = opt.residual_tol * y_norm;
  const double k_norm = operator_norm(k, 1e-8);
  const double k_norm_sq = k_norm * k_norm;

  const bool dual = k.rows() < k.cols();
  Matrix gram;
  if (dual) gram.noalias() = k * k.transpose();
  Vector warm = Vector::Zero(dual ? k.rows() : k.cols());
  auto solve = [&](double l2) {
    if (!dual) return ridge_cg(k, y, l2, warm, opt.cg_tol, max_cg);
    auto apply = [&](const Vector& v) -> Vector { return gram * v + l2 * v; };
    // ||K^T r|| <= ||K|| ||r|| keeps the normal-equation residual within cg_tol
    return detail::conjugate_gradient(apply, y, warm, opt.cg_tol * kty_norm / k_norm, max_cg);
  };
  auto residual = [&](const Vector& w) { return dual ? (gram * w - y).norm() : (k * w - y).norm(); };

  bool all_converged = true;
  auto eval = [&](double log_l2) {
    auto cg = solve(std::exp(log_l2));
    sol.cg_iterations += cg.iterations;
    all_converged = all_converged && cg.converged;
    warm = cg.x;
    return residual(cg.x) - target;
  };

  // Bracket from the top down: small lambda2 makes CG slow.
  const double decade = std::log(10.0);
  double hi = std::log(k_norm_sq);
  double g_hi = eval(hi);
  while (g_hi < 0.0) {
    hi += decade;
    g_hi = eval(hi);
  }
  double lo = hi - decade;
  double g_lo = eval(lo);
  const double floor = std::log(1e-16 * k_norm_sq);
  while (g_lo > 0.0 && lo > floor) {
    hi = lo;
    g_hi = g_lo;
    lo -= decade;
    g_lo = eval(lo);
  }
  if (g_lo > tol) {
    sol.x = dual ? Vector(k.transpose() * warm) : warm;
    sol.lambda2 = std::exp(lo);
    sol.residual_norm = g_lo + target;
    sol.status = SolveStatus::TargetUnreachable;
    return sol;
  }

  double mid = lo, g_mid = g_lo;
  int outer = 0;
  for (; outer < 8 && std::abs(g_mid) > tol; ++outer) {
    mid = 0.5 * (lo + hi);
    g_mid = eval(mid);
    (g_mid > 0.0 ? hi : lo) = mid;
    (g_mid > 0.0 ? g_hi : g_lo) = g_mid;
  }
  int side = 0;
  for (; outer < opt.max_outer && std::abs(g_mid) > tol; ++outer) {
    mid = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
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
  // Re-solve at the accepted lambda2 so the returned iterate meets cg_tol.
  auto cg = solve(std::exp(mid));
  sol.cg_iterations += cg.iterations;
  sol.x = dual ? Vector(k.transpose() * cg.x) : std::move(cg.x);
  sol.lambda2 = std::exp(mid);
  sol.residual_norm = (k * sol.x - y).norm();
  if (std::abs(sol.residual_norm - target) > tol) sol.status = SolveStatus::MaxIterations;
  else if (!all_converged && !cg.converged) sol.status = SolveStatus::MaxIterations;
  return sol;
}

}  // namespace sparselab

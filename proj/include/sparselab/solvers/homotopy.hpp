// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Homotopy (LARS with the lasso modification) for
//
//   min_x ||Kx - y||^2 + 2 lambda ||x||_1,
//
// followed from lambda_0 = ||K^T y||_inf down to a stopping rule. On an
// active set A with signs s the minimizer is
//
//   x_A(lambda) = G^{-1} (K_A^T y - lambda s),   G = K_A^T K_A,
//
// so x is affine in lambda between breakpoints. The Cholesky factor of G is
// updated in O(|A|^2) when an index enters or leaves. Each breakpoint
// recomputes x_A and the correlations from scratch to keep the optimality
// conditions tight along long paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sparselab/linalg.hpp"
#include "sparselab/solvers/solution.hpp"

namespace sparselab {

struct PathBreakpoint {
  double lambda = 0.0;
  Vector x;
  double residual_norm = 0.0;
  std::vector<int> active_set;
  std::vector<int> signs;
};

struct LassoPath {
  std::vector<PathBreakpoint> breakpoints;
};

/// Where to stop along the path: at a residual norm (discrepancy principle)
/// or at a penalty value.
struct LassoStop {
  enum class Mode { TargetResidual, MinLambda };
  Mode mode = Mode::TargetResidual;
  double value = 0.0;

  static LassoStop target_residual(double r) { return {Mode::TargetResidual, r}; }
  static LassoStop min_lambda(double l) { return {Mode::MinLambda, l}; }
};

struct LassoOptions {
  bool record_path = false;
  int max_steps = 0;                     // 0: 8 n + 100
  double tie_tolerance = 1e-10;          // relative, on the entering lambda
  double degenerate_condition = 1e12;    // condition estimate of the active Gram matrix
};

struct LassoResult {
  LassoPath path;
  Solution solution;
};

namespace detail {

/// Cholesky factor of K_A^T K_A with rank-one column insert/delete.
class ActiveCholesky {
 public:
  ActiveCholesky(const Matrix& k, int capacity) : k_(k), l_(capacity, capacity) {}

  int size() const { return size_; }

  /// Appends column j; returns false when it is numerically dependent on the
  /// current set (factor left unchanged).
  bool add(int j, const std::vector<int>& active, double max_condition) {
    if (size_ == l_.rows()) return false;
    const double kjj = k_.col(j).squaredNorm();
    Vector w(size_);
    for (int i = 0; i < size_; ++i) w[i] = k_.col(active[static_cast<std::size_t>(i)]).dot(k_.col(j));
    if (size_ > 0) l_.topLeftCorner(size_, size_).triangularView<Eigen::Lower>().solveInPlace(w);
    const double d2 = kjj - w.squaredNorm();
    if (!(d2 > 0.0)) return false;
    const double d = std::sqrt(d2);
    double lo = d, hi = d;
    for (int i = 0; i < size_; ++i) {
      lo = std::min(lo, l_(i, i));
      hi = std::max(hi, l_(i, i));
    }
    if ((hi / lo) * (hi / lo) > max_condition) return false;
    if (size_ > 0) l_.row(size_).head(size_) = w.transpose();
    l_(size_, size_) = d;
    ++size_;
    return true;
  }

  /// Deletes the column at position p of the active ordering.
  void remove(int p) {
    const int k = size_;
    for (int i = p; i + 1 < k; ++i) l_.row(i).head(k) = l_.row(i + 1).head(k);
    // Rows p..k-2 now carry one superdiagonal entry; rotate it away.
    for (int i = p; i + 1 < k; ++i) {
      const double a = l_(i, i), b = l_(i, i + 1);
      const double r = std::hypot(a, b);
      const double c = a / r, s = b / r;
      for (int t = i; t + 1 < k; ++t) {
        const double x = l_(t, i), y = l_(t, i + 1);
        l_(t, i) = c * x + s * y;
        l_(t, i + 1) = -s * x + c * y;
      }
    }
    --size_;
    for (int t = 0; t < size_; ++t) l_(t, size_) = 0.0;
    l_.row(size_).setZero();
  }

  Vector solve(const Vector& rhs) const {
    const auto l = l_.topLeftCorner(size_, size_);
    Vector z = l.triangularView<Eigen::Lower>().solve(rhs);
    return l.transpose().triangularView<Eigen::Upper>().solve(z);
  }

 private:
  const Matrix& k_;
  Matrix l_;
  int size_ = 0;
};

/// Truncated-SVD solver for a singular active Gram matrix.
inline Vector pinv_solve(const Matrix& g, const Vector& rhs) {
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cut = s.size() > 0 ? 1e-12 * s[0] : 0.0;
  Vector coeff = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i) coeff[i] = s[i] > cut ? coeff[i] / s[i] : 0.0;
  return svd.matrixV() * coeff;
}

}  // namespace detail

inline LassoResult lasso_path(const Matrix& k, const Vector& y, const LassoStop& stop,
                              const LassoOptions& opt = {}) {
  const int m = static_cast<int>(k.rows());
  const int n = static_cast<int>(k.cols());
  if (y.size() != m) throw InvalidDimension("lasso_path: data length must equal the row count");
  const double y_norm = y.norm();
  if (stop.mode == LassoStop::Mode::TargetResidual && !(stop.value >= 0.0 && stop.value <= y_norm * (1 + 1e-12)))
    throw InvalidArgument("lasso_path: target residual must lie in [0, ||y||]");
  if (stop.mode == LassoStop::Mode::MinLambda && !(stop.value >= 0.0))
    throw InvalidArgument("lasso_path: min lambda must be nonnegative");
  if (k.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("lasso_path: zero matrix");

  const int max_steps = opt.max_steps > 0 ? opt.max_steps : 8 * n + 100;
  const double target = stop.value;
  const bool by_residual = stop.mode == LassoStop::Mode::TargetResidual;
  const double residual_tol = 1e-9 * y_norm;

  LassoResult out;
  Vector x = Vector::Zero(n);
  Vector c = k.transpose() * y;
  double lambda = c.cwiseAbs().maxCoeff();
  const double lambda0 = lambda;

  std::vector<int> active;
  std::vector<int> signs;
  std::vector<char> in_active(static_cast<std::size_t>(n), 0);
  detail::ActiveCholesky chol(k, std::min(m, n));
  bool degenerate = false;
  int steps = 0;

  auto record = [&](double res) {
    if (!opt.record_path) return;
    out.path.breakpoints.push_back({lambda, x, res, active, signs});
  };
  auto finish = [&](SolveStatus status) {
    const double res = (k * x - y).norm();
    if (degenerate && status == SolveStatus::Converged) status = SolveStatus::DegeneratePath;
    out.solution = {x, lambda, res, status, steps};
    return out;
  };

  auto gram = [&]() {
    Matrix ka(m, static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) ka.col(static_cast<Eigen::Index>(i)) = k.col(active[i]);
    return Matrix(ka.transpose() * ka);
  };
  auto active_solve = [&](const Vector& rhs) -> Vector {
    return degenerate ? detail::pinv_solve(gram(), rhs) : chol.solve(rhs);
  };
  // Exact minimizer on the current active set at `lam`.
  auto active_x = [&](double lam) {
    Vector rhs(static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i)
      rhs[static_cast<Eigen::Index>(i)] = k.col(active[i]).dot(y) - lam * signs[i];
    Vector xa = active_solve(rhs);
    // Iterative refinement against G = K_A^T K_A.
    for (int pass = 0; pass < 3; ++pass) {
      Vector kx = Vector::Zero(m);
      for (std::size_t i = 0; i < active.size(); ++i) kx += xa[static_cast<Eigen::Index>(i)] * k.col(active[i]);
      Vector gx(static_cast<Eigen::Index>(active.size()));
      for (std::size_t i = 0; i < active.size(); ++i) gx[static_cast<Eigen::Index>(i)] = k.col(active[i]).dot(kx);
      xa += active_solve(rhs - gx);
    }
    Vector full = Vector::Zero(n);
    // Within a segment an active coefficient never opposes its sign; a
    // mismatch is rounding on an index sitting exactly at zero.
    for (std::size_t i = 0; i < active.size(); ++i) {
      const double v = xa[static_cast<Eigen::Index>(i)];
      full[active[i]] = v * signs[i] > 0.0 ? v : 0.0;
    }
    return full;
  };
  auto add_index = [&](int j, int sign) {
    if (!degenerate && !chol.add(j, active, opt.degenerate_condition)) degenerate = true;
    active.push_back(j);
    signs.push_back(sign);
    in_active[static_cast<std::size_t>(j)] = 1;
  };
  auto remove_index = [&](int j) {
    const auto it = std::find(active.begin(), active.end(), j);
    const int p = static_cast<int>(it - active.begin());
    if (!degenerate) chol.remove(p);
    active.erase(it);
    signs.erase(signs.begin() + p);
    in_active[static_cast<std::size_t>(j)] = 0;
    x[j] = 0.0;
  };

  record(y_norm);
  if (lambda0 == 0.0) {
    // y is orthogonal to the range of K: zero is optimal for every lambda.
    lambda = by_residual ? 0.0 : target;
    return finish(by_residual && target + residual_tol < y_norm ? SolveStatus::TargetUnreachable
                                                                 : SolveStatus::Converged);
  }
  if (by_residual ? target >= y_norm : target >= lambda0) {
    if (!by_residual) lambda = target;
    return finish(SolveStatus::Converged);
  }

  for (int j = 0; j < n; ++j)
    if (std::abs(c[j]) >= lambda0 * (1.0 - opt.tie_tolerance)) add_index(j, c[j] > 0 ? 1 : -1);

  std::vector<int> just_added = active;
  int just_removed = -1;

  while (true) {
    if (++steps > max_steps) return finish(SolveStatus::MaxIterations);

    // Direction: x_A(lambda - gamma) = x_A + gamma d.
    Vector s(static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < signs.size(); ++i) s[static_cast<Eigen::Index>(i)] = signs[i];
    const Vector d = active_solve(s);
    Vector u = Vector::Zero(m);
    for (std::size_t i = 0; i < active.size(); ++i) u += d[static_cast<Eigen::Index>(i)] * k.col(active[i]);
    const Vector a = k.transpose() * u;

    // Smallest gamma at which an inactive correlation reaches the boundary.
    // Once K_A spans every row, c_j / lambda is constant for inactive j and
    // nothing can enter before lambda = 0.
    const bool spans_rows = static_cast<int>(active.size()) >= m;
    double gamma_in = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n && !spans_rows; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || j == just_removed) continue;
      if (1.0 - a[j] > 0.0) {
        const double g = (lambda - c[j]) / (1.0 - a[j]);
        if (g > 0.0) gamma_in = std::min(gamma_in, g);
      }
      if (1.0 + a[j] > 0.0) {
        const double g = (lambda + c[j]) / (1.0 + a[j]);
        if (g > 0.0) gamma_in = std::min(gamma_in, g);
      }
    }
    // Smallest gamma at which an active coefficient crosses zero.
    double gamma_out = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int j = active[i];
      if (std::find(just_added.begin(), just_added.end(), j) != just_added.end()) continue;
      const double di = d[static_cast<Eigen::Index>(i)];
      if (di == 0.0) continue;
      const double g = -x[j] / di;
      if (g > 0.0 && g < gamma_out) {
        gamma_out = g;
        leaving = j;
      }
    }
    const double gamma_end = by_residual ? lambda : std::max(lambda - target, 0.0);
    // An event within rounding of the end point is the end point.
    if (gamma_in >= gamma_end * (1.0 - 1e-12)) gamma_in = std::numeric_limits<double>::infinity();
    const double gamma = std::min({gamma_in, gamma_out, gamma_end});

    // Residual along the segment: r(gamma) = r0 - gamma u.
    const Vector r0 = y - k * x;
    const double r0_sq = r0.squaredNorm();
    if (by_residual) {
      const double uu = u.squaredNorm();
      const double ru = r0.dot(u);
      const double res_end_sq = r0_sq - 2.0 * gamma * ru + gamma * gamma * uu;
      if (res_end_sq <= target * target) {
        double root;
        const double disc = ru * ru - uu * (r0_sq - target * target);
        if (uu == 0.0) {
          root = gamma;
        } else if (disc <= 0.0) {
          root = ru / uu;  // tangent point
        } else {
          // Smaller root of uu g^2 - 2 ru g + (r0_sq - target^2), computed stably.
          const double q = ru + std::sqrt(disc);
          root = (r0_sq - target * target) / q;
        }
        root = std::clamp(root, 0.0, gamma);
        lambda = lambda - root > 1e-12 * lambda0 ? lambda - root : 0.0;
        x = active_x(lambda);
        record((y - k * x).norm());
        return finish(SolveStatus::Converged);
      }
    }

    if (gamma == gamma_end) {
      lambda = by_residual ? 0.0 : target;
      x = active_x(lambda);
      const double res = (k * x - y).norm();
      record(res);
      if (by_residual && res > target + residual_tol) return finish(SolveStatus::TargetUnreachable);
      return finish(SolveStatus::Converged);
    }

    lambda -= gamma;
    just_added.clear();
    just_removed = -1;
    if (gamma_out <= gamma_in) {
      remove_index(leaving);
      just_removed = leaving;
    }
    // Entering indices are exactly zero at the breakpoint; solve before
    // admitting them.
    x = active_x(lambda);
    if (gamma_in <= gamma_out) {
      // Admit every index whose entering lambda ties with the first one.
      const double tol = opt.tie_tolerance * lambda;
      const double lam_prev = lambda + gamma;
      for (int j = 0; j < n; ++j) {
        if (in_active[static_cast<std::size_t>(j)] || j == just_removed) continue;
        const double cj = c[j] - gamma * a[j];
        const double bound = lam_prev - gamma;
        if (std::abs(std::abs(cj) - bound) <= tol || std::abs(cj) > bound) {
          add_index(j, cj > 0 ? 1 : -1);
          just_added.push_back(j);
        }
      }
      if (static_cast<int>(active.size()) > std::min(m, n)) degenerate = true;
    }
    c = k.transpose() * (y - k * x);
    record((y - k * x).norm());
  }
}

}  // namespace sparselab

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// CDF 4-2 biorthogonal wavelet (four-tap interpolating predict, two-tap
// update) by lifting, with whole-sample symmetric extension:
//
//   d[i] = x[2i+1] - (9 (x[2i] + x[2i+2]) - (x[2i-2] + x[2i+4])) / 16
//   s[i] = x[2i]   + (d[i-1] + d[i]) / 4
//
// followed by s *= sqrt 2, d /= sqrt 2. The 2-D transform is separable and
// runs to full depth; coefficients are kept in Mallat layout.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "sparselab/error.hpp"

namespace sparselab::magtomo {

namespace detail {

/// Whole-sample symmetric reflection of index i into [0, len).
inline std::ptrdiff_t reflect(std::ptrdiff_t i, std::ptrdiff_t len) {
  if (len == 1) return 0;
  const std::ptrdiff_t period = 2 * (len - 1);
  i %= period;
  if (i < 0) i += period;
  return i < len ? i : period - i;
}

/// In-place single-level lifting on x[0], x[stride], ..., x[(len-1) stride].
inline void lift_forward(double* x, std::ptrdiff_t len, std::ptrdiff_t stride, std::vector<double>& work) {
  const std::ptrdiff_t half = len / 2;
  work.assign(static_cast<std::size_t>(len), 0.0);
  auto at = [&](std::ptrdiff_t i) { return x[reflect(i, len) * stride]; };
  double* s = work.data();
  double* d = work.data() + half;
  for (std::ptrdiff_t i = 0; i < half; ++i)
    d[i] = at(2 * i + 1) - (9.0 * (at(2 * i) + at(2 * i + 2)) - (at(2 * i - 2) + at(2 * i + 4))) / 16.0;
  for (std::ptrdiff_t i = 0; i < half; ++i) {
    const double left = d[i > 0 ? i - 1 : 0];  // d[-1] mirrors d[0]
    s[i] = x[2 * i * stride] + (left + d[i]) / 4.0;
  }
  for (std::ptrdiff_t i = 0; i < half; ++i) {
    x[i * stride] = s[i] * std::numbers::sqrt2;
    x[(half + i) * stride] = d[i] / std::numbers::sqrt2;
  }
}

inline void lift_inverse(double* x, std::ptrdiff_t len, std::ptrdiff_t stride, std::vector<double>& work) {
  const std::ptrdiff_t half = len / 2;
  work.assign(static_cast<std::size_t>(len), 0.0);
  double* out = work.data();
  std::vector<double> d(static_cast<std::size_t>(half));
  for (std::ptrdiff_t i = 0; i < half; ++i) d[static_cast<std::size_t>(i)] = x[(half + i) * stride] * std::numbers::sqrt2;
  for (std::ptrdiff_t i = 0; i < half; ++i) {
    const double left = d[static_cast<std::size_t>(i > 0 ? i - 1 : 0)];
    out[2 * i] = x[i * stride] / std::numbers::sqrt2 - (left + d[static_cast<std::size_t>(i)]) / 4.0;
  }
  auto even = [&](std::ptrdiff_t i) { return out[reflect(i, len)]; };
  for (std::ptrdiff_t i = 0; i < half; ++i)
    out[2 * i + 1] = d[static_cast<std::size_t>(i)] +
                     (9.0 * (even(2 * i) + even(2 * i + 2)) - (even(2 * i - 2) + even(2 * i + 4))) / 16.0;
  for (std::ptrdiff_t i = 0; i < len; ++i) x[i * stride] = out[i];
}

inline int checked_size(Eigen::Index count) {
  const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
  if (side < 1 || static_cast<Eigen::Index>(side) * side != count || (side & (side - 1)) != 0)
    throw UnsupportedSize("cdf42: field must be a square power-of-two grid");
  return side;
}

}  // namespace detail

/// Mallat-layout coefficients of a side x side field (flat, row-major).
inline Eigen::VectorXd cdf42_forward(const Eigen::VectorXd& field) {
  const int side = detail::checked_size(field.size());
  Eigen::VectorXd c = field;
  std::vector<double> work;
  for (int len = side; len >= 2; len /= 2) {
    for (int row = 0; row < len; ++row) detail::lift_forward(c.data() + row * side, len, 1, work);
    for (int col = 0; col < len; ++col) detail::lift_forward(c.data() + col, len, side, work);
  }
  return c;
}

inline Eigen::VectorXd cdf42_inverse(const Eigen::VectorXd& coeffs) {
  const int side = detail::checked_size(coeffs.size());
  Eigen::VectorXd f = coeffs;
  std::vector<double> work;
  for (int len = 2; len <= side; len *= 2) {
    for (int col = 0; col < len; ++col) detail::lift_inverse(f.data() + col, len, side, work);
    for (int row = 0; row < len; ++row) detail::lift_inverse(f.data() + row * side, len, 1, work);
  }
  return f;
}

}  // namespace sparselab::magtomo

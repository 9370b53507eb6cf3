// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Square parent matrices with prescribed singular-value laws, and random row
// subsets of them.
//
//   Type1: i.i.d. standard normal entries.
//   Type2: s_i = s1 * kappa^((1-i)/(n-1))          (geometric decay)
//   Type3: s_i = s1 * kappa^((1-i^2)/(n^2-1))      (Gaussian-like decay)
//
// Types 2 and 3 keep the singular vectors of a fresh Gaussian matrix.

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "sparselab/error.hpp"
#include "sparselab/linalg.hpp"
#include "sparselab/rng.hpp"

namespace sparselab {

enum class SpectrumKind { Type1 = 1, Type2 = 2, Type3 = 3 };

struct SpectrumSpec {
  SpectrumKind kind = SpectrumKind::Type1;
  double kappa = 1.0;
  double s1 = 1.0;

  void validate() const {
    if (!(s1 > 0.0)) throw InvalidArgument("SpectrumSpec: s1 must be positive");
    if (kind != SpectrumKind::Type1 && !(kappa > 1.0))
      throw InvalidArgument("SpectrumSpec: kappa must exceed 1 for Type2/Type3");
  }

  static SpectrumSpec type1() { return {SpectrumKind::Type1, 1.0, 1.0}; }
  static SpectrumSpec type2(double kappa, double s1 = 1.0) { return {SpectrumKind::Type2, kappa, s1}; }
  static SpectrumSpec type3(double kappa, double s1 = 1.0) { return {SpectrumKind::Type3, kappa, s1}; }
};

inline std::string to_string(const SpectrumSpec& spec) {
  std::string out = "type" + std::to_string(static_cast<int>(spec.kind));
  if (spec.kind != SpectrumKind::Type1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ",kappa=%.6g,s1=%.6g", spec.kappa, spec.s1);
    out += buf;
  }
  return out;
}

/// Singular values prescribed by a Type2/Type3 law for an n x n parent.
inline Vector spectrum_law(const SpectrumSpec& spec, int n) {
  spec.validate();
  if (n < 2) throw InvalidDimension("spectrum_law: n must be at least 2");
  if (spec.kind == SpectrumKind::Type1) throw InvalidArgument("spectrum_law: Type1 has no prescribed law");
  Vector s(n);
  const double nd = n;
  for (int idx = 0; idx < n; ++idx) {
    const double i = idx + 1;
    const double exponent = spec.kind == SpectrumKind::Type2 ? (1.0 - i) / (nd - 1.0)
                                                             : (1.0 - i * i) / (nd * nd - 1.0);
    s[idx] = spec.s1 * std::pow(spec.kappa, exponent);
  }
  return s;
}

struct ParentMatrix {
  Matrix entries;
  SpectrumSpec spec;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(entries.rows()); }
};

struct MeasurementMatrix {
  Matrix entries;
  std::vector<int> row_indices;
  SpectrumSpec parent_spec;

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

inline Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix g(rows, cols);
  // Fill row by row so the draw order is independent of Eigen's storage order.
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.normal();
  return g;
}

inline ParentMatrix gen_parent(int n, const SpectrumSpec& spec, std::uint64_t seed) {
  if (n < 2) throw InvalidDimension("gen_parent: n must be at least 2");
  spec.validate();
  Rng rng(seed);
  Matrix g = gaussian_matrix(n, n, rng);
  if (spec.kind == SpectrumKind::Type1) return {std::move(g), spec, seed};

  Eigen::BDCSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  const double recon = (u * svd.singularValues().asDiagonal() * v.transpose() - g).norm();
  if (recon > 1e-10 * g.norm()) throw Error("gen_parent: SVD reconstruction check failed");

  Matrix out = u * spectrum_law(spec, n).asDiagonal() * v.transpose();
  return {std::move(out), spec, seed};
}

inline MeasurementMatrix subsample_rows(const ParentMatrix& parent, int m, std::uint64_t seed) {
  const int n = parent.n();
  if (m < 1 || m > n) throw InvalidDimension("subsample_rows: m must lie in [1, n]");
  Rng rng(seed);
  std::vector<int> rows = rng.sample_without_replacement(n, m);
  Matrix k(m, parent.entries.cols());
  for (int i = 0; i < m; ++i) k.row(i) = parent.entries.row(rows[static_cast<std::size_t>(i)]);
  return {std::move(k), std::move(rows), parent.spec};
}

/// Singular values sorted descending, optionally divided by the largest.
inline Vector singular_spectrum(const Matrix& m, bool normalize = false) {
  Vector s = singular_values(m);
  if (normalize && s.size() > 0 && s[0] > 0.0) s /= s[0];
  return s;
}
inline Vector singular_spectrum(const MeasurementMatrix& m, bool normalize = false) {
  return singular_spectrum(m.entries, normalize);
}
inline Vector singular_spectrum(const ParentMatrix& m, bool normalize = false) {
  return singular_spectrum(m.entries, normalize);
}

/// Mean over `repeats` draws of the per-matrix normalized spectrum of an
/// m x n row subsample. Each draw uses a fresh parent.
inline Vector mean_normalized_spectrum(int n, int m, const SpectrumSpec& spec, int repeats,
                                       std::uint64_t seed) {
  Vector acc = Vector::Zero(std::min(m, n));
  for (int r = 0; r < repeats; ++r) {
    const auto parent = gen_parent(n, spec, derive_seed(seed, {0, static_cast<std::uint64_t>(r)}));
    const auto k = subsample_rows(parent, m, derive_seed(seed, {1, static_cast<std::uint64_t>(r)}));
    acc += singular_spectrum(k, true);
  }
  return acc / repeats;
}

/// CSV `index,singular_value,normalized_value`.
inline void write_spectrum_csv(std::ostream& os, const Vector& s) {
  os << "index,singular_value,normalized_value\n";
  const double top = s.size() > 0 && s[0] > 0.0 ? s[0] : 1.0;
  char buf[96];
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(i + 1), s[i], s[i] / top);
    os << buf;
  }
}

}  // namespace sparselab

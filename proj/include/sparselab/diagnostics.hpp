// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Restricted-isometry diagnostics: the condition-number ceiling for
// 2k-column submatrices, sampled condition numbers of random column
// submatrices, and the [I | H] identity + Hadamard dictionary.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <vector>

#include "sparselab/ensembles.hpp"
#include "sparselab/error.hpp"
#include "sparselab/linalg.hpp"
#include "sparselab/parallel.hpp"
#include "sparselab/rng.hpp"

namespace sparselab {

/// sqrt((10 + sqrt 7) / (2 + sqrt 7)) ~ 1.6498: the largest condition number
/// a 2k-column submatrix may have under the RIP recovery condition.
inline double rip_bound_constant() {
  const double r7 = std::sqrt(7.0);
  return std::sqrt((10.0 + r7) / (2.0 + r7));
}

struct SubmatrixConditionReport {
  int columns_per_sample = 0;
  int samples = 0;
  double mean_kappa = 0.0;  // over finite samples
  double max_kappa = 0.0;
  double min_kappa = 0.0;
  int infinite_count = 0;
  std::uint64_t seed = 0;
};

/// sigma_max / sigma_min, +inf for a rank-deficient matrix.
inline double condition_number(const Matrix& a) {
  const Vector s = singular_values(a);
  const double lo = s[s.size() - 1];
  if (lo == 0.0 || s[0] / lo > 1.0 / std::numeric_limits<double>::epsilon())
    return std::numeric_limits<double>::infinity();
  return s[0] / lo;
}

/// Condition numbers of `samples` random `columns`-column submatrices.
/// Sample s draws its columns with seed derive_seed(seed, {s}).
inline std::vector<double> sample_kappas(const Matrix& k, int columns, int samples, std::uint64_t seed,
                                         int threads = 1) {
  const int n = static_cast<int>(k.cols());
  if (columns < 1 || columns > n) throw InvalidDimension("sample_condition_numbers: columns must lie in [1, n]");
  if (samples < 1) throw InvalidArgument("sample_condition_numbers: samples must be positive");
  std::vector<double> kappas(static_cast<std::size_t>(samples));
  parallel_for(kappas.size(), threads, [&](std::size_t s) {
    Rng rng(derive_seed(seed, {s}));
    const auto cols = rng.sample_without_replacement(n, columns);
    Matrix sub(k.rows(), columns);
    for (int c = 0; c < columns; ++c) sub.col(c) = k.col(cols[static_cast<std::size_t>(c)]);
    kappas[s] = condition_number(sub);
  });
  return kappas;
}

inline SubmatrixConditionReport summarize_kappas(const std::vector<double>& kappas, int columns, std::uint64_t seed) {
  SubmatrixConditionReport rep;
  rep.columns_per_sample = columns;
  rep.samples = static_cast<int>(kappas.size());
  rep.seed = seed;
  double sum = 0.0;
  int finite = 0;
  rep.min_kappa = std::numeric_limits<double>::infinity();
  for (double kap : kappas) {
    if (!std::isfinite(kap)) {
      ++rep.infinite_count;
      continue;
    }
    sum += kap;
    ++finite;
    rep.min_kappa = std::min(rep.min_kappa, kap);
    rep.max_kappa = std::max(rep.max_kappa, kap);
  }
  rep.mean_kappa = finite ? sum / finite : std::numeric_limits<double>::quiet_NaN();
  if (!finite) rep.min_kappa = rep.max_kappa = std::numeric_limits<double>::infinity();
  return rep;
}

inline SubmatrixConditionReport sample_condition_numbers(const Matrix& k, int columns, int samples,
                                                         std::uint64_t seed, int threads = 1) {
  return summarize_kappas(sample_kappas(k, columns, samples, seed, threads), columns, seed);
}

/// Condition statistics for m x n row subsamples of an ensemble. With
/// `parents` > 1 the samples are spread evenly over independent parents.
inline SubmatrixConditionReport ensemble_condition_report(int n, int m, const SpectrumSpec& spec, int columns,
                                                          int samples, std::uint64_t seed, int parents = 1,
                                                          int threads = 1) {
  if (parents < 1) throw InvalidArgument("ensemble_condition_report: parents must be positive");
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(samples));
  for (int p = 0; p < parents; ++p) {
    const int share = samples / parents + (p < samples % parents ? 1 : 0);
    if (share == 0) continue;
    const auto parent = gen_parent(n, spec, derive_seed(seed, {0, static_cast<std::uint64_t>(p)}));
    const auto km = subsample_rows(parent, m, derive_seed(seed, {1, static_cast<std::uint64_t>(p)}));
    const auto part = sample_kappas(km.entries, columns, share, derive_seed(seed, {2, static_cast<std::uint64_t>(p)}),
                                    threads);
    all.insert(all.end(), part.begin(), part.end());
  }
  return summarize_kappas(all, columns, seed);
}

/// Sylvester Hadamard matrix of the given power-of-two order.
inline Matrix hadamard(int order) {
  if (order < 1 || (order & (order - 1)) != 0) throw UnsupportedOrder("hadamard: order must be a power of 2");
  Matrix h = Matrix::Ones(1, 1);
  while (h.rows() < order) {
    const auto s = h.rows();
    Matrix next(2 * s, 2 * s);
    next << h, h, h, -h;
    h = std::move(next);
  }
  return h;
}

/// [I | H / sqrt(order)], every column of unit norm.
inline Matrix identity_hadamard_matrix(int order) {
  const Matrix h = hadamard(order);
  Matrix out(order, 2 * order);
  out << Matrix::Identity(order, order), h / std::sqrt(static_cast<double>(order));
  return out;
}

/// CSV `columns,samples,mean,max,min,infinite_count`.
inline void write_condition_csv(std::ostream& os, const SubmatrixConditionReport& r) {
  os << "columns,samples,mean,max,min,infinite_count\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d\n", r.columns_per_sample, r.samples, r.mean_kappa,
                r.max_kappa, r.min_kappa, r.infinite_count);
  os << buf;
}

}  // namespace sparselab

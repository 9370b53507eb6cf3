// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sparselab/ensembles.hpp"
#include "sparselab/error.hpp"
#include "sparselab/linalg.hpp"
#include "sparselab/rng.hpp"

namespace sparselab {

/// Magnitudes below this are redrawn so a k-sparse signal really has k
/// significant entries.
inline constexpr double kMinSignalMagnitude = 1e-6;

struct SparseSignal {
  int n = 0;
  std::vector<int> support;
  std::vector<double> values;
  Vector dense;

  int k() const { return static_cast<int>(support.size()); }

  static SparseSignal from_support(int n, std::vector<int> support, std::vector<double> values) {
    if (support.size() != values.size()) throw InvalidArgument("SparseSignal: support/value size mismatch");
    if (support.empty()) throw InvalidSparsity("SparseSignal: k must be at least 1");
    Vector dense = Vector::Zero(n);
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] < 0 || support[i] >= n) throw InvalidSparsity("SparseSignal: support index out of range");
      if (values[i] == 0.0) throw InvalidSparsity("SparseSignal: zero value on support");
      if (dense[support[i]] != 0.0) throw InvalidSparsity("SparseSignal: repeated support index");
      dense[support[i]] = values[i];
    }
    return {n, std::move(support), std::move(values), std::move(dense)};
  }
};

struct ProblemSeeds {
  std::uint64_t parent = 0;
  std::uint64_t rows = 0;
  std::uint64_t signal = 0;
  std::uint64_t noise = 0;
};

struct ProblemInstance {
  MeasurementMatrix matrix;
  SparseSignal signal;
  Vector noise;
  Vector data;
  double epsilon = 0.0;
  ProblemSeeds seeds;

  /// ||eta|| / ||K x0|| recomputed from the stored vectors.
  double measured_epsilon() const {
    const double clean = (matrix.entries * signal.dense).norm();
    return clean == 0.0 ? 0.0 : noise.norm() / clean;
  }
};

/// Support uniform without replacement; values uniform on [-1, 1] with
/// magnitudes below kMinSignalMagnitude redrawn.
inline SparseSignal gen_signal(int n, int k, std::uint64_t seed) {
  if (k < 1 || k > n) throw InvalidSparsity("gen_signal: k must lie in [1, n]");
  Rng rng(seed);
  std::vector<int> support = rng.sample_without_replacement(n, k);
  std::vector<double> values(static_cast<std::size_t>(k));
  for (double& v : values) {
    do {
      v = rng.uniform(-1.0, 1.0);
    } while (std::abs(v) < kMinSignalMagnitude);
  }
  return SparseSignal::from_support(n, std::move(support), std::move(values));
}

inline ProblemInstance synthesize(const MeasurementMatrix& k, const SparseSignal& x0, double epsilon,
                                  std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("synthesize: epsilon must be nonnegative");
  if (k.cols() != x0.n) throw InvalidDimension("synthesize: matrix/signal dimension mismatch");
  const Vector clean = k.entries * x0.dense;
  const double clean_norm = clean.norm();
  Vector noise = Vector::Zero(k.rows());
  if (epsilon > 0.0) {
    if (clean_norm == 0.0) throw DegenerateSignal("synthesize: K*x0 = 0, noise level undefined");
    Rng rng(seed);
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
    noise *= epsilon * clean_norm / noise.norm();
  }
  Vector data = clean + noise;
  ProblemInstance out{k, x0, std::move(noise), std::move(data), epsilon, {}};
  out.seeds.noise = seed;
  return out;
}

inline double relative_error(const Vector& x_hat, const Vector& x0) {
  if (x_hat.size() != x0.size()) throw InvalidDimension("relative_error: dimension mismatch");
  const double ref = x0.norm();
  if (ref == 0.0) throw UndefinedError("relative_error: zero ground truth");
  return (x_hat - x0).norm() / ref;
}

inline double relative_error(const Vector& x_hat, const SparseSignal& x0) {
  return relative_error(x_hat, x0.dense);
}

// ---------------------------------------------------------------------------
// Instance bundle: a line-oriented text file, floats in hexadecimal so a
// replayed instance is bit-identical to the one that was dumped.

namespace detail {

inline std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

inline double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("instance bundle: bad number '" + s + "'");
  return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace detail

inline void dump_instance(std::ostream& os, const ProblemInstance& p) {
  const auto& k = p.matrix;
  os << "# sparselab instance v1\n";
  os << "shape," << k.rows() << ',' << k.cols() << '\n';
  os << "spectrum," << static_cast<int>(k.parent_spec.kind) << ',' << detail::hex(k.parent_spec.kappa) << ','
     << detail::hex(k.parent_spec.s1) << '\n';
  os << "epsilon," << detail::hex(p.epsilon) << '\n';
  os << "seeds," << p.seeds.parent << ',' << p.seeds.rows << ',' << p.seeds.signal << ',' << p.seeds.noise << '\n';
  os << "row_indices";
  for (int r : k.row_indices) os << ',' << r;
  os << "\nsupport";
  for (int s : p.signal.support) os << ',' << s;
  os << "\nvalues";
  for (double v : p.signal.values) os << ',' << detail::hex(v);
  os << "\nnoise";
  for (Eigen::Index i = 0; i < p.noise.size(); ++i) os << ',' << detail::hex(p.noise[i]);
  os << "\ndata";
  for (Eigen::Index i = 0; i < p.data.size(); ++i) os << ',' << detail::hex(p.data[i]);
  os << '\n';
  for (int i = 0; i < k.rows(); ++i) {
    os << "row";
    for (int j = 0; j < k.cols(); ++j) os << ',' << detail::hex(k.entries(i, j));
    os << '\n';
  }
}

inline ProblemInstance load_instance(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# sparselab instance v1") throw IoError("instance bundle: bad header");
  ProblemInstance p;
  int m = -1, n = -1, row = 0;
  std::vector<int> support;
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = detail::split_csv(line);
    const std::string key = f.front();
    f.erase(f.begin());
    auto as_vector = [&](Eigen::Index expected) {
      if (static_cast<Eigen::Index>(f.size()) != expected) throw IoError("instance bundle: length mismatch in " + key);
      Vector v(expected);
      for (Eigen::Index i = 0; i < expected; ++i) v[i] = detail::parse_double(f[static_cast<std::size_t>(i)]);
      return v;
    };
    if (key == "shape") {
      m = std::stoi(f.at(0));
      n = std::stoi(f.at(1));
      p.matrix.entries.resize(m, n);
    } else if (key == "spectrum") {
      p.matrix.parent_spec = {static_cast<SpectrumKind>(std::stoi(f.at(0))), detail::parse_double(f.at(1)),
                              detail::parse_double(f.at(2))};
    } else if (key == "epsilon") {
      p.epsilon = detail::parse_double(f.at(0));
    } else if (key == "seeds") {
      p.seeds = {std::stoull(f.at(0)), std::stoull(f.at(1)), std::stoull(f.at(2)), std::stoull(f.at(3))};
    } else if (key == "row_indices") {
      for (const auto& s : f) p.matrix.row_indices.push_back(std::stoi(s));
    } else if (key == "support") {
      for (const auto& s : f) support.push_back(std::stoi(s));
    } else if (key == "values") {
      for (const auto& s : f) values.push_back(detail::parse_double(s));
    } else if (key == "noise") {
      p.noise = as_vector(m);
    } else if (key == "data") {
      p.data = as_vector(m);
    } else if (key == "row") {
      if (row >= m) throw IoError("instance bundle: too many matrix rows");
      p.matrix.entries.row(row++) = as_vector(n).transpose();
    } else {
      throw IoError("instance bundle: unknown record '" + key + "'");
    }
  }
  if (m < 0 || row != m) throw IoError("instance bundle: incomplete matrix");
  p.signal = SparseSignal::from_support(n, std::move(support), std::move(values));
  return p;
}

}  // namespace sparselab

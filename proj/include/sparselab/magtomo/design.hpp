// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Wavelet-domain design matrix A = G W: G maps the stream function at cell
// centers to normal fields, W holds the inverse-transform basis fields as
// columns. G is assembled row by row through the transpose of the
// difference operators, so no per-column Biot-Savart sum is needed.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "sparselab/error.hpp"
#include "sparselab/magtomo/biot_savart.hpp"
#include "sparselab/magtomo/current.hpp"
#include "sparselab/magtomo/geometry.hpp"
#include "sparselab/magtomo/wavelet.hpp"
#include "sparselab/parallel.hpp"

namespace sparselab::magtomo {

struct TomoDesignMatrix {
  Eigen::MatrixXd entries;  // sensors x resolution^2, wavelet column order

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
  Eigen::VectorXd column_norms() const { return entries.colwise().norm().transpose(); }
};

namespace detail {

/// Transpose of diff_xi / diff_eta.
inline Eigen::VectorXd diff_adjoint(const PatchGrid& g, const Eigen::VectorXd& v, bool along_xi) {
  const int n = g.resolution;
  const double h = g.step();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  if (n == 1) return out;
  auto idx = [&](int line, int k) { return along_xi ? g.flat(k, line) : g.flat(line, k); };
  for (int line = 0; line < n; ++line) {
    for (int k = 0; k < n; ++k) {
      const double w = v[idx(line, k)];
      if (k == 0) {
        out[idx(line, 1)] += w / h;
        out[idx(line, 0)] -= w / h;
      } else if (k == n - 1) {
        out[idx(line, n - 1)] += w / h;
        out[idx(line, n - 2)] -= w / h;
      } else {
        out[idx(line, k + 1)] += w / (2.0 * h);
        out[idx(line, k - 1)] -= w / (2.0 * h);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Sensors x cells matrix of the map F -> biot_savart_normal(stream_to_current(F)).
inline Eigen::MatrixXd stream_response_matrix(const PatchGrid& grid, const SensorSet& sensors, int threads = 0) {
  const int cells = grid.cells();
  std::vector<Vec3> pos(static_cast<std::size_t>(cells)), pxi(pos.size()), peta(pos.size());
  std::vector<double> vol(pos.size()), sg(pos.size());
  for (int j = 0; j < grid.resolution; ++j)
    for (int i = 0; i < grid.resolution; ++i) {
      const auto c = static_cast<std::size_t>(grid.flat(i, j));
      pos[c] = grid.position(i, j);
      vol[c] = grid.area(i, j) * grid.thickness();
      sg[c] = cubed_sphere_area_element(grid.center(i), grid.center(j), grid.r_mid());
      std::tie(pxi[c], peta[c]) = cubed_sphere_tangents(grid.center(i), grid.center(j), grid.r_mid());
    }
  Eigen::MatrixXd G(static_cast<Eigen::Index>(sensors.size()), cells);
  parallel_for(sensors.size(), threads, [&](std::size_t s) {
    Eigen::VectorXd a(cells), b(cells);
    for (std::size_t c = 0; c < pos.size(); ++c) {
      const Vec3 w = detail::normal_kernel(sensors.positions[s], sensors.normals[s], pos[c], vol[c]);
      a[static_cast<Eigen::Index>(c)] = w.dot(pxi[c]) / sg[c];
      b[static_cast<Eigen::Index>(c)] = w.dot(peta[c]) / sg[c];
    }
    // B = a . D_eta F - b . D_xi F
    G.row(static_cast<Eigen::Index>(s)) =
        (detail::diff_adjoint(grid, a, false) - detail::diff_adjoint(grid, b, true)).transpose();
  });
  return G;
}

/// Dense inverse-wavelet basis: column j is cdf42_inverse(e_j).
inline Eigen::MatrixXd wavelet_synthesis_matrix(int resolution) {
  const Eigen::Index cells = static_cast<Eigen::Index>(resolution) * resolution;
  Eigen::MatrixXd W(cells, cells);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(cells);
  for (Eigen::Index j = 0; j < cells; ++j) {
    e[j] = 1.0;
    W.col(j) = cdf42_inverse(e);
    e[j] = 0.0;
  }
  return W;
}

inline TomoDesignMatrix build_design_matrix(const PatchGrid& grid, const SensorSet& sensors, int threads = 0) {
  TomoDesignMatrix out;
  const Eigen::MatrixXd G = stream_response_matrix(grid, sensors, threads);
  const Eigen::MatrixXd W = wavelet_synthesis_matrix(grid.resolution);
  out.entries.noalias() = G * W;
  return out;
}

/// Binary dump: 8-byte magic "SLMATRX1", uint64 rows, uint64 cols, then
/// row-major little-endian doubles.
inline void write_matrix_binary(std::ostream& os, const Eigen::MatrixXd& m) {
  const char magic[8] = {'S', 'L', 'M', 'A', 'T', 'R', 'X', '1'};
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows()), cols = static_cast<std::uint64_t>(m.cols());
  os.write(magic, 8);
  os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  os.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!os) throw IoError("write_matrix_binary: write failed");
}

inline Eigen::MatrixXd read_matrix_binary(std::istream& is) {
  char magic[8];
  std::uint64_t rows = 0, cols = 0;
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&rows), sizeof rows);
  is.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!is || std::memcmp(magic, "SLMATRX1", 8) != 0) throw IoError("read_matrix_binary: bad header");
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(static_cast<Eigen::Index>(rows),
                                                                            static_cast<Eigen::Index>(cols));
  is.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  if (!is) throw IoError("read_matrix_binary: truncated data");
  return rm;
}

}  // namespace sparselab::magtomo

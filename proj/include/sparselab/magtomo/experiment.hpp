// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Synthetic tomography run: a stream function sparse in the CDF 4-2 basis,
// noisy normal-field data at random sensors, and l1 (FISTA) versus l2 (CG)
// reconstructions, both tuned to the discrepancy ||A c - y|| = ||noise||.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>

#include "sparselab/magtomo/design.hpp"
#include "sparselab/problem_gen.hpp"
#include "sparselab/solvers/fista.hpp"
#include "sparselab/solvers/ridge.hpp"
#include "sparselab/svg.hpp"

namespace sparselab::magtomo {

enum class CoefficientPlacement {
  Uniform,  // positions uniform over all coefficients
  Coarse,   // positions uniform over the coarse_side x coarse_side Mallat block
};

inline std::string to_string(CoefficientPlacement p) { return p == CoefficientPlacement::Uniform ? "uniform" : "coarse"; }

struct TomoConfig {
  int resolution = 64;
  int sensors = 1000;
  double sensor_radius = 0.1;
  std::uint64_t geometry_seed = 1;  // sensors are shared by every model seed
  int nonzeros = 60;
  double epsilon = 0.1;
  CoefficientPlacement placement = CoefficientPlacement::Uniform;
  int coarse_side = 16;
  FistaDiscrepancyOptions l1;
  RidgeOptions l2;
  int threads = 0;
};

/// Geometry and design matrix, built once per configuration.
struct TomoSetup {
  TomoConfig config;
  PatchGrid grid;
  SensorSet sensors;
  TomoDesignMatrix design;
  double lipschitz = 0.0;
};

inline TomoSetup make_tomo_setup(const TomoConfig& cfg) {
  TomoSetup s;
  s.config = cfg;
  s.grid.resolution = cfg.resolution;
  s.sensors = random_sensors(s.grid, cfg.sensors, cfg.geometry_seed, cfg.sensor_radius);
  s.design = build_design_matrix(s.grid, s.sensors, cfg.threads);
  s.lipschitz = fista_lipschitz(s.design.entries);
  return s;
}

struct TomoReport {
  std::uint64_t seed = 0;
  SparseSignal model;       // wavelet coefficients of the input stream function
  Vector data;
  double noise_norm = 0.0;
  Solution l1;
  RidgeSolution l2;
  double l1_error = 0.0;    // relative, on wavelet coefficients
  double l2_error = 0.0;
};

/// The 60-coefficient model of `seed`: values follow gen_signal, positions
/// are drawn according to the placement rule.
inline SparseSignal tomo_model(const TomoConfig& cfg, std::uint64_t seed) {
  const int n = cfg.resolution * cfg.resolution;
  if (cfg.placement == CoefficientPlacement::Uniform) return gen_signal(n, cfg.nonzeros, seed);
  const int side = std::min(cfg.coarse_side, cfg.resolution);
  const auto local = gen_signal(side * side, cfg.nonzeros, seed);
  std::vector<int> support;
  for (int p : local.support) support.push_back((p / side) * cfg.resolution + p % side);
  return SparseSignal::from_support(n, support, local.values);
}

inline TomoReport run_tomo_experiment(const TomoSetup& setup, std::uint64_t seed) {
  const auto& cfg = setup.config;
  const Matrix& a = setup.design.entries;
  TomoReport rep;
  rep.seed = seed;
  rep.model = tomo_model(cfg, derive_seed(seed, {0}));
  const Vector clean = a * rep.model.dense;
  const double clean_norm = clean.norm();
  if (clean_norm == 0.0) throw DegenerateSignal("run_tomo_experiment: model produces no field");
  Rng rng(derive_seed(seed, {1}));
  Vector noise(a.rows());
  for (auto& v : noise) v = rng.normal();
  noise *= cfg.epsilon * clean_norm / noise.norm();
  rep.noise_norm = noise.norm();
  rep.data = clean + noise;

  auto l1_opt = cfg.l1;
  l1_opt.inner.lipschitz = setup.lipschitz;
  rep.l1 = fista_discrepancy(a, rep.data, rep.noise_norm, l1_opt);
  rep.l2 = ridge_discrepancy(a, rep.data, rep.noise_norm, cfg.l2);
  rep.l1_error = relative_error(rep.l1.x, rep.model);
  rep.l2_error = relative_error(rep.l2.x, rep.model);
  return rep;
}

/// Stream function F (cell values) over (xi, eta) with arrows showing the
/// tangential current, one per `stride` cells along each axis.
inline void write_field_svg(std::ostream& os, const PatchGrid& grid, const Eigen::VectorXd& field,
                            const std::string& title, const std::string& comment = {}, int stride = 4) {
  if (field.size() != grid.cells()) throw InvalidDimension("write_field_svg: field size differs from the grid");
  const StreamField f{grid.resolution, field};
  const auto current = stream_to_current(f, grid);
  std::vector<double> xs, ys, values;
  for (int i = 0; i < grid.resolution; ++i) {
    xs.push_back(grid.center(i));
    ys.push_back(grid.center(i));
  }
  for (int i = 0; i < grid.resolution; ++i)
    for (int j = 0; j < grid.resolution; ++j) values.push_back(field[grid.flat(i, j)]);

  // Arrow components along the unit coordinate directions, scaled so the
  // longest spans one arrow spacing.
  std::vector<svg::Arrow> arrows;
  double longest = 0.0;
  for (int j = stride / 2; j < grid.resolution; j += stride)
    for (int i = stride / 2; i < grid.resolution; i += stride) {
      const auto [pxi, peta] = cubed_sphere_tangents(grid.center(i), grid.center(j), grid.r_mid());
      const Vec3& jv = current.J[static_cast<std::size_t>(grid.flat(i, j))];
      const double u = jv.dot(pxi.normalized()), v = jv.dot(peta.normalized());
      arrows.push_back({grid.center(i), grid.center(j), u, v});
      longest = std::max(longest, std::hypot(u, v));
    }
  const double scale = longest > 0.0 ? 0.9 * stride * grid.step() / longest : 0.0;
  for (auto& a : arrows) {
    a.dx *= scale;
    a.dy *= scale;
  }
  svg::HeatmapOptions opt;
  opt.title = title;
  opt.x_label = "xi";
  opt.y_label = "eta";
  opt.arrows = std::move(arrows);
  opt.comment = comment;
  const double peak = field.cwiseAbs().maxCoeff();
  opt.vmin = -peak;
  opt.vmax = peak;
  svg::write_heatmap(os, xs, ys, values, opt);
}

/// CSV `index,singular_value,normalized_value` of the design matrix.
inline void write_design_spectrum_csv(std::ostream& os, const Vector& singular_values) {
  os << "index,singular_value,normalized_value\n";
  char buf[96];
  const double top = singular_values.size() ? singular_values[0] : 1.0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%td,%.17g,%.17g\n", static_cast<std::ptrdiff_t>(i + 1), singular_values[i],
                  top > 0.0 ? singular_values[i] / top : 0.0);
    os << buf;
  }
}

}  // namespace sparselab::magtomo

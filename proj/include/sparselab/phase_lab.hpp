// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Monte Carlo sweep over the (delta, rho) = (m/n, k/m) plane. Each trial
// draws a parent matrix, a row subset, a k-sparse signal and noise at level
// epsilon, solves the l1 problem along the homotopy path until the residual
// equals ||eta||, and records ||x - x0|| / ||x0||.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sparselab/ensembles.hpp"
#include "sparselab/parallel.hpp"
#include "sparselab/problem_gen.hpp"
#include "sparselab/solvers/homotopy.hpp"
#include "sparselab/svg.hpp"

namespace sparselab {

inline std::vector<double> equidistant(double first, double last, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] = count == 1 ? first : first + (last - first) * i / (count - 1);
  return v;
}

inline const std::vector<double>& default_epsilons() {
  static const std::vector<double> eps{0.02, 0.05, 0.10, 0.20, 0.50};
  return eps;
}

struct PhaseGridSpec {
  std::vector<double> delta_values;
  std::vector<double> rho_values;
  int n = 800;
  int trials = 100;
  double epsilon = 0.1;
  SpectrumSpec ensemble = SpectrumSpec::type1();
  std::uint64_t base_seed = 0;

  void validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (delta_values.empty() || rho_values.empty()) throw InvalidArgument("PhaseGridSpec: empty grid");
    if (!std::all_of(delta_values.begin(), delta_values.end(), in_unit) ||
        !std::all_of(rho_values.begin(), rho_values.end(), in_unit))
      throw InvalidArgument("PhaseGridSpec: delta and rho must lie in (0, 1]");
    if (n < 2) throw InvalidDimension("PhaseGridSpec: n must be at least 2");
    if (trials < 1) throw InvalidArgument("PhaseGridSpec: trials must be positive");
    if (!(epsilon >= 0.0)) throw InvalidArgument("PhaseGridSpec: epsilon must be nonnegative");
    ensemble.validate();
  }

  /// 40 x 40 grid on [0.025, 1], n = 800, 100 trials.
  static PhaseGridSpec paper(double epsilon, SpectrumSpec ensemble, std::uint64_t seed) {
    return {equidistant(0.025, 1.0, 40), equidistant(0.025, 1.0, 40), 800, 100, epsilon, ensemble, seed};
  }
  /// 10 x 10 grid on [0.1, 1], n = 200, 20 trials.
  static PhaseGridSpec mini(double epsilon, SpectrumSpec ensemble, std::uint64_t seed) {
    return {equidistant(0.1, 1.0, 10), equidistant(0.1, 1.0, 10), 200, 20, epsilon, ensemble, seed};
  }
};

inline int rows_for(double delta, int n) { return std::max(1, static_cast<int>(std::lround(delta * n))); }
inline int nonzeros_for(double rho, int m) { return std::max(1, static_cast<int>(std::lround(rho * m))); }

struct CellStat {
  double delta = 0.0;
  double rho = 0.0;
  int m = 0;
  int k = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  int trial_count = 0;
  int failure_count = 0;
};

struct TrialOutcome {
  double error = 0.0;
  SolveStatus status = SolveStatus::Converged;
  bool skipped = false;  // the trial threw before producing an estimate
  double residual_gap = 0.0;  // | ||K x - y|| - ||eta|| | / ||y||
};

/// Seed of trial `t` in the cell at grid coordinates (di, ri).
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t di, std::uint64_t ri, std::uint64_t t) {
  return derive_seed(base, {di, ri, t});
}

/// The synthetic problem of one trial; also used to replay a trial exactly.
inline ProblemInstance make_trial_instance(const PhaseGridSpec& spec, double delta, double rho, std::uint64_t seed) {
  const int m = rows_for(delta, spec.n);
  const int k = nonzeros_for(rho, m);
  ProblemSeeds seeds{derive_seed(seed, {0}), derive_seed(seed, {1}), derive_seed(seed, {2}), derive_seed(seed, {3})};
  const auto parent = gen_parent(spec.n, spec.ensemble, seeds.parent);
  const auto km = subsample_rows(parent, m, seeds.rows);
  auto inst = synthesize(km, gen_signal(spec.n, k, seeds.signal), spec.epsilon, seeds.noise);
  inst.seeds = seeds;
  return inst;
}

inline TrialOutcome run_trial(const PhaseGridSpec& spec, double delta, double rho, std::uint64_t seed) {
  TrialOutcome out;
  try {
    const auto inst = make_trial_instance(spec, delta, rho, seed);
    const double target = std::min(inst.noise.norm(), inst.data.norm());
    const auto res = lasso_path(inst.matrix.entries, inst.data, LassoStop::target_residual(target));
    out.error = relative_error(res.solution.x, inst.signal);
    out.status = res.solution.status;
    out.residual_gap = std::abs(res.solution.residual_norm - inst.noise.norm()) / inst.data.norm();
  } catch (const Error&) {
    out.skipped = true;
  }
  return out;
}

inline CellStat aggregate_cell(double delta, double rho, int n, const std::vector<TrialOutcome>& trials) {
  CellStat cs;
  cs.delta = delta;
  cs.rho = rho;
  cs.m = rows_for(delta, n);
  cs.k = nonzeros_for(rho, cs.m);
  double sum = 0.0;
  for (const auto& t : trials) {
    if (t.skipped) continue;
    ++cs.trial_count;
    if (t.status != SolveStatus::Converged) ++cs.failure_count;
    sum += t.error;
  }
  if (cs.trial_count == 0) return cs;
  cs.mean_error = sum / cs.trial_count;
  double ss = 0.0;
  for (const auto& t : trials)
    if (!t.skipped) ss += (t.error - cs.mean_error) * (t.error - cs.mean_error);
  cs.std_error = cs.trial_count > 1 ? std::sqrt(ss / (cs.trial_count - 1)) : 0.0;
  return cs;
}

/// One cell at arbitrary (delta, rho); (di, ri) are the seed coordinates.
inline CellStat run_cell(const PhaseGridSpec& spec, double delta, double rho, std::uint64_t di, std::uint64_t ri,
                         int threads = 1) {
  spec.validate();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
  parallel_for(outcomes.size(), threads, [&](std::size_t t) {
    outcomes[t] = run_trial(spec, delta, rho, trial_seed(spec.base_seed, di, ri, t));
  });
  return aggregate_cell(delta, rho, spec.n, outcomes);
}

/// Grid cell (di, ri) of `spec`.
inline CellStat run_cell(const PhaseGridSpec& spec, std::size_t di, std::size_t ri, int threads = 1) {
  return run_cell(spec, spec.delta_values.at(di), spec.rho_values.at(ri), di, ri, threads);
}

struct SweepResult {
  PhaseGridSpec spec;
  std::vector<CellStat> cells;  // delta-major: index di * rho_count + ri
  double max_residual_gap = 0.0;  // over converged trials

  std::size_t delta_count() const { return spec.delta_values.size(); }
  std::size_t rho_count() const { return spec.rho_values.size(); }
  const CellStat& at(std::size_t di, std::size_t ri) const { return cells.at(di * rho_count() + ri); }
};

/// Every cell of the grid. Trials are scheduled across `threads` workers;
/// results depend only on the spec.
inline SweepResult run_sweep(const PhaseGridSpec& spec, int threads = 1) {
  spec.validate();
  const std::size_t nd = spec.delta_values.size(), nr = spec.rho_values.size();
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<TrialOutcome> outcomes(nd * nr * trials);
  parallel_for(outcomes.size(), threads, [&](std::size_t idx) {
    const std::size_t cell = idx / trials, t = idx % trials;
    const std::size_t di = cell / nr, ri = cell % nr;
    outcomes[idx] = run_trial(spec, spec.delta_values[di], spec.rho_values[ri], trial_seed(spec.base_seed, di, ri, t));
  });
  SweepResult out{spec, {}, 0.0};
  out.cells.reserve(nd * nr);
  for (std::size_t cell = 0; cell < nd * nr; ++cell) {
    std::vector<TrialOutcome> slice(outcomes.begin() + static_cast<std::ptrdiff_t>(cell * trials),
                                    outcomes.begin() + static_cast<std::ptrdiff_t>((cell + 1) * trials));
    for (const auto& t : slice)
      if (!t.skipped && t.status == SolveStatus::Converged) out.max_residual_gap = std::max(out.max_residual_gap, t.residual_gap);
    out.cells.push_back(aggregate_cell(spec.delta_values[cell / nr], spec.rho_values[cell % nr], spec.n, slice));
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "delta,rho,m,k,trials,failures,mean_error,std_error\n";
  char buf[256];
  for (const auto& c : r.cells) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%d,%d,%.17g,%.17g\n", c.delta, c.rho, c.m, c.k, c.trial_count,
                  c.failure_count, c.mean_error, c.std_error);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// Level curves by marching squares on the node grid (delta_i, rho_j).

struct LevelCurve {
  double level = 0.0;
  std::vector<std::pair<double, double>> polyline;  // (delta, rho)
};

/// Row-major scalar field on a rectilinear grid: value(i, j) at (xs[i], ys[j]).
struct GridField {
  std::vector<double> xs, ys;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * ys.size() + j]; }

  static GridField mean_error(const SweepResult& r) {
    GridField g{r.spec.delta_values, r.spec.rho_values, {}};
    for (const auto& c : r.cells) g.values.push_back(c.mean_error);
    return g;
  }
};

inline std::vector<LevelCurve> extract_level_curve(const GridField& f, double level) {
  const std::size_t nx = f.xs.size(), ny = f.ys.size();
  std::vector<LevelCurve> curves;
  if (nx < 2 || ny < 2) return curves;

  // A crossing point is identified by the grid edge it sits on.
  auto h_edge = [&](std::size_t i, std::size_t j) { return 2 * (i * ny + j); };      // (i,j)-(i+1,j)
  auto v_edge = [&](std::size_t i, std::size_t j) { return 2 * (i * ny + j) + 1; };  // (i,j)-(i,j+1)
  auto above = [&](double v) { return v >= level; };
  std::map<std::size_t, std::pair<double, double>> points;
  auto crossing = [&](std::size_t id, double x0, double y0, double v0, double x1, double y1, double v1) {
    const double t = (level - v0) / (v1 - v0);
    points[id] = {x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
    return id;
  };

  std::vector<std::pair<std::size_t, std::size_t>> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      const double x0 = f.xs[i], x1 = f.xs[i + 1], y0 = f.ys[j], y1 = f.ys[j + 1];
      const double bl = f(i, j), br = f(i + 1, j), tr = f(i + 1, j + 1), tl = f(i, j + 1);
      // Edges in counter-clockwise order: bottom, right, top, left.
      std::vector<std::size_t> hits;
      if (above(bl) != above(br)) hits.push_back(crossing(h_edge(i, j), x0, y0, bl, x1, y0, br));
      if (above(br) != above(tr)) hits.push_back(crossing(v_edge(i + 1, j), x1, y0, br, x1, y1, tr));
      if (above(tl) != above(tr)) hits.push_back(crossing(h_edge(i, j + 1), x0, y1, tl, x1, y1, tr));
      if (above(bl) != above(tl)) hits.push_back(crossing(v_edge(i, j), x0, y0, bl, x0, y1, tl));
      if (hits.size() == 2) {
        segments.emplace_back(hits[0], hits[1]);
      } else if (hits.size() == 4) {
        // Saddle: the center value decides which corners are joined.
        const bool center_above = above(0.25 * (bl + br + tr + tl));
        if (center_above == above(bl)) {
          segments.emplace_back(hits[0], hits[1]);
          segments.emplace_back(hits[2], hits[3]);
        } else {
          segments.emplace_back(hits[0], hits[3]);
          segments.emplace_back(hits[1], hits[2]);
        }
      }
    }
  }

  // Chain segments through shared crossing points.
  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::vector<char> used(segments.size(), 0);
  auto other_end = [&](std::size_t s, std::size_t p) {
    return segments[s].first == p ? segments[s].second : segments[s].first;
  };
  auto next_segment = [&](std::size_t p) -> std::optional<std::size_t> {
    for (std::size_t s : incident[p])
      if (!used[s]) return s;
    return std::nullopt;
  };
  // Open chains start at points with a single incident segment.
  std::vector<std::size_t> starts;
  for (const auto& [p, segs] : incident)
    if (segs.size() == 1) starts.push_back(p);
  for (const auto& [p, segs] : incident) starts.push_back(p);

  for (std::size_t start : starts) {
    auto seg = next_segment(start);
    if (!seg) continue;
    LevelCurve curve{level, {points[start]}};
    std::size_t p = start;
    while (seg) {
      used[*seg] = 1;
      p = other_end(*seg, p);
      curve.polyline.push_back(points[p]);
      seg = next_segment(p);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

inline std::vector<LevelCurve> extract_level_curve(const SweepResult& r, double level) {
  return extract_level_curve(GridField::mean_error(r), level);
}

/// Largest rho at which any curve crosses the vertical line delta = x.
inline std::optional<double> curve_rho_at(const std::vector<LevelCurve>& curves, double x) {
  std::optional<double> best;
  for (const auto& c : curves) {
    for (std::size_t i = 0; i + 1 < c.polyline.size(); ++i) {
      const auto [x0, y0] = c.polyline[i];
      const auto [x1, y1] = c.polyline[i + 1];
      if ((x < std::min(x0, x1)) || (x > std::max(x0, x1))) continue;
      const double y = x0 == x1 ? std::max(y0, y1) : y0 + (x - x0) / (x1 - x0) * (y1 - y0);
      if (!best || y > *best) best = y;
    }
  }
  return best;
}

/// rho at which the mean error along column `di` first reaches `level`,
/// interpolated linearly; the last rho when it never does, nullopt when the
/// first cell is already at or above it.
inline std::optional<double> first_crossing_rho(const GridField& f, std::size_t di, double level) {
  const std::size_t ny = f.ys.size();
  if (f(di, 0) >= level) return std::nullopt;
  for (std::size_t j = 0; j + 1 < ny; ++j) {
    const double v0 = f(di, j), v1 = f(di, j + 1);
    if (v1 >= level) return f.ys[j] + (level - v0) / (v1 - v0) * (f.ys[j + 1] - f.ys[j]);
  }
  return f.ys.back();
}

inline void write_contour_csv(std::ostream& os, const std::vector<LevelCurve>& curves) {
  os << "curve_id,delta,rho\n";
  char buf[128];
  for (std::size_t id = 0; id < curves.size(); ++id) {
    for (const auto& [x, y] : curves[id].polyline) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", id, x, y);
      os << buf;
    }
  }
}

/// Heatmap of mean error, delta horizontal and rho vertical, with optional
/// level curves drawn on top.
inline void write_sweep_svg(std::ostream& os, const SweepResult& r, const std::vector<LevelCurve>& curves,
                            const std::string& comment = {}) {
  svg::HeatmapOptions opt;
  char title[160];
  std::snprintf(title, sizeof title, "mean relative error, %s, eps=%.3g, n=%d, %d trials",
                to_string(r.spec.ensemble).c_str(), r.spec.epsilon, r.spec.n, r.spec.trials);
  opt.title = title;
  opt.vmin = 0.0;
  opt.comment = comment;
  for (const auto& c : curves) opt.overlays.push_back(c.polyline);
  const auto f = GridField::mean_error(r);
  svg::write_heatmap(os, f.xs, f.ys, f.values, opt);
}

}  // namespace sparselab

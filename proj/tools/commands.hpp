// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Command implementations behind sparselab_cli. Each writes its files into
// the output directory and returns a one-line summary.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

#include "run_config.hpp"
#include "sparselab/diagnostics.hpp"
#include "sparselab/magtomo/experiment.hpp"
#include "sparselab/phase_lab.hpp"
#include "sparselab/solvers/fista.hpp"
#include "sparselab/solvers/homotopy.hpp"
#include "sparselab/solvers/ridge.hpp"
#include "sparselab/svg.hpp"

namespace sparselab::cli {

namespace fs = std::filesystem;

/// Writes through a temporary file in the same directory, then renames.
inline void write_atomic(const fs::path& path, const std::function<void(std::ostream&)>& body,
                         std::ios::openmode mode = std::ios::out) {
  const fs::path tmp = path.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream os(tmp, mode | std::ios::trunc);
    if (!os) throw IoError("cannot write " + tmp.string());
    body(os);
    os.flush();
    if (!os) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

class Outputs {
 public:
  explicit Outputs(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.output), json_(to_json_string(cfg)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
  }

  const std::string& config_json() const { return json_; }
  std::string comment() const { return "sparselab config: " + json_; }

  /// CSV with the resolved config as a leading comment line.
  void csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (!cfg_.wants_csv()) return;
    write(name, [&](std::ostream& os) {
      os << "# " << comment() << '\n';
      body(os);
    });
  }

  void svg(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (cfg_.wants_svg()) write(name, body);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body,
             std::ios::openmode mode = std::ios::out) {
    write_atomic(dir_ / name, body, mode);
    ++files_;
  }

  void write_config() {
    write("config.json", [&](std::ostream& os) { os << to_json_string(cfg_, 2) << '\n'; });
  }

  int files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  const RunConfig& cfg_;
  fs::path dir_;
  std::string json_;
  int files_ = 0;
};

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

inline std::string run_sweep_command(const RunConfig& cfg, int threads) {
  Outputs out(cfg);
  out.write_config();
  std::string summary;
  for (double eps : cfg.epsilons) {
    const PhaseGridSpec spec{cfg.deltas, cfg.rhos, cfg.n, cfg.trials, eps, cfg.ensemble(), cfg.seed};
    const auto result = run_sweep(spec, threads);
    const auto curves = extract_level_curve(result, 2.0 * eps);
    const std::string stem = "sweep_eps" + fmt("%g", eps);
    out.csv(stem + ".csv", [&](std::ostream& os) { write_sweep_csv(os, result); });
    out.csv(stem + "_contour.csv", [&](std::ostream& os) { write_contour_csv(os, curves); });
    out.svg(stem + ".svg", [&](std::ostream& os) { write_sweep_svg(os, result, curves, out.comment()); });
    int failures = 0;
    for (const auto& c : result.cells) failures += c.failure_count;
    summary += (summary.empty() ? "" : "; ") + std::string("eps=") + fmt("%g", eps) + " " +
               std::to_string(result.cells.size()) + " cells, " + std::to_string(failures) + " failed trials";
  }
  return "sweep " + to_string(cfg.ensemble()) + ": " + summary + " -> " + out.dir().string();
}

inline std::string run_solve_command(const RunConfig& cfg, int threads) {
  (void)threads;
  Outputs out(cfg);
  out.write_config();
  const double eps = cfg.epsilons.front();
  const ProblemSeeds seeds{derive_seed(cfg.seed, {0}), derive_seed(cfg.seed, {1}), derive_seed(cfg.seed, {2}),
                           derive_seed(cfg.seed, {3})};
  const auto parent = gen_parent(cfg.n, cfg.ensemble(), seeds.parent);
  auto inst = synthesize(subsample_rows(parent, cfg.m, seeds.rows), gen_signal(cfg.n, cfg.k, seeds.signal), eps,
                         seeds.noise);
  inst.seeds = seeds;
  const double target = inst.noise.norm();

  Vector x;
  std::string status;
  double lambda = 0.0, residual = 0.0;
  if (cfg.solver == "path") {
    const auto res = lasso_path(inst.matrix.entries, inst.data, LassoStop::target_residual(target));
    x = res.solution.x;
    status = to_string(res.solution.status);
    lambda = res.solution.lambda;
    residual = res.solution.residual_norm;
  } else if (cfg.solver == "fista") {
    FistaDiscrepancyOptions opt;
    opt.residual_tol = 1e-6;
    const auto sol = fista_discrepancy(inst.matrix.entries, inst.data, target, opt);
    x = sol.x;
    status = to_string(sol.status);
    lambda = sol.lambda;
    residual = sol.residual_norm;
  } else {
    const auto sol = ridge_discrepancy(inst.matrix.entries, inst.data, target);
    x = sol.x;
    status = to_string(sol.status);
    lambda = sol.lambda2;
    residual = sol.residual_norm;
  }
  const double err = relative_error(x, inst.signal);

  out.csv("solution.csv", [&](std::ostream& os) { write_solution_csv(os, x); });
  out.csv("summary.csv", [&](std::ostream& os) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "solver,status,lambda,residual_norm,noise_norm,relative_error\n%s,%s,%.17g,%.17g,%.17g,%.17g\n",
                  cfg.solver.c_str(), status.c_str(), lambda, residual, target, err);
    os << buf;
  });
  if (cfg.wants_csv()) {
    out.write("instance.txt", [&](std::ostream& os) {
      std::ostringstream body;
      dump_instance(body, inst);
      const std::string text = body.str();
      const auto nl = text.find('\n');
      os << text.substr(0, nl + 1) << "# " << out.comment() << '\n' << text.substr(nl + 1);
    });
  }
  out.svg("solution.svg", [&](std::ostream& os) {
    svg::Series truth{{}, {}, "x0", "#888888"}, est{{}, {}, "estimate", "#c0392b"};
    truth.markers = est.markers = true;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      truth.x.push_back(static_cast<double>(i));
      truth.y.push_back(inst.signal.dense[i]);
      est.x.push_back(static_cast<double>(i));
      est.y.push_back(x[i]);
    }
    svg::LinePlotOptions opt;
    opt.title = cfg.solver + " estimate, relative error " + fmt("%.4g", err);
    opt.comment = out.comment();
    svg::write_line_plot(os, {truth, est}, opt);
  });
  char buf[256];
  std::snprintf(buf, sizeof buf, "solve %s: m=%d n=%d k=%d eps=%g status=%s relative_error=%.6g -> %s",
                cfg.solver.c_str(), cfg.m, cfg.n, cfg.k, eps, status.c_str(), err, out.dir().c_str());
  return buf;
}

inline std::string run_rip_command(const RunConfig& cfg, int threads) {
  Outputs out(cfg);
  out.write_config();
  std::vector<double> kappas;
  std::string what;
  if (cfg.order > 0) {
    kappas = sample_kappas(identity_hadamard_matrix(cfg.order), cfg.columns, cfg.samples, cfg.seed, threads);
    what = "[I|H] order " + std::to_string(cfg.order);
  } else {
    std::vector<double> all;
    for (int p = 0; p < cfg.parents; ++p) {
      const int share = cfg.samples / cfg.parents + (p < cfg.samples % cfg.parents ? 1 : 0);
      if (share == 0) continue;
      const auto up = static_cast<std::uint64_t>(p);
      const auto parent = gen_parent(cfg.n, cfg.ensemble(), derive_seed(cfg.seed, {0, up}));
      const auto km = subsample_rows(parent, cfg.m, derive_seed(cfg.seed, {1, up}));
      const auto part = sample_kappas(km.entries, cfg.columns, share, derive_seed(cfg.seed, {2, up}), threads);
      all.insert(all.end(), part.begin(), part.end());
    }
    kappas = std::move(all);
    what = to_string(cfg.ensemble()) + " " + std::to_string(cfg.m) + "x" + std::to_string(cfg.n);
  }
  const auto rep = summarize_kappas(kappas, cfg.columns, cfg.seed);
  out.csv("rip.csv", [&](std::ostream& os) { write_condition_csv(os, rep); });
  out.csv("rip_samples.csv", [&](std::ostream& os) {
    os << "sample,kappa\n";
    char buf[64];
    for (std::size_t s = 0; s < kappas.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", s, kappas[s]);
      os << buf;
    }
  });
  out.svg("rip.svg", [&](std::ostream& os) {
    // sorted sample curve with the RIP bound for reference
    auto sorted = kappas;
    std::sort(sorted.begin(), sorted.end());
    svg::Series s{{}, {}, "sorted kappa", "#1f4e79"}, bound{{}, {}, "bound 1.6498", "#c0392b"};
    bound.dashed = true;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      s.x.push_back(static_cast<double>(i) / sorted.size());
      s.y.push_back(sorted[i]);
    }
    bound.x = {0.0, 1.0};
    bound.y = {rip_bound_constant(), rip_bound_constant()};
    svg::LinePlotOptions opt;
    opt.title = "condition numbers, " + what + ", " + std::to_string(cfg.columns) + " columns";
    opt.x_label = "quantile";
    opt.y_label = "kappa";
    opt.comment = out.comment();
    svg::write_line_plot(os, {s, bound}, opt);
  });
  char buf[256];
  std::snprintf(buf, sizeof buf, "rip %s, %d columns, %d samples: mean %.6g max %.6g (%d singular) -> %s", what.c_str(),
                cfg.columns, cfg.samples, rep.mean_kappa, rep.max_kappa, rep.infinite_count, out.dir().c_str());
  return buf;
}

inline magtomo::TomoConfig tomo_config(const RunConfig& cfg, int threads) {
  magtomo::TomoConfig t;
  t.resolution = cfg.resolution;
  t.sensors = cfg.sensors;
  t.geometry_seed = cfg.geometry_seed;
  t.nonzeros = cfg.nonzeros;
  t.epsilon = cfg.epsilons.front();
  t.placement = cfg.placement == "coarse" ? magtomo::CoefficientPlacement::Coarse : magtomo::CoefficientPlacement::Uniform;
  t.threads = threads;
  return t;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string run_tomo_command(const RunConfig& cfg, int threads) {
  Outputs out(cfg);
  out.write_config();
  const auto setup = magtomo::make_tomo_setup(tomo_config(cfg, threads));
  const Matrix& a = setup.design.entries;
  const Vector sv = singular_values(a);
  const Vector norms = setup.design.column_norms();

  out.csv("design_spectrum.csv", [&](std::ostream& os) { magtomo::write_design_spectrum_csv(os, sv); });
  out.csv("column_norms.csv", [&](std::ostream& os) {
    os << "column,norm,relative_norm\n";
    const double top = sv.size() ? sv[0] : 1.0;
    char buf[96];
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%td,%.17g,%.17g\n", static_cast<std::ptrdiff_t>(j), norms[j], norms[j] / top);
      os << buf;
    }
  });
  if (cfg.export_matrix) {
    out.write("design_matrix.bin", [&](std::ostream& os) { magtomo::write_matrix_binary(os, a); },
              std::ios::out | std::ios::binary);
    out.write("design_matrix.json", [&](std::ostream& os) {
      os << "{\"layout\":\"magic SLMATRX1, uint64 rows, uint64 cols, row-major float64\",\"config\":" << out.config_json()
         << "}\n";
    });
  }
  out.svg("design_spectrum.svg", [&](std::ostream& os) {
    svg::Series s{{}, {}, "design matrix", "#1f4e79"};
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      s.x.push_back(static_cast<double>(i + 1));
      s.y.push_back(sv[i] / sv[0]);
    }
    svg::LinePlotOptions opt;
    opt.title = "normalized singular values";
    opt.log_y = true;
    opt.comment = out.comment();
    svg::write_line_plot(os, {s}, opt);
  });

  std::vector<magtomo::TomoReport> reports;
  std::vector<double> l1, l2;
  for (int s = 0; s < cfg.seeds; ++s) {
    reports.push_back(magtomo::run_tomo_experiment(setup, derive_seed(cfg.seed, {static_cast<std::uint64_t>(s)})));
    l1.push_back(reports.back().l1_error);
    l2.push_back(reports.back().l2_error);
    if (s == 0) {
      const auto& r = reports.front();
      const std::string tag = " (seed index 0)";
      out.svg("tomo_input.svg", [&](std::ostream& os) {
        magtomo::write_field_svg(os, setup.grid, magtomo::cdf42_inverse(r.model.dense), "input F" + tag, out.comment());
      });
      out.svg("tomo_l1.svg", [&](std::ostream& os) {
        magtomo::write_field_svg(os, setup.grid, magtomo::cdf42_inverse(r.l1.x),
                                 "l1 reconstruction, error " + fmt("%.3f", r.l1_error), out.comment());
      });
      out.svg("tomo_l2.svg", [&](std::ostream& os) {
        magtomo::write_field_svg(os, setup.grid, magtomo::cdf42_inverse(r.l2.x),
                                 "l2 reconstruction, error " + fmt("%.3f", r.l2_error), out.comment());
      });
    }
  }
  out.csv("tomo_errors.csv", [&](std::ostream& os) {
    os << "seed_index,seed,l1_error,l2_error,l1_lambda,l2_lambda,l1_status,l2_status,l1_iterations,l2_cg_iterations\n";
    char buf[320];
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g,%.17g,%.17g,%.17g,%s,%s,%d,%d\n", i,
                    static_cast<unsigned long long>(r.seed), r.l1_error, r.l2_error, r.l1.lambda, r.l2.lambda2,
                    to_string(r.l1.status), to_string(r.l2.status), r.l1.work, r.l2.cg_iterations);
      os << buf;
    }
  });
  const double ratio = sv[0] / sv[sv.size() - 1];
  const double spread = norms.maxCoeff() / norms.minCoeff();
  out.csv("tomo_summary.csv", [&](std::ostream& os) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "seeds,median_l1_error,median_l2_error,sigma_ratio,column_norm_spread\n%d,%.17g,%.17g,%.17g,%.17g\n",
                  cfg.seeds, median(l1), median(l2), ratio, spread);
    os << buf;
  });
  char buf[256];
  std::snprintf(buf, sizeof buf, "tomo %dx%d, %d sensors, %d seeds: median l1 %.4g, median l2 %.4g -> %s",
                cfg.resolution, cfg.resolution, cfg.sensors, cfg.seeds, median(l1), median(l2), out.dir().c_str());
  return buf;
}

inline std::string run_spectrum_command(const RunConfig& cfg, int threads) {
  (void)threads;
  Outputs out(cfg);
  out.write_config();
  const auto spec = cfg.ensemble();
  const Vector mean = mean_normalized_spectrum(cfg.n, cfg.m, spec, cfg.repeats, cfg.seed);
  const Vector law = spectrum_law(spec, cfg.n);
  out.csv("spectrum.csv", [&](std::ostream& os) { write_spectrum_csv(os, mean); });
  out.svg("spectrum.svg", [&](std::ostream& os) {
    svg::Series s{{}, {}, "mean normalized spectrum", "#1f4e79"}, p{{}, {}, "parent law", "#888888"};
    p.dashed = true;
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
      s.x.push_back(static_cast<double>(i) / std::max<Eigen::Index>(1, mean.size() - 1));
      s.y.push_back(mean[i]);
    }
    for (Eigen::Index i = 0; i < law.size(); ++i) {
      p.x.push_back(static_cast<double>(i) / std::max<Eigen::Index>(1, law.size() - 1));
      p.y.push_back(law[i] / law[0]);
    }
    svg::LinePlotOptions opt;
    opt.title = to_string(spec) + ", " + std::to_string(cfg.m) + "x" + std::to_string(cfg.n) + ", " +
                std::to_string(cfg.repeats) + " draws";
    opt.x_label = "index fraction";
    opt.y_label = "s / s1";
    opt.log_y = true;
    opt.comment = out.comment();
    svg::write_line_plot(os, {s, p}, opt);
  });
  char buf[256];
  std::snprintf(buf, sizeof buf, "spectrum %s %dx%d, %d draws: last normalized value %.4g -> %s", to_string(spec).c_str(),
                cfg.m, cfg.n, cfg.repeats, mean[mean.size() - 1], out.dir().c_str());
  return buf;
}

inline std::string execute(const RunConfig& cfg, int threads) {
  validate(cfg);
  switch (cfg.command) {
    case Command::Sweep: return run_sweep_command(cfg, threads);
    case Command::Solve: return run_solve_command(cfg, threads);
    case Command::Rip: return run_rip_command(cfg, threads);
    case Command::Tomo: return run_tomo_command(cfg, threads);
    case Command::Spectrum: return run_spectrum_command(cfg, threads);
  }
  throw InvalidArgument("unknown command");
}

}  // namespace sparselab::cli

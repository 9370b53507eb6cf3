// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

// sparselab_cli: runs sweeps, single solves, condition-number and spectrum
// diagnostics, and the tomography experiment, writing CSV and SVG outputs.
//
// Parameters resolve in order: built-in defaults, --config file, --preset,
// then explicit flags.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using sparselab::cli::Command;
using sparselab::cli::RunConfig;

struct Flags {
  std::string config_path, preset;
  std::optional<std::vector<double>> epsilons, deltas, rhos;
  std::optional<int> type, n, m, k, trials, order, columns, samples, parents, seeds, resolution, sensors,
      nonzeros, repeats;
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed, geometry_seed;
  std::optional<std::string> solver, placement, output, format;
  bool export_matrix = false;
  int threads = 0;
};

template <class T>
void take(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

RunConfig resolve(const Flags& f, std::optional<Command> command) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw sparselab::IoError("cannot read config " + f.config_path);
    std::stringstream ss;
    ss << is.rdbuf();
    c = sparselab::cli::from_json_string(ss.str());
  }
  if (command) c.command = *command;
  if (!f.preset.empty()) sparselab::cli::apply_preset(c, f.preset);
  take(f.epsilons, c.epsilons);
  take(f.deltas, c.deltas);
  take(f.rhos, c.rhos);
  take(f.type, c.type);
  take(f.kappa, c.kappa);
  take(f.seed, c.seed);
  take(f.n, c.n);
  take(f.m, c.m);
  take(f.k, c.k);
  take(f.trials, c.trials);
  take(f.solver, c.solver);
  take(f.order, c.order);
  take(f.columns, c.columns);
  take(f.samples, c.samples);
  take(f.parents, c.parents);
  take(f.seeds, c.seeds);
  take(f.resolution, c.resolution);
  take(f.sensors, c.sensors);
  take(f.nonzeros, c.nonzeros);
  take(f.geometry_seed, c.geometry_seed);
  take(f.placement, c.placement);
  take(f.repeats, c.repeats);
  take(f.output, c.output);
  take(f.format, c.format);
  if (f.export_matrix) c.export_matrix = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparselab: sparse recovery experiments"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Flags f;

  app.add_option("--config", f.config_path, "JSON config written by an earlier run")->check(CLI::ExistingFile);
  app.add_option("--preset", f.preset, "mini | paper | hadamard128 | tomo64");
  app.add_option("--epsilon", f.epsilons, "noise level(s) ||eta|| / ||K x0||")->delimiter(',');
  app.add_option("--type", f.type, "spectrum type 1, 2 or 3");
  app.add_option("--kappa", f.kappa, "condition number for types 2 and 3");
  app.add_option("--seed", f.seed, "base seed");
  app.add_option("--n", f.n, "signal length");
  app.add_option("--m", f.m, "measurements (solve, rip, spectrum)");
  app.add_option("--k", f.k, "nonzeros (solve)");
  app.add_option("--deltas", f.deltas, "sweep delta grid")->delimiter(',');
  app.add_option("--rhos", f.rhos, "sweep rho grid")->delimiter(',');
  app.add_option("--trials", f.trials, "trials per sweep cell");
  app.add_option("--solver", f.solver, "path | fista | ridge (solve)");
  app.add_option("--order", f.order, "Hadamard order for rip; 0 samples the ensemble");
  app.add_option("--columns", f.columns, "columns per submatrix (rip)");
  app.add_option("--samples", f.samples, "submatrix samples (rip)");
  app.add_option("--parents", f.parents, "parent matrices to average over (rip)");
  app.add_option("--seeds", f.seeds, "noise/model seeds (tomo)");
  app.add_option("--resolution", f.resolution, "cells per patch side (tomo)");
  app.add_option("--sensors", f.sensors, "sensor count (tomo)");
  app.add_option("--nonzeros", f.nonzeros, "nonzero wavelet coefficients (tomo)");
  app.add_option("--geometry-seed", f.geometry_seed, "sensor placement seed (tomo)");
  app.add_option("--placement", f.placement, "uniform | coarse (tomo)");
  app.add_flag("--export-matrix", f.export_matrix, "also write the design matrix (tomo)");
  app.add_option("--repeats", f.repeats, "draws averaged (spectrum)");
  app.add_option("--output", f.output, "output directory");
  app.add_option("--format", f.format, "csv | svg | both");
  app.add_option("--threads", f.threads, "worker cap; default $SPARSELAB_THREADS or all cores")
      ->check(CLI::NonNegativeNumber);

  const std::pair<const char*, Command> commands[] = {{"sweep", Command::Sweep},
                                                      {"solve", Command::Solve},
                                                      {"rip", Command::Rip},
                                                      {"tomo", Command::Tomo},
                                                      {"spectrum", Command::Spectrum}};
  const char* help[] = {"phase-diagram sweep over (delta, rho)", "one instance, one solver",
                        "condition numbers of column submatrices", "magnetic tomography experiment",
                        "mean normalized singular values of row samples"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) subs.push_back(app.add_subcommand(commands[i].first, help[i]));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::optional<Command> command;
  for (std::size_t i = 0; i < subs.size(); ++i)
    if (subs[i]->parsed()) command = commands[i].second;
  if (!command && f.config_path.empty()) {
    std::cerr << "error: a command (sweep, solve, rip, tomo, spectrum) or --config is required\n";
    return 2;
  }

  try {
    const RunConfig cfg = resolve(f, command);
    std::cout << sparselab::cli::execute(cfg, sparselab::resolve_threads(f.threads)) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Resolved parameters of one command-line run. Serialized as JSON into
// config.json and into the header comment of every output file, so any
// output can be regenerated with `--config`. The worker count is not part
// of it: results do not depend on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sparselab/error.hpp"
#include "sparselab/phase_lab.hpp"

namespace sparselab::cli {

inline constexpr int kConfigVersion = 1;

enum class Command { Sweep, Solve, Rip, Tomo, Spectrum };

inline constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::Sweep, "sweep"}, {Command::Solve, "solve"}, {Command::Rip, "rip"},
    {Command::Tomo, "tomo"},   {Command::Spectrum, "spectrum"}};

inline std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames)
    if (cmd == c) return name;
  throw InvalidArgument("unknown command");
}

// Unknown names are an error rather than a silent fallback.
inline void to_json(nlohmann::json& j, Command c) { j = to_string(c); }
inline void from_json(const nlohmann::json& j, Command& c) {
  const auto name = j.get<std::string>();
  for (const auto& [cmd, n] : kCommandNames)
    if (name == n) {
      c = cmd;
      return;
    }
  throw InvalidArgument("config: unknown command '" + name + "'");
}

struct RunConfig {
  int version = kConfigVersion;
  Command command = Command::Sweep;
  std::string preset;
  std::uint64_t seed = 1;

  // ensemble
  int type = 1;
  double kappa = 1e4;

  // problem shape
  std::vector<double> epsilons{0.1};
  int n = 200;
  int m = 100;
  int k = 5;

  // sweep
  std::vector<double> deltas = equidistant(0.1, 1.0, 10);
  std::vector<double> rhos = equidistant(0.1, 1.0, 10);
  int trials = 20;

  // solve: path | fista | ridge
  std::string solver = "path";

  // rip: order > 0 samples [I | H]; otherwise the ensemble at (n, m)
  int order = 0;
  int columns = 20;
  int samples = 1000;
  int parents = 1;

  // tomo
  int seeds = 10;
  int resolution = 64;
  int sensors = 1000;
  int nonzeros = 60;
  std::uint64_t geometry_seed = 1;
  std::string placement = "uniform";
  bool export_matrix = false;

  // spectrum
  int repeats = 100;

  // output
  std::string output = ".";
  std::string format = "both";  // csv | svg | both

  bool wants_csv() const { return format != "svg"; }
  bool wants_svg() const { return format != "csv"; }

  SpectrumSpec ensemble() const {
    switch (type) {
      case 1: return SpectrumSpec::type1();
      case 2: return SpectrumSpec::type2(kappa);
      case 3: return SpectrumSpec::type3(kappa);
      default: throw InvalidArgument("--type must be 1, 2 or 3");
    }
  }

  bool operator==(const RunConfig&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, version, command, preset, seed, type, kappa, epsilons, n,
                                                m, k, deltas, rhos, trials, solver, order, columns, samples, parents,
                                                seeds, resolution, sensors, nonzeros, geometry_seed, placement,
                                                export_matrix, repeats, output, format)

inline std::string to_json_string(const RunConfig& c, int indent = -1) { return nlohmann::json(c).dump(indent); }

inline RunConfig from_json_string(const std::string& text) {
  try {
    auto cfg = nlohmann::json::parse(text).get<RunConfig>();
    if (cfg.version != kConfigVersion) throw InvalidArgument("config: unsupported version " + std::to_string(cfg.version));
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

/// Sets the fields a preset defines. Presets are tied to commands.
inline void apply_preset(RunConfig& c, const std::string& name) {
  c.preset = name;
  if (name.empty()) return;
  if (name == "mini" || name == "paper") {
    if (c.command != Command::Sweep) throw InvalidArgument("preset '" + name + "' applies to sweep");
    const auto g = name == "mini" ? PhaseGridSpec::mini(0.1, SpectrumSpec::type1(), 0)
                                  : PhaseGridSpec::paper(0.1, SpectrumSpec::type1(), 0);
    c.deltas = g.delta_values;
    c.rhos = g.rho_values;
    c.n = g.n;
    c.trials = g.trials;
  } else if (name == "hadamard128") {
    if (c.command != Command::Rip) throw InvalidArgument("preset 'hadamard128' applies to rip");
    c.order = 128;
    c.columns = 12;
    c.samples = 10000;
  } else if (name == "tomo64") {
    if (c.command != Command::Tomo) throw InvalidArgument("preset 'tomo64' applies to tomo");
    c.resolution = 64;
    c.sensors = 1000;
    c.nonzeros = 60;
    c.seeds = 10;
    c.epsilons = {0.1};
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
}

inline void validate(const RunConfig& c) {
  auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (c.version != kConfigVersion) throw InvalidArgument("config: unsupported version");
  (void)c.ensemble();
  if (c.type != 1 && !(c.kappa >= 1.0)) throw InvalidArgument("--kappa must be at least 1");
  if (c.epsilons.empty()) throw InvalidArgument("--epsilon: at least one value required");
  for (double e : c.epsilons)
    if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidArgument("--epsilon values must be finite and >= 0");
  if (c.format != "csv" && c.format != "svg" && c.format != "both") throw InvalidArgument("--format must be csv, svg or both");
  if (c.output.empty()) throw InvalidArgument("--output must not be empty");
  switch (c.command) {
    case Command::Sweep:
      if (c.deltas.empty() || c.rhos.empty()) throw InvalidArgument("sweep: empty grid");
      for (double d : c.deltas)
        if (!unit(d)) throw InvalidArgument("delta values must lie in (0, 1]");
      for (double r : c.rhos)
        if (!unit(r)) throw InvalidArgument("rho values must lie in (0, 1]");
      if (c.n < 2) throw InvalidArgument("--n must be at least 2");
      if (c.trials < 1) throw InvalidArgument("--trials must be positive");
      break;
    case Command::Solve:
      if (c.n < 1 || c.m < 1 || c.m > c.n) throw InvalidArgument("solve: need 1 <= m <= n");
      if (c.k < 1 || c.k > c.n) throw InvalidArgument("solve: need 1 <= k <= n");
      if (c.solver != "path" && c.solver != "fista" && c.solver != "ridge")
        throw InvalidArgument("--solver must be path, fista or ridge");
      break;
    case Command::Rip:
      if (c.order > 0 && (c.order & (c.order - 1)) != 0) throw UnsupportedOrder("--order must be a power of 2");
      if (c.order == 0 && (c.n < 1 || c.m < 1 || c.m > c.n)) throw InvalidArgument("rip: need 1 <= m <= n");
      if (c.columns < 1 || c.columns > (c.order > 0 ? 2 * c.order : c.n))
        throw InvalidArgument("--columns out of range");
      if (c.samples < 1 || c.parents < 1) throw InvalidArgument("--samples and --parents must be positive");
      break;
    case Command::Tomo:
      if (c.resolution < 2 || (c.resolution & (c.resolution - 1)) != 0)
        throw UnsupportedSize("--resolution must be a power of 2");
      if (c.sensors < 1 || c.seeds < 1) throw InvalidArgument("--sensors and --seeds must be positive");
      if (c.nonzeros < 1 || c.nonzeros > c.resolution * c.resolution) throw InvalidArgument("--nonzeros out of range");
      if (c.placement != "uniform" && c.placement != "coarse") throw InvalidArgument("--placement must be uniform or coarse");
      if (c.placement == "coarse" && c.nonzeros > std::min(16, c.resolution) * std::min(16, c.resolution))
        throw InvalidArgument("--nonzeros exceeds the coarse block");
      if (c.epsilons.size() != 1) throw InvalidArgument("tomo takes a single --epsilon");
      break;
    case Command::Spectrum:
      if (c.n < 1 || c.m < 1 || c.m > c.n) throw InvalidArgument("spectrum: need 1 <= m <= n");
      if (c.repeats < 1) throw InvalidArgument("--repeats must be positive");
      break;
  }
}

}  // namespace sparselab::cli

// Copyright 2026 The sparselab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "run_config.hpp"
#include "sparselab/ensembles.hpp"

namespace sparselab::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string(SPARSELAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sparselab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(RunConfig, JsonRoundTrip) {
  RunConfig c;
  EXPECT_EQ(from_json_string(to_json_string(c)), c);
  c.command = Command::Tomo;
  c.seed = 0xFFFFFFFFFFFFFFFFull;
  c.kappa = 1.0 / 3.0;
  c.epsilons = {0.02, 0.1, 0.5};
  c.deltas = {0.1 + 0.2, 1.0};
  c.placement = "coarse";
  c.export_matrix = true;
  c.output = "out dir/\"quoted\"";
  const RunConfig back = from_json_string(to_json_string(c, 2));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.deltas[0], 0.1 + 0.2);
}

TEST(RunConfig, MissingFieldsTakeDefaults) {
  const RunConfig c = from_json_string(R"({"command":"rip","order":64})");
  EXPECT_EQ(c.command, Command::Rip);
  EXPECT_EQ(c.order, 64);
  EXPECT_EQ(c.columns, RunConfig{}.columns);
  EXPECT_EQ(c.version, kConfigVersion);
}

TEST(RunConfig, RejectsMalformedJson) {
  EXPECT_THROW(from_json_string("{not json"), InvalidArgument);
  EXPECT_THROW(from_json_string(R"({"version":99})"), InvalidArgument);
  EXPECT_THROW(from_json_string(R"({"command":"plot"})"), InvalidArgument);
  RunConfig c;
  c.version = 2;
  EXPECT_THROW(validate(c), InvalidArgument);
}

TEST(RunConfig, Presets) {
  RunConfig c;
  apply_preset(c, "mini");
  EXPECT_EQ(c.deltas.size(), 10u);
  EXPECT_EQ(c.n, 200);
  EXPECT_EQ(c.trials, 20);
  apply_preset(c, "paper");
  EXPECT_EQ(c.rhos.size(), 40u);
  EXPECT_EQ(c.n, 800);
  EXPECT_EQ(c.trials, 100);
  EXPECT_NEAR(c.rhos.front(), 0.025, 1e-15);

  c.command = Command::Rip;
  apply_preset(c, "hadamard128");
  EXPECT_EQ(c.order, 128);
  EXPECT_EQ(c.columns, 12);
  EXPECT_EQ(c.samples, 10000);
  EXPECT_THROW(apply_preset(c, "mini"), InvalidArgument);
  EXPECT_THROW(apply_preset(c, "nope"), InvalidArgument);

  c.command = Command::Tomo;
  apply_preset(c, "tomo64");
  EXPECT_EQ(c.resolution, 64);
  EXPECT_EQ(c.sensors, 1000);
  EXPECT_EQ(c.nonzeros, 60);
  EXPECT_NO_THROW(validate(c));
}

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(validate(c));
  auto bad = [](auto mutate) {
    RunConfig x;
    mutate(x);
    return x;
  };
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.epsilons = {-0.1}; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.epsilons = {}; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.deltas = {0.0}; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.rhos = {1.01}; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.type = 4; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) { x.format = "png"; })), InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) {
                 x.command = Command::Rip;
                 x.order = 96;
               })),
               UnsupportedOrder);
  EXPECT_THROW(validate(bad([](RunConfig& x) {
                 x.command = Command::Tomo;
                 x.resolution = 48;
               })),
               UnsupportedSize);
  EXPECT_THROW(validate(bad([](RunConfig& x) {
                 x.command = Command::Solve;
                 x.m = 300;
               })),
               InvalidArgument);
  EXPECT_THROW(validate(bad([](RunConfig& x) {
                 x.command = Command::Solve;
                 x.solver = "omp";
               })),
               InvalidArgument);
}

TEST(CliBinary, RejectsBadInvocations) {
  const fs::path out = scratch("bad");
  EXPECT_NE(run("sweep --no-such-flag"), 0);
  EXPECT_NE(run("sweep --epsilon -0.5 --output " + out.string()), 0);
  EXPECT_NE(run("sweep --deltas 0,0.5 --output " + out.string()), 0);
  EXPECT_NE(run("rip --order 100 --output " + out.string()), 0);
  EXPECT_NE(run("rip --order 16 --columns 4 --samples 10 --output /proc/sparselab_denied"), 0);
  EXPECT_NE(run(""), 0);
  EXPECT_FALSE(fs::exists(out / "config.json"));
}

TEST(CliBinary, OutputsCarryTheConfig) {
  const fs::path out = scratch("header");
  ASSERT_EQ(run("rip --order 16 --columns 4 --samples 50 --seed 3 --output " + out.string()), 0);
  const std::string csv = slurp(out / "rip.csv");
  ASSERT_EQ(csv.rfind("# sparselab config: {", 0), 0u);
  const std::string line = csv.substr(20, csv.find('\n') - 20);
  const RunConfig c = from_json_string(line);
  EXPECT_EQ(c.command, Command::Rip);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.samples, 50);
  EXPECT_NE(slurp(out / "rip.svg").find("sparselab config:"), std::string::npos);
  EXPECT_EQ(from_json_string(slurp(out / "config.json")), c);
  for (const auto& entry : fs::directory_iterator(out))
    EXPECT_EQ(entry.path().string().find(".tmp"), std::string::npos) << entry.path();
}

TEST(CliBinary, ByteIdenticalAcrossRunsAndThreadCounts) {
  const fs::path out = scratch("determinism");
  const std::string args = "sweep --deltas 0.3,0.6 --rhos 0.2,0.4 --n 60 --trials 4 --epsilon 0.05 --type 2 "
                           "--kappa 100 --seed 11 --format csv --output " + out.string();
  ASSERT_EQ(run(args + " --threads 1"), 0);
  const std::string first = slurp(out / "sweep_eps0.05.csv");
  const std::string contour = slurp(out / "sweep_eps0.05_contour.csv");
  ASSERT_EQ(run(args + " --threads 2"), 0);
  EXPECT_EQ(slurp(out / "sweep_eps0.05.csv"), first);
  EXPECT_EQ(slurp(out / "sweep_eps0.05_contour.csv"), contour);
  EXPECT_FALSE(fs::exists(out / "sweep_eps0.05.svg"));

  const std::string rip = "rip --n 80 --m 40 --columns 8 --samples 60 --parents 2 --type 3 --seed 5 --format csv "
                          "--output " + out.string();
  ASSERT_EQ(run(rip + " --threads 1"), 0);
  const std::string kappas = slurp(out / "rip_samples.csv");
  ASSERT_EQ(run(rip + " --threads 3"), 0);
  EXPECT_EQ(slurp(out / "rip_samples.csv"), kappas);
}

TEST(CliBinary, ConfigFileReplaysARun) {
  const fs::path out = scratch("replay");
  ASSERT_EQ(run("solve --n 60 --m 30 --k 3 --epsilon 0.05 --seed 2 --output " + out.string()), 0);
  const std::string sol = slurp(out / "solution.csv");
  const fs::path cfg = out.string() + ".json";
  fs::copy_file(out / "config.json", cfg, fs::copy_options::overwrite_existing);
  fs::remove_all(out);
  ASSERT_EQ(run("--config " + cfg.string()), 0);
  EXPECT_EQ(slurp(out / "solution.csv"), sol);
  // explicit flags override the file
  ASSERT_EQ(run("--config " + cfg.string() + " --seed 3"), 0);
  EXPECT_NE(slurp(out / "solution.csv"), sol);
}

// Golden mean spectrum of 400 x 800 row samples of a Type2 (kappa = 1e4)
// parent, 10 draws, seed 1; generated by
//   sparselab_cli spectrum --n 800 --m 400 --type 2 --kappa 1e4 --repeats 10 --seed 1
TEST(GoldenSpectrum, Type2RowSample) {
  std::ifstream is(std::string(SPARSELAB_TEST_DATA) + "/spectrum_type2_800x400_r10.csv");
  ASSERT_TRUE(is);
  std::vector<double> golden;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
    golden.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  }
  ASSERT_EQ(golden.size(), 400u);

  const auto spec = SpectrumSpec::type2(1e4);
  const Vector mean = mean_normalized_spectrum(800, 400, spec, 10, 1);
  ASSERT_EQ(mean.size(), 400);
  for (int i = 0; i < 400; ++i) EXPECT_NEAR(mean[i], golden[i], 1e-9 * golden[i]) << i;

  const Vector law = spectrum_law(spec, 800);
  for (int i = 1; i < 400; ++i) {
    EXPECT_LE(golden[i], golden[i - 1]);
    // interlacing under row deletion: s_i(sample) >= s_{i + n - m}(parent), and s_1(sample) <= s_1(parent)
    EXPECT_GE(golden[i], law[i + 400] / law[0]) << i;
  }
}

}  // namespace
}  // namespace sparselab::cli

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/experiments.hpp"

#include <doctest.h>

#include <filesystem>

using namespace sparsetf;

namespace {

ExperimentSpec small(const std::string& name) {
  ExperimentSpec s = default_experiment(name);
  s.trials = 40;
  if (name == "nonsparse" || name == "nonsparse2d") s.sweep = {4, 8};
  else if (s.sweep.size() > 2) s.sweep.resize(2);
  return s;
}

std::string render(const ExperimentOutput& out) {
  std::string all = io::format_json(out.summary);
  for (const auto& [name, csv] : out.files) all += name + "\n" + csv;
  return all;
}

}  // namespace

TEST_CASE("every experiment is deterministic and thread independent") {
  for (const char* name : {"variance", "pe", "snr", "nonsparse", "nonsparse2d"}) {
    CAPTURE(name);
    ExperimentSpec s = small(name);
    s.threads = 1;
    const std::string a = render(run_experiment(s));
    s.threads = 3;
    const std::string b = render(run_experiment(s));
    CHECK(a == b);
    s.seed += 1;
    CHECK(render(run_experiment(s)) != a);
  }
}

TEST_CASE("experiment specs round trip through JSON") {
  for (const char* name : {"variance", "pe", "snr", "nonsparse", "nonsparse2d"}) {
    const ExperimentSpec s = default_experiment(name);
    const ExperimentSpec t = experiment_from_json(to_json(s));
    CHECK(to_json(t).dump() == to_json(s).dump());
  }
  CHECK_THROWS_AS(default_experiment("nope"), InvalidArgument);
  CHECK_THROWS_AS(experiment_from_json(io::json{{"domain", "DFT"}}), InvalidArgument);
  io::json bad = to_json(default_experiment("pe"));
  bad["trials"] = 0;
  CHECK_THROWS_AS(experiment_from_json(bad), InvalidArgument);
  bad = to_json(default_experiment("pe"));
  bad["sweep"] = io::json::array();
  CHECK_THROWS_AS(experiment_from_json(bad), InvalidArgument);
}

TEST_CASE("variance sweep reports theory next to the estimate") {
  SparseModel m{Kind::DFT, 1, 64, rvec::Constant(2, 1.0), {3, 17}};
  m.amplitudes(1) = 0.5;
  const std::vector<VariancePoint> pts = variance_sweep(m, {16, 48}, 2000, 3, 1);
  REQUIRE(pts.size() == 2);
  for (const VariancePoint& p : pts) {
    CHECK(p.empirical_noise == doctest::Approx(p.theory_noise).epsilon(0.1));
    CHECK(p.theory_noise_exact == p.theory_noise);
    CHECK(p.empirical_component.size() == 2);
  }
}

TEST_CASE("experiment output is written to a directory") {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "sparsetf_exp_test";
  std::filesystem::remove_all(dir);
  const ExperimentOutput out = run_experiment(small("pe"));
  write_experiment(out, dir.string());
  CHECK(std::filesystem::exists(dir / "summary.json"));
  const io::json j = io::parse_json(io::read_file((dir / "summary.json").string()));
  CHECK(j["experiment"]["name"] == "pe");
  for (const auto& f : out.files) CHECK(std::filesystem::exists(dir / f.first));
  std::filesystem::remove_all(dir);
}

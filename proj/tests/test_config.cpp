#include <filesystem>

#include "doctest.h"

#include "corpus.hpp"
#include "numerovlab/config.hpp"

using namespace nlab;
namespace fs = std::filesystem;

TEST_CASE("parse a full config") {
  const char* text =
      "# experiment description\n"
      "[mesh]\n"
      "steps = 2 2 1 4 2 1 3 3 6 5 6 5 6 5 / 51\n"
      "X = 1\n"
      "K = 20\n"
      "\n"
      "[scheme]\n"
      "a = 1.5\n"
      "sigma = 1/12\n"
      "\n"
      "[time]\n"
      "tau_rule = 0.01/K\n"
      "T = 2 4\n"
      "snapshots = 1 2\n"
      "\n"
      "[output]\n"
      "dir = out/exp1\n"
      "mode = fixed-tau\n";
  const ExperimentConfig cfg = ExperimentConfig::parse(text);
  CHECK(cfg.inline_steps.has_value());
  CHECK(cfg.inline_steps->size() == 14);
  CHECK(cfg.inline_denominator == 51);
  CHECK(cfg.domain_length == Rational(1));
  CHECK(cfg.multiplicity == 20);
  CHECK(cfg.a == 1.5);
  CHECK(cfg.sigma == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  REQUIRE(cfg.tau_rule.has_value());
  CHECK_FALSE(cfg.tau_rule->is_fixed());
  CHECK(cfg.horizons == std::vector<double>{2.0, 4.0});
  CHECK(cfg.snapshot_times == std::vector<double>{1.0, 2.0});
  CHECK(cfg.out_dir == "out/exp1");
  CHECK_FALSE(cfg.fixed_steps_mode);

  CHECK(cfg.base_mesh() == testing::critical_mesh());
  CHECK(cfg.schedule().value_for(20) == doctest::Approx(0.0005).epsilon(1e-12));
}

TEST_CASE("serialize round-trips exactly") {
  ExperimentConfig cfg;
  cfg.inline_steps = std::vector<long long>{1, 2, 2, 1};
  cfg.inline_denominator = 6;
  cfg.multiplicity = 4;
  cfg.a = 2.0;
  cfg.sigma = 1.0 / 6.0;
  cfg.tau = 1e-4;
  cfg.horizons = {1.0, 2.0, 3.0};
  cfg.steps_override = 1000;
  cfg.snapshot_times = {0.5};
  cfg.out_dir = "results";
  cfg.fixed_steps_mode = true;
  CHECK(ExperimentConfig::parse(cfg.serialize()) == cfg);

  ExperimentConfig uni;
  uni.uniform_intervals = 64;
  uni.domain_length = Rational(3, 2);
  uni.tau_rule = TauRule::over_multiplicity(0.02);
  CHECK(ExperimentConfig::parse(uni.serialize()) == uni);

  ExperimentConfig from_file;
  from_file.mesh_file = "meshes/critical.txt";
  from_file.tau = 5e-4;
  CHECK(ExperimentConfig::parse(from_file.serialize()) == from_file);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[mesh]\nuniform 8\n"),
                       doctest::Contains("line 2"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("[mesh]\nwidgets = 3\n"),
                       doctest::Contains("widgets"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("uniform = 8\n"), std::invalid_argument);  // no section
  CHECK_THROWS_AS(ExperimentConfig::parse("[mesh\nuniform = 8\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[orbit]\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[mesh]\nsteps = 1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[mesh]\nuniform = eight\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[scheme]\na = fast\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse("[output]\nmode = sometimes\n"), std::invalid_argument);
}

TEST_CASE("mesh source must be unique") {
  ExperimentConfig none;
  CHECK_THROWS_AS(none.base_mesh(), std::invalid_argument);

  ExperimentConfig both;
  both.uniform_intervals = 8;
  both.mesh_file = "x.txt";
  CHECK_THROWS_AS(both.base_mesh(), std::invalid_argument);

  ExperimentConfig steps_only;
  steps_only.inline_steps = std::vector<long long>{1, 1};
  CHECK_THROWS_AS(steps_only.base_mesh(), std::invalid_argument);  // denominator missing

  ExperimentConfig uni;
  uni.uniform_intervals = 8;
  CHECK(uni.base_mesh() == Mesh::uniform(Rational(1), 8));
}

TEST_CASE("schedule requires exactly one rule") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(cfg.schedule(), std::invalid_argument);
  cfg.tau = 1e-3;
  CHECK(cfg.schedule() == TauRule::fixed(1e-3));
  cfg.tau_rule = TauRule::over_multiplicity(0.01);
  CHECK_THROWS_AS(cfg.schedule(), std::invalid_argument);
  cfg.tau.reset();
  CHECK(cfg.schedule() == TauRule::over_multiplicity(0.01));
}

TEST_CASE("config file save / load and mesh file reference") {
  const fs::path dir = fs::temp_directory_path() / "nlab_config_test";
  fs::create_directories(dir);
  const fs::path mesh_file = dir / "mesh.txt";
  testing::critical_mesh().save(mesh_file);

  ExperimentConfig cfg;
  cfg.mesh_file = mesh_file.string();
  cfg.multiplicity = 2;
  cfg.tau = 1e-3;
  cfg.horizons = {1.0};
  const fs::path cfg_file = dir / "exp.cfg";
  cfg.save(cfg_file);
  const ExperimentConfig back = ExperimentConfig::load(cfg_file);
  CHECK(back == cfg);
  CHECK(back.base_mesh() == testing::critical_mesh());

  CHECK_THROWS_AS(ExperimentConfig::load(dir / "missing.cfg"), std::invalid_argument);
  fs::remove_all(dir);
}

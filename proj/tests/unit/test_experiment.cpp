#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "idms/errors.hpp"
#include "idms/experiment.hpp"
#include "idms/matrix_io.hpp"

using namespace idms;

namespace {

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "idms_exp_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

// Desk-sized run: a few ASes, two scenarios, tiny baselines.
ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.workload.n_ases = 8;
  cfg.workload.hosts_per_as_min = 3;
  cfg.workload.hosts_per_as_max = 5;
  cfg.workload.n_isp_groups = 2;
  cfg.workload.days = 2;
  cfg.sn_ratio = 0.3;
  cfg.pdm_window_days = 1;
  cfg.baseline_seeds = 2;
  cfg.baseline_rounds = 30;
  cfg.baseline_refs = 5;
  cfg.euclid_rounds = 40;
  cfg.workload.probe_jitter_max = 1.0;  // noise-free probes
  cfg.seed = 21;
  return cfg;
}

}  // namespace

TEST_CASE("config file round trip and errors") {
  ExperimentConfig cfg = small_config();
  cfg.tiv_mode = "edge";
  std::string path = temp_path("config.txt");
  cfg.save(path);
  ExperimentConfig back = ExperimentConfig::load(path);
  CHECK(back.workload.n_ases == cfg.workload.n_ases);
  CHECK(back.sn_ratio == cfg.sn_ratio);
  CHECK(back.tiv_mode == "edge");
  CHECK(back.seed == cfg.seed);

  SUBCASE("unknown keys are named") {
    std::ofstream f(path, std::ios::app);
    f << "not_a_key = 1\n";
    f.close();
    CHECK_THROWS_WITH_AS(ExperimentConfig::load(path),
                         doctest::Contains("not_a_key"), ParseError);
  }
  SUBCASE("bad values are named") {
    std::ofstream f(path);
    f << "n_ases = banana\n";
    f.close();
    CHECK_THROWS_WITH_AS(ExperimentConfig::load(path), doctest::Contains("n_ases"),
                         ParseError);
  }
  SUBCASE("validate flags inconsistent settings") {
    ExperimentConfig bad = small_config();
    bad.pdm_window_days = 5;  // >= days
    CHECK_THROWS_AS(bad.validate(), InvariantError);
    bad = small_config();
    bad.tiv_mode = "both";
    CHECK_THROWS_AS(bad.validate(), InvariantError);
  }
}

TEST_CASE("run_experiment produces the full report directory") {
  ExperimentConfig cfg = small_config();
  cfg.out_dir = temp_path("run1");
  std::filesystem::remove_all(cfg.out_dir);
  RunSummary summary = run_experiment(cfg);

  SUBCASE("summary rows cover both scenarios and all estimators") {
    for (const char* sc : {"lcn", "mcn"}) {
      for (const char* est : {"mf", "euclid", "day1", "pdm", "udm"}) {
        CHECK(summary.find_accuracy(sc, "all", est) != nullptr);
        CHECK(summary.find_accuracy(sc, "short", est) != nullptr);
        CHECK(summary.find_tiv(sc, est, 0.0, "triple") != nullptr);
        CHECK(summary.find_tiv(sc, est, 40.0, "edge") != nullptr);
      }
    }
  }

  SUBCASE("udm column is zero in a noise-free run") {
    const AccuracyRow* udm = summary.find_accuracy("lcn", "all", "udm");
    REQUIRE(udm != nullptr);
    CHECK(udm->summary.mean == 0.0);
    CHECK(udm->summary.npred == 0.0);
    CHECK(summary.find_accuracy("mcn", "all", "udm")->summary.mean == 0.0);
  }

  SUBCASE("euclid never scores a TIV victory") {
    CHECK(summary.find_tiv("lcn", "euclid", 0.0, "triple")->victory == 0.0);
    CHECK(summary.find_tiv("mcn", "euclid", 0.0, "triple")->victory == 0.0);
  }

  SUBCASE("simulated counts match the analytic formulas") {
    REQUIRE(summary.cost.size() == 2);
    for (const auto& c : summary.cost) {
      CHECK(c.sim_construction_msgs == 2 * c.as_count * (c.as_count + 1));
      CHECK(c.sim_broadcast_msgs == 2 * c.sn_count);
      CHECK(c.broadcast_max_depth <= 3);
    }
    CHECK(summary.broadcast_census_ok);
  }

  SUBCASE("expected files exist") {
    for (const char* name :
         {"report.txt", "accuracy.csv", "tiv.csv", "cost.csv", "sim_cost.csv",
          "membership.csv", "links_lcn_pdm.csv", "links_mcn_udm.csv",
          "construction_lcn.csv", "broadcast_mcn.csv", "pdm_lcn.csv",
          "coords_lcn_mf.csv"})
      CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) / name));
  }

  SUBCASE("short-link rows only aggregate links under the cutoff") {
    const AccuracyRow* all = summary.find_accuracy("lcn", "all", "day1");
    const AccuracyRow* sh = summary.find_accuracy("lcn", "short", "day1");
    REQUIRE(all != nullptr);
    REQUIRE(sh != nullptr);
    CHECK(sh->summary.count < all->summary.count);
    CHECK(sh->summary.count > 0);
  }
}

TEST_CASE("run_experiment is byte-deterministic") {
  ExperimentConfig cfg = small_config();
  cfg.workload.probe_jitter_max = 1.1;  // exercise the stochastic paths too
  cfg.out_dir = temp_path("det_a");
  std::filesystem::remove_all(cfg.out_dir);
  run_experiment(cfg);

  ExperimentConfig cfg2 = cfg;
  cfg2.out_dir = temp_path("det_b");
  std::filesystem::remove_all(cfg2.out_dir);
  run_experiment(cfg2);

  size_t compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(cfg.out_dir)) {
    auto name = entry.path().filename();
    std::ifstream a(entry.path(), std::ios::binary);
    std::ifstream b(std::filesystem::path(cfg2.out_dir) / name, std::ios::binary);
    REQUIRE(b.good());
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("eval report") {
  DelayMatrix a({1, 2, 3}, {0, 100, 30, 100, 0, 40, 30, 40, 0});

  SUBCASE("identical matrices sit under every threshold") {
    std::string rep = eval_report(a, a);
    CHECK(rep.find("fraction_ae_below_20ms = 1.000000") != std::string::npos);
  }
  SUBCASE("label mismatch errors") {
    DelayMatrix other({1, 2, 9}, {0, 1, 1, 1, 0, 1, 1, 1, 0});
    CHECK_THROWS_AS(eval_report(a, other), LabelMismatch);
  }
}

TEST_CASE("render_report") {
  SUBCASE("missing directory errors") {
    CHECK_THROWS_AS(render_report(temp_path("nope")), ParseError);
  }
  SUBCASE("idempotent over a written report") {
    ExperimentConfig cfg = small_config();
    cfg.out_dir = temp_path("render");
    std::filesystem::remove_all(cfg.out_dir);
    run_experiment(cfg);
    std::string once = render_report(cfg.out_dir);
    CHECK(render_report(cfg.out_dir) == once);
    CHECK(once.find("idms evaluation report") != std::string::npos);
  }
}

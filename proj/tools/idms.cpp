// idms: generate synthetic delay-space workloads, run the two-tier delay
// matrix service simulation against them, and evaluate the results.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "idms/errors.hpp"
#include "idms/experiment.hpp"
#include "idms/matrix_io.hpp"
#include "idms/workload.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

idms::ExperimentConfig load_config(const std::string& path, uint64_t* seed_flag,
                                   const std::string& out_flag) {
  idms::ExperimentConfig cfg;
  if (!path.empty()) cfg = idms::ExperimentConfig::load(path);
  if (seed_flag) cfg.seed = *seed_flag;
  if (!out_flag.empty()) cfg.out_dir = out_flag;
  return cfg;
}

int cmd_generate(const idms::ExperimentConfig& cfg) {
  idms::WorkloadConfig wcfg = cfg.workload;
  wcfg.seed = cfg.seed;
  idms::Workload w = idms::generate(wcfg);
  idms::save_workload(w, cfg.out_dir);
  std::printf("wrote %zu matrices, %zu hosts, %zu congested pairs to %s\n",
              w.series.size(), w.hosts.size(), w.congested_pairs.size(),
              cfg.out_dir.c_str());
  return kExitOk;
}

int cmd_run(idms::ExperimentConfig cfg, const std::string& workload_dir) {
  if (!workload_dir.empty()) {
    auto meta = std::filesystem::path(workload_dir) / idms::meta_filename();
    if (!std::filesystem::exists(meta))
      throw idms::ParseError("missing workload: no " + meta.string());
    cfg.workload = idms::load_meta(meta.string());
    cfg.seed = cfg.workload.seed;
  }
  idms::RunSummary summary = idms::run_experiment(cfg);
  std::printf("report written to %s (%zu hosts, %zu sns, census %s)\n",
              cfg.out_dir.c_str(), summary.host_count, summary.sn_count,
              summary.broadcast_census_ok ? "ok" : "FAILED");
  return summary.broadcast_census_ok ? kExitOk : kExitRuntime;
}

int cmd_eval(const std::string& path_a, const std::string& path_b) {
  idms::DelayMatrix a = idms::load_matrix(path_a);
  idms::DelayMatrix b = idms::load_matrix(path_b);
  std::cout << idms::eval_report(a, b);
  return kExitOk;
}

int cmd_cost(const idms::CostParams& params, const std::vector<uint64_t>& ls) {
  params.validate();
  std::cout << idms::cost_table_csv(params, ls);
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  std::cout << idms::render_report(dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"internet delay matrix service simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed;

  auto* gen = app.add_subcommand("generate", "write a synthetic workload directory");
  gen->add_option("--config", config_path, "key = value config file");
  gen->add_option("--seed", seed, "override the config seed");
  gen->add_option("--out", out_dir, "output directory");

  std::string workload_dir;
  auto* run = app.add_subcommand("run", "full evaluation run; writes a report directory");
  run->add_option("--config", config_path, "key = value config file");
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "report directory");
  run->add_option("--workload", workload_dir, "existing workload directory (uses its meta)");

  std::string eval_a, eval_b;
  auto* eval = app.add_subcommand("eval", "similarity of two matrix files");
  eval->add_option("matrix_a", eval_a)->required();
  eval->add_option("matrix_b", eval_b)->required();

  idms::CostParams cost_params;
  std::vector<uint64_t> cost_ls{50, 100, 200, 555};
  auto* cost = app.add_subcommand("cost", "analytic cost table CSV");
  cost->add_option("--hosts", cost_params.host_count, "N");
  cost->add_option("--sn-ratio", cost_params.sn_ratio, "p");
  cost->add_option("--event-bytes", cost_params.event_bytes, "m");
  cost->add_option("--overhead-bytes", cost_params.overhead_bytes, "b");
  cost->add_option("--update-fraction", cost_params.update_fraction, "q");
  cost->add_option("--ases", cost_ls, "AS counts (L column)");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "render a written report directory");
  report->add_option("dir", report_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(load_config(config_path, seed ? &*seed : nullptr, out_dir));
    if (run->parsed())
      return cmd_run(load_config(config_path, seed ? &*seed : nullptr, out_dir),
                     workload_dir);
    if (eval->parsed()) return cmd_eval(eval_a, eval_b);
    if (cost->parsed()) return cmd_cost(cost_params, cost_ls);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const idms::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const idms::InvariantError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}

#pragma once

#include <map>
#include <string>
#include <vector>

#include "idms/costmodel.hpp"
#include "idms/metrics.hpp"
#include "idms/overlay.hpp"
#include "idms/protocols.hpp"
#include "idms/workload.hpp"

namespace idms {

// Whole-run configuration, loadable from a line-oriented `key = value` file.
struct ExperimentConfig {
  WorkloadConfig workload;

  uint64_t seed = 1;  // drives the workload and every stochastic component
  double sn_ratio = 0.01;
  size_t k_redundancy = 2;
  int slice_count = 0;  // 0 = ceil(sqrt(SNs per AS))

  int probe_samples = 3;
  double probe_timeout_ms = 3000.0;
  double delta_threshold_ms = 20.0;
  uint64_t event_bytes = 20;
  uint64_t overhead_bytes = 40;

  int pdm_window_days = 3;
  double c_intra_ms = 10.0;

  int baseline_dims = 10;
  int baseline_refs = 32;
  int baseline_rounds = 100;
  int baseline_seeds = 10;
  int euclid_dims = 5;
  int euclid_rounds = 256;

  double ptiv_margin_ms = 40.0;
  std::string tiv_mode = "triple";  // default counting mode; both are reported
  double short_link_cutoff_ms = 50.0;
  int lcn_hour = 5;
  int mcn_hour = 21;

  std::string out_dir = "out";

  // Throws ParseError on an unknown or malformed key (named in the message).
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
  void validate() const;
};

// One estimator's accuracy in one scenario.
struct AccuracyRow {
  std::string scenario;   // lcn | mcn
  std::string link_set;   // all | short
  std::string estimator;  // mf, euclid, day1..., pdm, udm
  MetricSummary summary;
};

struct TivRow {
  std::string scenario;
  std::string estimator;
  double margin_ms = 0;
  std::string mode;  // triple | edge
  double victory = 0;
  double failure = 0;
  size_t reference_tivs = 0;
  size_t estimate_tivs = 0;
};

struct ScenarioCost {
  std::string scenario;
  uint64_t as_count = 0;
  uint64_t sn_count = 0;
  size_t sim_construction_msgs = 0;
  uint64_t sim_construction_bytes = 0;
  size_t sim_broadcast_msgs = 0;
  uint64_t sim_push_bytes = 0;
  uint64_t sim_broadcast_bytes = 0;
  int broadcast_max_depth = 0;
};

struct RunSummary {
  std::vector<AccuracyRow> accuracy;
  std::vector<TivRow> tiv;
  std::vector<ScenarioCost> cost;
  size_t host_count = 0;
  size_t sn_count = 0;
  bool broadcast_census_ok = false;

  const AccuracyRow* find_accuracy(const std::string& scenario,
                                   const std::string& link_set,
                                   const std::string& estimator) const;
  const TivRow* find_tiv(const std::string& scenario, const std::string& estimator,
                         double margin, const std::string& mode) const;
};

// Full evaluation run: generate the workload, build the overlay, construct
// and broadcast the UDM for the least- and most-congested hours of the last
// day, build and distribute PDMs from the preceding days, fit the baselines,
// and write the report directory. Deterministic per (config, seed).
RunSummary run_experiment(const ExperimentConfig& cfg);

// Similarity report (cmd_eval): AE/RE CDFs of two matrices.
std::string eval_report(const DelayMatrix& a, const DelayMatrix& b);

// Render report.txt-style summary from a written report directory.
std::string render_report(const std::string& dir);

}  // namespace idms

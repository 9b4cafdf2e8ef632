#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "idms/asn_table.hpp"
#include "idms/delay_matrix.hpp"
#include "idms/simnet.hpp"

namespace idms {

// Synthetic multi-day delay space: TIV-rich, diurnally varying, cheap inside
// an AS, congested between ISP groups.
struct WorkloadConfig {
  int n_ases = 100;
  int hosts_per_as_min = 15;
  int hosts_per_as_max = 25;
  int n_isp_groups = 4;
  double congested_fraction = 0.35;  // of inter-group AS pairs
  double base_delay_min_ms = 20.0;
  double base_delay_max_ms = 300.0;
  double peak_factor_min = 1.6;
  double peak_factor_max = 2.6;
  double intra_as_bound_ms = 8.0;
  int days = 4;
  double day_noise_bound_ms = 10.0;
  double asymmetry_ms = 0.0;      // directional additive skew, 0 = symmetric
  double probe_jitter_max = 1.1;  // multiplicative probe jitter; 1.0 = noise-free
  uint64_t seed = 1;

  void validate() const;  // throws InvariantError naming the offending field
};

struct Workload {
  WorkloadConfig config;
  GroundTruth truth;
  MatrixSeries series;  // 24 * days matrices
  std::vector<HostInfo> hosts;
  AsnMappingTable table;
  std::vector<std::pair<Asn, Asn>> congested_pairs;
};

// Deterministic per seed. The least-congested-hour matrices are regenerated
// with fresh seed draws until they contain a TIV (and the last day's LCN and
// MCN matrices a practical TIV), erroring out when the config cannot satisfy
// that.
Workload generate(const WorkloadConfig& cfg);

// Directory layout: period_<day>_<hour>.dm series files, ground_truth.meta
// (config + congested pair list), prefix_table.txt, country_table.txt.
void save_workload(const Workload& w, const std::string& dir);
WorkloadConfig load_meta(const std::string& meta_path);

std::string meta_filename();

}  // namespace idms

#include "idms/workload.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idms/errors.hpp"
#include "idms/host_id.hpp"
#include "idms/matrix_io.hpp"
#include "idms/metrics.hpp"
#include "idms/rng.hpp"

namespace idms {

namespace {

// Normalized congestion curve: trough between 5:00 and 6:00, peaks in the
// late morning and between 21:00 and 22:00.
constexpr double kDiurnalWeight[24] = {
    0.50, 0.40, 0.30, 0.20, 0.10, 0.00, 0.10, 0.30, 0.60, 0.80, 1.00, 1.00,
    0.80, 0.70, 0.60, 0.60, 0.60, 0.70, 0.80, 0.90, 0.95, 1.00, 0.90, 0.70};

constexpr uint8_t kCountryNumber = 86;

struct Draft {
  std::vector<Asn> labels;
  std::vector<int> group;
  std::vector<double> base;
  std::vector<double> factors;
  std::vector<uint8_t> congested;
  std::vector<double> day_noise;
  std::vector<std::pair<Asn, Asn>> congested_pairs;
};

Draft draw_delay_space(const WorkloadConfig& cfg, Rng rng) {
  int n = cfg.n_ases;
  size_t nn = static_cast<size_t>(n) * n;
  Draft d;

  d.labels.resize(static_cast<size_t>(n));
  Asn asn = 4134;
  for (int i = 0; i < n; ++i) {
    d.labels[static_cast<size_t>(i)] = asn;
    asn += 3 + static_cast<Asn>(rng.below(95));
  }

  d.group.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    d.group[static_cast<size_t>(i)] = static_cast<int>(rng.below(static_cast<uint64_t>(cfg.n_isp_groups)));

  double lo = cfg.base_delay_min_ms;
  double span = cfg.base_delay_max_ms - cfg.base_delay_min_ms;
  d.base.assign(nn, 0.0);
  d.congested.assign(nn, 0);
  d.factors.assign(nn * 24, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      size_t ij = static_cast<size_t>(i) * n + j;
      size_t ji = static_cast<size_t>(j) * n + i;
      bool inter_group = d.group[static_cast<size_t>(i)] != d.group[static_cast<size_t>(j)];
      // Crossing an ISP boundary is structurally expensive; links inside a
      // group stay short, which is what creates short relay legs.
      double base = inter_group ? rng.uniform(lo + 0.5 * span, lo + span)
                                : rng.uniform(lo, lo + 0.35 * span);
      double skew = cfg.asymmetry_ms > 0 ? rng.uniform(0.0, cfg.asymmetry_ms) : 0.0;
      d.base[ij] = base;
      d.base[ji] = base + skew;

      if (inter_group && rng.chance(cfg.congested_fraction)) {
        d.congested[ij] = d.congested[ji] = 1;
        d.congested_pairs.emplace_back(d.labels[static_cast<size_t>(i)],
                                       d.labels[static_cast<size_t>(j)]);
        double peak = rng.uniform(cfg.peak_factor_min, cfg.peak_factor_max);
        for (int h = 0; h < 24; ++h) {
          double f = 1.0 + (peak - 1.0) * kDiurnalWeight[h];
          d.factors[ij * 24 + static_cast<size_t>(h)] = f;
          d.factors[ji * 24 + static_cast<size_t>(h)] = f;
        }
      }
    }
  }

  d.day_noise.assign(static_cast<size_t>(cfg.days) * 24 * nn, 0.0);
  double half = cfg.day_noise_bound_ms / 2.0;
  if (half > 0) {
    for (int day = 0; day < cfg.days; ++day) {
      for (int h = 0; h < 24; ++h) {
        size_t off = (static_cast<size_t>(day) * 24 + static_cast<size_t>(h)) * nn;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            double noise = rng.uniform(-half, half);
            d.day_noise[off + static_cast<size_t>(i) * n + j] = noise;
            d.day_noise[off + static_cast<size_t>(j) * n + i] =
                cfg.asymmetry_ms > 0 ? rng.uniform(-half, half) : noise;
          }
        }
      }
    }
  }
  return d;
}

}  // namespace

void WorkloadConfig::validate() const {
  auto bad = [](const std::string& field) -> InvariantError {
    return InvariantError("invalid workload config: " + field);
  };
  if (n_ases < 2) throw bad("n_ases");
  if (hosts_per_as_min < 1 || hosts_per_as_max < hosts_per_as_min ||
      hosts_per_as_max > 250)
    throw bad("hosts_per_as");
  if (n_isp_groups < 1) throw bad("n_isp_groups");
  if (congested_fraction < 0 || congested_fraction > 1) throw bad("congested_fraction");
  if (base_delay_min_ms <= 0 || base_delay_max_ms < base_delay_min_ms)
    throw bad("base_delay range");
  if (peak_factor_min < 1 || peak_factor_max < peak_factor_min) throw bad("peak_factor range");
  if (intra_as_bound_ms <= 0 || intra_as_bound_ms >= base_delay_min_ms)
    throw bad("intra_as_bound_ms (must be positive and below base_delay_min_ms)");
  if (days < 1) throw bad("days");
  if (day_noise_bound_ms < 0) throw bad("day_noise_bound_ms");
  if (asymmetry_ms < 0) throw bad("asymmetry_ms");
  if (probe_jitter_max < 1.0) throw bad("probe_jitter_max");
  if (n_ases > 4000) throw bad("n_ases (too large for simulation)");
}

Workload generate(const WorkloadConfig& cfg) {
  cfg.validate();
  if (cfg.n_ases < 3)
    throw InvariantError(
        "unsatisfiable workload config: a TIV needs at least 3 ASes");

  Rng seed_stream(cfg.seed);
  const int kMaxAttempts = 25;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = seed_stream.fork(static_cast<uint64_t>(attempt) + 17);
    Draft d = draw_delay_space(cfg, rng.fork(1));

    GroundTruth truth(d.labels, d.base, d.factors, d.congested, cfg.days,
                      d.day_noise, cfg.intra_as_bound_ms);
    truth.set_jitter(1.0, cfg.probe_jitter_max);

    // Property checks: an original TIV in every day's least-congested-hour
    // matrix, and practical TIVs in the last day's LCN and MCN matrices.
    bool ok = true;
    for (int day = 0; day < cfg.days && ok; ++day)
      ok = has_tiv(truth.matrix_at(PeriodIndex{day, 5}), 0.0);
    ok = ok && has_tiv(truth.matrix_at(PeriodIndex{cfg.days - 1, 5}), 40.0);
    ok = ok && has_tiv(truth.matrix_at(PeriodIndex{cfg.days - 1, 21}), 40.0);
    if (!ok) continue;

    Workload w;
    w.config = cfg;
    w.truth = std::move(truth);
    w.congested_pairs = std::move(d.congested_pairs);

    for (int day = 0; day < cfg.days; ++day)
      for (int h = 0; h < 24; ++h)
        w.series.append(w.truth.matrix_at(PeriodIndex{day, h}));

    Rng host_rng = rng.fork(2);
    int span = cfg.hosts_per_as_max - cfg.hosts_per_as_min + 1;
    for (int i = 0; i < cfg.n_ases; ++i) {
      Asn asn = d.labels[static_cast<size_t>(i)];
      int a = i / 256, b = i % 256;
      w.table.add_prefix(make_ip(10, a, b, 0), 24, asn);
      w.table.set_cn(asn, kCountryNumber);

      int count = cfg.hosts_per_as_min + static_cast<int>(host_rng.below(static_cast<uint64_t>(span)));
      for (int h = 0; h < count; ++h) {
        HostInfo host;
        host.ip = make_ip(10, a, b, h + 1);
        host.asn = asn;
        host.as_index = i;
        host.cn = kCountryNumber;
        host.id = make_host_id(host.ip, asn, kCountryNumber);
        // Two access delays always sum below the intra-AS bound.
        host.access_ms = host_rng.uniform(0.05 * cfg.intra_as_bound_ms,
                                          0.48 * cfg.intra_as_bound_ms);
        host.capacity = host_rng.uniform(0.0, 1.0);
        w.hosts.push_back(host);
      }
    }
    return w;
  }
  throw InvariantError(
      "unsatisfiable workload config: no TIV-rich delay space found after " +
      std::to_string(kMaxAttempts) + " attempts");
}

std::string meta_filename() { return "ground_truth.meta"; }

void save_workload(const Workload& w, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_series(w.series, dir);
  auto path = [&](const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
  };
  w.table.save(path("prefix_table.txt"), path("country_table.txt"));

  std::ofstream meta(path(meta_filename()));
  if (!meta) throw ParseError("cannot write " + path(meta_filename()));
  const WorkloadConfig& c = w.config;
  meta << "n_ases = " << c.n_ases << "\n";
  meta << "hosts_per_as_min = " << c.hosts_per_as_min << "\n";
  meta << "hosts_per_as_max = " << c.hosts_per_as_max << "\n";
  meta << "n_isp_groups = " << c.n_isp_groups << "\n";
  meta << "congested_fraction = " << c.congested_fraction << "\n";
  meta << "base_delay_min_ms = " << c.base_delay_min_ms << "\n";
  meta << "base_delay_max_ms = " << c.base_delay_max_ms << "\n";
  meta << "peak_factor_min = " << c.peak_factor_min << "\n";
  meta << "peak_factor_max = " << c.peak_factor_max << "\n";
  meta << "intra_as_bound_ms = " << c.intra_as_bound_ms << "\n";
  meta << "days = " << c.days << "\n";
  meta << "day_noise_bound_ms = " << c.day_noise_bound_ms << "\n";
  meta << "asymmetry_ms = " << c.asymmetry_ms << "\n";
  meta << "probe_jitter_max = " << c.probe_jitter_max << "\n";
  meta << "seed = " << c.seed << "\n";
  for (const auto& [a, b] : w.congested_pairs)
    meta << "congested_pair = " << a << " " << b << "\n";
}

WorkloadConfig load_meta(const std::string& meta_path) {
  std::ifstream f(meta_path);
  if (!f) throw ParseError("cannot open " + meta_path);
  WorkloadConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(meta_path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "congested_pair") continue;  // derived, regenerated
    try {
      if (key == "n_ases") cfg.n_ases = std::stoi(value);
      else if (key == "hosts_per_as_min") cfg.hosts_per_as_min = std::stoi(value);
      else if (key == "hosts_per_as_max") cfg.hosts_per_as_max = std::stoi(value);
      else if (key == "n_isp_groups") cfg.n_isp_groups = std::stoi(value);
      else if (key == "congested_fraction") cfg.congested_fraction = std::stod(value);
      else if (key == "base_delay_min_ms") cfg.base_delay_min_ms = std::stod(value);
      else if (key == "base_delay_max_ms") cfg.base_delay_max_ms = std::stod(value);
      else if (key == "peak_factor_min") cfg.peak_factor_min = std::stod(value);
      else if (key == "peak_factor_max") cfg.peak_factor_max = std::stod(value);
      else if (key == "intra_as_bound_ms") cfg.intra_as_bound_ms = std::stod(value);
      else if (key == "days") cfg.days = std::stoi(value);
      else if (key == "day_noise_bound_ms") cfg.day_noise_bound_ms = std::stod(value);
      else if (key == "asymmetry_ms") cfg.asymmetry_ms = std::stod(value);
      else if (key == "probe_jitter_max") cfg.probe_jitter_max = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else throw ParseError(meta_path + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(meta_path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

}  // namespace idms

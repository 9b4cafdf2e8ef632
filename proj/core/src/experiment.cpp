#include "idms/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "idms/baseline.hpp"
#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"

namespace idms {

namespace {

std::string fmt(double v, int prec = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  auto path = std::filesystem::path(dir) / name;
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path.string());
  f << content;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

}  // namespace

void ExperimentConfig::validate() const {
  workload.validate();
  if (sn_ratio <= 0 || sn_ratio > 1)
    throw InvariantError("invalid config: sn_ratio");
  if (k_redundancy < 1) throw InvariantError("invalid config: k_redundancy");
  if (probe_samples < 1) throw InvariantError("invalid config: probe_samples");
  if (pdm_window_days < 1 || pdm_window_days >= workload.days)
    throw InvariantError("invalid config: pdm_window_days (need days > window)");
  if (baseline_dims < 1 || baseline_refs < 1 || baseline_seeds < 1)
    throw InvariantError("invalid config: baseline parameters");
  if (euclid_dims < 1 || euclid_rounds < 1)
    throw InvariantError("invalid config: euclid parameters");
  if (tiv_mode != "triple" && tiv_mode != "edge")
    throw InvariantError("invalid config: tiv_mode must be triple or edge");
  if (lcn_hour < 0 || lcn_hour >= 24 || mcn_hour < 0 || mcn_hour >= 24 ||
      lcn_hour >= mcn_hour)
    throw InvariantError("invalid config: scenario hours");
  if (short_link_cutoff_ms <= 0)
    throw InvariantError("invalid config: short_link_cutoff_ms");
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open config " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    auto& w = cfg.workload;
    try {
      if (key == "n_ases") w.n_ases = std::stoi(value);
      else if (key == "hosts_per_as_min") w.hosts_per_as_min = std::stoi(value);
      else if (key == "hosts_per_as_max") w.hosts_per_as_max = std::stoi(value);
      else if (key == "n_isp_groups") w.n_isp_groups = std::stoi(value);
      else if (key == "congested_fraction") w.congested_fraction = std::stod(value);
      else if (key == "base_delay_min_ms") w.base_delay_min_ms = std::stod(value);
      else if (key == "base_delay_max_ms") w.base_delay_max_ms = std::stod(value);
      else if (key == "peak_factor_min") w.peak_factor_min = std::stod(value);
      else if (key == "peak_factor_max") w.peak_factor_max = std::stod(value);
      else if (key == "intra_as_bound_ms") w.intra_as_bound_ms = std::stod(value);
      else if (key == "days") w.days = std::stoi(value);
      else if (key == "day_noise_bound_ms") w.day_noise_bound_ms = std::stod(value);
      else if (key == "asymmetry_ms") w.asymmetry_ms = std::stod(value);
      else if (key == "probe_jitter_max") w.probe_jitter_max = std::stod(value);
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "sn_ratio") cfg.sn_ratio = std::stod(value);
      else if (key == "k_redundancy") cfg.k_redundancy = static_cast<size_t>(std::stoul(value));
      else if (key == "slice_count") cfg.slice_count = std::stoi(value);
      else if (key == "probe_samples") cfg.probe_samples = std::stoi(value);
      else if (key == "probe_timeout_ms") cfg.probe_timeout_ms = std::stod(value);
      else if (key == "delta_threshold_ms") cfg.delta_threshold_ms = std::stod(value);
      else if (key == "event_bytes") cfg.event_bytes = std::stoull(value);
      else if (key == "overhead_bytes") cfg.overhead_bytes = std::stoull(value);
      else if (key == "pdm_window_days") cfg.pdm_window_days = std::stoi(value);
      else if (key == "c_intra_ms") cfg.c_intra_ms = std::stod(value);
      else if (key == "baseline_dims") cfg.baseline_dims = std::stoi(value);
      else if (key == "baseline_refs") cfg.baseline_refs = std::stoi(value);
      else if (key == "baseline_rounds") cfg.baseline_rounds = std::stoi(value);
      else if (key == "baseline_seeds") cfg.baseline_seeds = std::stoi(value);
      else if (key == "euclid_dims") cfg.euclid_dims = std::stoi(value);
      else if (key == "euclid_rounds") cfg.euclid_rounds = std::stoi(value);
      else if (key == "ptiv_margin_ms") cfg.ptiv_margin_ms = std::stod(value);
      else if (key == "tiv_mode") cfg.tiv_mode = value;
      else if (key == "short_link_cutoff_ms") cfg.short_link_cutoff_ms = std::stod(value);
      else if (key == "lcn_hour") cfg.lcn_hour = std::stoi(value);
      else if (key == "mcn_hour") cfg.mcn_hour = std::stoi(value);
      else if (key == "out_dir") cfg.out_dir = value;
      else throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
  }
  return cfg;
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write config " + path);
  f << "n_ases = " << workload.n_ases << "\n"
    << "hosts_per_as_min = " << workload.hosts_per_as_min << "\n"
    << "hosts_per_as_max = " << workload.hosts_per_as_max << "\n"
    << "n_isp_groups = " << workload.n_isp_groups << "\n"
    << "congested_fraction = " << workload.congested_fraction << "\n"
    << "base_delay_min_ms = " << workload.base_delay_min_ms << "\n"
    << "base_delay_max_ms = " << workload.base_delay_max_ms << "\n"
    << "peak_factor_min = " << workload.peak_factor_min << "\n"
    << "peak_factor_max = " << workload.peak_factor_max << "\n"
    << "intra_as_bound_ms = " << workload.intra_as_bound_ms << "\n"
    << "days = " << workload.days << "\n"
    << "day_noise_bound_ms = " << workload.day_noise_bound_ms << "\n"
    << "asymmetry_ms = " << workload.asymmetry_ms << "\n"
    << "probe_jitter_max = " << workload.probe_jitter_max << "\n"
    << "seed = " << seed << "\n"
    << "sn_ratio = " << sn_ratio << "\n"
    << "k_redundancy = " << k_redundancy << "\n"
    << "slice_count = " << slice_count << "\n"
    << "probe_samples = " << probe_samples << "\n"
    << "probe_timeout_ms = " << probe_timeout_ms << "\n"
    << "delta_threshold_ms = " << delta_threshold_ms << "\n"
    << "event_bytes = " << event_bytes << "\n"
    << "overhead_bytes = " << overhead_bytes << "\n"
    << "pdm_window_days = " << pdm_window_days << "\n"
    << "c_intra_ms = " << c_intra_ms << "\n"
    << "baseline_dims = " << baseline_dims << "\n"
    << "baseline_refs = " << baseline_refs << "\n"
    << "baseline_rounds = " << baseline_rounds << "\n"
    << "baseline_seeds = " << baseline_seeds << "\n"
    << "euclid_dims = " << euclid_dims << "\n"
    << "euclid_rounds = " << euclid_rounds << "\n"
    << "ptiv_margin_ms = " << ptiv_margin_ms << "\n"
    << "tiv_mode = " << tiv_mode << "\n"
    << "short_link_cutoff_ms = " << short_link_cutoff_ms << "\n"
    << "lcn_hour = " << lcn_hour << "\n"
    << "mcn_hour = " << mcn_hour << "\n"
    << "out_dir = " << out_dir << "\n";
}

const AccuracyRow* RunSummary::find_accuracy(const std::string& scenario,
                                             const std::string& link_set,
                                             const std::string& estimator) const {
  for (const auto& r : accuracy)
    if (r.scenario == scenario && r.link_set == link_set && r.estimator == estimator)
      return &r;
  return nullptr;
}

const TivRow* RunSummary::find_tiv(const std::string& scenario,
                                   const std::string& estimator, double margin,
                                   const std::string& mode) const {
  for (const auto& r : tiv)
    if (r.scenario == scenario && r.estimator == estimator && r.margin_ms == margin &&
        r.mode == mode)
      return &r;
  return nullptr;
}

namespace {

MetricSummary average_summaries(const std::vector<MetricSummary>& xs) {
  MetricSummary out;
  for (const auto& s : xs) {
    out.mean += s.mean;
    out.median += s.median;
    out.npred += s.npred;
    out.count += s.count;
  }
  double k = static_cast<double>(xs.size());
  out.mean /= k;
  out.median /= k;
  out.npred /= k;
  out.count = xs.empty() ? 0 : out.count / xs.size();
  return out;
}

MetricSummary summarize_links(const LinkErrorSet& links, double cutoff_ms,
                              bool short_only) {
  std::vector<double> res;
  for (const auto& l : links.links)
    if (!short_only || l.measured < cutoff_ms) res.push_back(l.re);
  if (res.empty()) return MetricSummary{};
  return summarize(std::move(res));
}

std::string links_csv(const LinkErrorSet& set) {
  std::ostringstream out;
  out << "src_asn,dst_asn,measured_ms,predicted_ms,ae_ms,re\n";
  for (const auto& l : set.links)
    out << l.src << "," << l.dst << "," << fmt(l.measured) << "," << fmt(l.predicted)
        << "," << fmt(l.ae) << "," << fmt(l.re) << "\n";
  out << "# summary,count=" << set.links.size()
      << ",excluded_missing=" << set.excluded_missing
      << ",excluded_zero=" << set.excluded_zero << "\n";
  return out.str();
}

struct EstimatorOutput {
  std::string name;
  std::vector<DelayMatrix> matrices;  // one per seed for the fitted baselines
};

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);

  WorkloadConfig wcfg = cfg.workload;
  wcfg.seed = cfg.seed;
  Workload wl = generate(wcfg);

  SimNet net(wl.truth, cfg.seed ^ 0x5117ab1ebeef1234ull);
  HostInfo boot;
  boot.ip = make_ip(172, 16, 0, 1);
  boot.asn = 0;
  boot.as_index = -1;
  boot.cn = 0;
  boot.access_ms = 0.5;
  boot.id = make_host_id(boot.ip, 0, 0);
  net.register_host(boot);
  for (const HostInfo& h : wl.hosts) net.register_host(h);

  Overlay overlay(wl.table, Overlay::Config{cfg.k_redundancy, cfg.slice_count});
  overlay.add_bootstrap(boot.ip);
  net.set_failure_detected([&overlay](const HostId& id, double) {
    const NodeState* node = overlay.find(id);
    if (!node) return;
    if (node->role == Role::Supernode)
      overlay.handle_sn_failure(id);
    else if (node->role == Role::Ordinary)
      overlay.handle_on_failure(id);
  });

  // Capacity election stub: the top sn_ratio share of each AS by capacity.
  std::map<Asn, std::vector<const HostInfo*>> by_as;
  for (const HostInfo& h : wl.hosts) by_as[h.asn].push_back(&h);
  std::set<HostId> designated;
  for (auto& [asn, hosts] : by_as) {
    std::sort(hosts.begin(), hosts.end(), [](const HostInfo* a, const HostInfo* b) {
      if (a->capacity != b->capacity) return a->capacity > b->capacity;
      return a->id < b->id;
    });
    size_t want = static_cast<size_t>(
        std::ceil(cfg.sn_ratio * static_cast<double>(hosts.size())));
    want = std::max<size_t>(1, std::min(want, hosts.size()));
    for (size_t i = 0; i < want; ++i) {
      overlay.designate_sn(hosts[i]->id);
      designated.insert(hosts[i]->id);
    }
  }
  // SNs join first so no AS promotes an undesignated host.
  for (const HostInfo& h : wl.hosts)
    if (designated.count(h.id)) overlay.join(h.ip);
  for (const HostInfo& h : wl.hosts)
    if (!designated.count(h.id)) overlay.join(h.ip);

  WireParams wire{cfg.event_bytes, cfg.overhead_bytes};
  int udm_day = wcfg.days - 1;
  int window_first = std::max(0, udm_day - cfg.pdm_window_days);

  RunSummary summary;
  summary.host_count = wl.hosts.size();
  summary.sn_count = overlay.sn_count();
  summary.broadcast_census_ok = true;

  std::map<std::string, std::string> files;
  files["membership.csv"] = overlay.membership_csv();

  struct Scenario {
    std::string name;
    int hour;
  };
  for (const Scenario& sc : {Scenario{"lcn", cfg.lcn_hour}, Scenario{"mcn", cfg.mcn_hour}}) {
    PeriodIndex period{udm_day, sc.hour};
    net.run_until(SimNet::period_start_ms(period));

    ConstructionParams cons_params{wire, cfg.probe_samples, cfg.probe_timeout_ms};
    ConstructionResult cons = run_udm_construction(net, overlay, period, cons_params);

    BroadcastParams bc_params;
    bc_params.wire = wire;
    bc_params.delta_threshold_ms = cfg.delta_threshold_ms;
    BroadcastResult bc = run_udm_broadcast(net, overlay, cons.udm, nullptr, bc_params);

    for (Asn asn : overlay.ases_with_sns())
      for (const HostId& sn : overlay.sns_in(asn)) {
        const NodeState* node = overlay.find(sn);
        if (!node->udm || node->udm->period() != period)
          summary.broadcast_census_ok = false;
      }

    // PDM from the same hour of the preceding window days.
    MatrixSeries window;
    for (int day = window_first; day < udm_day; ++day) {
      const DelayMatrix* m = wl.series.find(PeriodIndex{day, sc.hour});
      if (m) window.append(*m);
    }
    Pdm pdm = build_pdm(window, sc.hour);
    ProtocolLog pdm_log;
    for (Asn asn : overlay.ases_with_sns())
      for (const HostId& sn : overlay.sns_in(asn))
        pdm_log.append(run_pdm_distribution(net, overlay, sn, pdm, wire));

    // Reference = the measured delay space of the UDM period.
    DelayMatrix reference = wl.truth.matrix_at(period);

    std::vector<EstimatorOutput> estimators;
    estimators.push_back({"mf", {}});
    for (int s = 0; s < cfg.baseline_seeds; ++s) {
      MfParams mp;
      mp.dims = cfg.baseline_dims;
      mp.n_refs = std::min(cfg.baseline_refs, reference.size() - 1);
      mp.rounds = cfg.baseline_rounds;
      MfFit fit = mf_fit(reference, mp, cfg.seed + static_cast<uint64_t>(s));
      estimators.back().matrices.push_back(
          predicted_matrix(fit.coords, reference.labels()));
      if (s == 0)
        files["coords_" + sc.name + "_mf.csv"] =
            coords_csv(reference.labels(), fit.coords);
    }
    estimators.push_back({"euclid", {}});
    for (int s = 0; s < cfg.baseline_seeds; ++s) {
      EuclidParams ep{cfg.euclid_dims, cfg.euclid_rounds};
      EuclidFit fit = euclid_fit(reference, ep, cfg.seed + static_cast<uint64_t>(s));
      estimators.back().matrices.push_back(
          predicted_matrix(fit.coords, reference.labels()));
      if (s == 0)
        files["coords_" + sc.name + "_euclid.csv"] =
            coords_csv(reference.labels(), fit.coords);
    }
    for (int day = window_first; day < udm_day; ++day) {
      const DelayMatrix* m = wl.series.find(PeriodIndex{day, sc.hour});
      if (m) estimators.push_back({"day" + std::to_string(day + 1), {*m}});
    }
    estimators.push_back({"pdm", {pdm.matrix}});
    estimators.push_back({"udm", {cons.udm}});

    for (const EstimatorOutput& est : estimators) {
      std::vector<MetricSummary> alls, shorts;
      for (const DelayMatrix& m : est.matrices) {
        LinkErrorSet links = link_errors(reference, m);
        alls.push_back(summarize_links(links, cfg.short_link_cutoff_ms, false));
        shorts.push_back(summarize_links(links, cfg.short_link_cutoff_ms, true));
      }
      summary.accuracy.push_back(
          AccuracyRow{sc.name, "all", est.name, average_summaries(alls)});
      summary.accuracy.push_back(
          AccuracyRow{sc.name, "short", est.name, average_summaries(shorts)});
      if (est.matrices.size() == 1)
        files["links_" + sc.name + "_" + est.name + ".csv"] =
            links_csv(link_errors(reference, est.matrices.front()));
    }

    for (double margin : {0.0, cfg.ptiv_margin_ms}) {
      for (const char* mode_name : {"triple", "edge"}) {
        TivMode mode = std::string(mode_name) == "edge" ? TivMode::PerEdge
                                                        : TivMode::PerTriple;
        for (const EstimatorOutput& est : estimators) {
          double v = 0, f = 0, est_tivs = 0;
          size_t ref_tivs = 0;
          for (const DelayMatrix& m : est.matrices) {
            TivAccuracy acc = tiv_accuracy(reference, m, margin, mode);
            v += acc.victory;
            f += acc.failure;
            est_tivs += static_cast<double>(acc.estimate_tivs);
            ref_tivs = acc.reference_tivs;
          }
          double k = static_cast<double>(est.matrices.size());
          summary.tiv.push_back(TivRow{sc.name, est.name, margin, mode_name,
                                       v / k, f / k, ref_tivs,
                                       static_cast<size_t>(est_tivs / k)});
        }
      }
    }

    ScenarioCost cost;
    cost.scenario = sc.name;
    cost.as_count = static_cast<uint64_t>(reference.size());
    cost.sn_count = overlay.sn_count();
    cost.sim_construction_msgs = cons.log.total_messages();
    cost.sim_construction_bytes = cons.log.total_bytes();
    cost.sim_broadcast_msgs = bc.log.total_messages();
    cost.sim_push_bytes = bc.push_bytes;
    cost.sim_broadcast_bytes = bc.log.total_bytes();
    cost.broadcast_max_depth = bc.max_depth;
    summary.cost.push_back(cost);

    files["construction_" + sc.name + ".csv"] = cons.log.csv();
    files["broadcast_" + sc.name + ".csv"] = bc.log.csv();
    files["pdm_" + sc.name + ".csv"] = pdm_log.csv();
  }

  // CSV tables.
  {
    std::ostringstream acc;
    acc << "scenario,link_set,estimator,npred,mean,median,count\n";
    for (const auto& r : summary.accuracy)
      acc << r.scenario << "," << r.link_set << "," << r.estimator << ","
          << fmt(r.summary.npred) << "," << fmt(r.summary.mean) << ","
          << fmt(r.summary.median) << "," << r.summary.count << "\n";
    files["accuracy.csv"] = acc.str();

    std::ostringstream tiv;
    tiv << "scenario,margin_ms,mode,estimator,tiv_v,tiv_f,reference_tivs,estimate_tivs\n";
    for (const auto& r : summary.tiv)
      tiv << r.scenario << "," << fmt(r.margin_ms, 1) << "," << r.mode << ","
          << r.estimator << "," << fmt(r.victory) << "," << fmt(r.failure) << ","
          << r.reference_tivs << "," << r.estimate_tivs << "\n";
    files["tiv.csv"] = tiv.str();

    std::ostringstream sim;
    sim << "scenario,L,sns,construction_msgs,construction_msgs_formula,"
           "construction_bytes,construction_bytes_formula,broadcast_msgs,"
           "broadcast_msgs_formula,push_bytes,push_bytes_formula,max_depth\n";
    for (const auto& c : summary.cost) {
      uint64_t z = matrix_payload_bytes(c.as_count);
      double push_formula =
          static_cast<double>(c.sn_count) *
          (static_cast<double>(cfg.event_bytes + cfg.overhead_bytes) +
           static_cast<double>(z));  // full pushes: q = 1
      sim << c.scenario << "," << c.as_count << "," << c.sn_count << ","
          << c.sim_construction_msgs << "," << construction_messages(c.as_count)
          << "," << c.sim_construction_bytes << ","
          << construction_bytes(c.as_count, cfg.event_bytes, cfg.overhead_bytes)
          << "," << c.sim_broadcast_msgs << "," << 2 * c.sn_count << ","
          << c.sim_push_bytes << "," << fmt(push_formula, 0) << ","
          << c.broadcast_max_depth << "\n";
    }
    files["sim_cost.csv"] = sim.str();

    CostParams base;
    base.event_bytes = cfg.event_bytes;
    base.overhead_bytes = cfg.overhead_bytes;
    files["cost.csv"] = cost_table_csv(base, {50, 100, 200, 555});
  }

  // Human-readable report.
  {
    std::ostringstream rep;
    rep << "idms evaluation report\n";
    rep << "======================\n\n";
    rep << "run parameters\n";
    rep << "  seed = " << cfg.seed << "\n";
    rep << "  ases = " << wcfg.n_ases << ", hosts = " << summary.host_count
        << ", sns = " << summary.sn_count << ", k = " << cfg.k_redundancy << "\n";
    rep << "  udm day = " << (udm_day + 1) << " (index " << udm_day
        << "), pdm window = days " << (window_first + 1) << ".." << udm_day
        << "\n";
    rep << "  lcn hour = " << cfg.lcn_hour << ", mcn hour = " << cfg.mcn_hour
        << "\n";
    rep << "  probe jitter = [1, " << fmt(wcfg.probe_jitter_max, 3)
        << "], samples = " << cfg.probe_samples << "\n";
    rep << "  broadcast census ok = " << (summary.broadcast_census_ok ? "yes" : "no")
        << "\n\n";

    rep << "relative error vs measured delay space (per scenario)\n";
    rep << "  scenario link_set estimator npred mean median count\n";
    for (const auto& r : summary.accuracy)
      rep << "  " << r.scenario << " " << r.link_set << " " << r.estimator << " "
          << fmt(r.summary.npred, 4) << " " << fmt(r.summary.mean, 4) << " "
          << fmt(r.summary.median, 4) << " " << r.summary.count << "\n";
    rep << "\n";

    rep << "tiv accuracy (margin 0 = OTIV, margin " << fmt(cfg.ptiv_margin_ms, 0)
        << " = PTIV; default counting mode = " << cfg.tiv_mode << ")\n";
    rep << "  scenario margin mode estimator tiv_v tiv_f ref_tivs est_tivs\n";
    for (const auto& r : summary.tiv)
      rep << "  " << r.scenario << " " << fmt(r.margin_ms, 0) << " " << r.mode
          << " " << r.estimator << " " << fmt(r.victory, 4) << " "
          << fmt(r.failure, 4) << " " << r.reference_tivs << " " << r.estimate_tivs
          << "\n";
    rep << "\n";

    rep << "simulated protocol cost vs analytic formulas\n";
    for (const auto& c : summary.cost) {
      rep << "  " << c.scenario << ": construction " << c.sim_construction_msgs
          << " msgs (formula " << construction_messages(c.as_count) << "), "
          << c.sim_construction_bytes << " bytes (formula "
          << construction_bytes(c.as_count, cfg.event_bytes, cfg.overhead_bytes)
          << ")\n";
      rep << "       broadcast " << c.sim_broadcast_msgs << " msgs (formula "
          << 2 * c.sn_count << "), push bytes " << c.sim_push_bytes
          << ", depth " << c.broadcast_max_depth << " (max 3)\n";
    }
    rep << "  note: broadcast ack receipts add " << cfg.overhead_bytes
        << " bytes each on the wire; the analytic broadcast size bills pushes"
           " only.\n\n";

    rep << "analytic cost (N = 10000, p = 0.01, m = " << cfg.event_bytes
        << ", b = " << cfg.overhead_bytes << ", q = 0.1, z = 2L^2)\n";
    rep << "  L idms_msgs phoenix_msgs\n";
    for (uint64_t L : {50ull, 100ull, 200ull, 555ull})
      rep << "  " << L << " " << construction_messages(L) + broadcast_messages(10000, 0.01)
          << " " << phoenix_messages(10000) << "\n";
    rep << "\n";

    rep << "storage\n";
    rep << "  one 555x555 matrix: " << matrix_payload_bytes(555)
        << " payload bytes (2 bytes/entry; the file header adds "
        << (matrix_file_bytes(555) - matrix_payload_bytes(555)) << " bytes)\n";
    rep << "  24 hourly matrices: " << 24 * matrix_payload_bytes(555)
        << " payload bytes per day\n";
    rep << "  note: ballpark figures of \"about 500 KB\" per matrix and \"about"
           " 12MB\" per day circulate for this design; exact arithmetic gives "
        << matrix_payload_bytes(555) << " and " << 24 * matrix_payload_bytes(555)
        << " bytes. The exact values are reported; the ballparks are"
           " approximations and are not reconciled here.\n";

    files["report.txt"] = rep.str();
  }

  for (const auto& [name, content] : files) write_file(cfg.out_dir, name, content);
  return summary;
}

std::string eval_report(const DelayMatrix& a, const DelayMatrix& b) {
  SimilarityReport rep = matrix_similarity(a, b);
  std::ostringstream out;
  out << "matrix similarity over " << rep.links << " common links ("
      << rep.excluded_missing << " missing excluded, " << rep.excluded_zero
      << " zero-measured excluded from RE)\n";
  out << "ae_threshold_ms,fraction_below\n";
  for (double t : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0})
    out << fmt(t, 1) << "," << fmt(rep.fraction_ae_below(t)) << "\n";
  out << "re_threshold,fraction_below\n";
  for (double t : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0})
    out << fmt(t, 2) << "," << fmt(rep.fraction_re_below(t)) << "\n";
  if (!rep.ae.empty()) {
    MetricSummary ae = summarize(rep.ae);
    out << "ae_summary,mean=" << fmt(ae.mean) << ",median=" << fmt(ae.median)
        << ",p90=" << fmt(ae.npred) << "\n";
  }
  if (!rep.re.empty()) {
    MetricSummary re = summarize(rep.re);
    out << "re_summary,mean=" << fmt(re.mean) << ",median=" << fmt(re.median)
        << ",p90=" << fmt(re.npred) << "\n";
  }
  out << "fraction_ae_below_20ms = " << fmt(rep.fraction_ae_below(20.0)) << "\n";
  return out.str();
}

std::string render_report(const std::string& dir) {
  auto path = std::filesystem::path(dir) / "report.txt";
  std::ifstream f(path);
  if (!f) throw ParseError("no report.txt under " + dir);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace idms

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "idms/delay_matrix.hpp"
#include "idms/host_id.hpp"
#include "idms/message.hpp"
#include "idms/rng.hpp"

namespace idms {

// A registered simulated host. access_ms is the host's share of intra-AS
// path delay; capacity feeds the supernode designation policy.
struct HostInfo {
  HostId id;
  Ipv4 ip;
  Asn asn = 0;
  int as_index = -1;
  uint8_t cn = 0;
  double access_ms = 1.0;
  double capacity = 0.0;
};

// RTT between a bootstrap (outside the AS matrix) and any host.
inline constexpr double kBackboneRttMs = 40.0;

// Time-varying delay model: per-link base RTT, 24 multiplicative diurnal
// factors (all >= 1, trough factor exactly 1), bounded per-day noise, and
// small intra-AS delays derived from host access delays.
class GroundTruth {
 public:
  GroundTruth() = default;
  GroundTruth(std::vector<Asn> labels, std::vector<double> base,
              std::vector<double> factors, std::vector<uint8_t> congested,
              int days, std::vector<double> day_noise, double intra_bound_ms);

  int as_count() const { return n_; }
  const std::vector<Asn>& labels() const { return labels_; }
  int days() const { return days_; }
  double intra_bound_ms() const { return intra_bound_; }
  bool is_congested(int i, int j) const {
    return congested_[static_cast<size_t>(i) * n_ + j] != 0;
  }
  double base_rtt(int i, int j) const {
    return base_[static_cast<size_t>(i) * n_ + j];
  }
  double factor(int i, int j, int hour) const {
    return factors_[(static_cast<size_t>(i) * n_ + j) * 24 + hour];
  }

  // Inter-AS RTT at a period: base * factor(hour) + day noise, >= 0.
  double inter_rtt(int i, int j, PeriodIndex p) const;
  // Host-level RTT: 0 for the same host, sum of access delays within one AS,
  // otherwise the inter-AS value.
  double rtt(const HostInfo& a, const HostInfo& b, PeriodIndex p) const;

  // The full inter-AS matrix at one period.
  DelayMatrix matrix_at(PeriodIndex p) const;

  // Probe jitter: multiplicative, uniform per sample in [lo, hi].
  void set_jitter(double lo, double hi) { jitter_lo_ = lo; jitter_hi_ = hi; }
  double jitter_lo() const { return jitter_lo_; }
  double jitter_hi() const { return jitter_hi_; }

 private:
  int n_ = 0;
  std::vector<Asn> labels_;
  std::vector<double> base_;
  std::vector<double> factors_;     // n*n*24
  std::vector<uint8_t> congested_;  // n*n
  int days_ = 0;
  std::vector<double> day_noise_;  // days*24*n*n, clamped for later days
  double intra_bound_ = 10.0;
  double jitter_lo_ = 1.0;
  double jitter_hi_ = 1.0;
};

// Median of probe samples: exact middle for odd counts, average of the two
// middles for even counts.
double sample_median(std::vector<double> samples);

// Deterministic discrete-event engine. Events run strictly in (time,
// insertion) order off a single virtual clock; all randomness flows through
// one seeded generator.
class SimNet {
 public:
  using Dispatcher = std::function<void(const Message&)>;
  using NodeCallback = std::function<void(const HostId&, double now_ms)>;

  SimNet(GroundTruth truth, uint64_t seed);

  void register_host(const HostInfo& h);
  const HostInfo& host(const HostId& id) const;  // throws InvariantError
  bool registered(const HostId& id) const;
  const std::map<HostId, HostInfo>& hosts() const { return hosts_; }

  double now() const { return now_; }
  PeriodIndex period_now() const { return period_of(now_); }
  static PeriodIndex period_of(double t_ms);
  static double period_start_ms(PeriodIndex p);

  void schedule(double delay_ms, std::function<void()> fn);
  void schedule_at(double t_ms, std::function<void()> fn);

  // Delivery after one-way latency (ground-truth RTT / 2). A message to a
  // failed node is dropped; one delivered past its expiry is timed out.
  void send(const Message& msg);
  void set_dispatcher(Dispatcher d) { dispatcher_ = std::move(d); }

  bool live(const HostId& id) const { return failed_.count(id) == 0; }
  // The node stops receiving at t; the failure callback fires at
  // t + detection delay. Recovery restores delivery and fires its callback.
  void fail_node(const HostId& id, double t_ms);
  void recover_node(const HostId& id, double t_ms);
  void set_failure_detected(NodeCallback cb) { on_failure_detected_ = std::move(cb); }
  void set_recovered(NodeCallback cb) { on_recovered_ = std::move(cb); }
  void set_detection_delay(double ms) { detection_delay_ms_ = ms; }

  // Median of `samples` jittered ground-truth draws between two hosts at the
  // current period; nullopt when a drawn sample exceeds the timeout.
  std::optional<double> probe_rtt(const HostId& src, const HostId& dst,
                                  int samples, double timeout_ms);

  double rtt_now(const HostId& a, const HostId& b) const;

  void run();  // drain the queue
  void run_until(double t_ms);

  GroundTruth& truth() { return truth_; }
  const GroundTruth& truth() const { return truth_; }
  Rng& rng() { return rng_; }

  size_t sent() const { return sent_; }
  size_t delivered() const { return delivered_; }
  size_t dropped() const { return dropped_; }
  size_t timed_out() const { return timed_out_; }

  // Optional trace: time_ms,event_type,node,detail.
  void enable_trace(bool on) { trace_on_ = on; }
  const std::vector<std::string>& trace() const { return trace_; }

 private:
  struct Event {
    double t;
    uint64_t seq;
    std::function<void()> fn;
  };
  struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
      if (a.t != b.t) return a.t > b.t;
      return a.seq > b.seq;
    }
  };

  void trace_event(const char* type, const HostId& node, const std::string& detail);

  GroundTruth truth_;
  Rng rng_;
  std::map<HostId, HostInfo> hosts_;
  std::set<HostId> failed_;
  std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
  double now_ = 0;
  uint64_t next_seq_ = 0;
  Dispatcher dispatcher_;
  NodeCallback on_failure_detected_;
  NodeCallback on_recovered_;
  double detection_delay_ms_ = 5000.0;
  size_t sent_ = 0, delivered_ = 0, dropped_ = 0, timed_out_ = 0;
  bool trace_on_ = false;
  std::vector<std::string> trace_;
};

}  // namespace idms

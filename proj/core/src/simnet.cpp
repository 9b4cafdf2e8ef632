#include "idms/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "idms/errors.hpp"

namespace idms {

GroundTruth::GroundTruth(std::vector<Asn> labels, std::vector<double> base,
                         std::vector<double> factors, std::vector<uint8_t> congested,
                         int days, std::vector<double> day_noise,
                         double intra_bound_ms)
    : n_(static_cast<int>(labels.size())),
      labels_(std::move(labels)),
      base_(std::move(base)),
      factors_(std::move(factors)),
      congested_(std::move(congested)),
      days_(days),
      day_noise_(std::move(day_noise)),
      intra_bound_(intra_bound_ms) {
  size_t nn = static_cast<size_t>(n_) * n_;
  if (base_.size() != nn || factors_.size() != nn * 24 || congested_.size() != nn ||
      day_noise_.size() != static_cast<size_t>(days_) * 24 * nn)
    throw InvariantError("ground truth dimensions do not match");
}

double GroundTruth::inter_rtt(int i, int j, PeriodIndex p) const {
  if (i == j) return 0.0;
  size_t link = static_cast<size_t>(i) * n_ + j;
  int day = std::clamp(p.day, 0, days_ - 1);
  double noise =
      day_noise_[(static_cast<size_t>(day) * 24 + p.hour) * (static_cast<size_t>(n_) * n_) +
                 link];
  double v = base_[link] * factors_[link * 24 + p.hour] + noise;
  return v < 0.0 ? 0.0 : v;
}

double GroundTruth::rtt(const HostInfo& a, const HostInfo& b, PeriodIndex p) const {
  if (a.id == b.id) return 0.0;
  if (a.asn == b.asn) return a.access_ms + b.access_ms;
  // Hosts outside the AS matrix (the bootstrap servers) sit on a fixed
  // backbone path.
  if (a.as_index < 0 || b.as_index < 0) return kBackboneRttMs;
  return inter_rtt(a.as_index, b.as_index, p);
}

DelayMatrix GroundTruth::matrix_at(PeriodIndex p) const {
  std::vector<double> entries(static_cast<size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) entries[static_cast<size_t>(i) * n_ + j] = inter_rtt(i, j, p);
  return DelayMatrix(labels_, std::move(entries), p);
}

double sample_median(std::vector<double> samples) {
  if (samples.empty()) throw InvariantError("median of no samples");
  std::sort(samples.begin(), samples.end());
  size_t k = samples.size();
  return (k % 2 == 1) ? samples[k / 2]
                      : (samples[k / 2 - 1] + samples[k / 2]) / 2.0;
}

SimNet::SimNet(GroundTruth truth, uint64_t seed)
    : truth_(std::move(truth)), rng_(seed) {}

void SimNet::register_host(const HostInfo& h) {
  if (hosts_.count(h.id))
    throw InvariantError("host already registered: " + h.id.hex());
  hosts_.emplace(h.id, h);
}

const HostInfo& SimNet::host(const HostId& id) const {
  auto it = hosts_.find(id);
  if (it == hosts_.end()) throw InvariantError("unknown host " + id.hex());
  return it->second;
}

bool SimNet::registered(const HostId& id) const { return hosts_.count(id) != 0; }

PeriodIndex SimNet::period_of(double t_ms) {
  auto t = static_cast<int64_t>(t_ms / 1000.0);
  int day = static_cast<int>(t / 86400);
  int hour = static_cast<int>((t / 3600) % 24);
  return PeriodIndex{day, hour};
}

double SimNet::period_start_ms(PeriodIndex p) {
  return (static_cast<double>(p.day) * 24 + p.hour) * 3600.0 * 1000.0;
}

void SimNet::schedule(double delay_ms, std::function<void()> fn) {
  schedule_at(now_ + std::max(0.0, delay_ms), std::move(fn));
}

void SimNet::schedule_at(double t_ms, std::function<void()> fn) {
  if (t_ms < now_) throw InvariantError("cannot schedule into the past");
  queue_.push(Event{t_ms, next_seq_++, std::move(fn)});
}

void SimNet::send(const Message& msg) {
  ++sent_;
  double one_way = rtt_now(msg.src, msg.dst) / 2.0;
  Message copy = msg;
  schedule(one_way, [this, copy]() {
    if (!live(copy.dst)) {
      ++dropped_;
      trace_event("drop", copy.dst, msg_kind_name(copy.kind));
      return;
    }
    if (copy.expiry_ms >= 0 && now_ > copy.expiry_ms) {
      ++timed_out_;
      trace_event("timeout", copy.dst, msg_kind_name(copy.kind));
      return;
    }
    ++delivered_;
    if (dispatcher_) dispatcher_(copy);
  });
}

void SimNet::fail_node(const HostId& id, double t_ms) {
  schedule_at(t_ms, [this, id]() {
    failed_.insert(id);
    trace_event("fail", id, "");
    schedule(detection_delay_ms_, [this, id]() {
      if (failed_.count(id) && on_failure_detected_) on_failure_detected_(id, now_);
    });
  });
}

void SimNet::recover_node(const HostId& id, double t_ms) {
  schedule_at(t_ms, [this, id]() {
    failed_.erase(id);
    trace_event("recover", id, "");
    if (on_recovered_) on_recovered_(id, now_);
  });
}

std::optional<double> SimNet::probe_rtt(const HostId& src, const HostId& dst,
                                        int samples, double timeout_ms) {
  if (samples < 1) throw InvariantError("probe needs at least one sample");
  const HostInfo& a = host(src);
  const HostInfo& b = host(dst);
  double base = truth_.rtt(a, b, period_now());
  std::vector<double> draws(static_cast<size_t>(samples));
  for (auto& d : draws) {
    d = base * rng_.uniform(truth_.jitter_lo(), truth_.jitter_hi());
    if (timeout_ms >= 0 && d > timeout_ms) return std::nullopt;
  }
  return sample_median(std::move(draws));
}

double SimNet::rtt_now(const HostId& a, const HostId& b) const {
  return truth_.rtt(host(a), host(b), period_now());
}

void SimNet::run() {
  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.t;
    e.fn();
  }
}

void SimNet::run_until(double t_ms) {
  while (!queue_.empty() && queue_.top().t <= t_ms) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.t;
    e.fn();
  }
  now_ = std::max(now_, t_ms);
}

void SimNet::trace_event(const char* type, const HostId& node,
                         const std::string& detail) {
  if (!trace_on_) return;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", now_);
  trace_.push_back(std::string(buf) + "," + type + "," + node.hex() + "," + detail);
}

}  // namespace idms

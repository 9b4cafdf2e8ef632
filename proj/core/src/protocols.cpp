#include "idms/protocols.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"

namespace idms {

namespace {

// Shared by the runners: send through the net and account in the log.
struct Wire {
  SimNet& net;
  ProtocolLog& log;

  void send(Message m) {
    log.record(net.now(), m);
    net.send(m);
  }
};

struct ConstructionEngine {
  ConstructionEngine(SimNet& n, Overlay& o, const ConstructionParams& p)
      : net(n), overlay(o), params(p) {}

  SimNet& net;
  Overlay& overlay;
  ConstructionParams params;
  ProtocolLog log;
  Wire wire{net, log};

  PeriodIndex period;
  std::vector<Asn> labels;
  std::map<Asn, HostId> selected;  // measurement SN per AS
  HostId bootstrap_id;

  // Bootstrap-side assembly.
  std::vector<double> entries;
  size_t results_pending = 0;

  // Probing-SN side state, keyed by SN id.
  struct SnState {
    Asn asn = 0;
    std::map<Asn, double> row;  // foreign AS -> measured (kMissing until resolved)
    size_t outstanding = 0;
  };
  std::map<HostId, SnState> sn_state;
  std::map<uint64_t, std::pair<HostId, Asn>> open_probes;  // token -> (prober, target AS)
  uint64_t next_token = 1;

  int n() const { return static_cast<int>(labels.size()); }
  uint64_t m_bytes() const { return params.wire.event_bytes; }
  uint64_t b_bytes() const { return params.wire.overhead_bytes; }

  void start() {
    entries.assign(static_cast<size_t>(n()) * n(), kMissing);
    for (int i = 0; i < n(); ++i) entries[static_cast<size_t>(i) * n() + i] = 0.0;
    results_pending = selected.size();
    for (const auto& [asn, sn] : selected) {
      Message req;
      req.kind = MsgKind::MeasureReq;
      req.src = bootstrap_id;
      req.dst = sn;
      req.period = period;
      req.bytes = b_bytes() + m_bytes();
      wire.send(req);
    }
  }

  void handle(const Message& msg) {
    switch (msg.kind) {
      case MsgKind::MeasureReq: on_measure_req(msg); break;
      case MsgKind::ProbeReply: on_probe_reply(msg); break;
      case MsgKind::Probe: on_probe(msg); break;
      case MsgKind::MeasureResult: on_result(msg); break;
      case MsgKind::MeasureAck:
      case MsgKind::ResultAck:
        break;  // receipt only
      default: break;
    }
  }

  void on_measure_req(const Message& msg) {
    Message ack;
    ack.kind = MsgKind::MeasureAck;
    ack.src = msg.dst;
    ack.dst = msg.src;
    ack.period = period;
    ack.bytes = b_bytes() + m_bytes();
    wire.send(ack);

    const HostInfo& self = net.host(msg.dst);
    SnState& st = sn_state[msg.dst];
    st.asn = self.asn;
    for (const auto& [asn, target] : selected) {
      if (asn == self.asn) continue;  // own entry is the zero diagonal, no wire probe
      st.row[asn] = kMissing;
      ++st.outstanding;
      uint64_t token = next_token++;
      open_probes[token] = {msg.dst, asn};

      Message probe;
      probe.kind = MsgKind::Probe;
      probe.src = msg.dst;
      probe.dst = target;
      probe.period = period;
      probe.token = token;
      probe.probe_as = asn;
      probe.bytes = b_bytes() + m_bytes();
      probe.expiry_ms = net.now() + params.probe_timeout_ms;
      wire.send(probe);

      net.schedule(params.probe_timeout_ms,
                   [this, token]() { resolve_probe(token, std::nullopt); });
    }
    if (st.outstanding == 0) send_result(msg.dst);
  }

  void on_probe(const Message& msg) {
    Message reply;
    reply.kind = MsgKind::ProbeReply;
    reply.src = msg.dst;
    reply.dst = msg.src;
    reply.period = period;
    reply.token = msg.token;
    reply.probe_as = msg.probe_as;
    reply.bytes = b_bytes() + m_bytes();
    reply.expiry_ms = msg.expiry_ms;
    wire.send(reply);
  }

  void on_probe_reply(const Message& msg) {
    auto it = open_probes.find(msg.token);
    if (it == open_probes.end()) return;  // already timed out
    // The prober measured `probe_samples` round trips against the replier.
    auto measured = net.probe_rtt(msg.dst, msg.src, params.probe_samples,
                                  params.probe_timeout_ms);
    resolve_probe(msg.token, measured);
  }

  void resolve_probe(uint64_t token, std::optional<double> value) {
    auto it = open_probes.find(token);
    if (it == open_probes.end()) return;
    auto [prober, target_as] = it->second;
    open_probes.erase(it);
    SnState& st = sn_state[prober];
    st.row[target_as] = value ? *value : kMissing;
    if (--st.outstanding == 0) send_result(prober);
  }

  void send_result(const HostId& sn) {
    const SnState& st = sn_state[sn];
    auto rows = std::make_shared<std::vector<std::pair<Asn, double>>>(
        st.row.begin(), st.row.end());

    Message res;
    res.kind = MsgKind::MeasureResult;
    res.src = sn;
    res.dst = bootstrap_id;
    res.period = period;
    res.results = rows;
    res.bytes = b_bytes() + m_bytes() * static_cast<uint64_t>(rows->size());
    wire.send(res);
  }

  void on_result(const Message& msg) {
    Message ack;
    ack.kind = MsgKind::ResultAck;
    ack.src = bootstrap_id;
    ack.dst = msg.src;
    ack.period = period;
    ack.bytes = b_bytes() + m_bytes();
    wire.send(ack);

    const HostInfo& from = net.host(msg.src);
    auto row_label = std::find(labels.begin(), labels.end(), from.asn);
    size_t i = static_cast<size_t>(row_label - labels.begin());
    for (const auto& [asn, value] : *msg.results) {
      auto col_label = std::find(labels.begin(), labels.end(), asn);
      size_t j = static_cast<size_t>(col_label - labels.begin());
      entries[i * static_cast<size_t>(n()) + j] = value;
    }
    --results_pending;
  }
};

}  // namespace

ConstructionResult run_udm_construction(SimNet& net, Overlay& overlay,
                                        PeriodIndex period,
                                        const ConstructionParams& params) {
  ConstructionEngine eng{net, overlay, params};
  eng.period = period;
  eng.labels = net.truth().labels();
  eng.bootstrap_id = overlay.bootstrap().id;

  auto partial = overlay.partial_sn_table();
  for (Asn asn : eng.labels) {
    auto it = partial.find(asn);
    if (it == partial.end())
      throw ProtocolError("AS " + std::to_string(asn) + " has no supernode");
    eng.selected.emplace(asn, it->second);
  }

  net.set_dispatcher([&eng](const Message& m) { eng.handle(m); });
  eng.start();
  net.run();
  net.set_dispatcher(nullptr);

  DelayMatrix udm(eng.labels, std::move(eng.entries), period);
  return ConstructionResult{std::move(udm), std::move(eng.log)};
}

namespace {

struct BroadcastEngine {
  BroadcastEngine(SimNet& n, Overlay& o, const BroadcastParams& p)
      : net(n), overlay(o), params(p) {}

  SimNet& net;
  Overlay& overlay;
  BroadcastParams params;
  ProtocolLog log;
  Wire wire{net, log};

  std::shared_ptr<const DelayMatrix> udm;
  std::shared_ptr<const DelayMatrix> previous;
  std::shared_ptr<const MatrixDelta> delta_body;
  uint64_t z_bytes = 0;
  HostId bootstrap_id;
  std::map<Asn, SliceAssignment> plan;  // snapshot at broadcast start

  size_t full_pushes = 0, delta_pushes = 0;
  uint64_t push_bytes = 0;
  int max_depth = 0;

  struct OpenPush {
    HostId target;
    Asn asn;
    int depth;
    int attempts;
  };
  std::map<uint64_t, OpenPush> open_pushes;  // token -> pending ack
  uint64_t next_token = 1;
  std::set<HostId> forwarded;        // SNs that already forwarded this period
  std::set<HostId> retry_forwarded;  // SNs that already cascaded a retry

  uint64_t m_bytes() const { return params.wire.event_bytes; }
  uint64_t b_bytes() const { return params.wire.overhead_bytes; }

  void push_to(const HostId& from, const HostId& to, int depth, bool retry) {
    const NodeState* rcv = overlay.find(to);
    bool can_delta = previous && delta_body && rcv && rcv->udm &&
                     rcv->udm->period() == previous->period() &&
                     periods_between(rcv->udm->period(), udm->period()) <= 1;

    Message m;
    m.src = from;
    m.dst = to;
    m.period = udm->period();
    m.depth = depth;
    m.retry = retry;
    m.token = next_token++;
    if (can_delta) {
      m.kind = MsgKind::DeltaPush;
      m.delta = delta_body;
      // z*q of delta payload: 2 bytes per changed entry out of the 2L^2 file.
      m.bytes = b_bytes() + m_bytes() + 2 * static_cast<uint64_t>(delta_body->entries.size());
      ++delta_pushes;
    } else {
      m.kind = MsgKind::MatrixPush;
      m.matrix = udm;
      m.bytes = b_bytes() + m_bytes() + z_bytes;
      ++full_pushes;
    }
    push_bytes += m.bytes;
    max_depth = std::max(max_depth, depth);
    open_pushes[m.token] = OpenPush{to, rcv ? rcv->asn : 0, depth, retry ? 2 : 1};
    wire.send(m);
    uint64_t token = m.token;
    net.schedule(params.ack_timeout_ms, [this, token]() { check_ack(token); });
  }

  void check_ack(uint64_t token) {
    auto it = open_pushes.find(token);
    if (it == open_pushes.end()) return;  // acked
    OpenPush open = it->second;
    open_pushes.erase(it);
    // No ack and the model does not lose messages: the target died. Resume
    // through a freshly elected subtree once the overlay has caught up.
    if (open.attempts >= 3) return;
    if (overlay.find(open.target) != nullptr && net.live(open.target)) return;
    if (overlay.find(open.target) != nullptr) {
      // Failure not yet detected; check again later.
      uint64_t t = next_token++;
      open_pushes[t] = OpenPush{open.target, open.asn, open.depth, open.attempts + 1};
      net.schedule(params.ack_timeout_ms, [this, t]() { check_ack(t); });
      return;
    }
    if (open.depth >= 3) return;  // leaf target, no subtree to resume
    const auto& sns = overlay.sns_in(open.asn);
    if (sns.empty()) return;  // no survivors to resume to
    auto fresh = overlay.slice_assignment(open.asn);
    if (open.depth <= 1) {
      push_to(bootstrap_id, fresh.as_leader, 1, true);
    } else {
      for (const HostId& leader : fresh.slice_leaders)
        if (net.live(leader)) push_to(fresh.as_leader, leader, 2, true);
    }
  }

  void handle(const Message& msg) {
    if (msg.kind == MsgKind::PushAck) {
      open_pushes.erase(msg.token);
      return;
    }
    if (msg.kind != MsgKind::MatrixPush && msg.kind != MsgKind::DeltaPush) return;

    NodeState* node = overlay.find_mutable(msg.dst);
    if (!node) return;
    bool fresh_payload = !node->udm || node->udm->period() < msg.period;
    if (fresh_payload) {
      if (msg.kind == MsgKind::MatrixPush) {
        node->udm = *msg.matrix;
      } else if (node->udm) {
        node->udm = apply_delta(*node->udm, *msg.delta);
        node->udm->set_period(msg.period);
      }
    }

    Message ack;
    ack.kind = MsgKind::PushAck;
    ack.src = msg.dst;
    ack.dst = msg.src;
    ack.period = msg.period;
    ack.token = msg.token;
    ack.bytes = b_bytes();
    wire.send(ack);

    if (msg.retry) {
      // Resume forwards through the current election so survivors downstream
      // of a dead leader still get covered; each node cascades once.
      if (retry_forwarded.insert(msg.dst).second)
        forward_from(msg.dst, overlay.slice_assignment(node->asn), msg.depth, true);
      return;
    }
    if (!forwarded.insert(msg.dst).second) return;  // duplicate delivery
    auto plan_it = plan.find(node->asn);
    if (plan_it != plan.end()) forward_from(msg.dst, plan_it->second, msg.depth, false);
  }

  void forward_from(const HostId& self, const SliceAssignment& sa, int depth,
                    bool retry) {
    if (sa.as_leader == self) {
      for (const HostId& leader : sa.slice_leaders)
        if (leader != self) push_to(self, leader, depth + 1, retry);
    }
    int slice = sa.slice_of(self);
    if (slice >= 0 && sa.slice_leaders[static_cast<size_t>(slice)] == self) {
      for (const HostId& member : sa.slices[static_cast<size_t>(slice)])
        if (member != self) push_to(self, member, depth + 1, retry);
    }
  }

  void start() {
    for (const auto& [asn, sa] : plan) push_to(bootstrap_id, sa.as_leader, 1, false);
  }
};

}  // namespace

BroadcastResult run_udm_broadcast(SimNet& net, Overlay& overlay,
                                  const DelayMatrix& udm, const DelayMatrix* previous,
                                  const BroadcastParams& params) {
  BroadcastEngine eng{net, overlay, params};
  eng.udm = std::make_shared<const DelayMatrix>(udm);
  eng.bootstrap_id = overlay.bootstrap().id;
  eng.z_bytes = params.full_matrix_bytes
                    ? params.full_matrix_bytes
                    : matrix_payload_bytes(static_cast<uint64_t>(udm.size()));
  if (previous && previous->same_labels(udm)) {
    eng.previous = std::make_shared<const DelayMatrix>(*previous);
    eng.delta_body = std::make_shared<const MatrixDelta>(
        delta(*previous, udm, params.delta_threshold_ms));
  }
  for (Asn asn : overlay.ases_with_sns())
    eng.plan.emplace(asn, overlay.slice_assignment(asn));

  net.set_dispatcher([&eng](const Message& m) { eng.handle(m); });
  eng.start();
  net.run();
  net.set_dispatcher(nullptr);

  BroadcastResult out;
  out.log = std::move(eng.log);
  out.full_pushes = eng.full_pushes;
  out.delta_pushes = eng.delta_pushes;
  out.max_depth = eng.max_depth;
  out.push_bytes = eng.push_bytes;
  return out;
}

ProtocolLog run_pdm_distribution(SimNet& net, Overlay& overlay, const HostId& sn,
                                 const Pdm& pdm, const WireParams& wire_params) {
  ProtocolLog log;
  Wire wire{net, log};
  NodeState* sender = overlay.find_mutable(sn);
  if (!sender || sender->role != Role::Supernode)
    throw ProtocolError("pdm distribution needs a supernode");
  sender->pdm = pdm;

  auto body = std::make_shared<const Pdm>(pdm);
  uint64_t z = matrix_payload_bytes(static_cast<uint64_t>(pdm.matrix.size()));

  net.set_dispatcher([&overlay](const Message& m) {
    if (m.kind != MsgKind::PdmPush) return;
    NodeState* node = overlay.find_mutable(m.dst);
    if (!node) return;
    if (!node->pdm || node->pdm->build_stamp() < m.pdm->build_stamp())
      node->pdm = *m.pdm;
  });

  for (const HostId& on : sender->served_ons) {
    Message m;
    m.kind = MsgKind::PdmPush;
    m.src = sn;
    m.dst = on;
    m.pdm = body;
    m.period = pdm.matrix.period();
    m.bytes = wire_params.overhead_bytes + wire_params.event_bytes + z;
    wire.send(m);
  }
  net.run();
  net.set_dispatcher(nullptr);
  return log;
}

std::optional<double> on_query_distance(const SimNet& net, const Overlay& overlay,
                                        const HostId& on, const HostId& target,
                                        double c_intra_ms) {
  const NodeState* node = overlay.find(on);
  if (!node) return std::nullopt;
  for (const HostId& sn : node->associated_sns) {
    if (!net.live(sn)) continue;
    const NodeState* server = overlay.find(sn);
    if (!server || !server->udm) continue;
    return estimate_distance(on, target, *server->udm, c_intra_ms);
  }
  return std::nullopt;
}

}  // namespace idms

#pragma once

#include <optional>

#include "idms/message.hpp"
#include "idms/overlay.hpp"
#include "idms/simnet.hpp"

namespace idms {

// Cost-model byte constants: m bytes per latency event, b bytes of
// per-message overhead.
struct WireParams {
  uint64_t event_bytes = 20;     // m
  uint64_t overhead_bytes = 40;  // b
};

struct ConstructionParams {
  WireParams wire;
  int probe_samples = 3;
  double probe_timeout_ms = 3000.0;
};

struct ConstructionResult {
  DelayMatrix udm;
  ProtocolLog log;
};

// One-hour UDM measurement round. The bootstrap asks the selected SN of
// every AS (request/ack), each selected SN probes the selected SN of every
// other AS (probe/reply) and calibrates its own AS entry locally, then
// returns one result carrying its row (result/ack). Wire totals are
// 2L(L+1) messages and 3L(m+b) + 2L(m+b)(L-1) + L(b + m(L-1)) bytes.
// Throws ProtocolError naming the AS when one has no supernode.
ConstructionResult run_udm_construction(SimNet& net, Overlay& overlay,
                                        PeriodIndex period,
                                        const ConstructionParams& params);

struct BroadcastParams {
  WireParams wire;
  double delta_threshold_ms = 20.0;
  double ack_timeout_ms = 5000.0;
  // Full-matrix file size for byte accounting; 0 means 2 * L^2.
  uint64_t full_matrix_bytes = 0;
};

struct BroadcastResult {
  ProtocolLog log;
  size_t full_pushes = 0;
  size_t delta_pushes = 0;
  int max_depth = 0;
  uint64_t push_bytes = 0;  // bytes of the pushes alone (acks excluded)
};

// Three-level dissemination: bootstrap -> AS leaders -> slice leaders ->
// slice members, every push acknowledged. Failure-free cost is exactly one
// push per SN (2 * SN count messages, depth <= 3). A receiver whose stored
// matrix is stale by more than one period gets the full matrix, otherwise
// the delta against `previous`.
BroadcastResult run_udm_broadcast(SimNet& net, Overlay& overlay,
                                  const DelayMatrix& udm,
                                  const DelayMatrix* previous,
                                  const BroadcastParams& params);

// One SN pushes its PDM to every ON it serves; receivers keep the newest
// build and ignore duplicates.
ProtocolLog run_pdm_distribution(SimNet& net, Overlay& overlay, const HostId& sn,
                                 const Pdm& pdm, const WireParams& wire);

// ON-side distance query through the first live associated SN's stored UDM.
// nullopt when no live SN, no stored matrix, or the link is unmeasured.
std::optional<double> on_query_distance(const SimNet& net, const Overlay& overlay,
                                        const HostId& on, const HostId& target,
                                        double c_intra_ms);

}  // namespace idms

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "idms/delay_matrix.hpp"
#include "idms/host_id.hpp"
#include "idms/matrix_service.hpp"

namespace idms {

enum class MsgKind {
  MeasureReq,
  MeasureAck,
  Probe,
  ProbeReply,
  MeasureResult,
  ResultAck,
  MatrixPush,
  DeltaPush,
  PushAck,
  PdmPush,
};

const char* msg_kind_name(MsgKind k);

// A simulated protocol message. `bytes` follows the cost model: per-message
// overhead b plus the body (one latency event costs m bytes). Payload
// pointers are shared so forwarding a matrix does not copy it.
struct Message {
  MsgKind kind = MsgKind::Probe;
  HostId src;
  HostId dst;
  uint64_t bytes = 0;
  PeriodIndex period;
  int depth = 0;       // broadcast tree depth of the receiver
  uint64_t token = 0;  // exchange id for acks and timeouts
  bool retry = false;  // re-push after a failure: forward via fresh election
  double expiry_ms = -1;  // delivered after this instant => timed out

  std::shared_ptr<const DelayMatrix> matrix;   // MatrixPush
  std::shared_ptr<const MatrixDelta> delta;    // DeltaPush
  std::shared_ptr<const Pdm> pdm;              // PdmPush
  Asn probe_as = 0;                            // Probe / ProbeReply
  double measured_ms = 0;                      // ProbeReply
  std::shared_ptr<const std::vector<std::pair<Asn, double>>> results;  // MeasureResult
};

struct LogRecord {
  double time_ms = 0;
  MsgKind kind = MsgKind::Probe;
  HostId src;
  HostId dst;
  uint64_t bytes = 0;
};

// Ordered record of the messages a protocol run produced, with per-kind
// counters kept alongside.
class ProtocolLog {
 public:
  void record(double time_ms, const Message& m);

  size_t total_messages() const { return records_.size(); }
  size_t count(MsgKind k) const;
  uint64_t total_bytes() const { return total_bytes_; }
  uint64_t bytes_of(MsgKind k) const;
  const std::vector<LogRecord>& records() const { return records_; }

  // Counters equal a recount and timestamps never decrease.
  bool consistent() const;

  // Concatenate another log (its records must not predate ours).
  void append(const ProtocolLog& other);

  // time_ms,kind,src,dst,bytes rows plus one summary line per kind.
  std::string csv() const;

 private:
  std::vector<LogRecord> records_;
  size_t counts_[10] = {};
  uint64_t kind_bytes_[10] = {};
  uint64_t total_bytes_ = 0;
};

}  // namespace idms

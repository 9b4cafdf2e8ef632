#include "idms/message.hpp"

#include <cstdio>
#include <sstream>

namespace idms {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::MeasureReq: return "measure_req";
    case MsgKind::MeasureAck: return "measure_ack";
    case MsgKind::Probe: return "probe";
    case MsgKind::ProbeReply: return "probe_reply";
    case MsgKind::MeasureResult: return "measure_result";
    case MsgKind::ResultAck: return "result_ack";
    case MsgKind::MatrixPush: return "matrix_push";
    case MsgKind::DeltaPush: return "delta_push";
    case MsgKind::PushAck: return "push_ack";
    case MsgKind::PdmPush: return "pdm_push";
  }
  return "?";
}

void ProtocolLog::record(double time_ms, const Message& m) {
  records_.push_back(LogRecord{time_ms, m.kind, m.src, m.dst, m.bytes});
  counts_[static_cast<int>(m.kind)] += 1;
  kind_bytes_[static_cast<int>(m.kind)] += m.bytes;
  total_bytes_ += m.bytes;
}

size_t ProtocolLog::count(MsgKind k) const { return counts_[static_cast<int>(k)]; }

uint64_t ProtocolLog::bytes_of(MsgKind k) const {
  return kind_bytes_[static_cast<int>(k)];
}

void ProtocolLog::append(const ProtocolLog& other) {
  for (const auto& r : other.records_) {
    records_.push_back(r);
    counts_[static_cast<int>(r.kind)] += 1;
    kind_bytes_[static_cast<int>(r.kind)] += r.bytes;
    total_bytes_ += r.bytes;
  }
}

bool ProtocolLog::consistent() const {
  size_t recount[10] = {};
  uint64_t rebytes = 0;
  double last = -1e300;
  for (const auto& r : records_) {
    if (r.time_ms < last) return false;
    last = r.time_ms;
    recount[static_cast<int>(r.kind)] += 1;
    rebytes += r.bytes;
  }
  for (int k = 0; k < 10; ++k)
    if (recount[k] != counts_[k]) return false;
  return rebytes == total_bytes_;
}

std::string ProtocolLog::csv() const {
  std::ostringstream out;
  out << "time_ms,kind,src,dst,bytes\n";
  char buf[32];
  for (const auto& r : records_) {
    std::snprintf(buf, sizeof buf, "%.3f", r.time_ms);
    out << buf << "," << msg_kind_name(r.kind) << "," << r.src.hex() << ","
        << r.dst.hex() << "," << r.bytes << "\n";
  }
  out << "# summary";
  for (int k = 0; k < 10; ++k)
    if (counts_[k])
      out << " " << msg_kind_name(static_cast<MsgKind>(k)) << "=" << counts_[k];
  out << " total_messages=" << records_.size() << " total_bytes=" << total_bytes_
      << "\n";
  return out.str();
}

}  // namespace idms

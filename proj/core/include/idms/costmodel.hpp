#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idms {

// Analytic message/byte/storage model parameters: L ASes, N hosts, SN ratio
// p, m bytes per event, b bytes overhead per message, z full-matrix bytes
// (2 bytes per latency value), q fraction of entries updated per broadcast.
struct CostParams {
  uint64_t as_count = 555;        // L
  uint64_t host_count = 10000;    // N
  double sn_ratio = 0.01;         // p
  uint64_t event_bytes = 20;      // m
  uint64_t overhead_bytes = 40;   // b
  uint64_t matrix_bytes = 0;      // z; 0 means 2 L^2
  double update_fraction = 0.1;   // q

  uint64_t z() const { return matrix_bytes ? matrix_bytes : 2 * as_count * as_count; }
  void validate() const;  // throws InvariantError
};

// One hourly measurement round: 2L(L+1) messages totalling
// 3L(m+b) + 2L(m+b)(L-1) + L(b + m(L-1)) bytes.
uint64_t construction_messages(uint64_t as_count);
uint64_t construction_bytes(uint64_t as_count, uint64_t event_bytes,
                            uint64_t overhead_bytes);

// One matrix broadcast: 2Np messages, Np(m+b) + Npzq bytes (pushes only;
// acks carry no billed payload).
uint64_t broadcast_messages(uint64_t host_count, double sn_ratio);
double broadcast_bytes(uint64_t host_count, double sn_ratio, uint64_t event_bytes,
                       uint64_t overhead_bytes, uint64_t matrix_bytes,
                       double update_fraction);

// Phoenix-style coordinate maintenance: 64N messages per round, six rounds
// to steady state, (m+b) bytes each.
uint64_t phoenix_round_messages(uint64_t host_count);
uint64_t phoenix_messages(uint64_t host_count);
uint64_t phoenix_bytes(uint64_t host_count, uint64_t event_bytes,
                       uint64_t overhead_bytes);

// Stored matrix files: per matrix 2L^2 payload plus the binary header,
// `matrices` of them (24 per day at hourly measurement).
uint64_t storage_bytes(uint64_t as_count, uint64_t matrices);

// CSV with one row per L: L,N,idms_msgs,idms_bytes,phoenix_msgs,phoenix_bytes.
// IDMS columns cover one construction round plus one broadcast.
std::string cost_table_csv(const CostParams& base,
                           const std::vector<uint64_t>& as_counts);

}  // namespace idms

#include "idms/costmodel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"

namespace idms {

void CostParams::validate() const {
  if (as_count < 2) throw InvariantError("cost model needs L >= 2");
  if (host_count < 1) throw InvariantError("cost model needs N >= 1");
  if (sn_ratio <= 0 || sn_ratio > 1) throw InvariantError("p must be in (0, 1]");
  if (update_fraction < 0 || update_fraction > 1)
    throw InvariantError("q must be in [0, 1]");
  if (static_cast<double>(host_count) * sn_ratio < 1.0)
    throw InvariantError("Np must be at least 1");
}

uint64_t construction_messages(uint64_t L) { return 2 * L * (L + 1); }

uint64_t construction_bytes(uint64_t L, uint64_t m, uint64_t b) {
  return 3 * L * (m + b) + 2 * L * (m + b) * (L - 1) + L * (b + m * (L - 1));
}

uint64_t broadcast_messages(uint64_t N, double p) {
  return static_cast<uint64_t>(std::llround(2.0 * static_cast<double>(N) * p));
}

double broadcast_bytes(uint64_t N, double p, uint64_t m, uint64_t b, uint64_t z,
                       double q) {
  double np = static_cast<double>(N) * p;
  return np * static_cast<double>(m + b) + np * static_cast<double>(z) * q;
}

uint64_t phoenix_round_messages(uint64_t N) { return 64 * N; }

uint64_t phoenix_messages(uint64_t N) { return 384 * N; }

uint64_t phoenix_bytes(uint64_t N, uint64_t m, uint64_t b) {
  return 384 * N * (m + b);
}

uint64_t storage_bytes(uint64_t L, uint64_t matrices) {
  return matrices * matrix_file_bytes(L);
}

std::string cost_table_csv(const CostParams& base,
                           const std::vector<uint64_t>& as_counts) {
  base.validate();
  std::ostringstream out;
  out << "L,N,idms_msgs,idms_bytes,phoenix_msgs,phoenix_bytes\n";
  for (uint64_t L : as_counts) {
    CostParams c = base;
    c.as_count = L;
    c.matrix_bytes = 0;  // z tracks 2 L^2
    uint64_t idms_msgs =
        construction_messages(L) + broadcast_messages(c.host_count, c.sn_ratio);
    double idms_bytes =
        static_cast<double>(construction_bytes(L, c.event_bytes, c.overhead_bytes)) +
        broadcast_bytes(c.host_count, c.sn_ratio, c.event_bytes, c.overhead_bytes,
                        c.z(), c.update_fraction);
    char bytes_buf[32];
    std::snprintf(bytes_buf, sizeof bytes_buf, "%.0f", idms_bytes);
    out << L << "," << c.host_count << "," << idms_msgs << "," << bytes_buf << ","
        << phoenix_messages(c.host_count) << ","
        << phoenix_bytes(c.host_count, c.event_bytes, c.overhead_bytes) << "\n";
  }
  return out.str();
}

}  // namespace idms

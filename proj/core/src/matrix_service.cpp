#include "idms/matrix_service.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"

namespace idms {

namespace {

double median_of(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  size_t k = v.size();
  return (k % 2 == 1) ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / 2.0;
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint16_t get_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

constexpr char kDeltaMagic[4] = {'I', 'D', 'D', '1'};

}  // namespace

Pdm build_pdm(const MatrixSeries& series, int hour) {
  auto sources = series.at_hour(hour);
  if (sources.empty())
    throw InvariantError("no source matrices at hour " + std::to_string(hour));

  const DelayMatrix& first = *sources.front();
  int n = first.size();
  std::vector<double> entries(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> vals;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      vals.clear();
      size_t missing = 0;
      for (const DelayMatrix* m : sources) {
        double v = m->raw(i, j);
        if (is_missing(v))
          ++missing;
        else
          vals.push_back(v);
      }
      double out;
      if (missing * 2 > sources.size())
        out = kMissing;
      else
        out = median_of(vals);
      entries[static_cast<size_t>(i) * n + j] = out;
    }
  }

  Pdm pdm{DelayMatrix(first.labels(), std::move(entries), first.period()), hour, {}};
  for (const DelayMatrix* m : sources) pdm.source_days.push_back(m->period().day);
  return pdm;
}

MatrixDelta delta(const DelayMatrix& old_m, const DelayMatrix& new_m,
                  double threshold_ms) {
  if (!old_m.same_labels(new_m))
    throw LabelMismatch("delta needs identical label sets");
  MatrixDelta d;
  d.base = old_m.period();
  int n = old_m.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double ov = old_m.raw(i, j);
      double nv = new_m.raw(i, j);
      bool changed;
      if (is_missing(ov) != is_missing(nv))
        changed = true;
      else if (is_missing(ov))
        changed = false;
      else
        changed = std::fabs(nv - ov) > threshold_ms;
      if (changed)
        d.entries.push_back(DeltaEntry{old_m.labels()[static_cast<size_t>(i)],
                                       old_m.labels()[static_cast<size_t>(j)], nv});
    }
  }
  return d;
}

DelayMatrix apply_delta(const DelayMatrix& old_m, const MatrixDelta& d) {
  int n = old_m.size();
  std::vector<double> entries = old_m.raw_entries();
  for (const auto& e : d.entries) {
    int i = old_m.index_of(e.row);
    int j = old_m.index_of(e.col);
    if (i == j) throw InvariantError("delta entry on the diagonal");
    entries[static_cast<size_t>(i) * n + j] = e.value;
  }
  return DelayMatrix(old_m.labels(), std::move(entries), old_m.period());
}

std::vector<uint8_t> serialize_delta(const MatrixDelta& d) {
  std::vector<uint8_t> out;
  out.reserve(static_cast<size_t>(delta_wire_bytes(d.entries.size())));
  out.insert(out.end(), kDeltaMagic, kDeltaMagic + 4);
  put_u16(out, static_cast<uint16_t>(d.base.day));
  out.push_back(static_cast<uint8_t>(d.base.hour));
  put_u32(out, static_cast<uint32_t>(d.entries.size()));
  for (const auto& e : d.entries) {
    put_u32(out, e.row);
    put_u32(out, e.col);
    put_u16(out, quantize_ms(e.value));
  }
  return out;
}

MatrixDelta parse_delta(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 11 || std::memcmp(bytes.data(), kDeltaMagic, 4) != 0)
    throw ParseError("bad delta magic");
  MatrixDelta d;
  d.base.day = get_u16(bytes.data() + 4);
  d.base.hour = bytes[6];
  uint32_t count = get_u32(bytes.data() + 7);
  if (bytes.size() != delta_wire_bytes(count))
    throw ParseError("delta byte length mismatch");
  const uint8_t* p = bytes.data() + 11;
  for (uint32_t k = 0; k < count; ++k, p += 10) {
    uint16_t q = get_u16(p + 8);
    d.entries.push_back(DeltaEntry{get_u32(p), get_u32(p + 4),
                                   q == 65535 ? kMissing : static_cast<double>(q)});
  }
  return d;
}

uint64_t delta_wire_bytes(uint64_t entry_count) { return 11 + 10 * entry_count; }

std::optional<double> estimate_distance(const HostId& i, const HostId& j,
                                        const DelayMatrix& m, double c_intra_ms) {
  if (i == j) return 0.0;
  if (i.asn() == j.asn()) return c_intra_ms;
  return m.lookup(i.asn(), j.asn());
}

}  // namespace idms

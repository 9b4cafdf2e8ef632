#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idms/delay_matrix.hpp"
#include "idms/host_id.hpp"

namespace idms {

// Previous delay matrix: element-wise median over the same-hour matrices of
// earlier days.
struct Pdm {
  DelayMatrix matrix;
  int hour = 0;
  std::vector<int> source_days;

  // Newest source day + hour; receivers keep the newest build.
  PeriodIndex build_stamp() const {
    int day = 0;
    for (int d : source_days) day = d > day ? d : day;
    return PeriodIndex{day, hour};
  }
};

// An entry is missing in the PDM only when more than half of its sources are
// missing; otherwise it is the median of the non-missing values (average of
// the two middles for even counts). Throws InvariantError when the series
// has no matrix at that hour.
Pdm build_pdm(const MatrixSeries& series, int hour);

// Sparse update of a delay matrix: the entries whose value moved by more
// than a threshold (or whose missing status flipped).
struct DeltaEntry {
  Asn row = 0;
  Asn col = 0;
  double value = 0;  // kMissing when the link became unmeasured
};

struct MatrixDelta {
  PeriodIndex base;
  std::vector<DeltaEntry> entries;  // each (row,col) at most once

  bool empty() const { return entries.empty(); }
};

// Entries with |new - old| > threshold_ms or a missing-status change.
// Throws LabelMismatch when the label sets differ.
MatrixDelta delta(const DelayMatrix& old_m, const DelayMatrix& new_m,
                  double threshold_ms);

// apply_delta(old, delta(old, new, 0)) == new. Throws UnknownAsn for a
// delta entry outside old's labels.
DelayMatrix apply_delta(const DelayMatrix& old_m, const MatrixDelta& d);

// Wire format: magic "IDD1", u16 base day, u8 base hour, u32 count, then
// count x (u32 row ASN, u32 col ASN, u16 value), little-endian. Values use
// the same u16 quantization as the matrix binary format.
std::vector<uint8_t> serialize_delta(const MatrixDelta& d);
MatrixDelta parse_delta(const std::vector<uint8_t>& bytes);
uint64_t delta_wire_bytes(uint64_t entry_count);

// Host-to-host distance from the AS-level matrix: 0 for the host itself,
// c_intra for a same-AS pair, otherwise the matrix entry. Throws UnknownAsn;
// nullopt for an unmeasured inter-AS link.
std::optional<double> estimate_distance(const HostId& i, const HostId& j,
                                        const DelayMatrix& m, double c_intra_ms);

}  // namespace idms

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idms/delay_matrix.hpp"

namespace idms {

// Text format, line oriented and whitespace separated:
//   line 1: n
//   line 2: n ASN labels
//   lines 3..n+2: n values each, milliseconds, -1 for missing
DelayMatrix load_matrix(const std::string& path);
void save_matrix(const DelayMatrix& m, const std::string& path);

// Binary format, little-endian: magic "IDM1", u16 n, n x u32 labels,
// n^2 u16 entries row-major. Values quantize to whole milliseconds;
// 65535 marks missing and values above 65534 clamp.
std::vector<uint8_t> serialize_matrix(const DelayMatrix& m);
DelayMatrix parse_matrix(const std::vector<uint8_t>& bytes);
void save_matrix_binary(const DelayMatrix& m, const std::string& path);
DelayMatrix load_matrix_binary(const std::string& path);

// Quantization used by the binary formats: whole milliseconds in a u16,
// 65535 = missing, values above 65534 clamp to 65534.
uint16_t quantize_ms(double v);

// Entry payload alone, excluding magic/count/labels: 2 bytes per entry.
uint64_t matrix_payload_bytes(uint64_t n);
// Whole-file size of the binary format.
uint64_t matrix_file_bytes(uint64_t n);

// Series directory layout: one text matrix per period, named
// period_<day>_<hour>.dm.
std::string period_filename(PeriodIndex p);
void save_series(const MatrixSeries& s, const std::string& dir);
MatrixSeries load_series(const std::string& dir);

// p2psim King matrix layout: square whitespace-separated matrix of
// microsecond RTTs, one row per line. Labels become 1..n; negative raw
// values become missing; the diagonal is forced to zero; asymmetry is kept.
DelayMatrix load_king(const std::string& path);

}  // namespace idms

#include "idms/matrix_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idms/errors.hpp"

namespace idms {

namespace {

constexpr uint16_t kMissingU16 = 65535;
constexpr char kMagic[4] = {'I', 'D', 'M', '1'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

uint16_t get_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t get_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

std::string format_value(double v) {
  if (is_missing(v)) return "-1";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Trim "%.17g" artifacts for values that print exactly.
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%g", v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

}  // namespace

uint16_t quantize_ms(double v) {
  if (is_missing(v)) return kMissingU16;
  double r = std::llround(v);
  if (r > 65534.0) return 65534;
  return static_cast<uint16_t>(r);
}

DelayMatrix load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open matrix file " + path);

  auto fail = [&](int line, const std::string& what) -> ParseError {
    return ParseError(path + ":" + std::to_string(line) + ": " + what);
  };

  long n_signed = 0;
  if (!(f >> n_signed)) throw fail(1, "expected AS count");
  if (n_signed < 2) throw fail(1, "AS count must be >= 2, got " + std::to_string(n_signed));
  int n = static_cast<int>(n_signed);

  std::vector<Asn> labels(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    if (!(f >> labels[static_cast<size_t>(i)])) throw fail(2, "expected " + std::to_string(n) + " labels");

  std::vector<double> entries(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double v;
      if (!(f >> v))
        throw fail(3 + i, "expected " + std::to_string(n) + " values in row " +
                              std::to_string(i));
      if (v < 0.0 && v != -1.0)
        throw InvariantError(path + ": negative entry at row " + std::to_string(i) +
                             " col " + std::to_string(j));
      entries[static_cast<size_t>(i) * n + j] = (v == -1.0) ? kMissing : v;
    }
  }
  double extra;
  if (f >> extra) throw fail(3 + n, "trailing data after matrix");

  return DelayMatrix(std::move(labels), std::move(entries));
}

void save_matrix(const DelayMatrix& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write matrix file " + path);
  int n = m.size();
  f << n << "\n";
  for (int i = 0; i < n; ++i) f << m.labels()[static_cast<size_t>(i)] << (i + 1 == n ? "\n" : " ");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f << format_value(m.raw(i, j)) << (j + 1 == n ? "\n" : " ");
  if (!f) throw ParseError("write failed for " + path);
}

std::vector<uint8_t> serialize_matrix(const DelayMatrix& m) {
  std::vector<uint8_t> out;
  int n = m.size();
  out.reserve(static_cast<size_t>(matrix_file_bytes(static_cast<uint64_t>(n))));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u16(out, static_cast<uint16_t>(n));
  for (Asn a : m.labels()) put_u32(out, a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) put_u16(out, quantize_ms(m.raw(i, j)));
  return out;
}

DelayMatrix parse_matrix(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw ParseError("bad matrix magic");
  int n = get_u16(bytes.data() + 4);
  if (bytes.size() != matrix_file_bytes(static_cast<uint64_t>(n)))
    throw ParseError("matrix byte length mismatch");
  const uint8_t* p = bytes.data() + 6;
  std::vector<Asn> labels(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i, p += 4) labels[static_cast<size_t>(i)] = get_u32(p);
  std::vector<double> entries(static_cast<size_t>(n) * n);
  for (size_t k = 0; k < entries.size(); ++k, p += 2) {
    uint16_t v = get_u16(p);
    entries[k] = (v == kMissingU16) ? kMissing : static_cast<double>(v);
  }
  return DelayMatrix(std::move(labels), std::move(entries));
}

void save_matrix_binary(const DelayMatrix& m, const std::string& path) {
  auto bytes = serialize_matrix(m);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ParseError("write failed for " + path);
}

DelayMatrix load_matrix_binary(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  return parse_matrix(bytes);
}

uint64_t matrix_payload_bytes(uint64_t n) { return 2 * n * n; }

uint64_t matrix_file_bytes(uint64_t n) { return 6 + 4 * n + matrix_payload_bytes(n); }

std::string period_filename(PeriodIndex p) {
  return "period_" + std::to_string(p.day) + "_" + std::to_string(p.hour) + ".dm";
}

void save_series(const MatrixSeries& s, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& m : s.items())
    save_matrix(m, (std::filesystem::path(dir) / period_filename(m.period())).string());
}

MatrixSeries load_series(const std::string& dir) {
  std::vector<std::pair<PeriodIndex, std::string>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    int day, hour;
    if (std::sscanf(name.c_str(), "period_%d_%d.dm", &day, &hour) == 2)
      files.emplace_back(make_period(day, hour), entry.path().string());
  }
  if (files.empty()) throw ParseError("no period_*.dm files in " + dir);
  std::sort(files.begin(), files.end());
  MatrixSeries s;
  for (const auto& [p, path] : files) {
    DelayMatrix m = load_matrix(path);
    m.set_period(p);
    s.append(std::move(m));
  }
  return s;
}

DelayMatrix load_king(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open King file " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  size_t n = rows.size();
  if (n < 2 || rows.front().size() != n)
    throw ParseError(path + ": expected a square matrix of size >= 2");

  std::vector<Asn> labels(n);
  for (size_t i = 0; i < n; ++i) labels[i] = static_cast<Asn>(i + 1);
  std::vector<double> entries(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double us = rows[i][j];
      double ms = (us < 0.0) ? kMissing : us / 1000.0;
      entries[i * n + j] = (i == j) ? 0.0 : ms;
    }
  }
  return DelayMatrix(std::move(labels), std::move(entries));
}

}  // namespace idms

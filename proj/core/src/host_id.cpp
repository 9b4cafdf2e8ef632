#include "idms/host_id.hpp"

#include <cstring>
#include <vector>

#include "idms/errors.hpp"

namespace idms {

namespace {

uint32_t rol(uint32_t x, int k) { return (x << k) | (x >> (32 - k)); }

}  // namespace

std::array<uint8_t, 20> sha1(const uint8_t* data, size_t len) {
  uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                   0xC3D2E1F0u};

  uint64_t total_bits = static_cast<uint64_t>(len) * 8;
  // Message + 0x80 + zero pad + 8-byte length, multiple of 64.
  size_t padded = ((len + 8) / 64 + 1) * 64;
  std::vector<uint8_t> buf(padded, 0);
  std::memcpy(buf.data(), data, len);
  buf[len] = 0x80;
  for (int i = 0; i < 8; ++i)
    buf[padded - 1 - static_cast<size_t>(i)] =
        static_cast<uint8_t>(total_bits >> (8 * i));

  uint32_t w[80];
  for (size_t block = 0; block < padded; block += 64) {
    const uint8_t* p = buf.data() + block;
    for (int t = 0; t < 16; ++t)
      w[t] = (static_cast<uint32_t>(p[4 * t]) << 24) |
             (static_cast<uint32_t>(p[4 * t + 1]) << 16) |
             (static_cast<uint32_t>(p[4 * t + 2]) << 8) |
             static_cast<uint32_t>(p[4 * t + 3]);
    for (int t = 16; t < 80; ++t)
      w[t] = rol(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

    uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int t = 0; t < 80; ++t) {
      uint32_t f, k;
      if (t < 20) {
        f = (b & c) | ((~b) & d);
        k = 0x5A827999u;
      } else if (t < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (t < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      uint32_t tmp = rol(a, 5) + f + e + k + w[t];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  std::array<uint8_t, 20> out{};
  for (int i = 0; i < 5; ++i) {
    out[static_cast<size_t>(4 * i)] = static_cast<uint8_t>(h[i] >> 24);
    out[static_cast<size_t>(4 * i + 1)] = static_cast<uint8_t>(h[i] >> 16);
    out[static_cast<size_t>(4 * i + 2)] = static_cast<uint8_t>(h[i] >> 8);
    out[static_cast<size_t>(4 * i + 3)] = static_cast<uint8_t>(h[i]);
  }
  return out;
}

std::string HostId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(40);
  for (uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

HostId HostId::from_hex(const std::string& s) {
  if (s.size() != 40) throw ParseError("host id hex must be 40 chars");
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParseError("bad hex digit in host id");
  };
  HostId id;
  for (size_t i = 0; i < 20; ++i)
    id.bytes[i] = static_cast<uint8_t>((nibble(s[2 * i]) << 4) | nibble(s[2 * i + 1]));
  return id;
}

HostId make_host_id(Ipv4 ip, Asn asn, uint8_t cn) {
  HostId id;
  id.bytes[0] = cn;
  id.bytes[1] = static_cast<uint8_t>(asn >> 24);
  id.bytes[2] = static_cast<uint8_t>(asn >> 16);
  id.bytes[3] = static_cast<uint8_t>(asn >> 8);
  id.bytes[4] = static_cast<uint8_t>(asn);

  uint8_t ip_bytes[4] = {static_cast<uint8_t>(ip.value >> 24),
                         static_cast<uint8_t>(ip.value >> 16),
                         static_cast<uint8_t>(ip.value >> 8),
                         static_cast<uint8_t>(ip.value)};
  auto digest = sha1(ip_bytes, 4);
  for (size_t i = 0; i < 15; ++i) id.bytes[5 + i] = digest[i];
  return id;
}

}  // namespace idms

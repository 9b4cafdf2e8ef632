#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "idms/asn_table.hpp"

namespace idms {

// 160-bit locality-prefixed node identifier, laid out big-endian as
// country number (8 bits) || ASN (32 bits) || hash of IP (120 bits).
// Hosts in one AS therefore share the top 40 bits and sort together.
struct HostId {
  std::array<uint8_t, 20> bytes{};

  friend auto operator<=>(const HostId&, const HostId&) = default;

  uint8_t cn() const { return bytes[0]; }
  Asn asn() const {
    return (static_cast<Asn>(bytes[1]) << 24) | (static_cast<Asn>(bytes[2]) << 16) |
           (static_cast<Asn>(bytes[3]) << 8) | static_cast<Asn>(bytes[4]);
  }

  std::string hex() const;
  static HostId from_hex(const std::string& s);  // throws ParseError
};

// Deterministic identity: fixed 8/32/120 layout, suffix = truncated SHA-1
// of the 4 address bytes.
HostId make_host_id(Ipv4 ip, Asn asn, uint8_t cn);

// SHA-1 of an arbitrary byte string (20-byte digest).
std::array<uint8_t, 20> sha1(const uint8_t* data, size_t len);

}  // namespace idms

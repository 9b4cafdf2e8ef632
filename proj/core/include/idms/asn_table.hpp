#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idms/delay_matrix.hpp"
#include "idms/errors.hpp"

namespace idms {

// IPv4 address, host byte order internally.
struct Ipv4 {
  uint32_t value = 0;

  friend auto operator<=>(const Ipv4&, const Ipv4&) = default;

  std::string to_string() const;
  static Ipv4 parse(const std::string& dotted);  // throws ParseError
};

inline Ipv4 make_ip(int a, int b, int c, int d) {
  return Ipv4{(static_cast<uint32_t>(a) << 24) | (static_cast<uint32_t>(b) << 16) |
              (static_cast<uint32_t>(c) << 8) | static_cast<uint32_t>(d)};
}

// IP-prefix -> ASN table with longest-prefix-match semantics, plus the
// ASN -> country-number map. Built from static files in place of a live
// BGP feed.
class AsnMappingTable {
 public:
  struct PrefixEntry {
    uint32_t base = 0;  // already masked to `len` bits
    int len = 0;        // [0, 32]
    Asn asn = 0;
  };

  void add_prefix(Ipv4 base, int len, Asn asn);
  void set_cn(Asn asn, uint8_t cn);

  // Longest-prefix match. Throws UnmappedIp when nothing matches.
  Asn asn_of(Ipv4 ip) const;
  // Throws UnmappedIp for an ASN without a country assignment.
  uint8_t cn_of(Asn asn) const;

  bool has_cn(Asn asn) const { return cn_.count(asn) != 0; }
  std::vector<PrefixEntry> prefixes() const;
  const std::map<Asn, uint8_t>& cn_map() const { return cn_; }
  size_t prefix_count() const;

  // File formats: prefix file has lines "A.B.C.D/len ASN"; country file has
  // lines "ASN CN". '#' starts a comment.
  static AsnMappingTable load(const std::string& prefix_path,
                              const std::string& cn_path);
  void save(const std::string& prefix_path, const std::string& cn_path) const;

 private:
  // One map per prefix length so lookup walks lengths longest-first.
  std::map<int, std::map<uint32_t, Asn>> by_len_;
  std::map<Asn, uint8_t> cn_;
};

}  // namespace idms

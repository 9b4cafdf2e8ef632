#include "idms/asn_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace idms {

namespace {

uint32_t mask_of(int len) {
  if (len == 0) return 0;
  return ~uint32_t{0} << (32 - len);
}

}  // namespace

std::string Ipv4::to_string() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", value >> 24, (value >> 16) & 0xff,
                (value >> 8) & 0xff, value & 0xff);
  return buf;
}

Ipv4 Ipv4::parse(const std::string& dotted) {
  unsigned a, b, c, d;
  char tail;
  int got = std::sscanf(dotted.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail);
  if (got != 4 || a > 255 || b > 255 || c > 255 || d > 255)
    throw ParseError("bad IPv4 address '" + dotted + "'");
  return make_ip(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c),
                 static_cast<int>(d));
}

void AsnMappingTable::add_prefix(Ipv4 base, int len, Asn asn) {
  if (len < 0 || len > 32) throw InvariantError("prefix length out of range");
  by_len_[len][base.value & mask_of(len)] = asn;
}

void AsnMappingTable::set_cn(Asn asn, uint8_t cn) { cn_[asn] = cn; }

Asn AsnMappingTable::asn_of(Ipv4 ip) const {
  for (auto it = by_len_.rbegin(); it != by_len_.rend(); ++it) {
    auto hit = it->second.find(ip.value & mask_of(it->first));
    if (hit != it->second.end()) return hit->second;
  }
  throw UnmappedIp("no ASN mapping for " + ip.to_string());
}

uint8_t AsnMappingTable::cn_of(Asn asn) const {
  auto it = cn_.find(asn);
  if (it == cn_.end())
    throw UnmappedIp("no country number for ASN " + std::to_string(asn));
  return it->second;
}

std::vector<AsnMappingTable::PrefixEntry> AsnMappingTable::prefixes() const {
  std::vector<PrefixEntry> out;
  for (const auto& [len, entries] : by_len_)
    for (const auto& [base, asn] : entries)
      out.push_back(PrefixEntry{base, len, asn});
  return out;
}

size_t AsnMappingTable::prefix_count() const {
  size_t n = 0;
  for (const auto& [len, entries] : by_len_) n += entries.size();
  return n;
}

AsnMappingTable AsnMappingTable::load(const std::string& prefix_path,
                                      const std::string& cn_path) {
  AsnMappingTable t;
  std::ifstream pf(prefix_path);
  if (!pf) throw ParseError("cannot open prefix table " + prefix_path);
  std::string line;
  int lineno = 0;
  while (std::getline(pf, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string cidr;
    Asn asn;
    if (!(ss >> cidr >> asn))
      throw ParseError(prefix_path + ":" + std::to_string(lineno) +
                       ": expected 'A.B.C.D/len ASN'");
    auto slash = cidr.find('/');
    if (slash == std::string::npos)
      throw ParseError(prefix_path + ":" + std::to_string(lineno) +
                       ": missing '/len'");
    int len = std::stoi(cidr.substr(slash + 1));
    t.add_prefix(Ipv4::parse(cidr.substr(0, slash)), len, asn);
  }

  std::ifstream cf(cn_path);
  if (!cf) throw ParseError("cannot open country table " + cn_path);
  lineno = 0;
  while (std::getline(cf, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    Asn asn;
    unsigned cn;
    if (!(ss >> asn >> cn) || cn > 255)
      throw ParseError(cn_path + ":" + std::to_string(lineno) +
                       ": expected 'ASN CN'");
    t.set_cn(asn, static_cast<uint8_t>(cn));
  }
  return t;
}

void AsnMappingTable::save(const std::string& prefix_path,
                           const std::string& cn_path) const {
  std::ofstream pf(prefix_path);
  if (!pf) throw ParseError("cannot write " + prefix_path);
  for (const auto& e : prefixes())
    pf << Ipv4{e.base}.to_string() << "/" << e.len << " " << e.asn << "\n";

  std::ofstream cf(cn_path);
  if (!cf) throw ParseError("cannot write " + cn_path);
  for (const auto& [asn, cn] : cn_) cf << asn << " " << static_cast<int>(cn) << "\n";
}

}  // namespace idms

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "idms/asn_table.hpp"
#include "idms/errors.hpp"
#include "idms/rng.hpp"
#include "oracles.hpp"

using namespace idms;

TEST_CASE("ipv4 parse and format") {
  CHECK(Ipv4::parse("10.1.2.3").value == make_ip(10, 1, 2, 3).value);
  CHECK(make_ip(10, 1, 2, 3).to_string() == "10.1.2.3");
  CHECK_THROWS_AS(Ipv4::parse("10.1.2"), ParseError);
  CHECK_THROWS_AS(Ipv4::parse("10.1.2.999"), ParseError);
  CHECK_THROWS_AS(Ipv4::parse("10.1.2.3.4"), ParseError);
}

TEST_CASE("longest prefix match") {
  AsnMappingTable t;
  t.add_prefix(Ipv4::parse("10.0.0.0"), 8, 4837);

  SUBCASE("single prefix") { CHECK(t.asn_of(Ipv4::parse("10.1.2.3")) == 4837); }

  SUBCASE("longest prefix wins") {
    t.add_prefix(Ipv4::parse("10.1.0.0"), 16, 4134);
    CHECK(t.asn_of(Ipv4::parse("10.1.2.3")) == 4134);
    CHECK(t.asn_of(Ipv4::parse("10.2.2.3")) == 4837);
  }

  SUBCASE("no match is an unmapped error") {
    CHECK_THROWS_AS(t.asn_of(Ipv4::parse("192.168.0.1")), UnmappedIp);
    AsnMappingTable empty;
    CHECK_THROWS_AS(empty.asn_of(Ipv4::parse("192.168.0.1")), UnmappedIp);
  }
}

TEST_CASE("lpm equals a brute-force scan over all prefixes") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    AsnMappingTable t;
    int n = 1 + static_cast<int>(rng.below(40));
    for (int i = 0; i < n; ++i) {
      int len = static_cast<int>(rng.below(25));
      uint32_t base = static_cast<uint32_t>(rng.next());
      t.add_prefix(Ipv4{base}, len, static_cast<Asn>(100 + i));
    }
    auto entries = t.prefixes();
    for (int q = 0; q < 200; ++q) {
      Ipv4 ip{static_cast<uint32_t>(rng.next())};
      long expect = idms::testing::oracle_lpm(entries, ip);
      if (expect < 0) {
        CHECK_THROWS_AS(t.asn_of(ip), UnmappedIp);
      } else {
        CHECK(t.asn_of(ip) == static_cast<Asn>(expect));
      }
    }
  }
}

TEST_CASE("country numbers") {
  AsnMappingTable t;
  t.set_cn(4837, 86);
  CHECK(t.cn_of(4837) == 86);
  CHECK_THROWS_AS(t.cn_of(999), UnmappedIp);
}

TEST_CASE("table file round trip") {
  AsnMappingTable t;
  t.add_prefix(Ipv4::parse("10.0.0.0"), 8, 4837);
  t.add_prefix(Ipv4::parse("10.1.0.0"), 16, 4134);
  t.set_cn(4837, 86);
  t.set_cn(4134, 86);

  auto dir = std::filesystem::temp_directory_path() / "idms_table_test";
  std::filesystem::create_directories(dir);
  std::string pfx = (dir / "prefixes.txt").string();
  std::string cn = (dir / "countries.txt").string();
  t.save(pfx, cn);

  AsnMappingTable back = AsnMappingTable::load(pfx, cn);
  CHECK(back.prefix_count() == 2);
  CHECK(back.asn_of(Ipv4::parse("10.1.9.9")) == 4134);
  CHECK(back.cn_of(4837) == 86);

  std::ofstream bad(pfx);
  bad << "10.0.0.0 4837\n";  // missing /len
  bad.close();
  CHECK_THROWS_AS(AsnMappingTable::load(pfx, cn), ParseError);
}

#include <doctest.h>

#include <algorithm>
#include <set>

#include "idms/errors.hpp"
#include "idms/overlay.hpp"
#include "idms/rng.hpp"

using namespace idms;

namespace {

HostId id_from_u64(uint64_t v) {
  HostId id;
  for (int i = 0; i < 8; ++i)
    id.bytes[static_cast<size_t>(19 - i)] = static_cast<uint8_t>(v >> (8 * i));
  return id;
}

std::set<HostId> ids(std::initializer_list<uint64_t> vs) {
  std::set<HostId> out;
  for (uint64_t v : vs) out.insert(id_from_u64(v));
  return out;
}

AsnMappingTable small_table(int n_ases) {
  AsnMappingTable t;
  for (int i = 0; i < n_ases; ++i) {
    t.add_prefix(make_ip(10, 0, i, 0), 24, static_cast<Asn>(100 + i));
    t.set_cn(static_cast<Asn>(100 + i), 1);
  }
  return t;
}

Ipv4 host_ip(int as, int h) { return make_ip(10, 0, as, h); }

}  // namespace

TEST_CASE("assign_sns picks clockwise successors in the AS ring") {
  SUBCASE("spec successor rule") {
    auto picks = assign_sns(id_from_u64(15), ids({10, 20, 30}), 2);
    REQUIRE(picks.size() == 2);
    CHECK(picks[0] == id_from_u64(20));
    CHECK(picks[1] == id_from_u64(30));
  }
  SUBCASE("wraps past the largest id") {
    auto picks = assign_sns(id_from_u64(35), ids({10, 20, 30}), 2);
    CHECK(picks[0] == id_from_u64(10));
    CHECK(picks[1] == id_from_u64(20));
  }
  SUBCASE("degenerate single SN") {
    auto picks = assign_sns(id_from_u64(15), ids({10}), 2);
    REQUIRE(picks.size() == 1);
    CHECK(picks[0] == id_from_u64(10));
  }
  SUBCASE("no SNs is an error") {
    CHECK_THROWS_AS(assign_sns(id_from_u64(15), {}, 2), InvariantError);
  }
}

TEST_CASE("elect_slices") {
  SUBCASE("nine SNs into three slices of three") {
    auto sa = elect_slices(7, ids({1, 2, 3, 4, 5, 6, 7, 8, 9}), 3);
    REQUIRE(sa.slices.size() == 3);
    for (const auto& s : sa.slices) CHECK(s.size() == 3);
    CHECK(sa.as_leader == id_from_u64(1));
    CHECK(sa.slice_leaders[0] == id_from_u64(1));
    CHECK(sa.slice_leaders[1] == id_from_u64(4));
    CHECK(sa.slice_leaders[2] == id_from_u64(7));
  }
  SUBCASE("single SN is both leaders") {
    auto sa = elect_slices(7, ids({42}), 1);
    CHECK(sa.as_leader == id_from_u64(42));
    CHECK(sa.slice_leaders == std::vector<HostId>{id_from_u64(42)});
  }
  SUBCASE("seven SNs into three slices balance 3/2/2") {
    auto sa = elect_slices(7, ids({1, 2, 3, 4, 5, 6, 7}), 3);
    CHECK(sa.slices[0].size() == 3);
    CHECK(sa.slices[1].size() == 2);
    CHECK(sa.slices[2].size() == 2);
  }
  SUBCASE("slice partition covers every SN exactly once") {
    Rng rng(51);
    for (int t = 0; t < 20; ++t) {
      std::set<HostId> sns;
      int m = 1 + static_cast<int>(rng.below(40));
      while (static_cast<int>(sns.size()) < m)
        sns.insert(id_from_u64(rng.below(10000)));
      int k = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(m)));
      auto sa = elect_slices(9, sns, k);

      std::set<HostId> seen;
      size_t lo = sns.size(), hi = 0;
      for (const auto& s : sa.slices) {
        lo = std::min(lo, s.size());
        hi = std::max(hi, s.size());
        for (const auto& id : s) CHECK(seen.insert(id).second);
      }
      CHECK(seen == sns);
      CHECK(hi - lo <= 1);
      // leaders are minima and the AS leader is the global minimum
      CHECK(sa.as_leader == *sns.begin());
      for (size_t s = 0; s < sa.slices.size(); ++s)
        CHECK(sa.slice_leaders[s] == sa.slices[s].front());
    }
  }
  SUBCASE("bad slice counts error") {
    CHECK_THROWS_AS(elect_slices(7, ids({1, 2}), 3), InvariantError);
    CHECK_THROWS_AS(elect_slices(7, ids({1, 2}), 0), InvariantError);
    CHECK_THROWS_AS(elect_slices(7, {}, 1), InvariantError);
  }
  SUBCASE("election is a pure function of the id set") {
    auto a = elect_slices(7, ids({5, 9, 12, 30}), 2);
    auto b = elect_slices(7, ids({5, 9, 12, 30}), 2);
    CHECK(a.as_leader == b.as_leader);
    CHECK(a.slices == b.slices);
  }
}

TEST_CASE("join") {
  Overlay ov(small_table(3), OverlayConfig{2, 0});
  ov.add_bootstrap(make_ip(172, 16, 0, 1));

  SUBCASE("unmapped ip is refused") {
    CHECK_THROWS_AS(ov.join(make_ip(192, 168, 0, 1)), UnmappedIp);
  }

  SUBCASE("first node of an AS is promoted to SN") {
    const NodeState& n = ov.join(host_ip(0, 1));
    CHECK(n.role == Role::Supernode);
    CHECK(n.asn == 100);
    CHECK(n.cn == 1);
    CHECK(ov.sns_in(100).size() == 1);
  }

  SUBCASE("five SNs, k = 2: joining ON gets two distinct same-AS SNs") {
    for (int h = 1; h <= 5; ++h) {
      ov.designate_sn(make_host_id(host_ip(0, h), 100, 1));
      ov.join(host_ip(0, h));
    }
    REQUIRE(ov.sns_in(100).size() == 5);
    const NodeState& on = ov.join(host_ip(0, 6));
    CHECK(on.role == Role::Ordinary);
    REQUIRE(on.associated_sns.size() == 2);
    CHECK(on.associated_sns[0] != on.associated_sns[1]);
    for (const HostId& sn : on.associated_sns) {
      CHECK(sn.asn() == 100);
      const NodeState* server = ov.find(sn);
      REQUIRE(server != nullptr);
      CHECK(server->served_ons.count(on.id) == 1);
    }
    CHECK(on.has_mapping_tables);
  }

  SUBCASE("id collision is rejected") {
    ov.join(host_ip(0, 1));
    CHECK_THROWS_AS(ov.join(host_ip(0, 1)), InvariantError);
  }
}

namespace {

// 1 designated SN set per AS: as 0 gets hosts 1..sns, ONs from 100 up.
Overlay populated(int n_ases, int sns_per_as, int ons_per_as,
                  OverlayConfig cfg = OverlayConfig{2, 0}) {
  Overlay ov(small_table(n_ases), cfg);
  ov.add_bootstrap(make_ip(172, 16, 0, 1));
  for (int as = 0; as < n_ases; ++as)
    for (int h = 1; h <= sns_per_as; ++h)
      ov.designate_sn(make_host_id(host_ip(as, h), static_cast<Asn>(100 + as), 1));
  for (int as = 0; as < n_ases; ++as)
    for (int h = 1; h <= sns_per_as; ++h) ov.join(host_ip(as, h));
  for (int as = 0; as < n_ases; ++as)
    for (int h = 0; h < ons_per_as; ++h) ov.join(host_ip(as, 100 + h));
  return ov;
}

}  // namespace

TEST_CASE("one-hop property: every SN sees the full live SN set") {
  Overlay ov = populated(3, 4, 2);
  std::vector<HostId> all(ov.sn_ring().members());
  CHECK(all.size() == 12);
  for (const auto& [id, node] : ov.nodes()) {
    if (node.role != Role::Supernode) continue;
    REQUIRE(node.sn_table != nullptr);
    CHECK(*node.sn_table == all);
  }

  // after a failure the tables converge to the reduced set
  HostId victim = all[5];
  ov.handle_sn_failure(victim);
  for (const auto& [id, node] : ov.nodes()) {
    if (node.role != Role::Supernode) continue;
    CHECK(node.sn_table->size() == 11);
    CHECK(!std::binary_search(node.sn_table->begin(), node.sn_table->end(), victim));
  }
}

TEST_CASE("locality prefix: same ASN iff same top 40 bits") {
  Overlay ov = populated(3, 2, 3);
  for (const auto& [ida, a] : ov.nodes())
    for (const auto& [idb, b] : ov.nodes()) {
      if (a.role == Role::Bootstrap || b.role == Role::Bootstrap) continue;
      bool same_prefix =
          std::equal(ida.bytes.begin(), ida.bytes.begin() + 5, idb.bytes.begin());
      CHECK(same_prefix == (a.asn == b.asn));
    }
}

TEST_CASE("k-redundancy invariant after joins") {
  Overlay ov = populated(2, 3, 5);
  for (const auto& [id, node] : ov.nodes()) {
    if (node.role != Role::Ordinary) continue;
    CHECK(node.associated_sns.size() == 2);
    std::set<HostId> distinct(node.associated_sns.begin(), node.associated_sns.end());
    CHECK(distinct.size() == 2);
    for (const HostId& sn : node.associated_sns) CHECK(sn.asn() == node.asn);
  }
}

TEST_CASE("sn failure handling") {
  Overlay ov = populated(1, 3, 6);
  Asn asn = 100;
  auto sns = ov.sns_in(asn);
  REQUIRE(sns.size() == 3);

  SUBCASE("orphaned ONs are refilled to k live SNs") {
    HostId victim = *sns.begin();
    ov.handle_sn_failure(victim);
    CHECK(ov.sns_in(asn).size() == 2);
    for (const auto& [id, node] : ov.nodes()) {
      if (node.role != Role::Ordinary) continue;
      REQUIRE(node.associated_sns.size() == 2);
      for (const HostId& sn : node.associated_sns) {
        CHECK(sn != victim);
        CHECK(ov.find(sn) != nullptr);
      }
    }
  }

  SUBCASE("as leader failure re-elects the new minimum") {
    auto before = ov.slice_assignment(asn);
    ov.handle_sn_failure(before.as_leader);
    auto after = ov.slice_assignment(asn);
    CHECK(after.as_leader == *ov.sns_in(asn).begin());
    CHECK(after.as_leader != before.as_leader);
  }

  SUBCASE("non-leader failure keeps the AS leader") {
    auto before = ov.slice_assignment(asn);
    HostId non_leader = *ov.sns_in(asn).rbegin();
    REQUIRE(non_leader != before.as_leader);
    ov.handle_sn_failure(non_leader);
    CHECK(ov.slice_assignment(asn).as_leader == before.as_leader);
  }

  SUBCASE("losing the last SN defers to the promotion rule at next join") {
    for (HostId sn : std::vector<HostId>(sns.begin(), sns.end()))
      ov.handle_sn_failure(sn);
    CHECK(ov.sns_in(asn).empty());
    const NodeState& promoted = ov.join(host_ip(0, 200));
    CHECK(promoted.role == Role::Supernode);
    ov.maintenance_tick();
    for (const auto& [id, node] : ov.nodes()) {
      if (node.role != Role::Ordinary) continue;
      REQUIRE(node.associated_sns.size() == 1);
      CHECK(node.associated_sns[0] == promoted.id);
    }
  }
}

TEST_CASE("partial sn table holds one SN per AS") {
  Overlay ov = populated(4, 2, 1);
  auto partial = ov.partial_sn_table();
  CHECK(partial.size() == 4);
  for (const auto& [asn, sn] : partial) {
    CHECK(ov.sns_in(asn).count(sn) == 1);
    CHECK(sn == *ov.sns_in(asn).begin());
  }
}

TEST_CASE("membership csv shape") {
  Overlay ov = populated(1, 1, 1);
  std::string csv = ov.membership_csv();
  CHECK(csv.find("host_id_hex,role,asn,cn,ip,associated_sns") == 0);
  CHECK(csv.find("bootstrap") != std::string::npos);
  CHECK(csv.find(",sn,") != std::string::npos);
  CHECK(csv.find(",on,") != std::string::npos);
  CHECK(csv.find("10.0.0.100") != std::string::npos);
}

TEST_CASE("on ring routing goes through the node's AS ring") {
  Overlay ov = populated(2, 1, 8);
  const auto& ons = ov.ons_in(100);
  REQUIRE(ons.size() == 8);
  HostId start = *ons.begin();
  auto path = ov.on_ring_route(start, *ons.rbegin());
  for (const HostId& hop : path) CHECK(hop.asn() == 100);
}

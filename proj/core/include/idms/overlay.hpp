#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "idms/asn_table.hpp"
#include "idms/delay_matrix.hpp"
#include "idms/host_id.hpp"
#include "idms/matrix_service.hpp"
#include "idms/ring.hpp"

namespace idms {

enum class Role { Bootstrap, Supernode, Ordinary };

const char* role_name(Role r);

struct NodeState {
  HostId id;
  Role role = Role::Ordinary;
  Ipv4 ip;
  Asn asn = 0;
  uint8_t cn = 0;

  // Ordinary nodes: the k supernodes serving this node, same AS.
  std::vector<HostId> associated_sns;
  // Supernodes: one-hop routing snapshot (all live SNs) and served ONs.
  std::shared_ptr<const std::vector<HostId>> sn_table;
  std::set<HostId> served_ons;

  std::optional<DelayMatrix> udm;  // SNs
  std::optional<Pdm> pdm;          // everyone after join
  bool has_mapping_tables = false;
};

// Slice structure of one AS's supernodes for the broadcast tree. Leaders
// are minimum-id members; the AS leader is also slice 0's leader.
struct SliceAssignment {
  Asn asn = 0;
  int slice_count = 0;
  std::vector<std::vector<HostId>> slices;  // sorted ids, contiguous runs
  std::vector<HostId> slice_leaders;
  HostId as_leader;

  int slice_of(const HostId& id) const;  // -1 when absent
};

// Pure election rule: sort by id, cut into slice_count contiguous runs whose
// sizes differ by at most one, leader = first id of each run, AS leader =
// global first. Throws InvariantError when sns is empty or slice_count is
// out of [1, |sns|].
SliceAssignment elect_slices(Asn asn, const std::set<HostId>& sns, int slice_count);

// The k clockwise successors of `on` in the AS's SN ring (all of them when
// fewer than k exist). Throws InvariantError when no SN is available.
std::vector<HostId> assign_sns(const HostId& on, const std::set<HostId>& sns_in_asn,
                               size_t k);

struct OverlayConfig {
  size_t k_redundancy = 2;
  // Slices per AS; 0 means ceil(sqrt(m)) for an AS with m SNs.
  int slice_count = 0;
};

// Two-tier membership: a bootstrap, one-hop SN tier, per-AS ON rings.
// Mutation happens only from the simulation event loop.
class Overlay {
 public:
  using Config = OverlayConfig;

  Overlay(AsnMappingTable table, Config cfg = Config());

  // The bootstrap is a dedicated host outside the AS tiers.
  const NodeState& add_bootstrap(Ipv4 ip);

  // Nodes this overlay will accept as supernodes (capacity election is
  // delegated to deployment policy). Unlisted joiners become ordinary nodes
  // unless their AS has no SN yet.
  void designate_sn(const HostId& id) { designated_sns_.insert(id); }

  // Join protocol: resolve ASN and CN, build the id, enter the AS (first
  // node of an AS becomes its SN), associate with k same-AS SNs, copy PDM
  // and mapping tables from a serving SN. Throws UnmappedIp.
  const NodeState& join(Ipv4 ip);

  // Failure handling: drop the SN, refill every orphaned ON to k live SNs,
  // refresh one-hop tables; leader changes follow from re-running the
  // election rule.
  void handle_sn_failure(const HostId& failed);
  void handle_on_failure(const HostId& failed);

  // Re-associates ONs that are below min(k, SNs-in-AS) live SNs.
  void maintenance_tick();

  const NodeState* find(const HostId& id) const;
  NodeState* find_mutable(const HostId& id);
  const NodeState& bootstrap() const;
  const std::map<HostId, NodeState>& nodes() const { return nodes_; }

  const std::set<HostId>& sns_in(Asn asn) const;
  const std::set<HostId>& ons_in(Asn asn) const;
  std::vector<Asn> ases_with_sns() const;
  const Ring& sn_ring() const { return sn_ring_; }
  Ring& on_ring(Asn asn);

  SliceAssignment slice_assignment(Asn asn) const;
  int slice_count_for(size_t sn_count) const;

  // Bootstrap's partial-SNs table: the measurement SN for each AS
  // (minimum id, deterministic).
  std::map<Asn, HostId> partial_sn_table() const;

  const AsnMappingTable& mapping_table() const { return table_; }
  size_t sn_count() const;

  // Route on the ON ring of start's AS.
  std::vector<HostId> on_ring_route(const HostId& start, const HostId& key);

  // CSV dump: host_id_hex,role,asn,cn,ip,associated_sns.
  std::string membership_csv() const;

 private:
  void refresh_sn_tables();
  void associate(NodeState& on);
  void reassociate(NodeState& on);

  AsnMappingTable table_;
  Config cfg_;
  std::map<HostId, NodeState> nodes_;
  std::optional<HostId> bootstrap_id_;
  std::set<HostId> designated_sns_;
  std::map<Asn, std::set<HostId>> sns_by_asn_;
  std::map<Asn, std::set<HostId>> ons_by_asn_;
  std::map<Asn, Ring> on_rings_;
  Ring sn_ring_;
  std::shared_ptr<const std::vector<HostId>> sn_snapshot_;
};

}  // namespace idms

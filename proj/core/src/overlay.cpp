#include "idms/overlay.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idms/errors.hpp"

namespace idms {

const char* role_name(Role r) {
  switch (r) {
    case Role::Bootstrap: return "bootstrap";
    case Role::Supernode: return "sn";
    case Role::Ordinary: return "on";
  }
  return "?";
}

int SliceAssignment::slice_of(const HostId& id) const {
  for (size_t s = 0; s < slices.size(); ++s)
    if (std::binary_search(slices[s].begin(), slices[s].end(), id))
      return static_cast<int>(s);
  return -1;
}

SliceAssignment elect_slices(Asn asn, const std::set<HostId>& sns, int slice_count) {
  if (sns.empty()) throw InvariantError("elect_slices with no SNs");
  int m = static_cast<int>(sns.size());
  if (slice_count < 1 || slice_count > m)
    throw InvariantError("slice count must be in [1, " + std::to_string(m) + "]");

  std::vector<HostId> sorted(sns.begin(), sns.end());
  SliceAssignment out;
  out.asn = asn;
  out.slice_count = slice_count;
  out.as_leader = sorted.front();

  int base = m / slice_count;
  int extra = m % slice_count;  // first `extra` slices get one more
  size_t pos = 0;
  for (int s = 0; s < slice_count; ++s) {
    int len = base + (s < extra ? 1 : 0);
    std::vector<HostId> slice(sorted.begin() + static_cast<long>(pos),
                              sorted.begin() + static_cast<long>(pos) + len);
    pos += static_cast<size_t>(len);
    out.slice_leaders.push_back(slice.front());
    out.slices.push_back(std::move(slice));
  }
  return out;
}

std::vector<HostId> assign_sns(const HostId& on, const std::set<HostId>& sns_in_asn,
                               size_t k) {
  if (sns_in_asn.empty()) throw InvariantError("no SN available in AS");
  Ring ring(std::vector<HostId>(sns_in_asn.begin(), sns_in_asn.end()));
  auto picks = ring.successors_after(on, k);
  if (picks.empty()) picks.push_back(*sns_in_asn.begin());
  return picks;
}

Overlay::Overlay(AsnMappingTable table, Config cfg)
    : table_(std::move(table)), cfg_(cfg) {
  sn_snapshot_ = std::make_shared<const std::vector<HostId>>();
}

const NodeState& Overlay::add_bootstrap(Ipv4 ip) {
  NodeState b;
  b.ip = ip;
  b.role = Role::Bootstrap;
  b.id = make_host_id(ip, 0, 0);
  b.has_mapping_tables = true;
  bootstrap_id_ = b.id;
  return nodes_.emplace(b.id, std::move(b)).first->second;
}

const NodeState& Overlay::join(Ipv4 ip) {
  if (!bootstrap_id_) throw InvariantError("overlay has no bootstrap");
  Asn asn = table_.asn_of(ip);  // throws UnmappedIp: join refused
  uint8_t cn = table_.cn_of(asn);

  NodeState node;
  node.ip = ip;
  node.asn = asn;
  node.cn = cn;
  node.id = make_host_id(ip, asn, cn);
  if (nodes_.count(node.id))
    throw InvariantError("id collision on join for " + ip.to_string());

  auto& sns = sns_by_asn_[asn];
  bool become_sn = sns.empty() || designated_sns_.count(node.id) != 0;
  if (become_sn) {
    node.role = Role::Supernode;
    sns.insert(node.id);
    sn_ring_.insert(node.id);
    // New SN copies tables and the current PDM from the bootstrap side.
    node.has_mapping_tables = true;
    auto [it, ok] = nodes_.emplace(node.id, std::move(node));
    refresh_sn_tables();
    return it->second;
  }

  node.role = Role::Ordinary;
  ons_by_asn_[asn].insert(node.id);
  on_rings_[asn].insert(node.id);
  associate(node);
  auto [it, ok] = nodes_.emplace(node.id, std::move(node));
  for (const HostId& sn : it->second.associated_sns)
    nodes_.at(sn).served_ons.insert(it->first);
  return it->second;
}

void Overlay::associate(NodeState& on) {
  on.associated_sns = assign_sns(on.id, sns_by_asn_.at(on.asn), cfg_.k_redundancy);
  // The serving SN hands over PDM and both mapping tables.
  const NodeState& serving = nodes_.at(on.associated_sns.front());
  if (serving.pdm) on.pdm = serving.pdm;
  on.has_mapping_tables = true;
}

void Overlay::handle_sn_failure(const HostId& failed) {
  auto it = nodes_.find(failed);
  if (it == nodes_.end() || it->second.role != Role::Supernode) return;
  Asn asn = it->second.asn;

  sns_by_asn_[asn].erase(failed);
  sn_ring_.erase(failed);
  std::set<HostId> orphans = std::move(it->second.served_ons);
  nodes_.erase(it);
  refresh_sn_tables();

  const auto& live_sns = sns_by_asn_[asn];
  for (const HostId& on_id : orphans) {
    auto on_it = nodes_.find(on_id);
    if (on_it == nodes_.end()) continue;
    auto& assoc = on_it->second.associated_sns;
    assoc.erase(std::remove(assoc.begin(), assoc.end(), failed), assoc.end());
    if (live_sns.empty()) continue;  // promotion happens at the next join
    reassociate(on_it->second);
  }
}

void Overlay::reassociate(NodeState& on) {
  for (const HostId& sn : on.associated_sns) {
    auto sn_it = nodes_.find(sn);
    if (sn_it != nodes_.end()) sn_it->second.served_ons.erase(on.id);
  }
  on.associated_sns = assign_sns(on.id, sns_by_asn_.at(on.asn), cfg_.k_redundancy);
  for (const HostId& sn : on.associated_sns)
    nodes_.at(sn).served_ons.insert(on.id);
}

void Overlay::handle_on_failure(const HostId& failed) {
  auto it = nodes_.find(failed);
  if (it == nodes_.end() || it->second.role != Role::Ordinary) return;
  Asn asn = it->second.asn;
  ons_by_asn_[asn].erase(failed);
  on_rings_[asn].erase(failed);
  for (const HostId& sn : it->second.associated_sns) {
    auto sn_it = nodes_.find(sn);
    if (sn_it != nodes_.end()) sn_it->second.served_ons.erase(failed);
  }
  nodes_.erase(it);
}

void Overlay::maintenance_tick() {
  for (auto& [id, node] : nodes_) {
    if (node.role != Role::Ordinary) continue;
    const auto& sns = sns_by_asn_[node.asn];
    if (sns.empty()) continue;
    size_t want = std::min(cfg_.k_redundancy, sns.size());
    if (node.associated_sns.size() >= want) continue;
    reassociate(node);
  }
}

void Overlay::refresh_sn_tables() {
  sn_snapshot_ = std::make_shared<const std::vector<HostId>>(sn_ring_.members());
  for (auto& [id, node] : nodes_)
    if (node.role == Role::Supernode) node.sn_table = sn_snapshot_;
}

const NodeState* Overlay::find(const HostId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

NodeState* Overlay::find_mutable(const HostId& id) {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const NodeState& Overlay::bootstrap() const {
  if (!bootstrap_id_) throw InvariantError("overlay has no bootstrap");
  return nodes_.at(*bootstrap_id_);
}

const std::set<HostId>& Overlay::sns_in(Asn asn) const {
  static const std::set<HostId> kEmpty;
  auto it = sns_by_asn_.find(asn);
  return it == sns_by_asn_.end() ? kEmpty : it->second;
}

const std::set<HostId>& Overlay::ons_in(Asn asn) const {
  static const std::set<HostId> kEmpty;
  auto it = ons_by_asn_.find(asn);
  return it == ons_by_asn_.end() ? kEmpty : it->second;
}

std::vector<Asn> Overlay::ases_with_sns() const {
  std::vector<Asn> out;
  for (const auto& [asn, sns] : sns_by_asn_)
    if (!sns.empty()) out.push_back(asn);
  return out;
}

Ring& Overlay::on_ring(Asn asn) { return on_rings_[asn]; }

int Overlay::slice_count_for(size_t sn_count) const {
  if (cfg_.slice_count > 0)
    return std::min<int>(cfg_.slice_count, static_cast<int>(sn_count));
  int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(sn_count))));
  return std::max(1, std::min<int>(k, static_cast<int>(sn_count)));
}

SliceAssignment Overlay::slice_assignment(Asn asn) const {
  const auto& sns = sns_in(asn);
  return elect_slices(asn, sns, slice_count_for(sns.size()));
}

std::map<Asn, HostId> Overlay::partial_sn_table() const {
  std::map<Asn, HostId> out;
  for (const auto& [asn, sns] : sns_by_asn_)
    if (!sns.empty()) out.emplace(asn, *sns.begin());
  return out;
}

size_t Overlay::sn_count() const { return sn_ring_.size(); }

std::vector<HostId> Overlay::on_ring_route(const HostId& start, const HostId& key) {
  const NodeState* node = find(start);
  if (!node || node->role != Role::Ordinary)
    throw InvariantError("on_ring_route start must be an ordinary node");
  return on_rings_[node->asn].route(start, key);
}

std::string Overlay::membership_csv() const {
  std::ostringstream out;
  out << "host_id_hex,role,asn,cn,ip,associated_sns\n";
  for (const auto& [id, node] : nodes_) {
    out << id.hex() << "," << role_name(node.role) << "," << node.asn << ","
        << static_cast<int>(node.cn) << "," << node.ip.to_string() << ",";
    for (size_t i = 0; i < node.associated_sns.size(); ++i)
      out << (i ? ";" : "") << node.associated_sns[i].hex();
    out << "\n";
  }
  return out.str();
}

}  // namespace idms

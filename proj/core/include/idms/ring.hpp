#pragma once

#include <vector>

#include "idms/host_id.hpp"

namespace idms {

// 160-bit ring arithmetic on HostIds (mod 2^160).
namespace ring_math {

// (y - x) mod 2^160: clockwise distance from x to y.
HostId clockwise_distance(const HostId& x, const HostId& y);
// (x + 2^bit) mod 2^160.
HostId add_pow2(const HostId& x, int bit);

}  // namespace ring_math

// A sorted identifier ring with Chord-style successor ownership: the owner
// of a key is the first member id >= key, wrapping. Finger shortcuts at
// halving offsets give O(log N) greedy routes; fingers are recomputed from
// the membership snapshot rather than maintained incrementally.
class Ring {
 public:
  Ring() = default;
  explicit Ring(std::vector<HostId> members);

  void insert(const HostId& id);
  void erase(const HostId& id);
  bool contains(const HostId& id) const;
  size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<HostId>& members() const { return members_; }

  // First member id >= key, wrapping past the largest id.
  HostId successor(const HostId& key) const;
  // First member id strictly greater than `id`, wrapping: used to walk the
  // ring clockwise from a member.
  HostId next_after(const HostId& id) const;

  // The k clockwise successors strictly after `id` (all members if fewer
  // than k exist); never includes `id` itself.
  std::vector<HostId> successors_after(const HostId& id, size_t k) const;

  // Greedy clockwise route from a member to the key's successor, using
  // ceil(log2 N) halving fingers plus the immediate successor. Returns the
  // hop sequence excluding the start node.
  std::vector<HostId> route(const HostId& start, const HostId& key) const;

 private:
  std::vector<HostId> members_;  // sorted ascending
};

}  // namespace idms

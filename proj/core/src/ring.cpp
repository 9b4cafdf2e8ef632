#include "idms/ring.hpp"

#include <algorithm>
#include <cmath>

#include "idms/errors.hpp"

namespace idms {

namespace ring_math {

HostId clockwise_distance(const HostId& x, const HostId& y) {
  HostId out;
  int borrow = 0;
  for (int i = 19; i >= 0; --i) {
    int d = static_cast<int>(y.bytes[static_cast<size_t>(i)]) -
            static_cast<int>(x.bytes[static_cast<size_t>(i)]) - borrow;
    borrow = d < 0;
    if (borrow) d += 256;
    out.bytes[static_cast<size_t>(i)] = static_cast<uint8_t>(d);
  }
  return out;  // wraparound borrow out of the top byte is discarded (mod 2^160)
}

HostId add_pow2(const HostId& x, int bit) {
  HostId out = x;
  int byte_idx = 19 - bit / 8;
  int carry = 1 << (bit % 8);
  for (int i = byte_idx; i >= 0 && carry; --i) {
    int v = out.bytes[static_cast<size_t>(i)] + carry;
    out.bytes[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
    carry = v >> 8;
  }
  return out;
}

}  // namespace ring_math

Ring::Ring(std::vector<HostId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

void Ring::insert(const HostId& id) {
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  if (it == members_.end() || *it != id) members_.insert(it, id);
}

void Ring::erase(const HostId& id) {
  auto it = std::lower_bound(members_.begin(), members_.end(), id);
  if (it != members_.end() && *it == id) members_.erase(it);
}

bool Ring::contains(const HostId& id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

HostId Ring::successor(const HostId& key) const {
  if (members_.empty()) throw InvariantError("successor on an empty ring");
  auto it = std::lower_bound(members_.begin(), members_.end(), key);
  return it == members_.end() ? members_.front() : *it;
}

HostId Ring::next_after(const HostId& id) const {
  if (members_.empty()) throw InvariantError("next_after on an empty ring");
  auto it = std::upper_bound(members_.begin(), members_.end(), id);
  return it == members_.end() ? members_.front() : *it;
}

std::vector<HostId> Ring::successors_after(const HostId& id, size_t k) const {
  std::vector<HostId> out;
  if (members_.empty()) return out;
  size_t want = std::min(k, members_.size() - (contains(id) ? 1 : 0));
  HostId cur = id;
  while (out.size() < want) {
    cur = next_after(cur);
    if (cur == id) break;
    out.push_back(cur);
  }
  return out;
}

std::vector<HostId> Ring::route(const HostId& start, const HostId& key) const {
  if (!contains(start)) throw InvariantError("route start is not a ring member");

  HostId target = successor(key);
  std::vector<HostId> path;
  if (target == start) return path;

  int finger_bits = static_cast<int>(
      std::ceil(std::log2(static_cast<double>(std::max<size_t>(members_.size(), 2)))));

  HostId cur = start;
  while (cur != target) {
    // Immediate successor always makes progress; fingers may jump farther.
    HostId next = next_after(cur);
    if (next == target) {
      path.push_back(next);
      break;
    }
    HostId dist_to_target = ring_math::clockwise_distance(cur, target);
    HostId best = next;
    HostId best_dist = ring_math::clockwise_distance(cur, next);
    for (int j = 1; j <= finger_bits; ++j) {
      HostId probe = ring_math::add_pow2(cur, 160 - j);
      HostId finger = successor(probe);
      if (finger == cur) continue;
      HostId d = ring_math::clockwise_distance(cur, finger);
      // Keep the farthest hop that does not pass the target.
      if (d < dist_to_target && best_dist < d) {
        best = finger;
        best_dist = d;
      }
    }
    if (ring_math::clockwise_distance(cur, best) >= dist_to_target) best = next;
    path.push_back(best);
    cur = best;
  }
  return path;
}

}  // namespace idms

#pragma once

#include <compare>
#include <string>

#include "idms/errors.hpp"

namespace idms {

// One measurement period: a (day, hour-of-day) pair, ordered lexicographically.
struct PeriodIndex {
  int day = 0;   // >= 0
  int hour = 0;  // [0, 24)

  friend auto operator<=>(const PeriodIndex&, const PeriodIndex&) = default;

  std::string to_string() const {
    return "day " + std::to_string(day) + " hour " + std::to_string(hour);
  }
};

inline PeriodIndex make_period(int day, int hour) {
  if (day < 0) throw InvariantError("period day must be >= 0");
  if (hour < 0 || hour >= 24) throw InvariantError("period hour must be in [0,24)");
  return PeriodIndex{day, hour};
}

// Consecutive periods are one hour apart.
inline PeriodIndex next_period(PeriodIndex p) {
  ++p.hour;
  if (p.hour == 24) {
    p.hour = 0;
    ++p.day;
  }
  return p;
}

inline int periods_between(PeriodIndex older, PeriodIndex newer) {
  return (newer.day * 24 + newer.hour) - (older.day * 24 + older.hour);
}

}  // namespace idms

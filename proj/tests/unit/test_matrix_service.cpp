#include <doctest.h>

#include <cmath>

#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"
#include "idms/matrix_service.hpp"
#include "idms/rng.hpp"
#include "oracles.hpp"

using namespace idms;
using namespace idms::testing;

namespace {

DelayMatrix two_by_two(double ab, double ba, PeriodIndex p = {}) {
  return DelayMatrix({1, 2}, {0, ab, ba, 0}, p);
}

MatrixSeries series_at_hour(const std::vector<double>& link_values, int hour) {
  MatrixSeries s;
  int day = 0;
  for (double v : link_values)
    s.append(two_by_two(v, v + 1, {day++, hour}));
  return s;
}

}  // namespace

TEST_CASE("pdm median rule") {
  SUBCASE("sources 51, 55, 63 give 55") {
    Pdm pdm = build_pdm(series_at_hour({51, 55, 63}, 5), 5);
    CHECK(pdm.matrix.lookup(1, 2) == 55.0);
    CHECK(pdm.hour == 5);
    CHECK(pdm.source_days == std::vector<int>{0, 1, 2});
  }
  SUBCASE("even count averages the middles: 50, 60 give 55") {
    Pdm pdm = build_pdm(series_at_hour({50, 60}, 5), 5);
    CHECK(pdm.matrix.lookup(1, 2) == 55.0);
  }
  SUBCASE("single source is the identity") {
    Pdm pdm = build_pdm(series_at_hour({42}, 7), 7);
    CHECK(pdm.matrix.lookup(1, 2) == 42.0);
    CHECK(pdm.matrix.lookup(2, 1) == 43.0);
  }
  SUBCASE("no matrices at the hour is an error") {
    CHECK_THROWS_AS(build_pdm(series_at_hour({42}, 7), 8), InvariantError);
  }
  SUBCASE("identical sources reproduce the matrix") {
    Rng rng(31);
    DelayMatrix base = random_matrix(rng, 8);
    MatrixSeries s;
    for (int d = 0; d < 5; ++d)
      s.append(DelayMatrix(base.labels(), base.raw_entries(), {d, 9}));
    Pdm pdm = build_pdm(s, 9);
    CHECK(pdm.matrix.raw_entries() == base.raw_entries());
  }
  SUBCASE("missing entries follow the majority-blocking rule") {
    MatrixSeries s;
    s.append(two_by_two(kMissing, 10, {0, 5}));
    s.append(two_by_two(kMissing, 20, {1, 5}));
    s.append(two_by_two(70, 30, {2, 5}));
    Pdm pdm = build_pdm(s, 5);
    // 2 of 3 missing blocks the entry; 0 of 3 missing medians normally.
    CHECK(pdm.matrix.missing(0, 1));
    CHECK(pdm.matrix.lookup(2, 1) == 20.0);

    // exactly half missing does not block: median of the non-missing values
    MatrixSeries h;
    h.append(two_by_two(kMissing, 10, {0, 5}));
    h.append(two_by_two(70, 20, {1, 5}));
    CHECK(build_pdm(h, 5).matrix.lookup(1, 2) == 70.0);
  }
  SUBCASE("median monotonicity: adding a larger day never lowers entries") {
    Rng rng(32);
    DelayMatrix base = random_matrix(rng, 6);
    MatrixSeries s;
    for (int d = 0; d < 3; ++d) {
      std::vector<double> e = base.raw_entries();
      for (auto& v : e)
        if (!is_missing(v) && v != 0) v += rng.uniform(0, 5);
      s.append(DelayMatrix(base.labels(), e, {d, 5}));
    }
    Pdm before = build_pdm(s, 5);
    std::vector<double> big = base.raw_entries();
    for (auto& v : big)
      if (!is_missing(v) && v != 0) v += 1000;
    s.append(DelayMatrix(base.labels(), big, {3, 5}));
    Pdm after = build_pdm(s, 5);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (i != j) CHECK(after.matrix.raw(i, j) >= before.matrix.raw(i, j));
  }
}

TEST_CASE("delta extraction") {
  DelayMatrix old_m = two_by_two(50, 50, {0, 5});

  SUBCASE("identical matrices give an empty delta") {
    CHECK(delta(old_m, old_m, 20).empty());
  }
  SUBCASE("only changes above the threshold are kept") {
    DelayMatrix moved = two_by_two(80, 50, {0, 5});
    MatrixDelta d = delta(old_m, moved, 20);
    REQUIRE(d.entries.size() == 1);
    CHECK(d.entries[0].row == 1);
    CHECK(d.entries[0].col == 2);
    CHECK(d.entries[0].value == 80.0);
    CHECK(delta(old_m, two_by_two(60, 50), 20).empty());  // 10 <= 20
  }
  SUBCASE("missing-status changes always count") {
    DelayMatrix gone = two_by_two(kMissing, 50, {0, 5});
    MatrixDelta d = delta(old_m, gone, 1000);
    REQUIRE(d.entries.size() == 1);
    CHECK(is_missing(d.entries[0].value));
  }
  SUBCASE("label mismatch is an error") {
    DelayMatrix other({1, 3}, {0, 50, 50, 0});
    CHECK_THROWS_AS(delta(old_m, other, 0), LabelMismatch);
  }
}

TEST_CASE("apply_delta") {
  DelayMatrix old_m = two_by_two(50, 60, {0, 5});

  SUBCASE("empty delta changes nothing") {
    MatrixDelta d;
    d.base = old_m.period();
    CHECK(apply_delta(old_m, d) == old_m);
  }
  SUBCASE("threshold-0 round trip is exact") {
    Rng rng(33);
    for (int t = 0; t < 20; ++t) {
      DelayMatrix a = random_matrix(rng, 10, 0.1);
      DelayMatrix b = perturbed_matrix(rng, a, 30, 0.2);
      CHECK(apply_delta(a, delta(a, b, 0)).raw_entries() == b.raw_entries());
    }
  }
  SUBCASE("with a threshold, the result differs from new only below it") {
    Rng rng(34);
    DelayMatrix a = random_matrix(rng, 12);
    DelayMatrix b = perturbed_matrix(rng, a, 40, 0.0);
    double threshold = 15;
    DelayMatrix patched = apply_delta(a, delta(a, b, threshold));
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        if (i == j) continue;
        if (patched.raw(i, j) != b.raw(i, j))
          CHECK(std::fabs(b.raw(i, j) - a.raw(i, j)) <= threshold);
      }
  }
  SUBCASE("unknown asn in the delta is an error") {
    MatrixDelta d;
    d.base = old_m.period();
    d.entries.push_back({9, 1, 5.0});
    CHECK_THROWS_AS(apply_delta(old_m, d), UnknownAsn);
  }
}

TEST_CASE("delta wire format") {
  MatrixDelta d;
  d.base = {3, 21};
  d.entries.push_back({4134, 4837, 120.0});
  d.entries.push_back({4837, 4134, kMissing});

  auto bytes = serialize_delta(d);
  REQUIRE(bytes.size() == delta_wire_bytes(2));
  CHECK(bytes[0] == 'I');
  CHECK(bytes[3] == '1');

  MatrixDelta back = parse_delta(bytes);
  CHECK(back.base == d.base);
  REQUIRE(back.entries.size() == 2);
  CHECK(back.entries[0].row == 4134);
  CHECK(back.entries[0].value == 120.0);
  CHECK(is_missing(back.entries[1].value));

  SUBCASE("delta beats the full matrix below about a fifth of the entries") {
    // 10 bytes per delta entry vs 2 per matrix entry: the crossover sits at
    // (2n^2 + 4n - 5) / 10 changed entries.
    for (uint64_t n : {16ull, 64ull, 256ull, 555ull}) {
      uint64_t crossover = (2 * n * n + 4 * n - 5) / 10;
      CHECK(delta_wire_bytes(crossover) <= matrix_file_bytes(n));
      CHECK(delta_wire_bytes(crossover + 1) > matrix_file_bytes(n));
    }
  }
}

TEST_CASE("estimate_distance") {
  DelayMatrix m({100, 200}, {0, 50, 50, 0});
  HostId a1 = make_host_id(make_ip(10, 0, 0, 1), 100, 1);
  HostId a2 = make_host_id(make_ip(10, 0, 0, 2), 100, 1);
  HostId b1 = make_host_id(make_ip(10, 1, 0, 1), 200, 1);

  CHECK(estimate_distance(a1, a2, m, 10.0) == 10.0);  // same AS
  CHECK(estimate_distance(a1, b1, m, 10.0) == 50.0);  // matrix lookup
  CHECK(estimate_distance(a1, a1, m, 10.0) == 0.0);   // self overrides c_intra

  HostId unknown = make_host_id(make_ip(10, 2, 0, 1), 999, 1);
  CHECK_THROWS_AS(estimate_distance(a1, unknown, m, 10.0), UnknownAsn);

  DelayMatrix gap({100, 200}, {0, kMissing, 50, 0});
  CHECK_FALSE(estimate_distance(a1, b1, gap, 10.0).has_value());
}

#include <doctest.h>

#include "idms/costmodel.hpp"
#include "idms/errors.hpp"

using namespace idms;

TEST_CASE("construction formulas") {
  CHECK(construction_messages(555) == 617160);  // 2 * 555 * 556
  CHECK(construction_messages(5) == 60);
  CHECK(construction_messages(2) == 12);
  // L=2, m=20, b=40: 3*2*60 + 2*2*60*1 + 2*(40 + 20*1) = 360 + 240 + 120
  CHECK(construction_bytes(2, 20, 40) == 720);
}

TEST_CASE("broadcast formulas") {
  CHECK(broadcast_messages(10000, 0.01) == 200);
  // Np(m+b) + Npzq with z = 2 * 555^2: 100*60 + 100*616050*0.1
  CHECK(broadcast_bytes(10000, 0.01, 20, 40, 2 * 555 * 555, 0.1) ==
        doctest::Approx(6166500.0));
  CHECK(broadcast_bytes(10000, 0.01, 20, 40, 2 * 555 * 555, 0.0) ==
        doctest::Approx(100.0 * 60.0));  // q = 0 leaves only Np(m+b)
}

TEST_CASE("phoenix formulas") {
  CHECK(phoenix_messages(10000) == 3840000);
  CHECK(phoenix_round_messages(10) == 640);
  CHECK(phoenix_bytes(1, 20, 40) == 23040);  // 384 * 60
  CHECK(phoenix_messages(1) == 6 * phoenix_round_messages(1));
}

TEST_CASE("storage arithmetic") {
  CHECK(storage_bytes(555, 1) == 616050 + 6 + 4 * 555);
  CHECK(storage_bytes(555, 24) == 24 * (616050 + 6 + 4 * 555));
  CHECK(storage_bytes(2, 1) == 8 + 6 + 8);  // 2L^2 payload + header
}

TEST_CASE("outputs strictly increase in L and N") {
  uint64_t prev_msgs = 0, prev_bytes = 0;
  for (uint64_t L : {2ull, 5ull, 20ull, 50ull, 100ull, 555ull}) {
    CHECK(construction_messages(L) > prev_msgs);
    CHECK(construction_bytes(L, 20, 40) > prev_bytes);
    prev_msgs = construction_messages(L);
    prev_bytes = construction_bytes(L, 20, 40);
  }
  uint64_t prev_p = 0;
  for (uint64_t N : {10ull, 100ull, 10000ull}) {
    CHECK(phoenix_messages(N) > prev_p);
    CHECK(broadcast_messages(N * 100, 0.01) > 0);
    prev_p = phoenix_messages(N);
  }
}

TEST_CASE("figure-style table keeps the ordering idms << phoenix") {
  CostParams base;
  std::string csv = cost_table_csv(base, {50, 100, 200, 555});
  CHECK(csv.find("L,N,idms_msgs,idms_bytes,phoenix_msgs,phoenix_bytes") == 0);
  // four data rows, header excluded
  size_t rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 5);

  for (uint64_t L : {50ull, 100ull, 200ull, 555ull}) {
    uint64_t idms = construction_messages(L) + broadcast_messages(10000, 0.01);
    CHECK(idms < phoenix_messages(10000));
  }
  // the concrete column values
  CHECK(construction_messages(50) == 5100);
  CHECK(construction_messages(100) == 20200);
  CHECK(construction_messages(200) == 80400);
}

TEST_CASE("parameter validation") {
  CostParams p;
  p.as_count = 1;
  CHECK_THROWS_AS(p.validate(), InvariantError);
  p = CostParams{};
  p.sn_ratio = 0;
  CHECK_THROWS_AS(p.validate(), InvariantError);
  p = CostParams{};
  p.update_fraction = 1.5;
  CHECK_THROWS_AS(p.validate(), InvariantError);
  p = CostParams{};
  p.host_count = 10;
  p.sn_ratio = 0.01;  // Np < 1
  CHECK_THROWS_AS(p.validate(), InvariantError);
  CHECK(CostParams{}.z() == 2 * 555 * 555);
}

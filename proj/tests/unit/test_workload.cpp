#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "idms/errors.hpp"
#include "idms/matrix_io.hpp"
#include "idms/metrics.hpp"
#include "idms/workload.hpp"

using namespace idms;

namespace {

WorkloadConfig small_config(uint64_t seed = 1) {
  WorkloadConfig cfg;
  cfg.n_ases = 12;
  cfg.hosts_per_as_min = 2;
  cfg.hosts_per_as_max = 4;
  cfg.n_isp_groups = 3;
  cfg.days = 2;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("generate: shape and determinism") {
  WorkloadConfig cfg = small_config();
  Workload w = generate(cfg);

  SUBCASE("24 * days matrices with identical labels") {
    CHECK(w.series.size() == 48);
    for (size_t i = 0; i < w.series.size(); ++i)
      CHECK(w.series[i].labels() == w.series[0].labels());
    CHECK(w.series[0].labels().size() == 12);
  }
  SUBCASE("series equals the ground truth sampled per period") {
    const DelayMatrix* m = w.series.find({1, 21});
    REQUIRE(m != nullptr);
    DelayMatrix direct = w.truth.matrix_at({1, 21});
    CHECK(m->raw_entries() == direct.raw_entries());
  }
  SUBCASE("same seed reproduces everything") {
    Workload again = generate(cfg);
    CHECK(again.series[7].raw_entries() == w.series[7].raw_entries());
    CHECK(again.hosts.size() == w.hosts.size());
    CHECK(again.congested_pairs == w.congested_pairs);
  }
  SUBCASE("hosts resolve through the emitted mapping table") {
    for (const HostInfo& h : w.hosts) {
      CHECK(w.table.asn_of(h.ip) == h.asn);
      CHECK(w.table.cn_of(h.asn) == h.cn);
      CHECK(h.id == make_host_id(h.ip, h.asn, h.cn));
    }
  }
}

TEST_CASE("generate: delay-space properties") {
  Workload w = generate(small_config(3));
  int days = w.config.days;

  SUBCASE("every day's least-congested hour has a TIV; last day also a PTIV") {
    for (int d = 0; d < days; ++d)
      CHECK(has_tiv(*w.series.find({d, 5}), 0.0));
    CHECK(has_tiv(*w.series.find({days - 1, 5}), 40.0));
    CHECK(has_tiv(*w.series.find({days - 1, 21}), 40.0));
  }

  SUBCASE("same-hour cross-day AE never exceeds the noise bound") {
    for (int h : {5, 13, 21}) {
      SimilarityReport rep = matrix_similarity(*w.series.find({0, h}), *w.series.find({1, h}));
      for (double ae : rep.ae) CHECK(ae <= w.config.day_noise_bound_ms);
      // strictly-below fraction at a hair above the bound
      CHECK(rep.fraction_ae_below(w.config.day_noise_bound_ms + 1e-9) == 1.0);
    }
  }

  SUBCASE("peak hour mean exceeds trough hour mean when pairs are congested") {
    REQUIRE_FALSE(w.congested_pairs.empty());
    auto mean_of = [](const DelayMatrix& m) {
      double sum = 0;
      size_t k = 0;
      for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
          if (i != j) {
            sum += m.raw(i, j);
            ++k;
          }
      return sum / static_cast<double>(k);
    };
    CHECK(mean_of(*w.series.find({0, 21})) > mean_of(*w.series.find({0, 5})));
  }

  SUBCASE("congested links carry factors above 1 at peak, exactly 1 at trough") {
    for (const auto& [a, b] : w.congested_pairs) {
      int i = w.series[0].index_of(a);
      int j = w.series[0].index_of(b);
      CHECK(w.truth.factor(i, j, 21) > 1.0);
      CHECK(w.truth.factor(i, j, 5) == 1.0);
      CHECK(w.truth.is_congested(i, j));
    }
  }

  SUBCASE("intra-AS host pairs stay below the bound") {
    std::map<Asn, std::vector<const HostInfo*>> by_as;
    for (const HostInfo& h : w.hosts) by_as[h.asn].push_back(&h);
    for (const auto& [asn, hosts] : by_as)
      for (const HostInfo* a : hosts)
        for (const HostInfo* b : hosts) {
          if (a->id == b->id) continue;
          double d = w.truth.rtt(*a, *b, {0, 21});
          CHECK(d < w.config.intra_as_bound_ms);
          CHECK(d > 0);
        }
  }

  SUBCASE("zero noise makes same-hour days identical") {
    WorkloadConfig cfg = small_config(4);
    cfg.day_noise_bound_ms = 0;
    Workload quiet = generate(cfg);
    CHECK(quiet.series.find({0, 9})->raw_entries() ==
          quiet.series.find({1, 9})->raw_entries());
  }
}

TEST_CASE("generate: config validation") {
  WorkloadConfig cfg = small_config();
  SUBCASE("n_ases below 3 cannot satisfy the TIV requirement") {
    cfg.n_ases = 2;
    CHECK_THROWS_WITH_AS(generate(cfg), doctest::Contains("unsatisfiable"),
                         InvariantError);
  }
  SUBCASE("intra bound must stay below the inter-AS base") {
    cfg.intra_as_bound_ms = 25;
    cfg.base_delay_min_ms = 20;
    CHECK_THROWS_WITH_AS(generate(cfg), doctest::Contains("intra_as_bound_ms"),
                         InvariantError);
  }
  SUBCASE("fractions out of range are named") {
    cfg.congested_fraction = 1.5;
    CHECK_THROWS_WITH_AS(generate(cfg), doctest::Contains("congested_fraction"),
                         InvariantError);
  }
  SUBCASE("zero days rejected") {
    cfg.days = 0;
    CHECK_THROWS_AS(generate(cfg), InvariantError);
  }
}

TEST_CASE("workload directory round trip") {
  Workload w = generate(small_config(9));
  auto dir = (std::filesystem::temp_directory_path() / "idms_workload_test").string();
  std::filesystem::remove_all(dir);
  save_workload(w, dir);

  CHECK(std::filesystem::exists(dir + "/period_0_0.dm"));
  CHECK(std::filesystem::exists(dir + "/period_1_23.dm"));
  CHECK(std::filesystem::exists(dir + "/prefix_table.txt"));
  CHECK(std::filesystem::exists(dir + "/country_table.txt"));

  MatrixSeries series = load_series(dir);
  CHECK(series.size() == w.series.size());

  WorkloadConfig cfg = load_meta(dir + "/" + meta_filename());
  CHECK(cfg.n_ases == w.config.n_ases);
  CHECK(cfg.seed == w.config.seed);
  CHECK(cfg.day_noise_bound_ms == w.config.day_noise_bound_ms);

  // regenerating from the meta reproduces the series exactly
  Workload again = generate(cfg);
  CHECK(again.series[3].raw_entries() == w.series[3].raw_entries());

  SUBCASE("meta with an unknown key is rejected") {
    std::ofstream f(dir + "/bad.meta");
    f << "n_ases = 4\nwhatever = 9\n";
    f.close();
    CHECK_THROWS_WITH_AS(load_meta(dir + "/bad.meta"), doctest::Contains("whatever"),
                         ParseError);
  }
}

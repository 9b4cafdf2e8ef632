#pragma once

// Independent brute-force recomputations used to check the library. These
// deliberately share no code with the implementation: plain loops, full
// sorts, explicit triple scans.

#include <array>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "idms/asn_table.hpp"
#include "idms/delay_matrix.hpp"
#include "idms/rng.hpp"

namespace idms::testing {

// Valid random matrix: unique ascending labels, entries in [lo, hi),
// an optional fraction of off-diagonal entries missing.
DelayMatrix random_matrix(Rng& rng, int n, double missing_fraction = 0.0,
                          double lo = 1.0, double hi = 200.0);

// A same-label variant of `m` with every off-diagonal entry perturbed by
// [-spread, spread) and a fraction replaced by fresh draws.
DelayMatrix perturbed_matrix(Rng& rng, const DelayMatrix& m, double spread,
                             double replace_fraction);

double oracle_mean(const std::vector<double>& xs);
double oracle_median(std::vector<double> xs);
double oracle_p90(std::vector<double> xs);

using Triple = std::tuple<int, int, int>;

std::set<Triple> oracle_tiv_triples(const DelayMatrix& m, double margin);
std::set<std::pair<int, int>> oracle_tiv_edges(const DelayMatrix& m, double margin);

struct OracleTiv {
  double victory = 0;
  double failure = 0;
};

// Exhaustive victory/failure from the definition; per_edge switches the
// counting unit.
OracleTiv oracle_tiv_vf(const DelayMatrix& reference, const DelayMatrix& estimate,
                        double margin, bool per_edge);

// Linear scan over every prefix entry, longest match wins; -1 when unmapped.
long oracle_lpm(const std::vector<AsnMappingTable::PrefixEntry>& entries, Ipv4 ip);

}  // namespace idms::testing

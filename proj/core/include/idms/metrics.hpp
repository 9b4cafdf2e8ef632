#pragma once

#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "idms/delay_matrix.hpp"

namespace idms {

// |measured - predicted|, milliseconds.
double abs_error(double measured, double predicted);

// |measured - predicted| / measured. A zero measured value cannot be scored;
// callers exclude such links, signalled here by nullopt.
std::optional<double> rel_error(double measured, double predicted);

struct MetricSummary {
  double mean = 0;
  double median = 0;
  double npred = 0;  // nearest-rank 90th percentile
  size_t count = 0;
};

// Mean, nearest-rank median (average of the two middles for even counts)
// and nearest-rank 90th percentile of a list of relative errors.
// Throws InvariantError on an empty list.
MetricSummary summarize(std::vector<double> res);

// Directed triangle-inequality violation: L(a,b) > L(a,c) + L(c,b) + margin.
// Margin 0 is the original TIV; margin 40 the practical TIV with relay slack.
struct TivTriple {
  int a = 0, b = 0, c = 0;  // row/col indices, pairwise distinct
  double gain = 0;          // L(a,b) - L(a,c) - L(c,b) - margin, > 0

  friend bool operator<(const TivTriple& x, const TivTriple& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  }
  friend bool operator==(const TivTriple& x, const TivTriple& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

enum class TivMode { PerTriple, PerEdge };

// All violating triples; entries involved must be non-missing. Sorted.
std::vector<TivTriple> tiv_triples(const DelayMatrix& m, double margin);
// Directed pairs (a,b) with at least one violating intermediary.
std::set<std::pair<int, int>> tiv_edges(const DelayMatrix& m, double margin);
bool has_tiv(const DelayMatrix& m, double margin);

struct TivAccuracy {
  double victory = 0;      // |TIVs(estimate) intersect TIVs(reference)| / |TIVs(reference)|
  double failure = 0;      // |TIVs(estimate) minus TIVs(reference)| / |TIVs(reference)|
  size_t reference_tivs = 0;
  size_t estimate_tivs = 0;
};

// Throws LabelMismatch when label sets differ and InvariantError when the
// reference has no TIVs (undefined denominator).
TivAccuracy tiv_accuracy(const DelayMatrix& reference, const DelayMatrix& estimate,
                         double margin, TivMode mode);

// Per-link errors of an estimate against a reference over inter-AS links.
// Diagonal, missing-on-either-side and zero-measured links are excluded;
// exclusions are counted.
struct LinkError {
  Asn src = 0, dst = 0;
  double measured = 0, predicted = 0;
  double ae = 0, re = 0;
};

struct LinkErrorSet {
  std::vector<LinkError> links;
  size_t excluded_missing = 0;
  size_t excluded_zero = 0;

  std::vector<double> res() const;
};

LinkErrorSet link_errors(const DelayMatrix& reference, const DelayMatrix& estimate);

// Same-period similarity between two matrices over one label set: per-link
// AE over common non-missing links, RE where the first matrix is nonzero.
struct SimilarityReport {
  std::vector<double> ae;
  std::vector<double> re;
  size_t links = 0;
  size_t excluded_missing = 0;
  size_t excluded_zero = 0;

  double fraction_ae_below(double threshold_ms) const;
  double fraction_re_below(double threshold) const;
};

SimilarityReport matrix_similarity(const DelayMatrix& a, const DelayMatrix& b);

}  // namespace idms

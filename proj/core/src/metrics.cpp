#include "idms/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "idms/errors.hpp"

namespace idms {

double abs_error(double measured, double predicted) {
  return std::fabs(measured - predicted);
}

std::optional<double> rel_error(double measured, double predicted) {
  if (measured == 0.0) return std::nullopt;
  return std::fabs(measured - predicted) / measured;
}

MetricSummary summarize(std::vector<double> res) {
  if (res.empty()) throw InvariantError("summarize needs at least one value");
  std::sort(res.begin(), res.end());
  size_t k = res.size();

  MetricSummary s;
  s.count = k;
  double sum = 0;
  for (double v : res) sum += v;
  s.mean = sum / static_cast<double>(k);
  s.median = (k % 2 == 1) ? res[k / 2] : (res[k / 2 - 1] + res[k / 2]) / 2.0;
  // Nearest-rank percentile: rank ceil(0.9 k), 1-indexed.
  size_t rank = static_cast<size_t>(std::ceil(0.9 * static_cast<double>(k)));
  if (rank == 0) rank = 1;
  s.npred = res[rank - 1];
  return s;
}

std::vector<TivTriple> tiv_triples(const DelayMatrix& m, double margin) {
  std::vector<TivTriple> out;
  int n = m.size();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b == a || m.missing(a, b)) continue;
      double direct = m.raw(a, b);
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b || m.missing(a, c) || m.missing(c, b)) continue;
        double gain = direct - m.raw(a, c) - m.raw(c, b) - margin;
        if (gain > 0) out.push_back(TivTriple{a, b, c, gain});
      }
    }
  }
  return out;  // loop order already yields (a,b,c) sorted
}

std::set<std::pair<int, int>> tiv_edges(const DelayMatrix& m, double margin) {
  std::set<std::pair<int, int>> out;
  for (const auto& t : tiv_triples(m, margin)) out.emplace(t.a, t.b);
  return out;
}

bool has_tiv(const DelayMatrix& m, double margin) {
  int n = m.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (b == a || m.missing(a, b)) continue;
      double direct = m.raw(a, b);
      for (int c = 0; c < n; ++c) {
        if (c == a || c == b || m.missing(a, c) || m.missing(c, b)) continue;
        if (direct - m.raw(a, c) - m.raw(c, b) - margin > 0) return true;
      }
    }
  return false;
}

TivAccuracy tiv_accuracy(const DelayMatrix& reference, const DelayMatrix& estimate,
                         double margin, TivMode mode) {
  if (!reference.same_labels(estimate))
    throw LabelMismatch("tiv_accuracy needs identical label sets");

  TivAccuracy acc;
  if (mode == TivMode::PerTriple) {
    auto ref = tiv_triples(reference, margin);
    auto est = tiv_triples(estimate, margin);
    if (ref.empty()) throw InvariantError("reference matrix has no TIVs");
    acc.reference_tivs = ref.size();
    acc.estimate_tivs = est.size();
    std::vector<TivTriple> hit;
    std::set_intersection(est.begin(), est.end(), ref.begin(), ref.end(),
                          std::back_inserter(hit));
    acc.victory = static_cast<double>(hit.size()) / static_cast<double>(ref.size());
    acc.failure = static_cast<double>(est.size() - hit.size()) /
                  static_cast<double>(ref.size());
  } else {
    auto ref = tiv_edges(reference, margin);
    auto est = tiv_edges(estimate, margin);
    if (ref.empty()) throw InvariantError("reference matrix has no TIVs");
    acc.reference_tivs = ref.size();
    acc.estimate_tivs = est.size();
    size_t hit = 0;
    for (const auto& e : est) hit += ref.count(e);
    acc.victory = static_cast<double>(hit) / static_cast<double>(ref.size());
    acc.failure = static_cast<double>(est.size() - hit) /
                  static_cast<double>(ref.size());
  }
  return acc;
}

std::vector<double> LinkErrorSet::res() const {
  std::vector<double> out;
  out.reserve(links.size());
  for (const auto& l : links) out.push_back(l.re);
  return out;
}

LinkErrorSet link_errors(const DelayMatrix& reference, const DelayMatrix& estimate) {
  if (!reference.same_labels(estimate))
    throw LabelMismatch("link_errors needs identical label sets");
  LinkErrorSet out;
  int n = reference.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (reference.missing(i, j) || estimate.missing(i, j)) {
        ++out.excluded_missing;
        continue;
      }
      double measured = reference.raw(i, j);
      double predicted = estimate.raw(i, j);
      auto re = rel_error(measured, predicted);
      if (!re) {
        ++out.excluded_zero;
        continue;
      }
      out.links.push_back(LinkError{reference.labels()[static_cast<size_t>(i)],
                                    reference.labels()[static_cast<size_t>(j)],
                                    measured, predicted,
                                    abs_error(measured, predicted), *re});
    }
  }
  return out;
}

double SimilarityReport::fraction_ae_below(double threshold_ms) const {
  if (ae.empty()) return 0;
  size_t hits = 0;
  for (double v : ae) hits += (v < threshold_ms);
  return static_cast<double>(hits) / static_cast<double>(ae.size());
}

double SimilarityReport::fraction_re_below(double threshold) const {
  if (re.empty()) return 0;
  size_t hits = 0;
  for (double v : re) hits += (v < threshold);
  return static_cast<double>(hits) / static_cast<double>(re.size());
}

SimilarityReport matrix_similarity(const DelayMatrix& a, const DelayMatrix& b) {
  if (!a.same_labels(b))
    throw LabelMismatch("matrix_similarity needs identical label sets");
  SimilarityReport rep;
  int n = a.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (a.missing(i, j) || b.missing(i, j)) {
        ++rep.excluded_missing;
        continue;
      }
      double va = a.raw(i, j);
      double vb = b.raw(i, j);
      rep.ae.push_back(abs_error(va, vb));
      ++rep.links;
      if (auto re = rel_error(va, vb))
        rep.re.push_back(*re);
      else
        ++rep.excluded_zero;
    }
  }
  return rep;
}

}  // namespace idms

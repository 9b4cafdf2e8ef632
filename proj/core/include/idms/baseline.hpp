#pragma once

#include <cstdint>
#include <vector>

#include "idms/delay_matrix.hpp"
#include "idms/metrics.hpp"

namespace idms {

// Euclidean-model coordinate of one AS node.
struct EuclideanCoord {
  std::vector<double> position;  // ms-scaled
  double error = 1.0;            // relative error estimate, EWMA
};

// Matrix-factorization coordinate: predicted(i,j) = out(i) . in(j).
// Components stay nonnegative so predictions are never negative.
struct FactorCoord {
  std::vector<double> out_vec;
  std::vector<double> in_vec;
};

struct EuclidParams {
  int dims = 5;
  int rounds = 256;
};

struct EuclidFit {
  std::vector<EuclideanCoord> coords;
  MetricSummary train;  // RE summary over the fitted links
};

// Spring relaxation over all measured links; deterministic per seed.
// Throws InvariantError for dims < 1 or a node with no measured neighbor.
EuclidFit euclid_fit(const DelayMatrix& m, const EuclidParams& params, uint64_t seed);

double predict(const std::vector<EuclideanCoord>& coords, int i, int j);

struct MfParams {
  int dims = 10;
  int n_refs = 32;
  int rounds = 100;
  double tolerance = 1e-6;  // stop when the loss change falls below this
  int warmup_rounds = 0;    // 0 = rounds / 3, before reference re-weighting
};

struct MfFit {
  std::vector<FactorCoord> coords;
  std::vector<double> loss_history;  // weighted squared loss per round
  MetricSummary train;
};

// Alternating nonnegative updates against n_refs sampled references per
// node, references weighted by 1 / (1 + their median relative error) after
// a warmup pass. Throws InvariantError for dims < 1 or n_refs out of range.
MfFit mf_fit(const DelayMatrix& m, const MfParams& params, uint64_t seed);

double predict(const std::vector<FactorCoord>& coords, int i, int j);

// Materialize a coordinate set as a full predicted matrix over the same
// labels (diagonal zero), for TIV evaluation.
template <typename Coords>
DelayMatrix predicted_matrix(const Coords& coords, const std::vector<Asn>& labels) {
  int n = static_cast<int>(labels.size());
  std::vector<double> entries(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) entries[static_cast<size_t>(i) * n + j] = predict(coords, i, j);
  return DelayMatrix(labels, std::move(entries));
}

// asn,kind,components... rows for both coordinate kinds.
std::string coords_csv(const std::vector<Asn>& labels,
                       const std::vector<EuclideanCoord>& coords);
std::string coords_csv(const std::vector<Asn>& labels,
                       const std::vector<FactorCoord>& coords);

}  // namespace idms

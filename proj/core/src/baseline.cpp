#include "idms/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "idms/errors.hpp"
#include "idms/rng.hpp"

namespace idms {

namespace {

double euclid_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double predict(const std::vector<EuclideanCoord>& coords, int i, int j) {
  if (i == j) return 0.0;
  return euclid_dist(coords[static_cast<size_t>(i)].position,
                     coords[static_cast<size_t>(j)].position);
}

double predict(const std::vector<FactorCoord>& coords, int i, int j) {
  if (i == j) return 0.0;
  const auto& o = coords[static_cast<size_t>(i)].out_vec;
  const auto& in = coords[static_cast<size_t>(j)].in_vec;
  double s = 0;
  for (size_t k = 0; k < o.size(); ++k) s += o[k] * in[k];
  return s;
}

EuclidFit euclid_fit(const DelayMatrix& m, const EuclidParams& params,
                     uint64_t seed) {
  if (params.dims < 1) throw InvariantError("euclid_fit needs dims >= 1");
  int n = m.size();
  int d = params.dims;
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n && !any; ++j) any = (i != j && !m.missing(i, j));
    if (!any)
      throw InvariantError("node " + std::to_string(i) + " has no measured link");
  }

  Rng rng(seed ^ 0x9b1e6d3ac1f20d5full);
  std::vector<EuclideanCoord> coords(static_cast<size_t>(n));
  for (auto& c : coords) {
    c.position.resize(static_cast<size_t>(d));
    for (auto& x : c.position) x = rng.uniform(-10.0, 10.0);
    c.error = 1.0;
  }

  std::vector<double> dir(static_cast<size_t>(d));
  for (int round = 0; round < params.rounds; ++round) {
    // Cooling step keeps late rounds from oscillating.
    double step = std::max(0.02, 0.25 * std::pow(0.97, round));
    for (int i = 0; i < n; ++i) {
      auto& ci = coords[static_cast<size_t>(i)];
      for (int j = 0; j < n; ++j) {
        if (j == i || m.missing(i, j)) continue;
        const auto& cj = coords[static_cast<size_t>(j)];
        double measured = m.raw(i, j);
        double dist = euclid_dist(ci.position, cj.position);
        double err = measured - dist;
        if (dist > 1e-12) {
          for (int k = 0; k < d; ++k)
            dir[static_cast<size_t>(k)] =
                (ci.position[static_cast<size_t>(k)] - cj.position[static_cast<size_t>(k)]) / dist;
        } else {
          // Coincident points separate in a deterministic random direction.
          double norm = 0;
          for (auto& x : dir) {
            x = rng.uniform(-1.0, 1.0);
            norm += x * x;
          }
          norm = std::sqrt(std::max(norm, 1e-12));
          for (auto& x : dir) x /= norm;
        }
        for (int k = 0; k < d; ++k)
          ci.position[static_cast<size_t>(k)] += step * err * dir[static_cast<size_t>(k)];
        if (measured > 0)
          ci.error = 0.9 * ci.error + 0.1 * std::fabs(err) / measured;
      }
    }
  }

  EuclidFit fit;
  fit.coords = std::move(coords);
  std::vector<double> res;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || m.missing(i, j)) continue;
      if (auto re = rel_error(m.raw(i, j), predict(fit.coords, i, j)))
        res.push_back(*re);
    }
  fit.train = summarize(std::move(res));
  return fit;
}

namespace {

struct MfProblem {
  int n = 0;
  int d = 0;
  const DelayMatrix* m = nullptr;
  std::vector<uint8_t> observed;  // n*n mask: j in refs(i) or i in refs(j)
  std::vector<double> weight;     // n*n, nonzero where observed

  double value(int i, int j) const { return m->raw(i, j); }
  bool on(int i, int j) const {
    return observed[static_cast<size_t>(i) * n + j] != 0;
  }
  double w(int i, int j) const {
    return weight[static_cast<size_t>(i) * n + j];
  }
};

double mf_loss(const MfProblem& p, const std::vector<FactorCoord>& coords) {
  double loss = 0;
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      if (i == j || !p.on(i, j)) continue;
      double r = p.value(i, j) - predict(coords, i, j);
      loss += p.w(i, j) * r * r;
    }
  return loss;
}

// One multiplicative update pass: out vectors against in vectors, then the
// transpose. Nonnegativity is preserved because factors only scale.
void mf_round(const MfProblem& p, std::vector<FactorCoord>& coords) {
  constexpr double kEps = 1e-12;
  int n = p.n, d = p.d;
  std::vector<double> num(static_cast<size_t>(d)), den(static_cast<size_t>(d));
  for (int i = 0; i < n; ++i) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      if (j == i || !p.on(i, j)) continue;
      double wij = p.w(i, j);
      double pred = predict(coords, i, j);
      const auto& in = coords[static_cast<size_t>(j)].in_vec;
      for (int k = 0; k < d; ++k) {
        num[static_cast<size_t>(k)] += wij * p.value(i, j) * in[static_cast<size_t>(k)];
        den[static_cast<size_t>(k)] += wij * pred * in[static_cast<size_t>(k)];
      }
    }
    auto& out = coords[static_cast<size_t>(i)].out_vec;
    for (int k = 0; k < d; ++k)
      out[static_cast<size_t>(k)] *=
          num[static_cast<size_t>(k)] / (den[static_cast<size_t>(k)] + kEps);
  }
  for (int j = 0; j < n; ++j) {
    std::fill(num.begin(), num.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      if (i == j || !p.on(i, j)) continue;
      double wij = p.w(i, j);
      double pred = predict(coords, i, j);
      const auto& out = coords[static_cast<size_t>(i)].out_vec;
      for (int k = 0; k < d; ++k) {
        num[static_cast<size_t>(k)] += wij * p.value(i, j) * out[static_cast<size_t>(k)];
        den[static_cast<size_t>(k)] += wij * pred * out[static_cast<size_t>(k)];
      }
    }
    auto& in = coords[static_cast<size_t>(j)].in_vec;
    for (int k = 0; k < d; ++k)
      in[static_cast<size_t>(k)] *=
          num[static_cast<size_t>(k)] / (den[static_cast<size_t>(k)] + kEps);
  }
}

}  // namespace

MfFit mf_fit(const DelayMatrix& m, const MfParams& params, uint64_t seed) {
  int n = m.size();
  if (params.dims < 1) throw InvariantError("mf_fit needs dims >= 1");
  if (params.n_refs < 1 || params.n_refs > n - 1)
    throw InvariantError("n_refs must be in [1, n-1]");

  MfProblem p;
  p.n = n;
  p.d = params.dims;
  p.m = &m;
  p.observed.assign(static_cast<size_t>(n) * n, 0);
  p.weight.assign(static_cast<size_t>(n) * n, 0.0);

  Rng rng(seed ^ 0x517cc1b727220a95ull);
  // Every node samples n_refs reference targets among the measured links.
  std::vector<int> candidates;
  for (int i = 0; i < n; ++i) {
    candidates.clear();
    for (int j = 0; j < n; ++j)
      if (j != i && !m.missing(i, j)) candidates.push_back(j);
    rng.shuffle(candidates);
    size_t take = std::min<size_t>(static_cast<size_t>(params.n_refs), candidates.size());
    for (size_t t = 0; t < take; ++t) {
      int j = candidates[t];
      p.observed[static_cast<size_t>(i) * n + j] = 1;
      p.weight[static_cast<size_t>(i) * n + j] = 1.0;
      // The reverse direction is measured in the same exchange.
      if (!m.missing(j, i)) {
        p.observed[static_cast<size_t>(j) * n + i] = 1;
        p.weight[static_cast<size_t>(j) * n + i] = 1.0;
      }
    }
  }

  // Scale the init so out . in starts near the mean observed RTT.
  double mean = 0;
  size_t cnt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && p.on(i, j)) {
        mean += p.value(i, j);
        ++cnt;
      }
  mean = cnt ? mean / static_cast<double>(cnt) : 1.0;
  double scale = std::sqrt(std::max(mean, 1e-6) / params.dims);

  std::vector<FactorCoord> coords(static_cast<size_t>(n));
  for (auto& c : coords) {
    c.out_vec.resize(static_cast<size_t>(params.dims));
    c.in_vec.resize(static_cast<size_t>(params.dims));
    for (auto& x : c.out_vec) x = scale * rng.uniform(0.5, 1.5);
    for (auto& x : c.in_vec) x = scale * rng.uniform(0.5, 1.5);
  }

  int warmup = params.warmup_rounds > 0 ? params.warmup_rounds
                                        : std::max(1, params.rounds / 3);
  for (int r = 0; r < warmup; ++r) mf_round(p, coords);

  // Accurate references pull harder: weight = 1 / (1 + median RE of the
  // reference node's incoming predictions).
  std::vector<double> ref_quality(static_cast<size_t>(n), 1.0);
  for (int j = 0; j < n; ++j) {
    std::vector<double> res;
    for (int i = 0; i < n; ++i) {
      if (i == j || !p.on(i, j)) continue;
      if (auto re = rel_error(p.value(i, j), predict(coords, i, j)))
        res.push_back(*re);
    }
    if (!res.empty()) {
      std::sort(res.begin(), res.end());
      size_t k = res.size();
      double med = (k % 2 == 1) ? res[k / 2] : (res[k / 2 - 1] + res[k / 2]) / 2.0;
      ref_quality[static_cast<size_t>(j)] = 1.0 / (1.0 + med);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.on(i, j))
        p.weight[static_cast<size_t>(i) * n + j] = ref_quality[static_cast<size_t>(j)];

  MfFit fit;
  double prev = mf_loss(p, coords);
  fit.loss_history.push_back(prev);
  for (int r = 0; r < params.rounds; ++r) {
    mf_round(p, coords);
    double loss = mf_loss(p, coords);
    fit.loss_history.push_back(loss);
    if (std::fabs(prev - loss) < params.tolerance * std::max(1.0, prev)) break;
    prev = loss;
  }

  fit.coords = std::move(coords);
  std::vector<double> res;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !p.on(i, j)) continue;
      if (auto re = rel_error(p.value(i, j), predict(fit.coords, i, j)))
        res.push_back(*re);
    }
  fit.train = summarize(std::move(res));
  return fit;
}

std::string coords_csv(const std::vector<Asn>& labels,
                       const std::vector<EuclideanCoord>& coords) {
  std::ostringstream out;
  out << "asn,kind,components\n";
  char buf[32];
  for (size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << ",euclid";
    for (double x : coords[i].position) {
      std::snprintf(buf, sizeof buf, "%.6f", x);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string coords_csv(const std::vector<Asn>& labels,
                       const std::vector<FactorCoord>& coords) {
  std::ostringstream out;
  out << "asn,kind,components\n";
  char buf[32];
  for (size_t i = 0; i < labels.size(); ++i) {
    out << labels[i] << ",mf_out";
    for (double x : coords[i].out_vec) {
      std::snprintf(buf, sizeof buf, "%.6f", x);
      out << "," << buf;
    }
    out << "\n" << labels[i] << ",mf_in";
    for (double x : coords[i].in_vec) {
      std::snprintf(buf, sizeof buf, "%.6f", x);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace idms

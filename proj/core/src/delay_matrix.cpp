#include "idms/delay_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "idms/errors.hpp"

namespace idms {

DelayMatrix::DelayMatrix(std::vector<Asn> labels, std::vector<double> entries,
                         PeriodIndex period)
    : n_(static_cast<int>(labels.size())), period_(period) {
  if (n_ < 2) throw InvariantError("delay matrix needs at least 2 ASes");
  if (entries.size() != static_cast<size_t>(n_) * n_)
    throw InvariantError("entry count " + std::to_string(entries.size()) +
                         " does not match " + std::to_string(n_) + "x" +
                         std::to_string(n_));

  // Canonical order is ascending ASN; rows/columns follow the labels.
  std::vector<int> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return labels[a] < labels[b]; });

  labels_.resize(labels.size());
  entries_.resize(entries.size());
  for (int i = 0; i < n_; ++i) {
    labels_[i] = labels[order[i]];
    for (int j = 0; j < n_; ++j)
      entries_[static_cast<size_t>(i) * n_ + j] =
          entries[static_cast<size_t>(order[i]) * n_ + order[j]];
  }
  for (int i = 1; i < n_; ++i)
    if (labels_[i] == labels_[i - 1])
      throw InvariantError("duplicate ASN label " + std::to_string(labels_[i]));

  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      double v = raw(i, j);
      if (i == j && v != 0.0)
        throw InvariantError("diagonal entry must be 0 at row " +
                             std::to_string(i));
      if (is_missing(v)) continue;
      if (!(v >= 0.0) || !std::isfinite(v))
        throw InvariantError("invalid entry at row " + std::to_string(i) +
                             " col " + std::to_string(j));
    }
  }
}

std::optional<double> DelayMatrix::lookup(Asn a, Asn b) const {
  return at(index_of(a), index_of(b));
}

int DelayMatrix::index_of(Asn a) const {
  auto idx = find(a);
  if (!idx) throw UnknownAsn("ASN " + std::to_string(a) + " not in matrix");
  return *idx;
}

std::optional<int> DelayMatrix::find(Asn a) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), a);
  if (it == labels_.end() || *it != a) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

void MatrixSeries::append(DelayMatrix m) {
  if (!items_.empty()) {
    if (!items_.front().same_labels(m))
      throw InvariantError("series matrices must share one label set");
    if (!(items_.back().period() < m.period()))
      throw InvariantError("series periods must be strictly increasing");
  }
  items_.push_back(std::move(m));
}

const DelayMatrix* MatrixSeries::find(PeriodIndex p) const {
  for (const auto& m : items_)
    if (m.period() == p) return &m;
  return nullptr;
}

std::vector<const DelayMatrix*> MatrixSeries::at_hour(int hour) const {
  std::vector<const DelayMatrix*> out;
  for (const auto& m : items_)
    if (m.period().hour == hour) out.push_back(&m);
  return out;
}

}  // namespace idms

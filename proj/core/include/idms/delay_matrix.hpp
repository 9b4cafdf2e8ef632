#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idms/period.hpp"

namespace idms {

using Asn = uint32_t;

// RTT values are nonnegative milliseconds; kMissing marks unmeasured links.
inline constexpr double kMissing = -1.0;

inline bool is_missing(double v) { return v == kMissing; }

// Square matrix of inter-AS round-trip times. Labels are the ASNs of the row
// and column ASes, kept sorted ascending; the constructor canonicalizes any
// input order by permuting rows and columns consistently. Entries are not
// required to be symmetric (asymmetric routing is representable). Immutable
// after construction.
class DelayMatrix {
 public:
  // `entries` is row-major n x n with n = labels.size(). Throws
  // InvariantError on: n < 2, duplicate labels, negative or non-finite
  // entries, nonzero diagonal.
  DelayMatrix(std::vector<Asn> labels, std::vector<double> entries,
              PeriodIndex period = {});

  int size() const { return n_; }
  const std::vector<Asn>& labels() const { return labels_; }
  PeriodIndex period() const { return period_; }
  void set_period(PeriodIndex p) { period_ = p; }

  // Raw entry; may be kMissing.
  double raw(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
  bool missing(int i, int j) const { return is_missing(raw(i, j)); }
  std::optional<double> at(int i, int j) const {
    double v = raw(i, j);
    if (is_missing(v)) return std::nullopt;
    return v;
  }

  // Label-addressed lookup. Throws UnknownAsn if either label is absent.
  std::optional<double> lookup(Asn a, Asn b) const;

  // Index of an ASN in the (sorted) label list. Throws UnknownAsn.
  int index_of(Asn a) const;
  std::optional<int> find(Asn a) const;

  bool same_labels(const DelayMatrix& other) const { return labels_ == other.labels_; }

  bool operator==(const DelayMatrix& other) const {
    return labels_ == other.labels_ && entries_ == other.entries_ &&
           period_ == other.period_;
  }

  const std::vector<double>& raw_entries() const { return entries_; }

 private:
  int n_;
  std::vector<Asn> labels_;
  std::vector<double> entries_;
  PeriodIndex period_;
};

// Ordered run of matrices over identical label sets with strictly
// increasing periods.
class MatrixSeries {
 public:
  MatrixSeries() = default;

  // Throws InvariantError when labels differ from the first matrix or the
  // period does not increase.
  void append(DelayMatrix m);

  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const DelayMatrix& operator[](size_t i) const { return items_[i]; }
  const std::vector<DelayMatrix>& items() const { return items_; }

  const DelayMatrix* find(PeriodIndex p) const;
  // All matrices whose period has the given hour-of-day, in day order.
  std::vector<const DelayMatrix*> at_hour(int hour) const;

 private:
  std::vector<DelayMatrix> items_;
};

}  // namespace idms

#include "jetex/hull_oracle.hpp"

#include "jetex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jetex {

namespace {

bool strictly_increasing(const std::vector<double>& t) {
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) return false;
  }
  return true;
}

/// Monotone chain; keeps only vertices of the lower hull.
void lower_chain(const double* t, const double* v, std::size_t count, std::vector<double>& ht,
                 std::vector<double>& hv) {
  ht.clear();
  hv.clear();
  for (std::size_t k = 0; k < count; ++k) {
    while (ht.size() >= 2) {
      const std::size_t m = ht.size();
      const double cross = (ht[m - 1] - ht[m - 2]) * (v[k] - hv[m - 2]) -
                           (hv[m - 1] - hv[m - 2]) * (t[k] - ht[m - 2]);
      if (cross > 0.0) break;
      ht.pop_back();
      hv.pop_back();
    }
    ht.push_back(t[k]);
    hv.push_back(v[k]);
  }
}

double range_slack(double lo, double hi) { return 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)); }

} // namespace

LowerHull1d::LowerHull1d(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() < 2 || t.size() != v.size()) {
    throw DegenerateGrid("1-D hull needs at least two samples with matching values");
  }
  if (!strictly_increasing(t)) throw DegenerateGrid("sample locations must increase strictly");
  lower_chain(t.data(), v.data(), t.size(), ht_, hv_);
}

std::size_t LowerHull1d::segment(double x) const {
  const double lo = ht_.front();
  const double hi = ht_.back();
  const double slack = range_slack(lo, hi);
  if (!(x >= lo - slack && x <= hi + slack)) {
    throw OutOfRange("query " + std::to_string(x) + " outside sample range");
  }
  const auto it = std::upper_bound(ht_.begin(), ht_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - ht_.begin());
  if (k == 0) k = 1;
  if (k >= ht_.size()) k = ht_.size() - 1;
  return k - 1;
}

double LowerHull1d::operator()(double x) const {
  const std::size_t k = segment(x);
  const double w = (x - ht_[k]) / (ht_[k + 1] - ht_[k]);
  return (1.0 - w) * hv_[k] + w * hv_[k + 1];
}

double LowerHull1d::slope_at(double x) const {
  const std::size_t k = segment(x);
  return (hv_[k + 1] - hv_[k]) / (ht_[k + 1] - ht_[k]);
}

double oracle_envelope_1d(const std::vector<double>& t, const std::vector<double>& v, double x) {
  return LowerHull1d(t, v)(x);
}

LowerHull2d::LowerHull2d(GridSamples2d samples) : samples_(std::move(samples)) {
  const auto& a = samples_.axis0;
  const auto& b = samples_.axis1;
  if (a.size() < 2 || b.size() < 2) throw DegenerateGrid("2-D grid needs two nodes per axis");
  if (samples_.values.size() != a.size() * b.size()) {
    throw DegenerateGrid("2-D grid value count does not match the axes");
  }
  if (!strictly_increasing(a) || !strictly_increasing(b)) {
    throw DegenerateGrid("grid axes must increase strictly");
  }
  s_lo_ = std::numeric_limits<double>::infinity();
  s_hi_ = -std::numeric_limits<double>::infinity();
  rows_.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<double> row(samples_.values.begin() + static_cast<std::ptrdiff_t>(i * b.size()),
                            samples_.values.begin() +
                                static_cast<std::ptrdiff_t>((i + 1) * b.size()));
    rows_.emplace_back(b, row);
    const auto& ht = rows_.back().vertices_t();
    const auto& hv = rows_.back().vertices_v();
    s_lo_ = std::min(s_lo_, (hv[1] - hv[0]) / (ht[1] - ht[0]));
    const std::size_t m = ht.size();
    s_hi_ = std::max(s_hi_, (hv[m - 1] - hv[m - 2]) / (ht[m - 1] - ht[m - 2]));
  }
  s_lo_ -= 1.0;
  s_hi_ += 1.0;
}

double LowerHull2d::dual_objective(double s, double a, double b, double& slope) const {
  const std::size_t R = rows_.size();
  std::vector<double> neg_r(R);
  std::vector<double> arg_b(R);
  for (std::size_t i = 0; i < R; ++i) {
    // argmax_j s b_j - v_ij sits at the first hull vertex whose right slope
    // reaches s.
    const auto& ht = rows_[i].vertices_t();
    const auto& hv = rows_[i].vertices_v();
    std::size_t lo = 0;
    std::size_t hi = ht.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      const double right = (hv[mid + 1] - hv[mid]) / (ht[mid + 1] - ht[mid]);
      if (right < s) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    neg_r[i] = hv[lo] - s * ht[lo];
    arg_b[i] = ht[lo];
  }

  // Lower hull of (a_i, -r_i) evaluated at a, remembering the two supporting rows.
  const auto& ax = samples_.axis0;
  std::vector<std::size_t> chain;
  chain.reserve(R);
  for (std::size_t k = 0; k < R; ++k) {
    while (chain.size() >= 2) {
      const std::size_t p1 = chain[chain.size() - 2];
      const std::size_t p2 = chain.back();
      const double cross =
          (ax[p2] - ax[p1]) * (neg_r[k] - neg_r[p1]) - (neg_r[p2] - neg_r[p1]) * (ax[k] - ax[p1]);
      if (cross > 0.0) break;
      chain.pop_back();
    }
    chain.push_back(k);
  }
  std::size_t seg = 0;
  while (seg + 2 < chain.size() && ax[chain[seg + 1]] < a) ++seg;
  const std::size_t i0 = chain[seg];
  const std::size_t i1 = chain[seg + 1];
  const double w = std::clamp((a - ax[i0]) / (ax[i1] - ax[i0]), 0.0, 1.0);
  const double h = (1.0 - w) * neg_r[i0] + w * neg_r[i1];
  slope = b - ((1.0 - w) * arg_b[i0] + w * arg_b[i1]);
  return s * b + h;
}

double LowerHull2d::operator()(double a, double b) const {
  const auto& A = samples_.axis0;
  const auto& B = samples_.axis1;
  const double sa = range_slack(A.front(), A.back());
  const double sb = range_slack(B.front(), B.back());
  if (!(a >= A.front() - sa && a <= A.back() + sa && b >= B.front() - sb && b <= B.back() + sb)) {
    throw OutOfRange("query outside the 2-D grid box");
  }
  a = std::clamp(a, A.front(), A.back());
  b = std::clamp(b, B.front(), B.back());

  double lo = s_lo_;
  double hi = s_hi_;
  double slope = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double val = dual_objective(mid, a, b, slope);
    best = std::max(best, val);
    if (slope > 0.0) {
      lo = mid;
    } else if (slope < 0.0) {
      hi = mid;
    } else {
      break;
    }
  }
  best = std::max(best, dual_objective(lo, a, b, slope));
  best = std::max(best, dual_objective(hi, a, b, slope));
  return best;
}

double oracle_envelope_2d(const GridSamples2d& samples, double a, double b) {
  return LowerHull2d(samples)(a, b);
}

} // namespace jetex

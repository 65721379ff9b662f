#pragma once

#include <cstddef>
#include <vector>

namespace jetex {

/// Lower convex hull of points (t_k, v_k) with strictly increasing t.
class LowerHull1d {
public:
  /// Throws DegenerateGrid with fewer than 2 samples or non-increasing t.
  LowerHull1d(const std::vector<double>& t, const std::vector<double>& v);

  /// Hull value at x; OutOfRange outside [t_front, t_back].
  double operator()(double x) const;

  /// Supporting slope right of x (left of x at the upper end).
  double slope_at(double x) const;

  const std::vector<double>& vertices_t() const noexcept { return ht_; }
  const std::vector<double>& vertices_v() const noexcept { return hv_; }

private:
  std::size_t segment(double x) const;
  std::vector<double> ht_;
  std::vector<double> hv_;
};

/// Value at x of the lower convex hull of the samples (t_k, v_k).
double oracle_envelope_1d(const std::vector<double>& t, const std::vector<double>& v, double x);

/// Samples v[i * axis1.size() + j] = g(axis0[i], axis1[j]) on a tensor grid.
struct GridSamples2d {
  std::vector<double> axis0;
  std::vector<double> axis1;
  std::vector<double> values;
};

/**
 * Lower convex hull of samples on a 2-D tensor grid.
 *
 * Evaluated through the partial conjugate in the second coordinate:
 *   hull(a, b) = max_s [ s b + lowerhull_i( -r_i(s) )(a) ],
 *   r_i(s) = max_j [ s b_j - v_ij ],
 * a concave piecewise-linear function of s maximised by bisection on its
 * supergradient.
 */
class LowerHull2d {
public:
  /// Throws DegenerateGrid on fewer than 2 nodes per axis, non-increasing
  /// axes or a size mismatch.
  explicit LowerHull2d(GridSamples2d samples);

  /// OutOfRange outside the grid box.
  double operator()(double a, double b) const;

private:
  /// Returns s b + H_s(a) and its supergradient in s.
  double dual_objective(double s, double a, double b, double& slope) const;

  GridSamples2d samples_;
  std::vector<LowerHull1d> rows_;
  double s_lo_ = 0.0;
  double s_hi_ = 0.0;
};

double oracle_envelope_2d(const GridSamples2d& samples, double a, double b);

} // namespace jetex

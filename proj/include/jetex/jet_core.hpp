#pragma once

#include "jetex/moduli.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace jetex {

/// One datum of a 1-jet: location x, value f(x) and gradient G(x).
struct JetPoint {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd g;

  bool operator==(const JetPoint& other) const {
    return f == other.f && x.size() == other.x.size() && g.size() == other.g.size() &&
           x == other.x && g == other.g;
  }
};

/// Unvalidated jet as it comes out of a parser.
struct RawJet {
  int dim = 0;
  NormSpec norm;
  std::vector<JetPoint> points;
};

/**
 * Finite 1-jet (f, G) on E in R^n, validated and immutable.
 *
 * Points are pairwise distinct, finite and of a common dimension; they keep
 * their input order (minus removed exact duplicates).
 */
class JetSet {
public:
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  const NormSpec& norm() const noexcept { return norm_; }
  const std::vector<JetPoint>& points() const noexcept { return points_; }
  const JetPoint& operator[](std::size_t i) const { return points_[i]; }

  double max_abs_value() const;
  double max_location_norm() const;
  /// max ||G(y)||, measured in the dual norm.
  double max_gradient_norm() const;
  double diameter() const;

  bool operator==(const JetSet& other) const {
    return dim_ == other.dim_ && norm_ == other.norm_ && points_ == other.points_;
  }

private:
  friend JetSet validate_jet(const RawJet& raw);
  JetSet(int dim, NormSpec norm, std::vector<JetPoint> points)
      : dim_(dim), norm_(norm), points_(std::move(points)) {}

  int dim_ = 0;
  NormSpec norm_;
  std::vector<JetPoint> points_;
};

/**
 * Checks dimensions and finiteness, removes exact duplicates and rejects
 * points that share a location with different data.
 *
 * Two locations coincide when ||x_i - x_j|| <= 1e-12 (1 + max ||x||).
 * Throws DimensionMismatch, NonFinite or ConflictingDuplicate.
 */
JetSet validate_jet(const RawJet& raw);

/// The inverse direction of validate_jet, used for round trips.
RawJet to_raw(const JetSet& jet);

/// Convenience builder: points given as (x, f, g) with the Euclidean norm.
JetSet make_jet(const std::vector<JetPoint>& points, NormSpec norm = NormSpec::euclidean());

/// Euclidean inner product; G(y) acts on increments through this pairing.
inline double pairing(const Eigen::Ref<const Eigen::VectorXd>& g,
                      const Eigen::Ref<const Eigen::VectorXd>& v) {
  return g.dot(v);
}

} // namespace jetex

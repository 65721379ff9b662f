#include "jetex/jet_core.hpp"

#include "jetex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace jetex {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

bool same_data(const JetPoint& a, const JetPoint& b) {
  auto close = [](double u, double v) {
    return std::abs(u - v) <= 1e-12 * (1.0 + std::max(std::abs(u), std::abs(v)));
  };
  if (!close(a.f, b.f)) return false;
  for (Eigen::Index k = 0; k < a.g.size(); ++k) {
    if (!close(a.g[k], b.g[k])) return false;
  }
  return true;
}

} // namespace

JetSet validate_jet(const RawJet& raw) {
  if (raw.dim < 1) throw DimensionMismatch("jet dimension must be positive");
  if (raw.points.empty()) throw DimensionMismatch("jet must contain at least one point");

  double max_x = 0.0;
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    const JetPoint& pt = raw.points[i];
    if (pt.x.size() != raw.dim || pt.g.size() != raw.dim) {
      throw DimensionMismatch("point " + std::to_string(i) + " does not have dimension " +
                              std::to_string(raw.dim));
    }
    if (!all_finite(pt.x) || !all_finite(pt.g) || !std::isfinite(pt.f)) {
      throw NonFinite("point " + std::to_string(i) + " has a non-finite coordinate");
    }
    max_x = std::max(max_x, pt.x.norm());
  }

  const double same_location = 1e-12 * (1.0 + max_x);
  std::vector<JetPoint> kept;
  std::vector<std::size_t> origin;
  kept.reserve(raw.points.size());
  for (std::size_t i = 0; i < raw.points.size(); ++i) {
    const JetPoint& pt = raw.points[i];
    bool duplicate = false;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if ((kept[k].x - pt.x).norm() <= same_location) {
        if (!same_data(kept[k], pt)) throw ConflictingDuplicate(origin[k], i);
        duplicate = true;
        break;
      }
    }
    if (!duplicate) {
      kept.push_back(pt);
      origin.push_back(i);
    }
  }
  return JetSet(raw.dim, raw.norm, std::move(kept));
}

RawJet to_raw(const JetSet& jet) {
  RawJet raw;
  raw.dim = jet.dim();
  raw.norm = jet.norm();
  raw.points = jet.points();
  return raw;
}

JetSet make_jet(const std::vector<JetPoint>& points, NormSpec norm) {
  RawJet raw;
  raw.dim = points.empty() ? 0 : static_cast<int>(points.front().x.size());
  raw.norm = norm;
  raw.points = points;
  return validate_jet(raw);
}

double JetSet::max_abs_value() const {
  double m = 0.0;
  for (const auto& pt : points_) m = std::max(m, std::abs(pt.f));
  return m;
}

double JetSet::max_location_norm() const {
  double m = 0.0;
  for (const auto& pt : points_) m = std::max(m, jetex::norm(norm_, pt.x));
  return m;
}

double JetSet::max_gradient_norm() const {
  double m = 0.0;
  for (const auto& pt : points_) m = std::max(m, dual_norm(norm_, pt.g));
  return m;
}

double JetSet::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      d = std::max(d, jetex::norm(norm_, points_[i].x - points_[j].x));
    }
  }
  return d;
}

} // namespace jetex

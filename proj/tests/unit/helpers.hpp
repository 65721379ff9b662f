#pragma once

#include "jetex/jet_core.hpp"

#include <Eigen/Core>

#include <initializer_list>

namespace jetex::testing {

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

inline JetPoint pt1(double x, double f, double g) { return {vec({x}), f, vec({g})}; }

inline JetPoint pt(std::initializer_list<double> x, double f, std::initializer_list<double> g) {
  return {vec(x), f, vec(g)};
}

} // namespace jetex::testing

#include "jetex/conditions.hpp"

#include "jetex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace jetex {

namespace {

void require_positive(double M) {
  if (!(M > 0.0)) throw NonPositiveConstant("extension constant M must be positive");
}

void require_euclidean(const JetSet& jet, const char* what) {
  if (jet.norm().kind != NormKind::Euclidean) {
    throw NormMismatch(std::string(what) + " requires a Euclidean jet");
  }
}

void require_lp(const JetSet& jet, const char* what) {
  if (jet.norm().kind != NormKind::Lp) {
    throw NormMismatch(std::string(what) + " requires an l_p jet");
  }
}

/// Scans ordered pairs i != j and keeps the smallest slack.
template <typename Slack>
ConditionReport scan_pairs(const JetSet& jet, double M, Slack&& slack) {
  ConditionReport report;
  report.constant_used = M;
  report.tolerance = feasibility_tolerance(jet, M);
  const std::size_t n = jet.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double s = slack(jet[i], jet[j]);
      if (!report.worst_pair || s < report.margin) {
        report.margin = s;
        report.worst_pair = IndexPair{i, j};
      }
    }
  }
  report.satisfied = report.margin >= -report.tolerance;
  return report;
}

/// Convexity gap D(x, y) = f(x) - f(y) - <G(y), x - y>.
double convexity_gap(const JetPoint& x, const JetPoint& y) {
  return x.f - y.f - pairing(y.g, x.x - y.x);
}

struct GapScales {
  double gap = 0.0;
  double gradient = 0.0;
};

GapScales gap_scales(const JetSet& jet) {
  double reach = 0.0;
  for (const auto& pt : jet.points()) reach = std::max(reach, norm(jet.norm(), pt.x));
  const double gmax = jet.max_gradient_norm();
  return {1e-12 * (1.0 + jet.max_abs_value() + gmax * (reach + jet.diameter())),
          1e-12 * (1.0 + gmax)};
}

/**
 * Minimal M for "D_ij >= penalty(M, ||G_i - G_j||_*)" over ordered pairs,
 * with penalty decreasing in M. Pairs with D ~ 0 and dG ~ 0 carry no
 * constraint; D < 0, or D ~ 0 with dG != 0, is infeasible for every M.
 */
MinimalConstant bisect_constant(const JetSet& jet,
                                const std::function<double(double, double)>& penalty) {
  const GapScales tol = gap_scales(jet);
  struct Pair {
    std::size_t i, j;
    double gap, dg;
  };
  std::vector<Pair> active;
  MinimalConstant result;
  double hint = 0.0;
  for (std::size_t i = 0; i < jet.size(); ++i) {
    for (std::size_t j = 0; j < jet.size(); ++j) {
      if (i == j) continue;
      const double gap = convexity_gap(jet[i], jet[j]);
      const double dg = dual_norm(jet.norm(), jet[i].g - jet[j].g);
      if (gap < -tol.gap || (gap <= tol.gap && dg > tol.gradient)) {
        result.feasible = false;
        result.witness = IndexPair{i, j};
        return result;
      }
      if (dg <= tol.gradient) continue;
      active.push_back({i, j, gap, dg});
      hint = std::max(hint, dg * dg / (2.0 * gap));
    }
  }
  if (active.empty()) return result;

  auto feasible = [&](double M) {
    return std::all_of(active.begin(), active.end(),
                       [&](const Pair& pr) { return pr.gap - penalty(M, pr.dg) >= 0.0; });
  };
  double lo = 0.0;
  double hi = std::max(1.0, hint);
  for (int k = 0; k < 200 && !feasible(hi); ++k) {
    lo = hi;
    hi *= 2.0;
  }
  for (int k = 0; k < 200 && hi - lo > 1e-10 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.value = hi;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& pr : active) {
    const double s = pr.gap - penalty(hi, pr.dg);
    if (s < worst) {
      worst = s;
      result.witness = IndexPair{pr.i, pr.j};
    }
  }
  return result;
}

} // namespace

double feasibility_tolerance(const JetSet& jet, double M) {
  require_positive(M);
  const double g = jet.max_gradient_norm();
  return 1e-10 * (1.0 + jet.max_abs_value() + g * g / M);
}

ConditionReport check_cw11(const JetSet& jet, double M) {
  require_positive(M);
  require_euclidean(jet, "check_cw11");
  return scan_pairs(jet, M, [M](const JetPoint& x, const JetPoint& y) {
    return convexity_gap(x, y) - (x.g - y.g).squaredNorm() / (2.0 * M);
  });
}

ConditionReport check_w11(const JetSet& jet, double M) {
  require_positive(M);
  require_euclidean(jet, "check_w11");
  return scan_pairs(jet, M, [M](const JetPoint& x, const JetPoint& y) {
    const Eigen::VectorXd dx = y.x - x.x;
    return x.f + 0.5 * pairing(x.g + y.g, dx) + 0.25 * M * dx.squaredNorm() -
           0.25 * (x.g - y.g).squaredNorm() / M - y.f;
  });
}

ConditionReport check_cw1omega(const JetSet& jet, const Modulus& mod, double M) {
  require_positive(M);
  require_euclidean(jet, "check_cw1omega");
  return scan_pairs(jet, M, [&mod, M](const JetPoint& x, const JetPoint& y) {
    return convexity_gap(x, y) - mod.scaled_conjugate(M, (x.g - y.g).norm());
  });
}

ConditionReport check_cw1alpha_lp(const JetSet& jet, double M) {
  require_positive(M);
  require_lp(jet, "check_cw1alpha_lp");
  const NormSpec& ns = jet.norm();
  const double alpha = ns.holder_exponent();
  const double coeff = alpha / ((1.0 + alpha) * std::pow(M, 1.0 / alpha));
  return scan_pairs(jet, M, [&ns, alpha, coeff](const JetPoint& x, const JetPoint& y) {
    const double dg = dual_norm(ns, x.g - y.g);
    return convexity_gap(x, y) - coeff * std::pow(dg, 1.0 + 1.0 / alpha);
  });
}

GammaReport gamma_functional(const JetSet& jet) {
  require_euclidean(jet, "gamma_functional");
  GammaReport report;
  for (std::size_t i = 0; i < jet.size(); ++i) {
    for (std::size_t j = i + 1; j < jet.size(); ++j) {
      const JetPoint& x = jet[i];
      const JetPoint& y = jet[j];
      const Eigen::VectorXd dx = y.x - x.x;
      const double d2 = dx.squaredNorm();
      const double A = (2.0 * (x.f - y.f) + pairing(x.g + y.g, dx)) / d2;
      const double B = (x.g - y.g).norm() / std::sqrt(d2);
      const double gamma = std::hypot(A, B) + std::abs(A);
      if (!report.attaining_pair || gamma > report.gamma) {
        report.gamma = gamma;
        report.attaining_pair = IndexPair{i, j};
        report.A = A;
        report.B = B;
      }
    }
  }
  return report;
}

MinimalConstant min_constant_cw11(const JetSet& jet) {
  require_euclidean(jet, "min_constant_cw11");
  const GapScales tol = gap_scales(jet);
  const double tol_n = tol.gradient * tol.gradient;
  MinimalConstant result;
  for (std::size_t i = 0; i < jet.size(); ++i) {
    for (std::size_t j = 0; j < jet.size(); ++j) {
      if (i == j) continue;
      const double D = convexity_gap(jet[i], jet[j]);
      const double N = (jet[i].g - jet[j].g).squaredNorm();
      if (D < -tol.gap || (D <= tol.gap && N > tol_n)) {
        result.feasible = false;
        result.value = 0.0;
        result.witness = IndexPair{i, j};
        return result;
      }
      if (N <= tol_n) continue;
      const double needed = N / (2.0 * D);
      if (needed > result.value) {
        result.value = needed;
        result.witness = IndexPair{i, j};
      }
    }
  }
  return result;
}

MinimalConstant min_constant_w11(const JetSet& jet) {
  const GammaReport gr = gamma_functional(jet);
  MinimalConstant result;
  result.value = gr.gamma;
  result.witness = gr.attaining_pair;
  return result;
}

MinimalConstant min_constant_cw1omega(const JetSet& jet, const Modulus& mod) {
  require_euclidean(jet, "min_constant_cw1omega");
  return bisect_constant(jet,
                         [&mod](double M, double dg) { return mod.scaled_conjugate(M, dg); });
}

MinimalConstant min_constant_cw1alpha_lp(const JetSet& jet) {
  require_lp(jet, "min_constant_cw1alpha_lp");
  const double alpha = jet.norm().holder_exponent();
  return bisect_constant(jet, [alpha](double M, double dg) {
    return alpha / ((1.0 + alpha) * std::pow(M, 1.0 / alpha)) * std::pow(dg, 1.0 + 1.0 / alpha);
  });
}

} // namespace jetex

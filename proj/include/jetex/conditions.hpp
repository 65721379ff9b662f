#pragma once

#include "jetex/jet_core.hpp"
#include "jetex/moduli.hpp"

#include <cstddef>
#include <optional>
#include <utility>

namespace jetex {

using IndexPair = std::pair<std::size_t, std::size_t>;

/**
 * Outcome of a pairwise extension condition.
 *
 * For the ordered pair (i, j) the slack is LHS - RHS of the defining
 * inequality written with x = x_i, y = x_j, so a satisfied pair has
 * slack >= 0. `margin` is the smallest slack over all ordered pairs (0 when
 * there are none) and `worst_pair` the pair attaining it.
 */
struct ConditionReport {
  bool satisfied = true;
  std::optional<IndexPair> worst_pair;
  double margin = 0.0;
  double constant_used = 0.0;
  double tolerance = 0.0;
};

/// Le Gruyer's functional and the (unordered) pair where it is attained.
struct GammaReport {
  double gamma = 0.0;
  std::optional<IndexPair> attaining_pair;
  double A = 0.0;
  double B = 0.0;
};

/// Result of a minimal-constant search; infeasibility is a value.
struct MinimalConstant {
  bool feasible = true;
  double value = 0.0;
  /// Ordered pair (x, y) proving infeasibility, or attaining the constant.
  std::optional<IndexPair> witness;
};

/// tol_feas = 1e-10 (1 + max|f| + max||G||_*^2 / M).
double feasibility_tolerance(const JetSet& jet, double M);

ConditionReport check_cw11(const JetSet& jet, double M);
ConditionReport check_w11(const JetSet& jet, double M);
ConditionReport check_cw1omega(const JetSet& jet, const Modulus& mod, double M);
/// Requires an l_p jet; alpha = p - 1 and gradients are measured in l_q.
ConditionReport check_cw1alpha_lp(const JetSet& jet, double M);

GammaReport gamma_functional(const JetSet& jet);

MinimalConstant min_constant_cw11(const JetSet& jet);
MinimalConstant min_constant_w11(const JetSet& jet);
/// Bisection on M, relative tolerance 1e-10.
MinimalConstant min_constant_cw1omega(const JetSet& jet, const Modulus& mod);
MinimalConstant min_constant_cw1alpha_lp(const JetSet& jet);

} // namespace jetex

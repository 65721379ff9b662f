#pragma once

#include "jetex/conditions.hpp"
#include "jetex/envelope.hpp"
#include "jetex/errors.hpp"
#include "jetex/jet_core.hpp"
#include "jetex/moduli.hpp"

#include <optional>
#include <string>

namespace jetex {

enum class ExtensionClass { C11, C11Conv, C1OmegaConv, C1AlphaConvLp };

std::string to_string(ExtensionClass cls);

struct ExtensionProblem {
  JetSet jet;
  ExtensionClass cls = ExtensionClass::C11Conv;
  Modulus modulus;
  double M = 1.0;
};

/// The jet fails the condition of its class at the requested constant.
class InfeasibleJet : public Error {
public:
  explicit InfeasibleJet(ConditionReport report);
  const ConditionReport& report() const noexcept { return report_; }

private:
  ConditionReport report_;
};

/// Runs the feasibility check matching `cls`.
ConditionReport check_class(const JetSet& jet, ExtensionClass cls, const Modulus& mod, double M);

/// Smallest feasible constant for `cls` (Gamma for C11).
MinimalConstant min_constant_class(const JetSet& jet, ExtensionClass cls, const Modulus& mod);

struct ExtensionValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
  double residual = 0.0;
  bool converged = false;
};

/// F(x) = conv(g)(x) - c ||x||^2 for the stored problem.
class Extension {
public:
  Extension(ExtensionProblem problem, EnvelopeEvaluator evaluator, double post_shift);

  const ExtensionProblem& problem() const noexcept { return problem_; }
  const EnvelopeEvaluator& evaluator() const noexcept { return evaluator_; }
  double post_shift() const noexcept { return post_shift_; }

  /// Never throws on non-convergence.
  ExtensionValue evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Throws SolverDidNotConverge.
  ExtensionValue operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// g and m of the original jet, in the coordinates of F.
  double upper(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double lower(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
  ExtensionProblem problem_;
  EnvelopeEvaluator evaluator_;
  MinorantFunction minorant_;
  double post_shift_;
};

/// f + (M/2)||x||^2, G + M x.
JetSet tilde_transform(const JetSet& jet, double M);
/// Exact inverse of tilde_transform up to rounding.
JetSet untilde_transform(const JetSet& jet, double M);

Extension extend_c11_convex(const JetSet& jet, double M, SolverSettings settings = {});
Extension extend_c11(const JetSet& jet, double M, SolverSettings settings = {});
Extension extend_c1omega_convex(const JetSet& jet, const Modulus& mod, double M,
                                SolverSettings settings = {});
Extension extend_c1alpha_convex_lp(const JetSet& jet, double M, SolverSettings settings = {});

/// Dispatch on `cls`; the modulus is used by C1OmegaConv only.
Extension extend(const JetSet& jet, ExtensionClass cls, const Modulus& mod, double M,
                 SolverSettings settings = {});

} // namespace jetex

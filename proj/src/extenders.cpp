#include "jetex/extenders.hpp"

namespace jetex {

namespace {

std::string describe(const ConditionReport& r) {
  std::string s = "jet infeasible at M = " + std::to_string(r.constant_used) +
                  ", margin " + std::to_string(r.margin);
  if (r.worst_pair) {
    s += ", witness (" + std::to_string(r.worst_pair->first) + ", " +
         std::to_string(r.worst_pair->second) + ")";
  }
  return s;
}

void require_feasible(const ConditionReport& r) {
  if (!r.satisfied) throw InfeasibleJet(r);
}

JetSet shift_jet(const JetSet& jet, double M, double sign) {
  if (!(M > 0.0)) throw NonPositiveConstant("transform constant M must be positive");
  RawJet raw = to_raw(jet);
  for (JetPoint& pt : raw.points) {
    pt.f += sign * 0.5 * M * pt.x.squaredNorm();
    pt.g += sign * M * pt.x;
  }
  return validate_jet(raw);
}

} // namespace

std::string to_string(ExtensionClass cls) {
  switch (cls) {
  case ExtensionClass::C11: return "c11";
  case ExtensionClass::C11Conv: return "c11_conv";
  case ExtensionClass::C1OmegaConv: return "c1omega_conv";
  case ExtensionClass::C1AlphaConvLp: return "c1alpha_conv_lp";
  }
  return "unknown";
}

InfeasibleJet::InfeasibleJet(ConditionReport report)
    : Error(describe(report)), report_(std::move(report)) {}

ConditionReport check_class(const JetSet& jet, ExtensionClass cls, const Modulus& mod, double M) {
  switch (cls) {
  case ExtensionClass::C11: return check_w11(jet, M);
  case ExtensionClass::C11Conv: return check_cw11(jet, M);
  case ExtensionClass::C1OmegaConv: return check_cw1omega(jet, mod, M);
  case ExtensionClass::C1AlphaConvLp: return check_cw1alpha_lp(jet, M);
  }
  return {};
}

MinimalConstant min_constant_class(const JetSet& jet, ExtensionClass cls, const Modulus& mod) {
  switch (cls) {
  case ExtensionClass::C11: return min_constant_w11(jet);
  case ExtensionClass::C11Conv: return min_constant_cw11(jet);
  case ExtensionClass::C1OmegaConv: return min_constant_cw1omega(jet, mod);
  case ExtensionClass::C1AlphaConvLp: return min_constant_cw1alpha_lp(jet);
  }
  return {};
}

Extension::Extension(ExtensionProblem problem, EnvelopeEvaluator evaluator, double post_shift)
    : problem_(std::move(problem)), evaluator_(std::move(evaluator)),
      minorant_(evaluator_.upper().jet()), post_shift_(post_shift) {}

ExtensionValue Extension::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  EnvelopePoint pt = evaluator_.evaluate(x);
  ExtensionValue out;
  out.value = pt.value;
  out.gradient = std::move(pt.gradient);
  if (post_shift_ != 0.0) {
    out.value -= post_shift_ * x.squaredNorm();
    out.gradient -= 2.0 * post_shift_ * x;
  }
  out.residual = pt.residual;
  out.converged = pt.converged;
  return out;
}

ExtensionValue Extension::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  ExtensionValue v = evaluate(x);
  if (!v.converged) throw SolverDidNotConverge(v.residual);
  return v;
}

double Extension::upper(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return evaluator_.upper().eval(x).value - post_shift_ * x.squaredNorm();
}

double Extension::lower(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return minorant_.eval(x) - post_shift_ * x.squaredNorm();
}

JetSet tilde_transform(const JetSet& jet, double M) {
  if (jet.norm().kind != NormKind::Euclidean) {
    throw NormMismatch("tilde_transform requires a Euclidean jet");
  }
  return shift_jet(jet, M, 1.0);
}

JetSet untilde_transform(const JetSet& jet, double M) { return shift_jet(jet, M, -1.0); }

Extension extend_c11_convex(const JetSet& jet, double M, SolverSettings settings) {
  require_feasible(check_cw11(jet, M));
  const Modulus lin(1.0);
  EnvelopeEvaluator ev(UpperFunction::with_modulus(jet, lin, M), settings);
  return Extension({jet, ExtensionClass::C11Conv, lin, M}, std::move(ev), 0.0);
}

Extension extend_c11(const JetSet& jet, double M, SolverSettings settings) {
  require_feasible(check_w11(jet, M));
  const Modulus lin(1.0);
  const JetSet tilde = tilde_transform(jet, M);
  EnvelopeEvaluator ev(UpperFunction::with_modulus(tilde, lin, 2.0 * M), settings);
  return Extension({jet, ExtensionClass::C11, lin, M}, std::move(ev), 0.5 * M);
}

Extension extend_c1omega_convex(const JetSet& jet, const Modulus& mod, double M,
                                SolverSettings settings) {
  require_feasible(check_cw1omega(jet, mod, M));
  EnvelopeEvaluator ev(UpperFunction::with_modulus(jet, mod, M), settings);
  return Extension({jet, ExtensionClass::C1OmegaConv, mod, M}, std::move(ev), 0.0);
}

Extension extend_c1alpha_convex_lp(const JetSet& jet, double M, SolverSettings settings) {
  require_feasible(check_cw1alpha_lp(jet, M));
  const Modulus mod(jet.norm().holder_exponent());
  EnvelopeEvaluator ev(UpperFunction::with_lp(jet, M), settings);
  return Extension({jet, ExtensionClass::C1AlphaConvLp, mod, M}, std::move(ev), 0.0);
}

Extension extend(const JetSet& jet, ExtensionClass cls, const Modulus& mod, double M,
                 SolverSettings settings) {
  switch (cls) {
  case ExtensionClass::C11: return extend_c11(jet, M, settings);
  case ExtensionClass::C11Conv: return extend_c11_convex(jet, M, settings);
  case ExtensionClass::C1OmegaConv: return extend_c1omega_convex(jet, mod, M, settings);
  case ExtensionClass::C1AlphaConvLp: return extend_c1alpha_convex_lp(jet, M, settings);
  }
  throw VariantNotSupported("unknown extension class");
}

} // namespace jetex

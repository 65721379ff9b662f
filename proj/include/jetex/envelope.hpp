#pragma once

#include "jetex/jet_core.hpp"
#include "jetex/moduli.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace jetex {

/**
 * Penalty kernel K(z) = (M / (1+a)) ||z||^{1+a} and its conjugate
 * K*(w) = a / ((1+a) M^{1/a}) ||w||_*^{1+1/a}.
 *
 * For the Euclidean norm this is M phi(||z||) for the power modulus t^a.
 * For l_p the exponent is tied to the norm (1 + a = p), so both K and K*
 * separate over coordinates.
 */
class Kernel {
public:
  Kernel(NormSpec norm, double alpha, double M);

  const NormSpec& norm() const noexcept { return norm_; }
  double alpha() const noexcept { return alpha_; }
  double M() const noexcept { return M_; }
  /// omega(t) = t^alpha.
  double omega(double t) const;

  double value(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& z) const;

  double conj_value(const Eigen::Ref<const Eigen::VectorXd>& w) const;
  Eigen::VectorXd conj_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const;
  Eigen::MatrixXd conj_hessian(const Eigen::Ref<const Eigen::VectorXd>& w) const;

private:
  NormSpec norm_;
  double alpha_;
  double M_;
  double conj_coeff_; // a / ((1+a) M^{1/a})
  double conj_power_; // 1 + 1/a
};

enum class Variant {
  Convex,  ///< g(x) = min_y f(y) + <G(y), x-y> + K(x-y)
  Shifted, ///< Convex form plus (M/2)||x||^2; evaluation only
};

struct GValue {
  double value = 0.0;
  std::size_t argmin = 0;
};

/// Upper function g: the infimal convolution of the jet tangents with K.
class UpperFunction {
public:
  /// Euclidean jet with power modulus `mod`.
  static UpperFunction with_modulus(JetSet jet, const Modulus& mod, double M,
                                    Variant variant = Variant::Convex);
  /// l_p jet; the exponent is alpha = p - 1.
  static UpperFunction with_lp(JetSet jet, double M);

  const JetSet& jet() const noexcept { return jet_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  Variant variant() const noexcept { return variant_; }
  double M() const noexcept { return kernel_.M(); }

  /// Minimum over jet points, ties to the lowest index.
  GValue eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  GValue operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return eval(x); }

  /// g*(p) = max_y <p, y> - f(y) + K*(p - G(y)). Throws VariantNotSupported
  /// for the shifted variant.
  double conjugate(const Eigen::Ref<const Eigen::VectorXd>& p) const;

private:
  UpperFunction(JetSet jet, Kernel kernel, Variant variant)
      : jet_(std::move(jet)), kernel_(std::move(kernel)), variant_(variant) {}

  JetSet jet_;
  Kernel kernel_;
  Variant variant_;
};

/// m(x) = max_z f(z) + <G(z), x - z>.
class MinorantFunction {
public:
  explicit MinorantFunction(JetSet jet) : jet_(std::move(jet)) {}
  double eval(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return eval(x); }

private:
  JetSet jet_;
};

struct SolverSettings {
  /// Converged when the certified gap is <= tolerance * (1 + |F(x)|).
  double tolerance = 1e-10;
  int max_newton_steps = 400;
};

/// Value and gradient of conv(g) at one point, with solver diagnostics.
struct EnvelopePoint {
  double value = 0.0;
  Eigen::VectorXd gradient;
  /// Certified upper bound on conv(g)(x) - value.
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
  /// Branches (jet indices) carrying the convex combination at the optimum.
  std::vector<std::size_t> active;
};

/**
 * Evaluates F = conv(g) and its gradient as the biconjugate g**:
 *   F(x) = max_p  min_y psi_y(p),   psi_y(p) = <p, x-y> + f(y) - K*(p - G(y)),
 * and grad F(x) is the (unique) maximiser.
 */
class EnvelopeEvaluator {
public:
  /// Requires the convex variant; throws VariantNotSupported otherwise.
  explicit EnvelopeEvaluator(UpperFunction g, SolverSettings settings = {});

  const UpperFunction& upper() const noexcept { return g_; }
  const SolverSettings& settings() const noexcept { return settings_; }

  /// Never throws on non-convergence; inspect `converged` and `residual`.
  EnvelopePoint evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Throws SolverDidNotConverge when the residual target is missed.
  EnvelopePoint eval_F(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Radius of the dual ball known to contain grad F(x).
  double search_radius(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
  UpperFunction g_;
  SolverSettings settings_;
};

/// Documented gap between the sampled hull and conv(g) on a grid with the
/// given per-axis spacing: K(spacing), i.e. (M/2) sum dt_k^2 when alpha = 1.
double grid_chord_bound(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& spacing);

} // namespace jetex

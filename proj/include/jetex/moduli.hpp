#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace jetex {

/**
 * Power modulus of continuity omega(t) = t^alpha with alpha in (0, 1].
 *
 * Carries the closed forms of omega, its inverse, phi(t) = int_0^t omega and
 * the Fenchel conjugate phi*(s) = int_0^s omega^{-1}. alpha = 1 is the
 * Lipschitz (C^{1,1}) case, where phi(t) = phi*(t) = t^2 / 2.
 */
class Modulus {
public:
  /// Throws NonPositiveConstant unless 0 < alpha <= 1.
  explicit Modulus(double alpha = 1.0);

  double alpha() const noexcept { return alpha_; }
  bool is_linear() const noexcept { return alpha_ == 1.0; }

  double omega(double t) const;
  double omega_inverse(double s) const;
  double phi(double t) const;
  double phi_star(double s) const;

  /// (M phi)^*(s) = M phi*(s / M).
  double scaled_conjugate(double M, double s) const;

  /// Coefficient c with M phi*(s / M) = c s^{1 + 1/alpha}.
  double conjugate_coefficient(double M) const;

private:
  double alpha_;
};

// Free-function spellings of the modulus operations.
double phi(const Modulus& mod, double t);
double phi_star(const Modulus& mod, double s);
double scaled_conjugate(const Modulus& mod, double M, double s);

enum class NormKind { Euclidean, Lp };

/**
 * Primal norm on R^n: Euclidean, or l_p with 1 < p <= 2 (dual l_q).
 *
 * `smoothness` is the constant C >= 2 of
 *   ||x+h||^{1+a} + ||x-h||^{1+a} - 2||x||^{1+a} <= C ||h||^{1+a},  a = p - 1.
 */
struct NormSpec {
  NormKind kind = NormKind::Euclidean;
  double p = 2.0;
  double q = 2.0;
  double smoothness = 2.0;

  static NormSpec euclidean();
  /// l_p norm; the smoothness constant is estimated by sampling in R^dim.
  static NormSpec lp(double p, int dim, std::uint64_t seed = 0, int trials = 100000);
  /// l_p norm with a caller-supplied smoothness constant.
  static NormSpec lp_with_constant(double p, double smoothness);

  /// Power exponent 1 + alpha of the primal kernel; alpha = p - 1 for l_p.
  double holder_exponent() const noexcept { return p - 1.0; }
  bool operator==(const NormSpec&) const = default;
};

double norm(const NormSpec& ns, const Eigen::Ref<const Eigen::VectorXd>& v);
double dual_norm(const NormSpec& ns, const Eigen::Ref<const Eigen::VectorXd>& w);

/**
 * Sampling estimate of the smoothness constant C for `ns` with exponent 1+alpha.
 *
 * Returns exactly 2 for (Euclidean, alpha = 1). Otherwise samples x on the
 * shells ||x|| in {0, 1, 10} and h with ||h|| log-spaced in [1e-3, 10], and
 * returns max(2, largest ratio) * 1.05. Deterministic in `seed`.
 */
double estimate_smoothness_constant(const NormSpec& ns, double alpha, int dim, int trials,
                                    std::uint64_t seed);

/// Largest sampled ratio before the max(2, .) floor and safety margin.
double sample_smoothness_ratio(const NormSpec& ns, double alpha, int dim, int trials,
                               std::uint64_t seed);

} // namespace jetex

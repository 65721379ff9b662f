#include "jetex/moduli.hpp"

#include "jetex/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

namespace jetex {

namespace {

void require_nonnegative(double t, const char* what) {
  if (!(t >= 0.0)) {
    throw NegativeArgument(std::string(what) + " requires a nonnegative argument, got " +
                           std::to_string(t));
  }
}

} // namespace

Modulus::Modulus(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw NonPositiveConstant("modulus exponent must lie in (0, 1], got " +
                              std::to_string(alpha));
  }
}

double Modulus::omega(double t) const {
  require_nonnegative(t, "omega");
  return is_linear() ? t : std::pow(t, alpha_);
}

double Modulus::omega_inverse(double s) const {
  require_nonnegative(s, "omega_inverse");
  return is_linear() ? s : std::pow(s, 1.0 / alpha_);
}

double Modulus::phi(double t) const {
  require_nonnegative(t, "phi");
  if (is_linear()) return 0.5 * t * t;
  return std::pow(t, 1.0 + alpha_) / (1.0 + alpha_);
}

double Modulus::phi_star(double s) const {
  require_nonnegative(s, "phi_star");
  if (is_linear()) return 0.5 * s * s;
  return alpha_ * std::pow(s, 1.0 + 1.0 / alpha_) / (1.0 + alpha_);
}

double Modulus::scaled_conjugate(double M, double s) const {
  if (!(M > 0.0)) throw NonPositiveConstant("scaled_conjugate requires M > 0");
  require_nonnegative(s, "scaled_conjugate");
  return M * phi_star(s / M);
}

double Modulus::conjugate_coefficient(double M) const {
  if (!(M > 0.0)) throw NonPositiveConstant("conjugate coefficient requires M > 0");
  if (is_linear()) return 0.5 / M;
  return alpha_ / ((1.0 + alpha_) * std::pow(M, 1.0 / alpha_));
}

double phi(const Modulus& mod, double t) { return mod.phi(t); }
double phi_star(const Modulus& mod, double s) { return mod.phi_star(s); }
double scaled_conjugate(const Modulus& mod, double M, double s) {
  return mod.scaled_conjugate(M, s);
}

NormSpec NormSpec::euclidean() { return NormSpec{}; }

NormSpec NormSpec::lp_with_constant(double p, double smoothness) {
  if (!(p > 1.0 && p <= 2.0)) {
    throw NonPositiveConstant("l_p exponent must lie in (1, 2], got " + std::to_string(p));
  }
  if (!(smoothness >= 2.0)) {
    throw NonPositiveConstant("smoothness constant must be at least 2");
  }
  NormSpec ns;
  ns.kind = NormKind::Lp;
  ns.p = p;
  ns.q = p / (p - 1.0);
  ns.smoothness = smoothness;
  return ns;
}

NormSpec NormSpec::lp(double p, int dim, std::uint64_t seed, int trials) {
  NormSpec ns = lp_with_constant(p, 2.0);
  ns.smoothness = estimate_smoothness_constant(ns, p - 1.0, dim, trials, seed);
  return ns;
}

double norm(const NormSpec& ns, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (ns.kind == NormKind::Euclidean || ns.p == 2.0) return v.norm();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) sum += std::pow(std::abs(v[k]), ns.p);
  return std::pow(sum, 1.0 / ns.p);
}

double dual_norm(const NormSpec& ns, const Eigen::Ref<const Eigen::VectorXd>& w) {
  if (ns.kind == NormKind::Euclidean || ns.q == 2.0) return w.norm();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) sum += std::pow(std::abs(w[k]), ns.q);
  return std::pow(sum, 1.0 / ns.q);
}

double sample_smoothness_ratio(const NormSpec& ns, double alpha, int dim, int trials,
                               std::uint64_t seed) {
  if (dim < 1) throw DimensionMismatch("smoothness estimate needs dim >= 1");
  const double e = 1.0 + alpha;
  constexpr std::array<double, 3> shells{0.0, 1.0, 10.0};
  constexpr int kLevels = 17; // ||h|| = 10^{-3 + k/4}
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> axis(0, dim - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto direction = [&]() {
    Eigen::VectorXd u(dim);
    // A quarter of the draws are coordinate-aligned or diagonal, where l_p
    // norms are least round.
    const double c = coin(rng);
    if (c < 0.125) {
      u.setZero();
      u[axis(rng)] = coin(rng) < 0.5 ? -1.0 : 1.0;
    } else if (c < 0.25) {
      for (int k = 0; k < dim; ++k) u[k] = coin(rng) < 0.5 ? -1.0 : 1.0;
    } else {
      for (int k = 0; k < dim; ++k) u[k] = gauss(rng);
    }
    const double len = norm(ns, u);
    return Eigen::VectorXd(u / (len > 0.0 ? len : 1.0));
  };

  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double radius = shells[static_cast<std::size_t>(t) % shells.size()];
    const double step = std::pow(10.0, -3.0 + 0.25 * ((t / 3) % kLevels));
    const Eigen::VectorXd x = radius * direction();
    const Eigen::VectorXd h = step * direction();
    const double hn = std::pow(norm(ns, h), e);
    if (!(hn > 0.0)) continue;
    const double num = std::pow(norm(ns, x + h), e) + std::pow(norm(ns, x - h), e) -
                       2.0 * std::pow(norm(ns, x), e);
    best = std::max(best, num / hn);
  }
  return best;
}

double estimate_smoothness_constant(const NormSpec& ns, double alpha, int dim, int trials,
                                    std::uint64_t seed) {
  if (ns.kind == NormKind::Euclidean && alpha == 1.0) return 2.0;
  const double ratio = sample_smoothness_ratio(ns, alpha, dim, trials, seed);
  return std::max(2.0, ratio) * 1.05;
}

} // namespace jetex

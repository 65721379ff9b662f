#include "jetex/envelope.hpp"

#include "jetex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jetex {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void require_dim(const JetSet& jet, Eigen::Index n) {
  if (n != jet.dim()) {
    throw DimensionMismatch("query has dimension " + std::to_string(n) + ", jet has " +
                            std::to_string(jet.dim()));
  }
}

} // namespace

Kernel::Kernel(NormSpec norm, double alpha, double M) : norm_(norm), alpha_(alpha), M_(M) {
  if (!(M > 0.0)) throw NonPositiveConstant("kernel constant M must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw NonPositiveConstant("alpha must lie in (0, 1]");
  conj_power_ = 1.0 + 1.0 / alpha;
  conj_coeff_ = alpha / ((1.0 + alpha) * std::pow(M, 1.0 / alpha));
}

double Kernel::omega(double t) const { return alpha_ == 1.0 ? t : std::pow(t, alpha_); }

double Kernel::value(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (norm_.kind == NormKind::Lp) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) s += std::pow(std::abs(z[k]), norm_.p);
    return M_ / norm_.p * s;
  }
  if (alpha_ == 1.0) return 0.5 * M_ * z.squaredNorm();
  return M_ / (1.0 + alpha_) * std::pow(z.norm(), 1.0 + alpha_);
}

Eigen::VectorXd Kernel::gradient(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (norm_.kind == NormKind::Lp) {
    Eigen::VectorXd out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      out[k] = M_ * std::pow(std::abs(z[k]), norm_.p - 1.0) * sgn(z[k]);
    }
    return out;
  }
  if (alpha_ == 1.0) return M_ * z;
  const double r = z.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(z.size());
  return (M_ * std::pow(r, alpha_ - 1.0)) * z;
}

double Kernel::conj_value(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (norm_.kind == NormKind::Lp) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < w.size(); ++k) s += std::pow(std::abs(w[k]), norm_.q);
    return conj_coeff_ * s;
  }
  if (alpha_ == 1.0) return w.squaredNorm() / (2.0 * M_);
  return conj_coeff_ * std::pow(w.norm(), conj_power_);
}

Eigen::VectorXd Kernel::conj_gradient(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (norm_.kind == NormKind::Lp) {
    const double q = norm_.q;
    Eigen::VectorXd out(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      out[k] = conj_coeff_ * q * std::pow(std::abs(w[k]), q - 1.0) * sgn(w[k]);
    }
    return out;
  }
  if (alpha_ == 1.0) return w / M_;
  const double r = w.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(w.size());
  return (conj_coeff_ * conj_power_ * std::pow(r, conj_power_ - 2.0)) * w;
}

Eigen::MatrixXd Kernel::conj_hessian(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  const Eigen::Index n = w.size();
  if (norm_.kind == NormKind::Lp) {
    const double q = norm_.q;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      // q >= 2, so the diagonal is finite (zero at w_k = 0 when q > 2).
      h(k, k) = conj_coeff_ * q * (q - 1.0) * std::pow(std::abs(w[k]), q - 2.0);
    }
    return h;
  }
  if (alpha_ == 1.0) return Eigen::MatrixXd::Identity(n, n) / M_;
  const double r = w.norm();
  if (r == 0.0) return Eigen::MatrixXd::Zero(n, n);
  const double r_pow = conj_coeff_ * conj_power_ * std::pow(r, conj_power_ - 2.0);
  const Eigen::VectorXd u = w / r;
  return r_pow * (Eigen::MatrixXd::Identity(n, n) + (conj_power_ - 2.0) * u * u.transpose());
}

UpperFunction UpperFunction::with_modulus(JetSet jet, const Modulus& mod, double M,
                                          Variant variant) {
  if (jet.norm().kind != NormKind::Euclidean) {
    throw NormMismatch("modulus-based upper function requires a Euclidean jet");
  }
  Kernel k(jet.norm(), mod.alpha(), M);
  return UpperFunction(std::move(jet), std::move(k), variant);
}

UpperFunction UpperFunction::with_lp(JetSet jet, double M) {
  if (jet.norm().kind != NormKind::Lp) throw NormMismatch("l_p upper function requires an l_p jet");
  Kernel k(jet.norm(), jet.norm().holder_exponent(), M);
  return UpperFunction(std::move(jet), std::move(k), Variant::Convex);
}

GValue UpperFunction::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require_dim(jet_, x.size());
  GValue best;
  best.value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd z(x.size());
  for (std::size_t i = 0; i < jet_.size(); ++i) {
    const JetPoint& pt = jet_[i];
    z = x - pt.x;
    const double v = pt.f + pairing(pt.g, z) + kernel_.value(z);
    if (v < best.value) {
      best.value = v;
      best.argmin = i;
    }
  }
  if (variant_ == Variant::Shifted) best.value += 0.5 * kernel_.M() * x.squaredNorm();
  return best;
}

double UpperFunction::conjugate(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (variant_ == Variant::Shifted) {
    throw VariantNotSupported("the shifted upper function is not conjugated directly");
  }
  require_dim(jet_, p.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const JetPoint& pt : jet_.points()) {
    best = std::max(best, pairing(p, pt.x) - pt.f + kernel_.conj_value(p - pt.g));
  }
  return best;
}

double MinorantFunction::eval(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require_dim(jet_, x.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const JetPoint& pt : jet_.points()) best = std::max(best, pt.f + pairing(pt.g, x - pt.x));
  return best;
}

double grid_chord_bound(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& spacing) {
  return kernel.value(spacing);
}

} // namespace jetex

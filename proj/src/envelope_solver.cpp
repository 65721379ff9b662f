// Inner problem: maximise Phi(p) = min_i psi_i(p) over the dual variable p.
//
// 1. Closed form: p = grad h_k(x) for the branch k attaining g(x). When
//    Phi(p) reaches g(x) the envelope touches g at x and we are done.
// 2. Log-barrier path on (p, t): max t s.t. psi_i(p) > t.
// 3. Active-set Newton on the KKT system of the barrier's limit point.
//
// Every returned value carries a duality certificate: for any lambda in the
// simplex, F(x) <= sum_i lambda_i psi_i(p) + <d, p* - p> with
// d = sum_i lambda_i grad psi_i(p) and ||p*||_* <= R.

#include "jetex/envelope.hpp"

#include "jetex/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace jetex {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

class InnerProblem {
public:
  InnerProblem(const UpperFunction& g, const VectorXd& x)
      : jet_(g.jet()), K_(g.kernel()), N_(jet_.size()), n_(jet_.dim()), A_(n_, N_) {
    for (std::size_t i = 0; i < N_; ++i) A_.col(i) = x - jet_[i].x;
  }

  std::size_t size() const { return N_; }
  int dim() const { return n_; }

  double psi(std::size_t i, const VectorXd& p) const {
    return p.dot(A_.col(i)) + jet_[i].f - K_.conj_value(p - jet_[i].g);
  }
  VectorXd grad(std::size_t i, const VectorXd& p) const {
    return A_.col(i) - K_.conj_gradient(p - jet_[i].g);
  }
  /// Hessian of -psi_i (positive semidefinite).
  MatrixXd curvature(std::size_t i, const VectorXd& p) const {
    return K_.conj_hessian(p - jet_[i].g);
  }
  double Phi(const VectorXd& p) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N_; ++i) m = std::min(m, psi(i, p));
    return m;
  }

  /// Upper bound on F(x) - Phi(p) from multipliers `lam` (clipped, normalised).
  double certificate(const VectorXd& p, VectorXd lam, double radius) const {
    lam = lam.cwiseMax(0.0);
    const double total = lam.sum();
    if (!(total > 0.0)) return std::numeric_limits<double>::infinity();
    lam /= total;
    double avg = 0.0;
    VectorXd d = VectorXd::Zero(n_);
    for (std::size_t i = 0; i < N_; ++i) {
      if (lam[i] == 0.0) continue;
      avg += lam[i] * psi(i, p);
      d += lam[i] * grad(i, p);
    }
    const double gap = std::max(0.0, avg - Phi(p));
    return gap + norm(jet_.norm(), d) * (radius + dual_norm(jet_.norm(), p));
  }

private:
  const JetSet& jet_;
  const Kernel& K_;
  std::size_t N_;
  int n_;
  MatrixXd A_;
};

VectorXd solve_spd(MatrixXd H, const VectorXd& rhs) {
  Eigen::LDLT<MatrixXd> ldlt(H);
  VectorXd d;
  if (ldlt.info() == Eigen::Success) {
    d = ldlt.solve(rhs);
    if (d.allFinite() && ldlt.isPositive()) return d;
  }
  const double ridge = 1e-12 * (1.0 + H.diagonal().cwiseAbs().sum());
  H.diagonal().array() += ridge;
  return H.completeOrthogonalDecomposition().solve(rhs);
}

struct BarrierResult {
  VectorXd p;
  double t = 0.0;
  VectorXd lam;
  int steps = 0;
};

BarrierResult barrier_path(const InnerProblem& prob, VectorXd p, double t, double mu, double target,
                           int max_steps) {
  const std::size_t N = prob.size();
  const int n = prob.dim();
  VectorXd s(N);
  MatrixXd grads(n, N);
  BarrierResult out;

  auto merit = [&](const VectorXd& pp, double tt, double m, double& val) {
    val = -tt / m;
    for (std::size_t i = 0; i < N; ++i) {
      const double si = prob.psi(i, pp) - tt;
      if (!(si > 0.0)) return false;
      val -= std::log(si);
    }
    return true;
  };

  while (true) {
    for (int it = 0; it < 60 && out.steps < max_steps; ++it) {
      VectorXd gp = VectorXd::Zero(n);
      double gt = -1.0 / mu;
      MatrixXd H = MatrixXd::Zero(n + 1, n + 1);
      for (std::size_t i = 0; i < N; ++i) {
        s[i] = prob.psi(i, p) - t;
        grads.col(i) = prob.grad(i, p);
        const double inv = 1.0 / s[i];
        gp -= inv * grads.col(i);
        gt += inv;
        H.topLeftCorner(n, n) += (inv * inv) * grads.col(i) * grads.col(i).transpose() +
                                 inv * prob.curvature(i, p);
        H.topRightCorner(n, 1) -= (inv * inv) * grads.col(i);
        H(n, n) += inv * inv;
      }
      H.bottomLeftCorner(1, n) = H.topRightCorner(n, 1).transpose();
      VectorXd grad(n + 1);
      grad << gp, gt;
      const VectorXd d = solve_spd(H, -grad);
      const double slope = grad.dot(d);
      if (!(slope < 0.0) || -slope < 1e-10) break;

      double cur = 0.0;
      merit(p, t, mu, cur);
      double tau = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, tau *= 0.5) {
        const VectorXd pn = p + tau * d.head(n);
        const double tn = t + tau * d[n];
        double val = 0.0;
        if (merit(pn, tn, mu, val) && val <= cur + 1e-4 * tau * slope) {
          p = pn;
          t = tn;
          moved = true;
          break;
        }
      }
      ++out.steps;
      if (!moved) break;
    }
    if (static_cast<double>(N) * mu <= target || out.steps >= max_steps) break;
    mu *= 0.1;
  }

  out.lam.resize(N);
  for (std::size_t i = 0; i < N; ++i) out.lam[i] = mu / (prob.psi(i, p) - t);
  out.p = std::move(p);
  out.t = t;
  return out;
}

struct PolishResult {
  bool ok = false;
  VectorXd p;
  VectorXd lam; // full length, zero off the active set
  std::vector<std::size_t> active;
  int steps = 0;
};

/// Newton on sum lam_i grad psi_i = 0, psi_i = t (i in S), sum lam = 1.
PolishResult polish(const InnerProblem& prob, VectorXd p, const VectorXd& lam0,
                    std::vector<std::size_t> S) {
  const std::size_t N = prob.size();
  const int n = prob.dim();
  PolishResult out;

  VectorXd lam_full = lam0;
  const double scale_eps = 1e-13;
  for (int change = 0; change < static_cast<int>(2 * N) + 5; ++change) {
    const auto m = static_cast<Eigen::Index>(S.size());
    VectorXd lam(m);
    double t = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < m; ++a) {
      lam[a] = std::max(lam_full[S[a]], 0.0);
      t = std::min(t, prob.psi(S[a], p));
    }
    if (lam.sum() > 0.0) {
      lam /= lam.sum();
    } else {
      lam.setConstant(1.0 / static_cast<double>(m));
    }

    auto residual = [&](const VectorXd& pp, const VectorXd& ll, double tt) {
      VectorXd r(n + m + 1);
      VectorXd d = VectorXd::Zero(n);
      for (Eigen::Index a = 0; a < m; ++a) {
        d += ll[a] * prob.grad(S[a], pp);
        r[n + a] = prob.psi(S[a], pp) - tt;
      }
      r.head(n) = d;
      r[n + m] = ll.sum() - 1.0;
      return r;
    };

    VectorXd r = residual(p, lam, t);
    for (int it = 0; it < 40; ++it) {
      MatrixXd J = MatrixXd::Zero(n + m + 1, n + m + 1);
      for (Eigen::Index a = 0; a < m; ++a) {
        const VectorXd ga = prob.grad(S[a], p);
        J.topLeftCorner(n, n) -= lam[a] * prob.curvature(S[a], p);
        J.block(0, n + a, n, 1) = ga;
        J.block(n + a, 0, 1, n) = ga.transpose();
        J(n + a, n + m) = -1.0;
        J(n + m, n + a) = 1.0;
      }
      const VectorXd step = J.completeOrthogonalDecomposition().solve(-r);
      if (!step.allFinite()) break;
      const double r0 = r.norm();
      double tau = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 30; ++ls, tau *= 0.5) {
        const VectorXd pn = p + tau * step.head(n);
        const VectorXd ln = lam + tau * step.segment(n, m);
        const double tn = t + tau * step[n + m];
        const VectorXd rn = residual(pn, ln, tn);
        if (rn.norm() < r0 || (rn.norm() <= r0 && tau == 1.0)) {
          p = pn;
          lam = ln;
          t = tn;
          r = rn;
          improved = true;
          break;
        }
      }
      ++out.steps;
      if (!improved) break;
      if (r.norm() <= scale_eps * (1.0 + std::abs(t))) break;
    }

    lam_full.setZero();
    for (Eigen::Index a = 0; a < m; ++a) lam_full[S[a]] = lam[a];

    // Active-set bookkeeping: drop the most negative multiplier, or add the
    // most violated inactive branch.
    Eigen::Index neg = -1;
    double most_neg = -1e-12;
    for (Eigen::Index a = 0; a < m; ++a) {
      if (lam[a] < most_neg) {
        most_neg = lam[a];
        neg = a;
      }
    }
    if (neg >= 0 && m > 1) {
      S.erase(S.begin() + neg);
      continue;
    }
    std::size_t worst = N;
    double worst_val = t - 1e-13 * (1.0 + std::abs(t));
    for (std::size_t j = 0; j < N; ++j) {
      if (std::find(S.begin(), S.end(), j) != S.end()) continue;
      const double v = prob.psi(j, p);
      if (v < worst_val) {
        worst_val = v;
        worst = j;
      }
    }
    if (worst < N) {
      S.push_back(worst);
      lam_full[worst] = 0.0;
      continue;
    }
    out.ok = p.allFinite() && lam.allFinite();
    break;
  }
  out.p = std::move(p);
  out.lam = std::move(lam_full);
  out.active = std::move(S);
  return out;
}

} // namespace

EnvelopeEvaluator::EnvelopeEvaluator(UpperFunction g, SolverSettings settings)
    : g_(std::move(g)), settings_(settings) {
  if (g_.variant() != Variant::Convex) {
    throw VariantNotSupported("the envelope is evaluated for the convex variant only");
  }
}

double EnvelopeEvaluator::search_radius(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const JetSet& jet = g_.jet();
  const Kernel& K = g_.kernel();
  double dist = std::numeric_limits<double>::infinity();
  for (const auto& pt : jet.points()) dist = std::min(dist, norm(jet.norm(), x - pt.x));
  // Gradient-modulus bounds of the extension: M for alpha = 1, 8M for a
  // Euclidean power modulus, 2^{1+a} C / (1+a) M for l_p.
  double growth = 2.0 * K.M();
  if (jet.norm().kind == NormKind::Lp) {
    const double a = K.alpha();
    growth = std::pow(2.0, 1.0 + a) * jet.norm().smoothness / (1.0 + a) * K.M();
  } else if (K.alpha() < 1.0) {
    growth = 8.0 * K.M();
  }
  return jet.max_gradient_norm() + growth * K.omega(dist) + 1.0;
}

EnvelopePoint EnvelopeEvaluator::evaluate(const Eigen::Ref<const Eigen::VectorXd>& xr) const {
  const JetSet& jet = g_.jet();
  if (xr.size() != jet.dim()) {
    throw DimensionMismatch("query dimension does not match the jet");
  }
  const VectorXd x = xr;
  const Kernel& K = g_.kernel();
  const InnerProblem prob(g_, x);
  const std::size_t N = prob.size();
  auto eps = [&](double v) { return settings_.tolerance * (1.0 + std::abs(v)); };

  EnvelopePoint out;
  const GValue gv = g_.eval(x);
  const std::size_t k = gv.argmin;
  VectorXd p0 = jet[k].g + K.gradient(x - jet[k].x);
  const double phi0 = prob.Phi(p0);
  const double gap0 = gv.value - phi0;
  if (gap0 <= eps(gv.value)) {
    out.value = gv.value;
    out.gradient = std::move(p0);
    out.residual = std::max(0.0, gap0);
    out.converged = true;
    out.active = {k};
    return out;
  }

  double radius = search_radius(x);

  const double delta = std::max(gap0, 1e-8 * (1.0 + std::abs(phi0)));
  const double target = 1e-12 * (1.0 + std::abs(phi0));
  BarrierResult bar =
      barrier_path(prob, p0, phi0 - delta, delta, target, settings_.max_newton_steps);
  out.iterations = bar.steps;

  const double lam_max = bar.lam.maxCoeff();
  std::vector<std::size_t> S;
  for (std::size_t i = 0; i < N; ++i) {
    if (bar.lam[i] >= 1e-4 * lam_max) S.push_back(i);
  }

  VectorXd best_p = bar.p;
  VectorXd best_lam = bar.lam;
  std::vector<std::size_t> best_active = S;
  while (dual_norm(jet.norm(), best_p) > radius) radius *= 2.0;
  double best_cert = prob.certificate(best_p, best_lam, radius);

  PolishResult pol = polish(prob, bar.p, bar.lam, S);
  out.iterations += pol.steps;
  if (pol.ok) {
    double r = radius;
    while (dual_norm(jet.norm(), pol.p) > r) r *= 2.0;
    const double cert = prob.certificate(pol.p, pol.lam, r);
    if (cert <= best_cert) {
      best_p = pol.p;
      best_lam = pol.lam;
      best_active = pol.active;
      best_cert = cert;
    }
  }

  out.value = prob.Phi(best_p);
  out.gradient = std::move(best_p);
  out.residual = best_cert;
  out.converged = best_cert <= eps(out.value);
  std::vector<std::size_t> active;
  for (std::size_t i : best_active) {
    if (best_lam[i] > 0.0) active.push_back(i);
  }
  std::sort(active.begin(), active.end());
  out.active = std::move(active);
  return out;
}

EnvelopePoint EnvelopeEvaluator::eval_F(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  EnvelopePoint pt = evaluate(x);
  if (!pt.converged) throw SolverDidNotConverge(pt.residual);
  return pt;
}

} // namespace jetex

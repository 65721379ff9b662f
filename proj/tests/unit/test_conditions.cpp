#include "helpers.hpp"

#include "../support/random_jets.hpp"
#include "jetex/conditions.hpp"
#include "jetex/errors.hpp"
#include "jetex/extenders.hpp"

#include <doctest.h>

#include <cmath>

using namespace jetex;
using namespace jetex::testing;

namespace {

JetSet abs_jet() { return make_jet({pt1(-1, 1, -1), pt1(1, 1, 1)}); }
JetSet step_jet() { return make_jet({pt1(0, 0, 0), pt1(1, 1, 0)}); }

} // namespace

TEST_SUITE("conditions") {
  TEST_CASE("cw11 examples") {
    const ConditionReport r = check_cw11(abs_jet(), 1.0);
    CHECK(r.satisfied);
    CHECK(r.margin == doctest::Approx(0.0));
    CHECK_FALSE(check_cw11(abs_jet(), 0.5).satisfied);
    const ConditionReport single = check_cw11(make_jet({pt1(2, 3, 4)}), 0.1);
    CHECK(single.satisfied);
    CHECK(single.margin == 0.0);
    CHECK_FALSE(single.worst_pair.has_value());
    CHECK_THROWS_AS(check_cw11(abs_jet(), 0.0), NonPositiveConstant);
  }

  TEST_CASE("w11 examples") {
    const ConditionReport r = check_w11(step_jet(), 4.0);
    CHECK(r.satisfied);
    CHECK(r.margin == doctest::Approx(0.0));
    CHECK_FALSE(check_w11(step_jet(), 3.9).satisfied);
    CHECK(check_w11(make_jet({pt1(0, 2, 0), pt1(1, 2, 0), pt1(5, 2, 0)}), 1e-3).satisfied);
  }

  TEST_CASE("cw1omega examples") {
    const Modulus half(0.5);
    const ConditionReport r = check_cw1omega(make_jet({pt1(0, 0, 0), pt1(1, 0.5, 1)}), half, 1.0);
    CHECK(r.satisfied);
    CHECK(r.margin == doctest::Approx(0.5 - 1.0 / 3.0));
    const ConditionReport bad = check_cw1omega(make_jet({pt1(0, 0, 0), pt1(1, 0.3, 1)}), half, 1.0);
    CHECK_FALSE(bad.satisfied);
    REQUIRE(bad.worst_pair.has_value());
    CHECK(bad.worst_pair->first == 1);
    CHECK(bad.worst_pair->second == 0);
  }

  TEST_CASE("cw1omega at alpha = 1 matches cw11") {
    Rng rng(21);
    for (int t = 0; t < 30; ++t) {
      const JetSet jet = noise_jet(rng, 1 + t % 3, 6);
      const double M = uniform(rng, 0.2, 5.0);
      const ConditionReport a = check_cw11(jet, M);
      const ConditionReport b = check_cw1omega(jet, Modulus(1.0), M);
      CHECK(a.satisfied == b.satisfied);
      CHECK(a.worst_pair == b.worst_pair);
      CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-12));
    }
  }

  TEST_CASE("cw1alpha_lp examples") {
    const NormSpec lp = NormSpec::lp_with_constant(1.5, 2.0);
    auto jet_c = [&](double c) {
      RawJet raw{1, lp, {pt1(0, 0, 0), pt1(1, c, 1)}};
      return validate_jet(raw);
    };
    CHECK(check_cw1alpha_lp(jet_c(0.5), 1.0).satisfied);
    CHECK(check_cw1alpha_lp(jet_c(1.0 / 3.0), 1.0).satisfied);
    CHECK_FALSE(check_cw1alpha_lp(jet_c(0.3), 1.0).satisfied);
    CHECK_FALSE(check_cw1alpha_lp(jet_c(0.7), 1.0).satisfied);
    CHECK(check_cw1alpha_lp(validate_jet(RawJet{2, lp, {pt({1, 2}, 3, {4, 5})}}), 0.3).satisfied);
    CHECK_THROWS_AS(check_cw1alpha_lp(abs_jet(), 1.0), NormMismatch);
    CHECK_THROWS_AS(check_cw11(jet_c(0.5), 1.0), NormMismatch);
  }

  TEST_CASE("cw1alpha_lp with p = 2 matches cw11") {
    Rng rng(22);
    const NormSpec two = NormSpec::lp_with_constant(2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
      const JetSet e = noise_jet(rng, 2, 5);
      RawJet raw = to_raw(e);
      raw.norm = two;
      const JetSet l = validate_jet(raw);
      const double M = uniform(rng, 0.5, 3.0);
      const ConditionReport a = check_cw11(e, M);
      const ConditionReport b = check_cw1alpha_lp(l, M);
      CHECK(a.satisfied == b.satisfied);
      CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-12));
    }
  }

  TEST_CASE("gamma functional") {
    const GammaReport a = gamma_functional(abs_jet());
    CHECK(a.gamma == doctest::Approx(1.0));
    CHECK(a.A == doctest::Approx(0.0));
    CHECK(a.B == doctest::Approx(1.0));
    const GammaReport s = gamma_functional(step_jet());
    CHECK(s.gamma == doctest::Approx(4.0));
    CHECK(std::abs(s.A) == doctest::Approx(2.0));
    CHECK(s.B == doctest::Approx(0.0));
    const JetSet affine = make_jet({pt({0, 0}, 1, {2, -1}), pt({1, 1}, 2, {2, -1}),
                                    pt({-1, 2}, -3, {2, -1})});
    CHECK(gamma_functional(affine).gamma == doctest::Approx(0.0));
    CHECK(gamma_functional(make_jet({pt1(0, 1, 1)})).gamma == 0.0);
  }

  TEST_CASE("minimal constants") {
    CHECK(min_constant_cw11(abs_jet()).value == doctest::Approx(1.0));
    const MinimalConstant bad = min_constant_cw11(make_jet({pt1(0, 0, 0), pt1(1, -1, 0)}));
    CHECK_FALSE(bad.feasible);
    REQUIRE(bad.witness.has_value());
    CHECK(*bad.witness == IndexPair{1, 0});
    const JetSet affine = make_jet({pt1(0, 1, 2), pt1(1, 3, 2)});
    CHECK(min_constant_cw11(affine).value == 0.0);
    CHECK(min_constant_w11(affine).value == doctest::Approx(0.0));
    CHECK(min_constant_w11(step_jet()).value == doctest::Approx(4.0));
    CHECK(check_w11(step_jet(), 4.0).satisfied);
    CHECK_FALSE(check_w11(step_jet(), 4.0 * (1 - 1e-6)).satisfied);
    const MinimalConstant om =
        min_constant_cw1omega(make_jet({pt1(0, 0, 0), pt1(1, 1.0 / 3.0, 1)}), Modulus(0.5));
    CHECK(om.feasible);
    CHECK(om.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(min_constant_cw1omega(make_jet({pt1(0, 0, 0)}), Modulus(0.5)).value == 0.0);
    CHECK_FALSE(min_constant_cw1omega(make_jet({pt1(0, 0, 0), pt1(1, 0, 1)}), Modulus(0.5)).feasible);
  }

  TEST_CASE("bisection agrees with closed forms") {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
      const int n = 1 + t % 3;
      const JetSet jet = sample_jet(LogSumExpQuadratic(rng, n), spread_points(rng, n, 7));
      const double closed = min_constant_cw11(jet).value;
      CHECK(min_constant_cw1omega(jet, Modulus(1.0)).value ==
            doctest::Approx(closed).epsilon(1e-9));
    }
    // Hand minimisation over pairs: M = max (a / ((1+a) D))^a ||dG||^{1+a}.
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + t % 3;
      const double a = t % 2 ? 0.5 : 0.25;
      const JetSet jet = sample_jet(PowerSum(rng, n, a, false), spread_points(rng, n, 6));
      double expected = 0.0;
      for (std::size_t i = 0; i < jet.size(); ++i) {
        for (std::size_t j = 0; j < jet.size(); ++j) {
          if (i == j) continue;
          const double D = jet[i].f - jet[j].f - jet[j].g.dot(jet[i].x - jet[j].x);
          const double dg = (jet[i].g - jet[j].g).norm();
          expected = std::max(expected, std::pow(a / ((1 + a) * D), a) * std::pow(dg, 1 + a));
        }
      }
      const MinimalConstant mc = min_constant_cw1omega(jet, Modulus(a));
      CHECK(mc.value == doctest::Approx(expected).epsilon(1e-9));
      CHECK(check_cw1omega(jet, Modulus(a), mc.value).satisfied);
    }
  }

  TEST_CASE("gamma is the minimal W11 constant") {
    Rng rng(24);
    for (int t = 0; t < 50; ++t) {
      const int n = 1 + t % 3;
      const JetSet jet = noise_jet(rng, n, 2 + t % 8);
      const double G = gamma_functional(jet).gamma;
      CHECK(check_w11(jet, G).satisfied);
      CHECK_FALSE(check_w11(jet, G * (1 - 1e-6)).satisfied);
    }
  }

  TEST_CASE("necessary gradient bounds") {
    Rng rng(25);
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + t % 3;
      const JetSet jet = noise_jet(rng, n, 6);
      const double M = gamma_functional(jet).gamma * uniform(rng, 1.0, 2.0);
      REQUIRE(check_w11(jet, M).satisfied);
      for (std::size_t i = 0; i < jet.size(); ++i) {
        for (std::size_t j = i + 1; j < jet.size(); ++j) {
          CHECK((jet[i].g - jet[j].g).norm() <=
                M * (jet[i].x - jet[j].x).norm() * (1 + 1e-12) + 1e-12);
        }
      }
    }
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + t % 3;
      const Modulus mod(0.5);
      const JetSet jet = sample_jet(PowerSum(rng, n, 0.5, false), spread_points(rng, n, 6));
      const double M = min_constant_cw1omega(jet, mod).value;
      for (std::size_t i = 0; i < jet.size(); ++i) {
        for (std::size_t j = i + 1; j < jet.size(); ++j) {
          const double d = (jet[i].x - jet[j].x).norm();
          CHECK((jet[i].g - jet[j].g).norm() <= 2 * M * mod.omega(d / 2) * (1 + 1e-9));
        }
      }
    }
    for (int t = 0; t < 30; ++t) {
      const int n = 1 + t % 3;
      const NormSpec ns = NormSpec::lp_with_constant(1.5, 2.0);
      const double a = 0.5;
      const JetSet jet = sample_jet(PowerSum(rng, n, a, true), spread_points(rng, n, 6), ns);
      const double M = min_constant_cw1alpha_lp(jet).value;
      const double bound = std::pow((1 + a) / (2 * a), a) * M;
      for (std::size_t i = 0; i < jet.size(); ++i) {
        for (std::size_t j = i + 1; j < jet.size(); ++j) {
          const double d = norm(ns, jet[i].x - jet[j].x);
          CHECK(dual_norm(ns, jet[i].g - jet[j].g) <= bound * std::pow(d, a) * (1 + 1e-9));
        }
      }
    }
  }

  TEST_CASE("tilde transform equivalence, pairwise") {
    Rng rng(26);
    for (int t = 0; t < 40; ++t) {
      const int n = 1 + t % 3;
      const JetSet jet = noise_jet(rng, n, 5);
      const double M = gamma_functional(jet).gamma * std::pow(10.0, uniform(rng, -1.0, 1.0));
      const JetSet tilde = tilde_transform(jet, M);
      const ConditionReport w = check_w11(jet, M);
      const ConditionReport c = check_cw11(tilde, 2 * M);
      CHECK(w.satisfied == c.satisfied);
      CHECK(w.margin == doctest::Approx(c.margin).epsilon(1e-9).scale(1 + std::abs(w.margin)));
    }
  }
}

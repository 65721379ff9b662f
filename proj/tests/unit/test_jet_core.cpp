#include "helpers.hpp"

#include "jetex/errors.hpp"
#include "jetex/jet_io.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace jetex;
using namespace jetex::testing;

TEST_SUITE("jet_core") {
  TEST_CASE("minimal jet validates") {
    const JetSet jet = make_jet({pt1(0, 0, 0)});
    CHECK(jet.size() == 1);
    CHECK(jet.dim() == 1);
  }

  TEST_CASE("exact duplicates are merged") {
    const JetSet jet = make_jet({pt1(0, 0, 0), pt1(0, 0, 0)});
    CHECK(jet.size() == 1);
  }

  TEST_CASE("conflicting duplicates are rejected with both indices") {
    try {
      make_jet({pt1(0, 0, 0), pt1(0, 1, 0)});
      FAIL("expected ConflictingDuplicate");
    } catch (const ConflictingDuplicate& e) {
      CHECK(e.first() == 0);
      CHECK(e.second() == 1);
    }
  }

  TEST_CASE("locations within the duplicate tolerance coincide") {
    CHECK(make_jet({pt1(1, 2, 3), pt1(1 + 1e-13, 2, 3)}).size() == 1);
    CHECK_THROWS_AS(make_jet({pt1(1, 2, 3), pt1(1 + 1e-13, 2.5, 3)}), ConflictingDuplicate);
    CHECK(make_jet({pt1(1, 2, 3), pt1(1 + 1e-9, 2.5, 3)}).size() == 2);
  }

  TEST_CASE("dimension and finiteness checks") {
    RawJet raw;
    raw.dim = 2;
    raw.points = {pt({0, 0}, 0, {0})};
    CHECK_THROWS_AS(validate_jet(raw), DimensionMismatch);
    raw.points = {pt({0, std::numeric_limits<double>::quiet_NaN()}, 0, {0, 0})};
    CHECK_THROWS_AS(validate_jet(raw), NonFinite);
    raw.points = {pt({0, 0}, std::numeric_limits<double>::infinity(), {0, 0})};
    CHECK_THROWS_AS(validate_jet(raw), NonFinite);
    raw.points.clear();
    CHECK_THROWS_AS(validate_jet(raw), DimensionMismatch);
  }

  TEST_CASE("input order is preserved") {
    const JetSet jet = make_jet({pt1(3, 1, 0), pt1(-1, 2, 0), pt1(0, 3, 0)});
    CHECK(jet[0].x[0] == 3);
    CHECK(jet[1].x[0] == -1);
    CHECK(jet[2].x[0] == 0);
  }

  TEST_CASE("validation is idempotent and serialisation round-trips bit-exactly") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
      RawJet raw;
      raw.dim = 1 + trial % 3;
      raw.norm = trial % 2 ? NormSpec::lp_with_constant(1.5, 2.2) : NormSpec::euclidean();
      for (int i = 0; i < 6; ++i) {
        JetPoint p{Eigen::VectorXd(raw.dim), nd(rng) * 1e3, Eigen::VectorXd(raw.dim)};
        for (int k = 0; k < raw.dim; ++k) {
          p.x[k] = nd(rng) / 3.0;
          p.g[k] = nd(rng) * 1e-7;
        }
        raw.points.push_back(p);
      }
      const JetSet jet = validate_jet(raw);
      CHECK(validate_jet(to_raw(jet)) == jet);
      const JetSet back = validate_jet(parse_jet_json(serialize_jet_json(jet)));
      CHECK(back == jet);
    }
  }

  TEST_CASE("summary statistics") {
    const JetSet jet = make_jet({pt({0, 0}, -3, {3, 4}), pt({3, 4}, 1, {0, 1})});
    CHECK(jet.max_abs_value() == 3);
    CHECK(jet.max_location_norm() == doctest::Approx(5));
    CHECK(jet.max_gradient_norm() == doctest::Approx(5));
    CHECK(jet.diameter() == doctest::Approx(5));
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlop/tail.hpp"

using namespace nlop;

TEST_CASE("tail of the constant function is sphere measure / 2s") {
  auto one = [](Vec2) { return 1.0; };
  for (double s : {0.3, 0.5, 0.8}) {
    CHECK(tail(one, 1, s, 1.0, {}, FarField::constant_value(1.0)) ==
          doctest::Approx(1.0 / s).epsilon(1e-12));
    CHECK(tail(one, 2, s, 1.0, {}, FarField::constant_value(1.0)) ==
          doctest::Approx(M_PI / s).epsilon(1e-12));
    // R-dependence drops out entirely for constants
    CHECK(tail(one, 2, s, 3.7, {}, FarField::constant_value(1.0)) ==
          doctest::Approx(M_PI / s).epsilon(1e-12));
  }
}

TEST_CASE("zero function has zero tail") {
  auto zero = [](Vec2) { return 0.0; };
  CHECK(tail(zero, 2, 0.5, 1.0, {}) == 0.0);
}

TEST_CASE("tail of an s-homogeneous profile scales like R^s") {
  double s = 0.5, A = 1.3;
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, A, s};
  auto u = [&p](Vec2 y) { return p(y); };
  FarField far = FarField::profile_growth(p);
  double t1 = tail(u, 2, s, 1.0, {}, far);
  double t2 = tail(u, 2, s, 2.0, {}, far);
  double t4 = tail(u, 2, s, 4.0, {}, far);
  CHECK(t2 / t1 == doctest::Approx(std::pow(2.0, s)).epsilon(1e-3));
  CHECK(t4 / t2 == doctest::Approx(std::pow(2.0, s)).epsilon(1e-3));
  // amplitude linearity
  HalfSpaceProfile q{{1.0, 0.0}, 0.0, 2.0 * A, s};
  auto v = [&q](Vec2 y) { return q(y); };
  CHECK(tail(v, 2, s, 1.0, {}, FarField::profile_growth(q)) ==
        doctest::Approx(2.0 * t1).epsilon(1e-10));
}

TEST_CASE("super-s growth is detected as divergence") {
  auto grow = [](Vec2 y) { return dot(y, y); };
  CHECK_THROWS_AS(tail(grow, 2, 0.5, 1.0, {}), std::runtime_error);
}

TEST_CASE("invalid radius is rejected") {
  auto one = [](Vec2) { return 1.0; };
  CHECK_THROWS_AS(tail(one, 2, 0.5, 0.0, {}), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlop/kernel.hpp"
#include "nlop/numerics.hpp"

using namespace nlop;

TEST_CASE("kernel evaluation: homogeneity, angular factor, zero rejection") {
  KernelSpec spec(2, 0.6, AngularDensity::cos2(0.5));
  Vec2 h{0.3, 0.4};
  double k1 = eval_kernel(spec, h);
  double k2 = eval_kernel(spec, 2.0 * h);
  CHECK(k1 / k2 == doctest::Approx(std::pow(2.0, 2.0 + 2.0 * 0.6)));
  Vec2 theta = normalized(h);
  CHECK(k1 ==
        doctest::Approx(spec.density(theta) * std::pow(norm(h), -2.0 - 2.0 * 0.6)));
  CHECK_THROWS_AS(eval_kernel(spec, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("kernel spec validation") {
  CHECK_THROWS_AS(KernelSpec(3, 0.5, AngularDensity::isotropic()), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(2, 0.0, AngularDensity::isotropic()), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(2, 1.0, AngularDensity::isotropic()), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec(2, 0.5, AngularDensity::isotropic(-1.0)), std::invalid_argument);
  KernelSpec ok(2, 0.5, AngularDensity::cos2(0.5));
  CHECK(ok.lambda_bound == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(ok.Lambda_bound == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("tabulated density is symmetrized and interpolated") {
  // deliberately asymmetric samples; construction must symmetrize
  auto dens = AngularDensity::table({{0.0, 2.0}, {M_PI, 1.0}, {0.5 * M_PI, 1.5}, {1.5 * M_PI, 0.5}});
  for (double phi : {0.1, 0.9, 2.2, 4.0}) {
    Vec2 t = unit_from_angle(phi);
    CHECK(dens(t) == doctest::Approx(dens(-t)).epsilon(1e-12));
  }
  CHECK(dens({1.0, 0.0}) == doctest::Approx(1.5));
}

TEST_CASE("direction constant: independent quadrature oracle for an anisotropic density") {
  double s = 0.65, amp = 0.8;
  KernelSpec spec(2, s, AngularDensity::cos2(amp));
  SphereQuadrature quad = SphereQuadrature::make(2);
  for (double phi : {0.0, 0.4, 1.1, 2.0}) {
    Vec2 nu = unit_from_angle(phi);
    double oracle = direction_normalization(s) *
                    integrate_adaptive(
                        [&](double th) {
                          Vec2 theta = unit_from_angle(th);
                          double a = 1.0 + amp * theta.x * theta.x;
                          return a * std::pow(std::abs(dot(theta, nu)), 2.0 * s);
                        },
                        0.0, 2.0 * M_PI, 1e-11);
    CHECK(direction_constant_B(spec, nu, quad) == doctest::Approx(oracle).epsilon(1e-5));
  }
}

TEST_CASE("fractional-Laplacian density pins B = 1 in both dimensions") {
  for (int dim : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      KernelSpec spec(dim, s, AngularDensity::frac_laplacian(dim, s));
      SphereQuadrature quad = SphereQuadrature::make(dim);
      Vec2 nu = dim == 1 ? Vec2{1.0, 0.0} : unit_from_angle(0.7);
      CHECK(direction_constant_B(spec, nu, quad) == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("half-space amplitude equals 1/Gamma(1+s) for the fractional Laplacian") {
  for (int dim : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      KernelSpec spec(dim, s, AngularDensity::frac_laplacian(dim, s));
      SphereQuadrature quad = SphereQuadrature::make(dim);
      double expect = 1.0 / std::tgamma(1.0 + s);
      int count = dim == 1 ? 2 : 64;
      for (int k = 0; k < count; ++k) {
        Vec2 nu = dim == 1 ? Vec2{k == 0 ? 1.0 : -1.0, 0.0}
                           : unit_from_angle(2.0 * M_PI * k / count);
        double A = free_boundary_constant_A(spec, nu, quad);
        CHECK(std::abs(A - expect) / expect < 1e-4);
      }
    }
}

TEST_CASE("amplitude scales as density^{-1/2} for isotropic rescaling") {
  double s = 0.5;
  double base = 0.5 * frac_laplacian_constant(2, s);
  KernelSpec one(2, s, AngularDensity::isotropic(base));
  KernelSpec four(2, s, AngularDensity::isotropic(4.0 * base));
  SphereQuadrature quad = SphereQuadrature::make(2);
  Vec2 nu = unit_from_angle(1.3);
  double a1 = free_boundary_constant_A(one, nu, quad);
  double a4 = free_boundary_constant_A(four, nu, quad);
  CHECK(a1 / a4 == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("anisotropic amplitude varies with direction and respects evenness") {
  double s = 0.5;
  KernelSpec spec(2, s, AngularDensity::cos2(1.0));
  SphereQuadrature quad = SphereQuadrature::make(2);
  double a_x = free_boundary_constant_A(spec, {1.0, 0.0}, quad);
  double a_y = free_boundary_constant_A(spec, {0.0, 1.0}, quad);
  CHECK(a_x != doctest::Approx(a_y).epsilon(1e-3));
  for (double phi : {0.3, 1.0, 2.5}) {
    Vec2 nu = unit_from_angle(phi);
    CHECK(free_boundary_constant_A(spec, nu, quad) ==
          doctest::Approx(free_boundary_constant_A(spec, -nu, quad)).epsilon(1e-12));
  }
}

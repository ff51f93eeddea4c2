#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlop/fb_analysis.hpp"
#include "nlop/numerics.hpp"
#include "nlop/solver.hpp"

using namespace nlop;

namespace {

struct Recovery {
  Field u;
  SolveReport report;
  KernelSpec spec;
  double amplitude;
  HalfSpaceProfile profile;
};

Recovery solve_halfspace_1d(int nx, double s, std::uint64_t seed) {
  KernelSpec spec(1, s, AngularDensity::frac_laplacian(1, s));
  SphereQuadrature quad = SphereQuadrature::make(1);
  double A = free_boundary_constant_A(spec, {1.0, 0.0}, quad);
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, A, s};
  Grid g = Grid::make_1d(-2.0, 2.0, nx);
  Field u = profile_field(g, {{-1.5, 0.0}, {1.5, 0.0}}, p);
  CounterRng rng(seed);
  for (int i = 0; i < g.nx; ++i)
    if (u.free_node(i, 0))
      u.at(i, 0) = std::max(0.0, u.at(i, 0) * (1.0 + 0.2 * (2.0 * rng.uniform() - 1.0)));
  SolveConfig cfg;
  cfg.seed = seed;
  SolveReport rep = minimize(spec, u, cfg);
  return {u, rep, spec, A, p};
}

}  // namespace

TEST_CASE("zero data keeps the zero minimizer") {
  double s = 0.5;
  KernelSpec spec(1, s, AngularDensity::frac_laplacian(1, s));
  Grid g = Grid::make_1d(-1.0, 1.0, 64);
  Field u(g, {{-0.75, 0.0}, {0.75, 0.0}}, s, Exterior::zero());
  SolveReport rep = minimize(spec, u);
  for (double v : u.values) CHECK(v == 0.0);
  CHECK(rep.energy.total == 0.0);
  CHECK(rep.converged);
}

TEST_CASE("1D half-space recovery from a perturbed seed") {
  double s = 0.5;
  Recovery r = solve_halfspace_1d(256, s, 42);
  CHECK(r.report.converged);

  double hs = std::pow(r.u.grid.h, s);
  double sup = 0.0;
  for (int i = 0; i < r.u.grid.nx; ++i)
    sup = std::max(sup, std::abs(r.u.at(i, 0) - r.profile(r.u.grid.node(i, 0))));
  CHECK(sup < 3.0 * hs);

  FreeBoundaryGeometry geo = extract_boundary(r.u);
  REQUIRE(!geo.empty);
  double trace = trace_u_over_ds(r.u, geo, {0.0, 0.0});
  CHECK(std::abs(trace - r.amplitude) / r.amplitude < 0.05);
}

TEST_CASE("energy never exceeds the seed's and exterior nodes stay untouched") {
  double s = 0.5;
  KernelSpec spec(1, s, AngularDensity::frac_laplacian(1, s));
  SphereQuadrature quad = SphereQuadrature::make(1);
  double A = free_boundary_constant_A(spec, {1.0, 0.0}, quad);
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, A, s};
  Grid g = Grid::make_1d(-2.0, 2.0, 256);
  Field u = profile_field(g, {{-1.5, 0.0}, {1.5, 0.0}}, p);
  // interior bump on top of the profile
  for (int i = 0; i < g.nx; ++i) {
    double x = g.node(i, 0).x;
    if (u.free_node(i, 0)) u.at(i, 0) += 0.5 * std::exp(-40.0 * x * x);
  }
  std::vector<double> fixed_before;
  for (int i = 0; i < g.nx; ++i)
    if (!u.free_node(i, 0)) fixed_before.push_back(u.at(i, 0));

  EnergyContext ctx(spec, u);
  double e0 = total_energy(ctx, u).total;
  SolveReport rep = minimize(ctx, u);
  CHECK(rep.energy.total < e0);

  std::size_t k = 0;
  for (int i = 0; i < g.nx; ++i)
    if (!u.free_node(i, 0)) CHECK(u.at(i, 0) == fixed_before[k++]);

  // bump removed below grid tolerance
  double dev = 0.0;
  for (int i = 0; i < g.nx; ++i)
    dev = std::max(dev, u.at(i, 0) - p(g.node(i, 0)));
  CHECK(dev < 2.0 * std::pow(g.h, s));
}

TEST_CASE("certification accepts the converged solution and sees bad competitors") {
  double s = 0.5;
  Recovery r = solve_halfspace_1d(256, s, 7);
  EnergyContext ctx(r.spec, r.u);
  CertificationReport cert = certify_minimality(ctx, r.u);
  CHECK(cert.passed);
  CHECK(cert.competitors.size() >= 8);
  for (const auto& c : cert.competitors) CHECK(c.gap >= -cert.tolerance);

  // the min/max envelope pair: sum of gaps equals the nonnegative cross term
  double gmin = 0.0, gmax = 0.0;
  for (const auto& c : cert.competitors) {
    if (c.name == "profile_min") gmin = c.gap;
    if (c.name == "profile_max") gmax = c.gap;
  }
  CHECK(gmin + gmax >= -cert.tolerance);

  // a wrong-amplitude profile is measurably worse
  Field bad = r.u;
  for (int i = 0; i < bad.grid.nx; ++i)
    if (bad.free_node(i, 0)) bad.at(i, 0) = 1.5 * r.profile(bad.grid.node(i, 0));
  double e_bad = total_energy(ctx, bad).total;
  CHECK(e_bad > cert.candidate_energy + cert.tolerance);
}

TEST_CASE("restarts are deterministic in the seed") {
  double s = 0.5;
  Recovery a = solve_halfspace_1d(128, s, 99);
  Recovery b = solve_halfspace_1d(128, s, 99);
  CHECK(a.u.values == b.u.values);
  CHECK(a.report.energy.total == b.report.energy.total);
}

#include <benchmark/benchmark.h>

#include <cmath>

#include "nlop/energy.hpp"
#include "nlop/field.hpp"
#include "nlop/kernel.hpp"
#include "nlop/numerics.hpp"
#include "nlop/operator1d.hpp"
#include "nlop/tail.hpp"

using namespace nlop;

namespace {

Field flat_field(int dim, int n) {
  KernelSpec spec(dim, 0.5, AngularDensity::frac_laplacian(dim, 0.5));
  SphereQuadrature quad = SphereQuadrature::make(dim);
  double A = free_boundary_constant_A(spec, {1.0, 0.0}, quad);
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, A, 0.5};
  Grid g = dim == 1 ? Grid::make_1d(-2.0, 2.0, n)
                    : Grid::make_2d({{-2.0, -2.0}, {2.0, 2.0}}, n);
  Box omega = dim == 1 ? Box{{-1.5, 0.0}, {1.5, 0.0}} : Box{{-1.5, -1.5}, {1.5, 1.5}};
  return profile_field(g, omega, p);
}

void BM_kernel_eval(benchmark::State& state) {
  KernelSpec spec(2, 0.5, AngularDensity::cos2(0.7));
  double acc = 0.0;
  for (auto _ : state) {
    for (int k = 1; k <= 256; ++k)
      acc += eval_kernel(spec, {0.01 * k, 0.007 * k});
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_kernel_eval);

void BM_direction_constant(benchmark::State& state) {
  KernelSpec spec(2, 0.5, AngularDensity::cos2(0.7));
  SphereQuadrature quad = SphereQuadrature::make(2);
  for (auto _ : state) {
    double b = direction_constant_B(spec, unit_from_angle(0.3), quad);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_direction_constant);

void BM_operator_on_profile(benchmark::State& state) {
  KernelSpec spec(1, 0.5, AngularDensity::frac_laplacian(1, 0.5));
  HalfSpaceProfile p{{1.0, 0.0}, 0.0, 1.0, 0.5};
  for (auto _ : state) {
    double v = apply_L_to_profile(spec, p, {-0.5, 0.0});
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_operator_on_profile);

void BM_energy_context(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  KernelSpec spec(2, 0.5, AngularDensity::frac_laplacian(2, 0.5));
  Field u = flat_field(2, n);
  for (auto _ : state) {
    EnergyContext ctx(spec, u);
    benchmark::DoNotOptimize(&ctx);
  }
}
BENCHMARK(BM_energy_context)->Arg(64)->Arg(128);

void BM_total_energy(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  KernelSpec spec(2, 0.5, AngularDensity::frac_laplacian(2, 0.5));
  Field u = flat_field(2, n);
  EnergyContext ctx(spec, u);
  for (auto _ : state) {
    EnergyBreakdown e = total_energy(ctx, u);
    benchmark::DoNotOptimize(e.total);
  }
}
BENCHMARK(BM_total_energy)->Arg(64)->Arg(128);

void BM_grid_convolution(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  KernelSpec spec(2, 0.5, AngularDensity::frac_laplacian(2, 0.5));
  Field u = flat_field(2, n);
  EnergyModel model(spec, u.grid);
  GridConvolver conv(model);
  std::vector<double> out(u.values.size());
  for (auto _ : state) {
    conv.apply(u.values, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_grid_convolution)->Arg(128)->Arg(192);

void BM_tail(benchmark::State& state) {
  Field u = flat_field(2, 128);
  auto fn = [&u](Vec2 y) { return u.eval(y); };
  FarField far = FarField::profile_growth(u.exterior.profile);
  for (auto _ : state) {
    double t = tail(fn, 2, 0.5, 1.0, {0.0, 0.0}, far);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_tail);

}  // namespace

BENCHMARK_MAIN();

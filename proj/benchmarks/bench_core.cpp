#include <benchmark/benchmark.h>

#include "vsrd/certifier.hpp"
#include "vsrd/entropy.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/timestepper.hpp"

namespace {

vsrd::ModelSpec lgl_spec(int n_r, int n_theta) {
  vsrd::ModelSpec spec;
  spec.kind = vsrd::ModelKind::lgl;
  spec.geometry.kind = vsrd::MeshKind::disk;
  spec.geometry.n_r = n_r;
  spec.geometry.n_theta = n_theta;
  spec.geometry.gamma2_fraction = 0.25;
  return spec;
}

void bm_assemble(benchmark::State& state) {
  const vsrd::ModelSpec spec = lgl_spec(static_cast<int>(state.range(0)),
                                        2 * static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const vsrd::Operator op = vsrd::assemble(spec);
    benchmark::DoNotOptimize(op.L.nonZeros());
  }
}
BENCHMARK(bm_assemble)->Arg(8)->Arg(16)->Arg(32);

void bm_step(benchmark::State& state) {
  const vsrd::Operator op = vsrd::assemble(
      lgl_spec(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))));
  const vsrd::Stepper stepper(op, 1e-3, vsrd::Scheme::implicit_euler);
  Eigen::VectorXd u = vsrd::ic_random_positive(op.layout, 1);
  for (auto _ : state) {
    stepper.step(u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(bm_step)->Arg(8)->Arg(16)->Arg(32);

void bm_dissipation(benchmark::State& state) {
  const vsrd::Operator op = vsrd::assemble(
      lgl_spec(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))));
  const vsrd::EquilibriumProfile eq = vsrd::equilibrium_kernel(op, op.mass.sum());
  const Eigen::VectorXd u = vsrd::ic_random_positive(op.layout, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vsrd::entropy_dissipation(op, u, eq.values));
  }
}
BENCHMARK(bm_dissipation)->Arg(8)->Arg(16)->Arg(32);

void bm_equilibrium_kernel(benchmark::State& state) {
  const vsrd::Operator op = vsrd::assemble(
      lgl_spec(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const vsrd::EquilibriumProfile eq = vsrd::equilibrium_kernel(op, 1.0);
    benchmark::DoNotOptimize(eq.values.data());
  }
}
BENCHMARK(bm_equilibrium_kernel)->Arg(8)->Arg(16);

void bm_certify(benchmark::State& state) {
  const vsrd::Operator op = vsrd::assemble(lgl_spec(4, 8));
  const vsrd::EquilibriumProfile eq = vsrd::equilibrium_kernel(op, op.mass.sum());
  for (auto _ : state) {
    const vsrd::RateCertificate cert = vsrd::certify(op, eq);
    benchmark::DoNotOptimize(cert.lambda);
  }
}
BENCHMARK(bm_certify);

}  // namespace

BENCHMARK_MAIN();

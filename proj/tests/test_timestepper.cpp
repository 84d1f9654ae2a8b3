#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vsrd/entropy.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/errors.hpp"
#include "vsrd/model.hpp"
#include "vsrd/timestepper.hpp"

using namespace vsrd;

namespace {

TimeSpec spec(double dt, double t_end, Scheme s = Scheme::implicit_euler, int every = 1) {
  TimeSpec ts;
  ts.dt = dt;
  ts.t_end = t_end;
  ts.scheme = s;
  ts.sample_every = every;
  return ts;
}

}  // namespace

TEST_CASE("time spec validation") {
  CHECK_THROWS_AS(spec(0.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(spec(0.1, -1.0).validate(), ConfigError);
  TimeSpec bad = spec(0.1, 1.0);
  bad.sample_every = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_NOTHROW(spec(0.1, 1.0).validate());
}

TEST_CASE("mass is conserved to solver accuracy along the flow") {
  const Operator op = assemble(vsrd_test::lgl_spec(6, 12));
  const Eigen::VectorXd u0 = ic_random_positive(op.layout, 5);
  const Eigen::VectorXd w = equilibrium_kernel(op, total_mass(op.layout, u0)).values;
  const Trajectory traj = run_simulation(op, w, u0, spec(0.01, 1.0));
  const double m0 = traj.samples.front().mass;
  for (const Sample& s : traj.samples) CHECK(std::abs(s.mass - m0) <= 1e-12 * m0);
}

TEST_CASE("entropy is monotone under implicit Euler and satisfies the step identity") {
  const Operator op = assemble(vsrd_test::lgl_spec(4, 8));
  Eigen::VectorXd u = ic_random_positive(op.layout, 9);
  const Eigen::VectorXd w = equilibrium_kernel(op, total_mass(op.layout, u)).values;
  const double dt = 0.05;
  const Stepper stepper(op, dt, Scheme::implicit_euler);
  double e_prev = relative_entropy(op, u, w);
  const double e0 = e_prev;
  for (int k = 0; k < 60; ++k) {
    const Eigen::VectorXd before = u;
    stepper.step(u);
    const double e = relative_entropy(op, u, w);
    CHECK(e <= e_prev + 1e-12 * e0);
    // Backward-Euler energy identity:
    //   E(u+) - E(u) = -dt D(u+) - sum m (u+ - u)^2 / w.
    double jump = 0.0;
    for (int i = 0; i < u.size(); ++i)
      jump += op.mass[i] * (u[i] - before[i]) * (u[i] - before[i]) / w[i];
    const double lhs = e - e_prev;
    const double rhs = -dt * entropy_dissipation(op, u, w) - jump;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + e0));
    e_prev = e;
  }
}

TEST_CASE("implicit Euler converges at first order, the trapezoidal scheme at second") {
  const Operator op = assemble(vsrd_test::lgl_spec(4, 8));
  const Eigen::VectorXd u0 = ic_random_positive(op.layout, 3);
  const Eigen::VectorXd w = equilibrium_kernel(op, total_mass(op.layout, u0)).values;
  const double T = 0.5;

  const auto final_state = [&](double dt, Scheme s) {
    return run_simulation(op, w, u0, spec(dt, T, s)).final_state;
  };

  const Eigen::VectorXd ref = final_state(T / 8192.0, Scheme::crank_nicolson);
  const double e1 = (final_state(T / 16.0, Scheme::implicit_euler) - ref).norm();
  const double e2 = (final_state(T / 32.0, Scheme::implicit_euler) - ref).norm();
  const double ratio_ie = e1 / e2;
  CHECK(ratio_ie >= 1.7);
  CHECK(ratio_ie <= 2.3);

  // The trapezoidal pair sits at finer steps: for dt * (stiffest rate) >> 1
  // its amplification factor is near -1 and the rough initial data leaves the
  // asymptotic regime, so second order is only visible once dt resolves the
  // fastest diffusive mode.
  const double c1 = (final_state(T / 128.0, Scheme::crank_nicolson) - ref).norm();
  const double c2 = (final_state(T / 256.0, Scheme::crank_nicolson) - ref).norm();
  const double ratio_cn = c1 / c2;
  CHECK(ratio_cn >= 3.4);
  CHECK(ratio_cn <= 4.6);
}

TEST_CASE("sampling is thinned but keeps the first and last points") {
  const Operator op = assemble(vsrd_test::generic_cycle_spec());
  const Eigen::VectorXd u0 = ic_random_positive(op.layout, 1);
  const Eigen::VectorXd w = equilibrium_kernel(op, total_mass(op.layout, u0)).values;
  const Trajectory traj = run_simulation(op, w, u0, spec(0.01, 1.0, Scheme::implicit_euler, 7));
  REQUIRE(traj.samples.size() >= 3);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t k = 1; k < traj.samples.size(); ++k)
    CHECK(traj.samples[k].t > traj.samples[k - 1].t);
  // 100 steps, every 7th plus endpoints.
  CHECK(traj.samples.size() == 2 + 14);
  for (const Sample& s : traj.samples)
    CHECK(s.species_dist.size() == op.layout.blocks.size());
}

TEST_CASE("long trajectories settle to the equilibrium with a fitted rate") {
  const Operator op = assemble(vsrd_test::generic_cycle_spec());
  const Eigen::VectorXd u0 = ic_random_positive(op.layout, 12);
  const Eigen::VectorXd w = equilibrium_kernel(op, total_mass(op.layout, u0)).values;
  const Trajectory traj = run_simulation(op, w, u0, spec(0.005, 8.0));
  CHECK(traj.samples.back().entropy <= 1e-6 * traj.samples.front().entropy);
  CHECK((traj.final_state - w).lpNorm<Eigen::Infinity>() <=
        1e-3 * w.lpNorm<Eigen::Infinity>());
  CHECK(traj.fit.rate > 0.0);
  CHECK(traj.fit.r2 >= 0.99);
}

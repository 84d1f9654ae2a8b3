#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <vector>

#include "vsrd/discretization.hpp"
#include "vsrd/entropy.hpp"

namespace vsrd {

enum class Scheme { implicit_euler, crank_nicolson };

struct TimeSpec {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::implicit_euler;
  int sample_every = 1;  // record every k-th step (plus the initial and final)

  void validate() const;  // throws ConfigError
};

struct Sample {
  double t = 0;
  double mass = 0;
  double entropy = 0;
  double dissipation = 0;
  double fitted_rate = 0;  // running trailing-window fit; 0 until enough data
  std::vector<double> species_dist;
};

struct Trajectory {
  std::vector<Sample> samples;
  Eigen::VectorXd final_state;
  DecayFit fit;  // fit over the full sample record; zeroed if not fittable
};

/// One-step solver for diag(m) du/dt = L u with the theta scheme
///   (M - dt*theta*L) u+ = (M + dt*(1-theta)*L) u,
/// theta = 1 (implicit Euler) or 1/2 (Crank-Nicolson).  The row sums of both
/// sides match M's, so total mass is preserved to solver accuracy.  The
/// factorization is done once per (operator, dt, scheme).
class Stepper {
 public:
  Stepper(const Operator& op, double dt, Scheme scheme);

  void step(Eigen::VectorXd& u) const;  // advances u by dt in place
  double dt() const { return dt_; }

 private:
  double dt_;
  Eigen::SparseMatrix<double> rhs_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// Integrates u0 over [0, n*dt] with n = ceil(t_end/dt - 1e-9) uniform steps,
/// recording entropy/dissipation samples against the reference state w.
Trajectory run_simulation(const Operator& op, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& u0, const TimeSpec& ts);

}  // namespace vsrd

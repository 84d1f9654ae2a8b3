#include "vsrd/timestepper.hpp"

#include <cmath>

#include "vsrd/errors.hpp"
#include "vsrd/model.hpp"

namespace vsrd {

void TimeSpec::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(std::isfinite(t_end) && t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
}

namespace {

Eigen::SparseMatrix<double> mass_matrix(const Operator& op) {
  Eigen::SparseMatrix<double> M(op.mass.size(), op.mass.size());
  M.reserve(Eigen::VectorXi::Constant(static_cast<int>(op.mass.size()), 1));
  for (int i = 0; i < op.mass.size(); ++i) M.insert(i, i) = op.mass[i];
  M.makeCompressed();
  return M;
}

}  // namespace

Stepper::Stepper(const Operator& op, double dt, Scheme scheme) : dt_(dt) {
  if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt must be positive");
  const double theta = scheme == Scheme::implicit_euler ? 1.0 : 0.5;
  const Eigen::SparseMatrix<double> M = mass_matrix(op);
  Eigen::SparseMatrix<double> lhs = M - (dt * theta) * op.L;
  rhs_ = M + (dt * (1.0 - theta)) * op.L;
  lhs.makeCompressed();
  rhs_.makeCompressed();
  lu_.compute(lhs);
  if (lu_.info() != Eigen::Success)
    throw LinearSolveFailure("time-step matrix factorization failed");
}

void Stepper::step(Eigen::VectorXd& u) const {
  const Eigen::VectorXd b = rhs_ * u;
  u = lu_.solve(b);
  if (lu_.info() != Eigen::Success) throw LinearSolveFailure("time-step solve failed");
}

Trajectory run_simulation(const Operator& op, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& u0, const TimeSpec& ts) {
  ts.validate();
  if (u0.size() != op.layout.total) throw LayoutMismatch("initial state size mismatch");
  const long n_steps = std::max<long>(1, std::lround(std::ceil(ts.t_end / ts.dt - 1e-9)));

  Stepper stepper(op, ts.dt, ts.scheme);
  Trajectory traj;
  std::vector<double> t_hist, e_hist;

  Eigen::VectorXd u = u0;
  auto record = [&](double t) {
    Sample s;
    s.t = t;
    s.mass = total_mass(op.layout, u);
    s.entropy = relative_entropy(op, u, w);
    s.dissipation = entropy_dissipation(op, u, w);
    s.species_dist = per_species_distance(op, u, w);
    t_hist.push_back(s.t);
    e_hist.push_back(s.entropy);
    try {
      s.fitted_rate = fit_decay_rate(t_hist, e_hist).rate;
    } catch (const InsufficientData&) {
      s.fitted_rate = 0.0;
    }
    traj.samples.push_back(std::move(s));
  };

  record(0.0);
  for (long k = 1; k <= n_steps; ++k) {
    stepper.step(u);
    if (k % ts.sample_every == 0 || k == n_steps) record(static_cast<double>(k) * ts.dt);
  }
  traj.final_state = std::move(u);
  try {
    traj.fit = fit_decay_rate(t_hist, e_hist);
  } catch (const InsufficientData&) {
    traj.fit = DecayFit{};
  }
  return traj;
}

}  // namespace vsrd

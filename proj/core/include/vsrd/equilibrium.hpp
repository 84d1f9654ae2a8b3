#pragma once

#include <Eigen/Core>
#include <array>

#include "vsrd/discretization.hpp"

namespace vsrd {

struct EquilibriumProfile {
  Eigen::VectorXd values;
  double mass = 0;           // measure-weighted total, matches the request
  double residual_linf = 0;  // max |(L w)_i| / (|L| |w|)_i scale
  double min_value = 0;
  double max_value = 0;
  bool positivity_ok = false;
  int sweeps = 0;  // Picard route only
};

/// Direct route: solve L w = 0 with the mass functional pinned to `mass`
/// (the first generator row is replaced by the measure row; the system is
/// nonsingular exactly when the kernel is one-dimensional and carries mass).
/// Throws KernelDimensionError for reducible generic networks,
/// LinearSolveFailure if the pinned system cannot be factored.
EquilibriumProfile equilibrium_kernel(const Operator& op, double mass);

struct PicardOptions {
  double tol = 1e-13;     // relative sup-norm change per sweep
  int max_sweeps = 20000;
  double damping = 0.5;   // fraction of the new iterate mixed in
};

/// Fixed-point route mirroring the construction of equilibria through
/// auxiliary single-species problems: each sweep solves, per species, the
/// within-species problem with the other species' contributions frozen
/// (block Jacobi on -L_diag w_new = L_cross w_old), then under-relaxes and
/// reprojects onto the mass constraint.  Damping 1/2 suppresses the
/// period-two oscillation of the undamped map on bipartite species graphs
/// without moving its fixed points.
EquilibriumProfile equilibrium_picard(const Operator& op, double mass,
                                      const PicardOptions& opt = {});

/// Closed-form nuclear levels (u2..u7) implied by the volume part of a state
/// of the signalling model: with I_k the inner-boundary integral of u_k,
///   u3 = ... = u7 = r_imp2 * I1 / (r_delay * |boundary|),
///   u2 = (r_imp * I0 + r_imp2 * I1) / (r_exp * |boundary|).
std::array<double, 6> jak_ode_closed_form(const Operator& op, const Eigen::VectorXd& u);

/// Total mass implied by the volume part of a signalling-model state when the
/// nuclear levels are replaced by their closed forms.
double jak_reduced_mass(const Operator& op, const Eigen::VectorXd& u);

}  // namespace vsrd

#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "vsrd/discretization.hpp"

namespace vsrd {

/// Quadratic relative entropy of u against a strictly positive reference w:
///   E(u - w | w) = sum_k m_k (u_k - w_k)^2 / w_k.
/// Throws NonpositiveEquilibrium if w has a nonpositive entry.
double relative_entropy(const Operator& op, const Eigen::VectorXd& u, const Eigen::VectorXd& w);

/// Unshifted form sum_k m_k u_k^2 / w_k; for states sharing the mass of w it
/// exceeds the shifted form by exactly that mass.
double relative_entropy_unshifted(const Operator& op, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& w);

/// Entropy dissipation in pair form,
///   D(u) = sum_{pairs} (L_ij w_j + L_ji w_i) (z_i - z_j)^2,  z = (u - w)/w,
/// which is nonnegative by the sign structure of L and equals -dE/dt exactly
/// when L w = 0.
double entropy_dissipation(const Operator& op, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& w);

/// The same dissipation evaluated directly from the operator, -2 z' L u.
/// Differs from the pair form by sum_k (z_k^2 + 2 z_k) (L w)_k, i.e. only by
/// the kernel residual of w.
double entropy_dissipation_operator(const Operator& op, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& w);

/// Dissipation split by assembly mechanism (diffusion per species, each
/// exchange pathway).  Values sum to entropy_dissipation(u).
std::map<std::string, double> dissipation_breakdown(const Operator& op,
                                                    const Eigen::VectorXd& u,
                                                    const Eigen::VectorXd& w);

/// Per-species weighted-L2 distance to w: the square root of each species
/// block's contribution to the relative entropy.
std::vector<double> per_species_distance(const Operator& op, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& w);

struct DecayFit {
  double rate = 0;  // lambda in E ~ C exp(-lambda t)
  double r2 = 0;    // coefficient of determination of the log-linear fit
  int n_used = 0;
};

/// Least-squares slope of log(entropy) against time over the trailing half of
/// the samples; entries with entropy <= 1e-30 are discarded.  Throws
/// InsufficientData if fewer than 10 usable samples remain.
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& entropy);

}  // namespace vsrd

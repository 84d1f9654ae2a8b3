#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace vsrd {

/// First-order linear reaction network between N species.
///
/// rates(i, j) is the rate constant of the reaction j -> i, so a well-mixed
/// species vector c evolves by dc/dt = A c with the generator
/// A = rates - diag(1^T rates).  The diagonal of `rates` is ignored.
struct ReactionNetwork {
  std::vector<std::string> species;
  Eigen::MatrixXd rates;

  int size() const { return static_cast<int>(species.size()); }

  /// Generator A = rates - diag(column sums of rates).  Columns sum to zero
  /// and off-diagonal entries are nonnegative.
  Eigen::MatrixXd generator() const;

  /// Throws InvalidNetwork on shape mismatch, N < 2, or negative rates.
  void validate() const;
};

ReactionNetwork make_two_cycle(double rate_12_to_21, double rate_21_to_12);

/// Strongly connected components of the positive-rate digraph (Tarjan).
/// component[i] is a dense SCC id starting at 0.
struct SccResult {
  std::vector<int> component;
  int count = 0;
};
SccResult strongly_connected_components(const ReactionNetwork& net);

/// A network is weakly reversible iff every reaction edge lies inside a
/// strongly connected component.
bool weakly_reversible(const ReactionNetwork& net);

/// Unique positive equilibrium c with A c = 0 and sum(c) = mass.
/// Requires the positive-rate digraph to be one strongly connected component
/// spanning all species (throws DisconnectedNetwork otherwise); throws
/// SingularNetwork / NonPositiveKernel when the kernel is not one-dimensional
/// and positive.
Eigen::VectorXd network_equilibrium(const ReactionNetwork& net, double mass);

/// Routing used to control one pair without a direct edge through pairs that
/// have one.  `bottleneck` is the smallest pair rate along the path.
struct GapChain {
  int from = 0;
  int to = 0;
  std::vector<int> path;  // from == path.front(), to == path.back()
  double bottleneck = 0.0;
};

/// Constants for the finite-dimensional inequality
///
///   sum_{i<j} (a_ij + a_ji) (c_i - c_j)^2  >=  eta * sum_i c_i^2
///
/// valid for all c on the hyperplane sum_i alpha_i c_i = 0 with alpha > 0.
///
/// eta_optimal is the sharp constant (smallest eigenvalue of the pair form
/// projected onto the hyperplane).  eta_constructive is a closed-form lower
/// bound built from a chain comparison: pairs with no direct edge are routed
/// along shortest paths of the pair-rate support graph, each route paying a
/// Cauchy-Schwarz factor (path length) / (bottleneck rate); pairs with a
/// direct edge collectively pay 1 / (min direct pair rate).  With
/// zeta = 1 / (sum of those loss factors) the bound
///
///   eta_constructive_raw = zeta * (sum_j alpha_j)^2 / (N (N-1) max_i alpha_i^2)
///
/// holds for every admissible c; the published value is clamped by
/// eta_optimal so the certificate can never exceed the sharp constant.
struct GapResult {
  double eta_optimal = 0.0;
  double eta_constructive = 0.0;
  double eta_constructive_raw = 0.0;
  double zeta = 0.0;
  bool clamped = false;
  std::vector<GapChain> chains;
};

GapResult gap_constants(const ReactionNetwork& net, const Eigen::VectorXd& alpha);

/// Symmetrized pair form  Q(c) = sum_{i<j} (a_ij + a_ji)(c_i - c_j)^2  as a
/// matrix (a weighted graph Laplacian), exposed for tests and diagnostics.
Eigen::MatrixXd pair_form_matrix(const ReactionNetwork& net);

}  // namespace vsrd

#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "vsrd/certifier.hpp"
#include "vsrd/discretization.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/network.hpp"
#include "vsrd/timestepper.hpp"

namespace vsrd {

/// All artifact writers are deterministic: identical inputs produce
/// byte-identical files (no timestamps, no environment-dependent fields).
/// Every JSON document carries a "schema" tag "vsrd/<kind>/v1"; the CSV
/// starts with the comment line "# vsrd-trajectory v1".

/// Columns: t, mass, entropy, dissipation, fitted_rate, then one
/// dist_<species> column per species (entropy distance per block).
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& species);

/// Equilibrium profile keyed by species name, with bounds, mass, and residual
/// norms.  When a second profile from the fixed-point route is given, its
/// sweep count and the relative sup-distance between the two are recorded.
void write_equilibrium_json(const std::string& path, const Operator& op,
                            const EquilibriumProfile& eq,
                            const EquilibriumProfile* picard = nullptr,
                            double cross_distance = -1.0);

/// Full decay-rate certificate: every named constant, the winning epsilon
/// tuple and grid specification, and the averaged-network provenance
/// (species, weights, rate matrix, gap constants, routing chains).
std::string certificate_json_text(const RateCertificate& cert);
void write_certificate_json(const std::string& path, const RateCertificate& cert);

struct RunSummary {
  std::string model;
  int n_r = 0;
  int n_theta = 0;
  int mesh_level = 0;
  int n_steps = 0;
  double dt = 0;
  double mass_initial = 0;
  double mass_final = 0;
  double mass_drift = 0;
  double entropy_initial = 0;
  double entropy_final = 0;
  bool certificate_present = false;
  double lambda_certified = 0;
  double lambda_chain = 0;
  double lambda_observed = 0;
  double fit_r2 = 0;
  bool soundness_checked = false;
  bool soundness_pass = true;
  double soundness_margin = 0;
};
void write_summary_json(const std::string& path, const RunSummary& s);

/// Gnuplot script plotting the entropy column of the trajectory CSV against
/// the certified envelope E(0) * exp(-lambda t).
void write_decay_gnuplot(const std::string& path, const std::string& csv_name,
                         double entropy_initial, double lambda_certified);

/// Coordinate-format Matrix Market dump (general real, 1-based indices,
/// column-major entry order, full round-trip precision).
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& m);

/// Mesh geometry: cells with centers and areas, boundary segments with
/// adjacency, and the realized active-arc extent.
void write_mesh_json(const std::string& path, const Mesh& mesh);

/// Reaction network exchange format: {"species": [...], "rates": [[...]]}
/// with rates[i][j] the rate of reaction j -> i.
ReactionNetwork read_network_json(const std::string& path);
void write_network_json(const std::string& path, const ReactionNetwork& net);

/// Gap-constant report for a network and entropy weights, including the
/// routing chains behind the constructive bound.
void write_gap_json(const std::string& path, const ReactionNetwork& net,
                    const std::vector<double>& weights, const GapResult& gap);

/// State vector keyed by species block; read validates against the layout.
Eigen::VectorXd read_state_json(const std::string& path, const Layout& layout);
void write_state_json(const std::string& path, const Layout& layout,
                      const Eigen::VectorXd& u);

}  // namespace vsrd

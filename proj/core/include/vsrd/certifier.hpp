#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "vsrd/discretization.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/network.hpp"
#include "vsrd/spectral.hpp"

namespace vsrd {

struct CertifyOptions {
  // Logarithmic grid for the Young-inequality parameters of the polarity
  // certificate.
  int grid_points = 40;
  double eps_lo = 1e-4;
  double eps_hi = 0.9;
  // Non-default sharp mode: instead of dropping the active-arc release term,
  // control it with the discrete trace constant of the second volume species
  // on the arc and a seventh parameter (coarser grid).
  bool sharp = false;
  int sharp_points = 12;
  EigOptions eig;
};

/// Explicit decay-rate certificate assembled from discrete functional
/// inequalities: weighted Poincare/trace constants on the actual mesh, the
/// finite-dimensional network gap on the averaged system, and the
/// parameter-balancing of the model's entropy estimate.  Every named
/// constant is stored; `lambda` always equals the lemma's min-formula
/// re-evaluated on the stored constants (see recompute_lambda).
struct RateCertificate {
  ModelKind model = ModelKind::lgl;
  double mass = 0;
  double lambda = 0;        // emitted certified rate (printed min-formula)
  double lambda_chain = 0;  // conservative audit value from the slot-by-slot chain
  bool sharp_mode = false;
  std::map<std::string, double> constants;
  std::array<double, 6> epsilons{};  // polarity model only; zeros otherwise

  // Network-gap provenance: the averaged pair system fed to gap_constants.
  std::vector<std::string> gap_species;
  std::vector<double> gap_weights;
  Eigen::MatrixXd gap_rates;
  GapResult gap;

  CertifyOptions options;
};

/// Dispatches on the operator's model kind (polarity disk model or annulus
/// signalling model).  Requires a strictly positive equilibrium and strictly
/// positive rate constants.  Throws InfeasibleEpsilons when no grid point
/// keeps every remainder coefficient positive.
RateCertificate certify(const Operator& op, const EquilibriumProfile& eq,
                        const CertifyOptions& opt = {});

/// Re-evaluates the certificate's min-formula from its stored constants;
/// equals cert.lambda for any certificate produced by certify().
double recompute_lambda(const RateCertificate& cert);

/// Looks up a named constant; throws ConfigError when the certificate does
/// not carry it.
double constant_of(const RateCertificate& cert, const std::string& name);

/// Smallest weighted Poincare constant on the volume mesh:
///   min  sum_faces tau * wbar_f (x_a - x_b)^2  /  sum_i area_i w_i x_i^2
/// over discrete functions with zero w-weighted mean (wbar_f is the
/// arithmetic face mean of the weight).
double weighted_poincare_volume(const Mesh& mesh, const Eigen::VectorXd& cell_weight,
                                const EigOptions& opt = {});

/// Same on an arc of a surface mesh (segments [offset, offset+count)),
/// periodic when the arc closes the circle.
double weighted_poincare_arc(const SurfaceMesh& surf, int offset, int count,
                             const Eigen::VectorXd& seg_weight, const EigOptions& opt = {});

/// Largest T with
///   sum_faces tau * wbar_f (x_a-x_b)^2 >= T * sum_seg len_s w_adj x_adj^2
/// over zero-w-mean functions, for the segments [seg_offset, seg_offset +
/// seg_count) of the given boundary; the boundary value of a cell function is
/// its adjacent-cell value, matching the assembled exchange stencils.
double weighted_trace_constant(const Mesh& mesh, const Eigen::VectorXd& cell_weight,
                               BoundaryId boundary, int seg_offset, int seg_count,
                               const EigOptions& opt = {});

}  // namespace vsrd

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "vsrd/geometry.hpp"
#include "vsrd/network.hpp"

namespace vsrd {

enum class ModelKind { lgl, jak, generic };

/// Polarity model on a disk: two volume species (cortical L and cytoplasmic
/// P), one species ell on the whole boundary circle, and one species p living
/// only on the active arc.  Exchange pathways:
///   beta:   L -> P        (volume)
///   alpha:  P -> L        (volume)
///   lambda: L -> ell      (attachment at the boundary)
///   gamma:  ell -> L      (detachment)
///   sigma:  ell -> p      (conversion, active arc only)
///   xi:     p -> P        (release into the volume)
struct LglParams {
  double alpha = 1.0, beta = 1.0, gamma = 1.0, lambda = 1.0, sigma = 1.0, xi = 1.0;
  double d_L = 1.0, d_P = 1.0, d_ell = 1.0, d_p = 1.0;
};

/// Signalling model on an annulus: two diffusing volume species u0, u1 in the
/// cytoplasm plus six well-mixed scalars u2..u7 for the enclosed nucleus.
///   u0 -> u1  activation on the outer membrane   (r_act * p_jak)
///   u0 -> u2  import across the inner membrane   (r_imp)
///   u2 -> u0  export across the inner membrane   (r_exp)
///   u1 -> u3  import of the activated form       (r_imp2)
///   u3 -> u4 -> u5 -> u6 -> u7 -> u2             (r_delay each)
/// D is the common diffusivity; set d0/d1 >= 0 to override per species.
struct JakParams {
  double r_act = 1.0, p_jak = 1.0, r_imp = 1.0, r_exp = 1.0, r_imp2 = 1.0, r_delay = 1.0;
  double D = 1.0;
  double d0 = -1.0, d1 = -1.0;
  double diff0() const { return d0 >= 0.0 ? d0 : D; }
  double diff1() const { return d1 >= 0.0 ? d1 : D; }
};

/// First-order exchange network with every species diffusing on one domain.
struct GenericParams {
  ReactionNetwork network;
  std::vector<double> diffusion;  // one entry per species
};

struct ModelSpec {
  ModelKind kind = ModelKind::lgl;
  GeometrySpec geometry;
  LglParams lgl;
  JakParams jak;
  GenericParams generic;

  std::vector<std::string> species_names() const;
  void validate() const;  // throws ConfigError
};

enum class DomainKind { volume, surface, point };

/// One contiguous block of unknowns for one species.
struct SpeciesBlock {
  std::string name;
  DomainKind domain = DomainKind::volume;
  BoundaryId boundary = BoundaryId::outer;  // surface blocks only
  int surface_count = 0;    // surface blocks: number of segments covered
  int surface_offset = 0;   // surface blocks: first segment index in the mesh
  int offset = 0;           // first global index
  int size = 0;             // number of unknowns
};

/// Global unknown layout and the diagonal mass (measure) vector: cell areas
/// for volume blocks, segment lengths for surface blocks, the compartment
/// measure for point blocks.
struct Layout {
  std::vector<SpeciesBlock> blocks;
  int total = 0;
  Eigen::VectorXd measures;

  const SpeciesBlock& block(const std::string& name) const;  // throws LayoutMismatch
  int global_index(const std::string& name, int local) const;
};

Layout build_layout(const ModelSpec& spec, const Mesh& mesh);

/// Spatially uniform state u = c_k on each species block; per-species values.
Eigen::VectorXd ic_uniform(const Layout& layout, const std::vector<double>& values);

/// Strictly positive random state: each entry uniform in [lo, hi].
Eigen::VectorXd ic_random_positive(const Layout& layout, std::uint64_t seed, double lo = 0.1,
                                   double hi = 2.0);

/// Total measure-weighted mass of a state.
double total_mass(const Layout& layout, const Eigen::VectorXd& u);

}  // namespace vsrd

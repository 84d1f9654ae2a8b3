#pragma once

#include <cstdint>
#include <string>

#include "vsrd/certifier.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/model.hpp"
#include "vsrd/timestepper.hpp"

namespace vsrd {

enum class IcKind { uniform, random_positive, file };

/// Everything one invocation needs: the model (with its geometry), the time
/// grid, the initial condition, certification options, and output locations.
/// The command layer fills it from a config file plus flag overrides.
struct RunConfig {
  ModelSpec model;
  TimeSpec time;

  IcKind ic_kind = IcKind::uniform;
  double ic_value = 1.0;     // uniform: the level on every species
  std::uint64_t seed = 0;    // random_positive: RNG seed
  std::string ic_file;       // file: state JSON matching the layout

  std::string out_dir = ".";
  int mesh_level = 0;  // each level doubles n_r and n_theta

  CertifyOptions certify;
  PicardOptions picard;

  std::string network_file;  // generic model: network JSON to load

  /// Geometry at mesh_level + extra_levels refinements of the base spec.
  GeometrySpec refined_geometry(int extra_levels = 0) const;

  void validate() const;  // throws ConfigError
};

}  // namespace vsrd

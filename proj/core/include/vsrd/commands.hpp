#pragma once

#include <string>
#include <vector>

#include "vsrd/runconfig.hpp"

namespace vsrd {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;      // bad configuration or input files
inline constexpr int kExitNumerical = 3;   // solver / eigensolver / search failure
inline constexpr int kExitSoundness = 4;   // observed decay violates the certificate

/// Full pipeline: assemble, equilibrate, certify (where defined), simulate,
/// write trajectory.csv, equilibrium.json, certificate.json, summary.json,
/// and decay.gp into cfg.out_dir.  Returns kExitSoundness when the fitted
/// decay rate undercuts the certified rate beyond tolerance.
int cmd_run(const RunConfig& cfg);

/// Computes the equilibrium by both routes (direct kernel solve and damped
/// fixed-point sweeps), reports their distance, writes equilibrium.json.
int cmd_equilibrium(const RunConfig& cfg);

/// Certifies at three successive mesh refinements, prints the refinement
/// table, writes certificate.json (finest level) and refinement.json.
int cmd_certify(const RunConfig& cfg);

/// Gap constants for a reaction network file; weights default to the
/// network's own equilibrium (unit mass) when none are given.
int cmd_network_gap(const std::string& network_path, std::vector<double> weights,
                    const std::string& out_path);

/// Writes mesh.json and the assembled generator as operator.mtx.
int cmd_mesh_export(const RunConfig& cfg);

}  // namespace vsrd

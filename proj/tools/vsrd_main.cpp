#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vsrd/commands.hpp"

namespace {

using vsrd::RunConfig;

const std::map<std::string, vsrd::ModelKind> kModelNames{
    {"lgl", vsrd::ModelKind::lgl},
    {"jak", vsrd::ModelKind::jak},
    {"generic", vsrd::ModelKind::generic}};

const std::map<std::string, vsrd::MeshKind> kMeshNames{
    {"disk", vsrd::MeshKind::disk},
    {"annulus", vsrd::MeshKind::annulus},
    {"interval", vsrd::MeshKind::interval}};

const std::map<std::string, vsrd::Scheme> kSchemeNames{
    {"implicit_euler", vsrd::Scheme::implicit_euler},
    {"crank_nicolson", vsrd::Scheme::crank_nicolson}};

const std::map<std::string, vsrd::IcKind> kIcNames{
    {"uniform", vsrd::IcKind::uniform},
    {"random_positive", vsrd::IcKind::random_positive},
    {"file", vsrd::IcKind::file}};

/// Wires one subcommand to the shared run configuration.  Option names use
/// dots so a TOML config file provides them as sections, e.g.
///   [model]            -> --model.kind
///   kind = "lgl"
/// Command-line values take precedence over the config file.
void add_run_options(CLI::App* sub, RunConfig& cfg) {
  sub->config_formatter(std::make_shared<CLI::ConfigTOML>());
  sub->set_config("--config", "", "TOML configuration file");

  sub->add_option("--model.kind", cfg.model.kind, "lgl | jak | generic")
      ->transform(CLI::CheckedTransformer(kModelNames, CLI::ignore_case));

  auto& g = cfg.model.geometry;
  sub->add_option("--geometry.kind", g.kind, "disk | annulus | interval")
      ->transform(CLI::CheckedTransformer(kMeshNames, CLI::ignore_case));
  sub->add_option("--geometry.radius", g.radius, "disk radius / interval length");
  sub->add_option("--geometry.r_inner", g.r_inner, "annulus inner radius");
  sub->add_option("--geometry.r_outer", g.r_outer, "annulus outer radius");
  sub->add_option("--geometry.arc_fraction", g.gamma2_fraction,
                  "fraction of the boundary circle carrying the active arc");
  sub->add_option("--geometry.n_r", g.n_r, "radial cells");
  sub->add_option("--geometry.n_theta", g.n_theta, "angular cells");

  auto& l = cfg.model.lgl;
  sub->add_option("--lgl.alpha", l.alpha, "P -> L rate");
  sub->add_option("--lgl.beta", l.beta, "L -> P rate");
  sub->add_option("--lgl.gamma", l.gamma, "detachment rate (surface -> volume)");
  sub->add_option("--lgl.lambda", l.lambda, "attachment rate (volume -> surface)");
  sub->add_option("--lgl.sigma", l.sigma, "arc conversion rate");
  sub->add_option("--lgl.xi", l.xi, "arc release rate");
  sub->add_option("--lgl.d_L", l.d_L, "diffusivity of L");
  sub->add_option("--lgl.d_P", l.d_P, "diffusivity of P");
  sub->add_option("--lgl.d_ell", l.d_ell, "surface diffusivity of ell");
  sub->add_option("--lgl.d_p", l.d_p, "surface diffusivity of p");

  auto& j = cfg.model.jak;
  sub->add_option("--jak.r_act", j.r_act, "membrane activation rate");
  sub->add_option("--jak.p_jak", j.p_jak, "activation cofactor level");
  sub->add_option("--jak.r_imp", j.r_imp, "nuclear import rate of u0");
  sub->add_option("--jak.r_exp", j.r_exp, "nuclear export rate of u2");
  sub->add_option("--jak.r_imp2", j.r_imp2, "nuclear import rate of u1");
  sub->add_option("--jak.r_delay", j.r_delay, "nuclear delay-chain rate");
  sub->add_option("--jak.D", j.D, "common diffusivity");
  sub->add_option("--jak.d0", j.d0, "diffusivity override for u0 (-1: use D)");
  sub->add_option("--jak.d1", j.d1, "diffusivity override for u1 (-1: use D)");

  sub->add_option("--generic.network", cfg.network_file, "reaction network JSON");
  sub->add_option("--generic.diffusion", cfg.model.generic.diffusion,
                  "per-species diffusivities");

  sub->add_option("--time.dt", cfg.time.dt, "time step");
  sub->add_option("--time.t_end", cfg.time.t_end, "final time");
  sub->add_option("--time.scheme", cfg.time.scheme, "implicit_euler | crank_nicolson")
      ->transform(CLI::CheckedTransformer(kSchemeNames, CLI::ignore_case));
  sub->add_option("--time.sample_every", cfg.time.sample_every, "record every k-th step");

  sub->add_option("--ic.kind", cfg.ic_kind, "uniform | random_positive | file")
      ->transform(CLI::CheckedTransformer(kIcNames, CLI::ignore_case));
  sub->add_option("--ic.value", cfg.ic_value, "uniform level");
  sub->add_option("--ic.file", cfg.ic_file, "state JSON to start from");

  sub->add_flag("--certify.sharp", cfg.certify.sharp,
                "sharper release handling via an arc trace inequality "
                "(departs from the reference constant pipeline)");
  sub->add_option("--certify.grid_points", cfg.certify.grid_points,
                  "points per balancing parameter");
  sub->add_option("--certify.eps_lo", cfg.certify.eps_lo, "grid lower end");
  sub->add_option("--certify.eps_hi", cfg.certify.eps_hi, "grid upper end");
  sub->add_option("--certify.sharp_points", cfg.certify.sharp_points,
                  "grid points for the sharp-mode parameter");

  sub->add_option("--picard.tol", cfg.picard.tol, "fixed-point stopping tolerance");
  sub->add_option("--picard.max_sweeps", cfg.picard.max_sweeps, "fixed-point sweep cap");
  sub->add_option("--picard.damping", cfg.picard.damping, "fixed-point under-relaxation");

  sub->add_option("--out", cfg.out_dir, "artifact directory");
  sub->add_option("--seed", cfg.seed, "random initial-condition seed");
  sub->add_option("--mesh-level", cfg.mesh_level, "uniform refinements of the base mesh");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for volume-surface reaction-diffusion systems"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string network_path;
  std::vector<double> gap_weights;
  std::string gap_out = "gap.json";

  CLI::App* run = app.add_subcommand("run", "simulate, certify, and summarize decay");
  add_run_options(run, cfg);
  CLI::App* equi = app.add_subcommand("equilibrium", "equilibrium by two independent routes");
  add_run_options(equi, cfg);
  CLI::App* cert = app.add_subcommand("certify", "decay-rate certificate with mesh refinement");
  add_run_options(cert, cfg);
  CLI::App* mesh = app.add_subcommand("mesh-export", "dump mesh geometry and the generator");
  add_run_options(mesh, cfg);

  CLI::App* gap = app.add_subcommand("network-gap", "gap constants of a reaction network");
  gap->add_option("--network", network_path, "network JSON file")->required();
  gap->add_option("--weights", gap_weights,
                  "entropy weights, one per species (default: network equilibrium)");
  gap->add_option("--out", gap_out, "output JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? vsrd::kExitOk : vsrd::kExitConfig;
  }

  if (run->parsed()) return vsrd::cmd_run(cfg);
  if (equi->parsed()) return vsrd::cmd_equilibrium(cfg);
  if (cert->parsed()) return vsrd::cmd_certify(cfg);
  if (mesh->parsed()) return vsrd::cmd_mesh_export(cfg);
  if (gap->parsed()) return vsrd::cmd_network_gap(network_path, gap_weights, gap_out);
  return vsrd::kExitConfig;
}

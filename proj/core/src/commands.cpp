#include "vsrd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "vsrd/artifacts.hpp"
#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

int classify(const Error& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr ||
      dynamic_cast<const IoError*>(&e) != nullptr ||
      dynamic_cast<const InvalidGeometry*>(&e) != nullptr ||
      dynamic_cast<const InvalidNetwork*>(&e) != nullptr ||
      dynamic_cast<const UnknownBoundary*>(&e) != nullptr ||
      dynamic_cast<const GeometryMismatch*>(&e) != nullptr ||
      dynamic_cast<const LayoutMismatch*>(&e) != nullptr ||
      dynamic_cast<const DisconnectedNetwork*>(&e) != nullptr)
    return kExitConfig;
  return kExitNumerical;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

Operator assemble_for(const RunConfig& cfg, int extra_levels) {
  ModelSpec spec = cfg.model;
  spec.geometry = cfg.refined_geometry(extra_levels);
  if (spec.kind == ModelKind::generic && !cfg.network_file.empty())
    spec.generic.network = read_network_json(cfg.network_file);
  if (spec.kind == ModelKind::generic && spec.generic.diffusion.empty())
    spec.generic.diffusion.assign(spec.generic.network.species.size(), 1.0);
  return assemble(spec);
}

Eigen::VectorXd initial_state(const RunConfig& cfg, const Operator& op) {
  switch (cfg.ic_kind) {
    case IcKind::uniform:
      return ic_uniform(op.layout, std::vector<double>(op.layout.blocks.size(), cfg.ic_value));
    case IcKind::random_positive:
      return ic_random_positive(op.layout, cfg.seed);
    case IcKind::file:
      return read_state_json(cfg.ic_file, op.layout);
  }
  throw ConfigError("unknown initial-condition kind");
}

int step_count(const TimeSpec& ts) {
  return static_cast<int>(std::max<long>(1, std::lround(std::ceil(ts.t_end / ts.dt - 1e-9))));
}

}  // namespace

GeometrySpec RunConfig::refined_geometry(int extra_levels) const {
  GeometrySpec g = model.geometry;
  const int f = 1 << (mesh_level + extra_levels);
  g.n_r *= f;
  g.n_theta *= f;
  return g;
}

void RunConfig::validate() const {
  time.validate();
  if (mesh_level < 0 || mesh_level > 8)
    throw ConfigError("mesh level must be between 0 and 8");
  if (ic_kind == IcKind::file && ic_file.empty())
    throw ConfigError("initial condition 'file' needs ic_file");
  if (ic_kind == IcKind::uniform && !(ic_value > 0.0))
    throw ConfigError("uniform initial value must be positive");
  if (model.kind == ModelKind::generic && network_file.empty() &&
      model.generic.network.size() == 0)
    throw ConfigError("generic model needs a reaction network (inline or network_file)");
}

int cmd_run(const RunConfig& cfg) {
  return guarded([&]() -> int {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    const Operator op = assemble_for(cfg, 0);
    const Eigen::VectorXd u0 = initial_state(cfg, op);
    const double mass = total_mass(op.layout, u0);
    if (!(mass > 0.0)) throw ConfigError("initial condition must carry positive mass");

    const EquilibriumProfile eq = equilibrium_kernel(op, mass);
    const bool has_cert = op.model.kind != ModelKind::generic;
    RateCertificate cert;
    if (has_cert) cert = certify(op, eq, cfg.certify);

    const Trajectory traj = run_simulation(op, eq.values, u0, cfg.time);

    write_trajectory_csv(join(cfg.out_dir, "trajectory.csv"), traj, op.model.species_names());
    write_equilibrium_json(join(cfg.out_dir, "equilibrium.json"), op, eq);
    if (has_cert) write_certificate_json(join(cfg.out_dir, "certificate.json"), cert);

    RunSummary s;
    s.model = op.model.kind == ModelKind::lgl ? "lgl"
              : op.model.kind == ModelKind::jak ? "jak"
                                                : "generic";
    s.n_r = op.mesh.spec.n_r;
    s.n_theta = op.mesh.n_theta();
    s.mesh_level = cfg.mesh_level;
    s.n_steps = step_count(cfg.time);
    s.dt = cfg.time.dt;
    s.mass_initial = traj.samples.front().mass;
    s.mass_final = traj.samples.back().mass;
    double drift = 0.0;
    for (const Sample& sm : traj.samples)
      drift = std::max(drift, std::abs(sm.mass - s.mass_initial));
    s.mass_drift = drift / s.mass_initial;
    s.entropy_initial = traj.samples.front().entropy;
    s.entropy_final = traj.samples.back().entropy;
    s.certificate_present = has_cert;
    if (has_cert) {
      s.lambda_certified = cert.lambda;
      s.lambda_chain = cert.lambda_chain;
    }
    s.lambda_observed = traj.fit.rate;
    s.fit_r2 = traj.fit.r2;
    // The certificate is checked only against a trustworthy fit: enough
    // samples and a clean exponential regime.
    if (has_cert && traj.fit.n_used >= 10 && traj.fit.r2 >= 0.9) {
      s.soundness_checked = true;
      s.soundness_margin = traj.fit.rate - cert.lambda;
      s.soundness_pass = traj.fit.rate >= cert.lambda - 1e-6;
    }

    write_decay_gnuplot(join(cfg.out_dir, "decay.gp"), "trajectory.csv", s.entropy_initial,
                        has_cert ? cert.lambda : traj.fit.rate);
    write_summary_json(join(cfg.out_dir, "summary.json"), s);

    std::cout << "run: model=" << s.model << " cells=" << op.mesh.cells.size()
              << " steps=" << s.n_steps << " mass_drift=" << s.mass_drift
              << " lambda_observed=" << s.lambda_observed << " fit_r2=" << s.fit_r2;
    if (has_cert) std::cout << " lambda_certified=" << s.lambda_certified;
    std::cout << "\nartifacts: " << cfg.out_dir << '\n';

    if (s.soundness_checked && !s.soundness_pass) {
      write_state_json(join(cfg.out_dir, "final_state.json"), op.layout, traj.final_state);
      std::cerr << "soundness violation: observed decay " << s.lambda_observed
                << " undercuts certified " << s.lambda_certified
                << " (margin " << s.soundness_margin << "); final state dumped\n";
      return kExitSoundness;
    }
    return kExitOk;
  });
}

int cmd_equilibrium(const RunConfig& cfg) {
  return guarded([&]() -> int {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    const Operator op = assemble_for(cfg, 0);
    const Eigen::VectorXd u0 = initial_state(cfg, op);
    const double mass = total_mass(op.layout, u0);
    if (!(mass > 0.0)) throw ConfigError("initial condition must carry positive mass");

    const EquilibriumProfile eq = equilibrium_kernel(op, mass);
    const EquilibriumProfile fp = equilibrium_picard(op, mass, cfg.picard);
    const double dist =
        (eq.values - fp.values).lpNorm<Eigen::Infinity>() / eq.values.lpNorm<Eigen::Infinity>();

    write_equilibrium_json(join(cfg.out_dir, "equilibrium.json"), op, eq, &fp, dist);
    std::cout << "equilibrium: mass=" << eq.mass << " residual=" << eq.residual_linf
              << " positive=" << (eq.positivity_ok ? "yes" : "no") << " sweeps=" << fp.sweeps
              << " route_distance=" << dist << '\n'
              << "artifacts: " << cfg.out_dir << '\n';
    return kExitOk;
  });
}

int cmd_certify(const RunConfig& cfg) {
  return guarded([&]() -> int {
    cfg.validate();
    if (cfg.model.kind == ModelKind::generic)
      throw ConfigError("certification is defined for the polarity and signalling models");
    std::filesystem::create_directories(cfg.out_dir);

    // The mass functional of the uniform/random state is mesh-independent
    // (cell areas and arc lengths are exact), so the base-level initial
    // condition pins the equilibrium on every refinement.
    const Operator base = assemble_for(cfg, 0);
    const double mass = total_mass(base.layout, initial_state(cfg, base));
    if (!(mass > 0.0)) throw ConfigError("initial condition must carry positive mass");

    const std::string gap_name = cfg.model.kind == ModelKind::lgl ? "K0" : "L0";
    std::cout << "level  n_r  n_theta  cells    lambda         lambda_chain   " << gap_name
              << '\n';
    Eigen::MatrixXd table(3, 4);
    bool wrote_cert = false;
    for (int k = 0; k < 3; ++k) {
      const Operator op = k == 0 ? assemble_for(cfg, 0) : assemble_for(cfg, k);
      const EquilibriumProfile eq = equilibrium_kernel(op, mass);
      const RateCertificate cert = certify(op, eq, cfg.certify);
      table(k, 0) = static_cast<double>(op.mesh.cells.size());
      table(k, 1) = cert.lambda;
      table(k, 2) = cert.lambda_chain;
      table(k, 3) = cert.constants.at(gap_name);
      std::cout << std::left << std::setw(7) << cfg.mesh_level + k << std::setw(5)
                << op.mesh.spec.n_r << std::setw(9) << op.mesh.n_theta() << std::setw(9)
                << op.mesh.cells.size() << std::setw(15) << cert.lambda << std::setw(15)
                << cert.lambda_chain << cert.constants.at(gap_name) << '\n';
      if (!wrote_cert) {
        write_certificate_json(join(cfg.out_dir, "certificate.json"), cert);
        wrote_cert = true;
      }
    }

    // Small JSON table so refinement behavior is machine-checkable too.
    std::ofstream ofs(join(cfg.out_dir, "refinement.json"), std::ios::binary);
    if (!ofs) throw IoError("cannot open refinement.json for writing");
    ofs << std::setprecision(17) << "{\n  \"schema\": \"vsrd/refinement/v1\",\n  \"rows\": [\n";
    for (int k = 0; k < 3; ++k) {
      ofs << "    {\"level\": " << cfg.mesh_level + k << ", \"cells\": "
          << static_cast<long>(table(k, 0)) << ", \"lambda\": " << table(k, 1)
          << ", \"lambda_chain\": " << table(k, 2) << ", \"" << gap_name
          << "\": " << table(k, 3) << '}' << (k + 1 < 3 ? "," : "") << '\n';
    }
    ofs << "  ]\n}\n";
    if (!ofs) throw IoError("failed writing refinement.json");
    std::cout << "artifacts: " << cfg.out_dir << '\n';
    return kExitOk;
  });
}

int cmd_network_gap(const std::string& network_path, std::vector<double> weights,
                    const std::string& out_path) {
  return guarded([&]() -> int {
    const ReactionNetwork net = read_network_json(network_path);
    Eigen::VectorXd alpha;
    if (weights.empty()) {
      alpha = network_equilibrium(net, 1.0);
      weights.assign(alpha.data(), alpha.data() + alpha.size());
    } else {
      if (static_cast<int>(weights.size()) != net.size())
        throw ConfigError("need one weight per species");
      for (double w : weights)
        if (!(w > 0.0)) throw ConfigError("weights must be positive");
      alpha = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                static_cast<int>(weights.size()));
    }
    const GapResult gap = gap_constants(net, alpha);
    write_gap_json(out_path, net, weights, gap);
    std::cout << "gap: species=" << net.size() << " eta_optimal=" << gap.eta_optimal
              << " eta_constructive=" << gap.eta_constructive << " zeta=" << gap.zeta
              << (gap.clamped ? " (clamped)" : "") << '\n'
              << "artifacts: " << out_path << '\n';
    return kExitOk;
  });
}

int cmd_mesh_export(const RunConfig& cfg) {
  return guarded([&]() -> int {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);
    const Operator op = assemble_for(cfg, 0);
    write_mesh_json(join(cfg.out_dir, "mesh.json"), op.mesh);
    write_matrix_market(join(cfg.out_dir, "operator.mtx"), op.L);
    std::cout << "mesh: cells=" << op.mesh.cells.size() << " unknowns=" << op.layout.total
              << '\n'
              << "artifacts: " << cfg.out_dir << '\n';
    return kExitOk;
  });
}

}  // namespace vsrd

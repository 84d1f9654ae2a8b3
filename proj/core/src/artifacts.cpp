#include "vsrd/artifacts.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);  // binary: byte-identical on every platform
  if (!ofs) throw IoError("cannot open '" + path + "' for writing");
  return ofs;
}

void dump(const std::string& path, const Json& j) {
  std::ofstream ofs = open_out(path);
  ofs << j.dump(2) << '\n';
  if (!ofs) throw IoError("failed writing '" + path + "'");
}

Json load(const std::string& path) {
  std::ifstream ifs(path, std::ios::binary);
  if (!ifs) throw IoError("cannot open '" + path + "' for reading");
  Json j;
  try {
    j = Json::parse(ifs);
  } catch (const std::exception& e) {
    throw IoError("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::lgl: return "lgl";
    case ModelKind::jak: return "jak";
    case ModelKind::generic: return "generic";
  }
  return "unknown";
}

const char* kind_name(MeshKind k) {
  switch (k) {
    case MeshKind::disk: return "disk";
    case MeshKind::annulus: return "annulus";
    case MeshKind::interval: return "interval";
  }
  return "unknown";
}

const char* boundary_name(BoundaryId b) {
  return b == BoundaryId::outer ? "outer" : "inner";
}

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json gap_to_json(const GapResult& gap) {
  Json chains = Json::array();
  for (const GapChain& ch : gap.chains) {
    chains.push_back(Json{{"from", ch.from},
                          {"to", ch.to},
                          {"path", ch.path},
                          {"bottleneck", ch.bottleneck}});
  }
  return Json{{"eta_optimal", gap.eta_optimal},
              {"eta_constructive", gap.eta_constructive},
              {"eta_constructive_raw", gap.eta_constructive_raw},
              {"zeta", gap.zeta},
              {"clamped", gap.clamped},
              {"chains", std::move(chains)}};
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const std::vector<std::string>& species) {
  std::ofstream ofs = open_out(path);
  ofs << "# vsrd-trajectory v1\n";
  ofs << "t,mass,entropy,dissipation,fitted_rate";
  for (const std::string& s : species) ofs << ",dist_" << s;
  ofs << '\n';
  ofs << std::setprecision(17);
  for (const Sample& s : traj.samples) {
    ofs << s.t << ',' << s.mass << ',' << s.entropy << ',' << s.dissipation << ','
        << s.fitted_rate;
    for (double d : s.species_dist) ofs << ',' << d;
    ofs << '\n';
  }
  if (!ofs) throw IoError("failed writing '" + path + "'");
}

void write_equilibrium_json(const std::string& path, const Operator& op,
                            const EquilibriumProfile& eq,
                            const EquilibriumProfile* picard, double cross_distance) {
  Json j;
  j["schema"] = "vsrd/equilibrium/v1";
  j["model"] = kind_name(op.model.kind);
  j["mass"] = eq.mass;
  j["residual_linf"] = eq.residual_linf;
  j["min_value"] = eq.min_value;
  j["max_value"] = eq.max_value;
  j["positive"] = eq.positivity_ok;
  Json blocks;
  for (const SpeciesBlock& b : op.layout.blocks) {
    Json vals = Json::array();
    for (int i = 0; i < b.size; ++i) vals.push_back(eq.values[b.offset + i]);
    blocks[b.name] = std::move(vals);
  }
  j["species"] = std::move(blocks);
  if (picard != nullptr) {
    j["fixed_point"] = Json{{"sweeps", picard->sweeps},
                            {"residual_linf", picard->residual_linf},
                            {"cross_distance", cross_distance}};
  }
  dump(path, j);
}

std::string certificate_json_text(const RateCertificate& cert) {
  Json j;
  j["schema"] = "vsrd/certificate/v1";
  j["model"] = kind_name(cert.model);
  j["mass"] = cert.mass;
  j["lambda"] = cert.lambda;
  j["lambda_chain"] = cert.lambda_chain;
  j["sharp_mode"] = cert.sharp_mode;
  j["epsilons"] = cert.epsilons;
  j["epsilon_grid"] = Json{{"points", cert.options.grid_points},
                           {"lo", cert.options.eps_lo},
                           {"hi", cert.options.eps_hi},
                           {"sharp_points", cert.options.sharp_points}};
  Json consts;  // insertion in key order: std::map iteration is sorted
  for (const auto& [name, value] : cert.constants) consts[name] = value;
  j["constants"] = std::move(consts);
  j["network"] = Json{{"species", cert.gap_species},
                      {"weights", cert.gap_weights},
                      {"rates", matrix_rows(cert.gap_rates)},
                      {"gap", gap_to_json(cert.gap)}};
  return j.dump(2) + "\n";
}

void write_certificate_json(const std::string& path, const RateCertificate& cert) {
  std::ofstream ofs = open_out(path);
  ofs << certificate_json_text(cert);
  if (!ofs) throw IoError("failed writing '" + path + "'");
}

void write_summary_json(const std::string& path, const RunSummary& s) {
  Json j;
  j["schema"] = "vsrd/summary/v1";
  j["model"] = s.model;
  j["mesh"] = Json{{"n_r", s.n_r}, {"n_theta", s.n_theta}, {"level", s.mesh_level}};
  j["time"] = Json{{"steps", s.n_steps}, {"dt", s.dt}};
  j["mass"] = Json{{"initial", s.mass_initial},
                   {"final", s.mass_final},
                   {"drift", s.mass_drift}};
  j["entropy"] = Json{{"initial", s.entropy_initial}, {"final", s.entropy_final}};
  j["decay"] = Json{{"lambda_certified", s.certificate_present ? Json(s.lambda_certified) : Json()},
                    {"lambda_chain", s.certificate_present ? Json(s.lambda_chain) : Json()},
                    {"lambda_observed", s.lambda_observed},
                    {"fit_r2", s.fit_r2}};
  j["soundness"] = Json{{"checked", s.soundness_checked},
                        {"pass", s.soundness_pass},
                        {"margin", s.soundness_margin}};
  dump(path, j);
}

void write_decay_gnuplot(const std::string& path, const std::string& csv_name,
                         double entropy_initial, double lambda_certified) {
  std::ofstream ofs = open_out(path);
  ofs << std::setprecision(17);
  ofs << "# decay of the relative entropy against the certified envelope\n"
      << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set xlabel 't'\n"
      << "set ylabel 'relative entropy'\n"
      << "set key top right\n"
      << "E0 = " << entropy_initial << "\n"
      << "lambda = " << lambda_certified << "\n"
      << "plot '" << csv_name << "' skip 2 using 1:3 with lines lw 2 title 'E(t)', \\\n"
      << "     E0*exp(-lambda*x) with lines dashtype 2 title 'E(0) exp(-lambda t)'\n";
  if (!ofs) throw IoError("failed writing '" + path + "'");
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& m) {
  std::ofstream ofs = open_out(path);
  ofs << "%%MatrixMarket matrix coordinate real general\n";
  ofs << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  ofs << std::setprecision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      ofs << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  if (!ofs) throw IoError("failed writing '" + path + "'");
}

void write_mesh_json(const std::string& path, const Mesh& mesh) {
  Json j;
  j["schema"] = "vsrd/mesh/v1";
  j["kind"] = kind_name(mesh.spec.kind);
  j["n_r"] = mesh.spec.n_r;
  j["n_theta"] = mesh.n_theta();
  j["radius"] = mesh.spec.radius;
  if (mesh.spec.kind == MeshKind::annulus) {
    j["r_inner"] = mesh.spec.r_inner;
    j["r_outer"] = mesh.spec.r_outer;
    j["nucleus_area"] = mesh.nucleus_area;
  }
  j["volume_area"] = mesh.volume_area;
  if (mesh.gamma2_count > 0) {
    j["active_arc"] = Json{{"segments", mesh.gamma2_count},
                           {"requested_fraction", mesh.spec.gamma2_fraction},
                           {"realized_fraction", mesh.gamma2_realized_fraction}};
  }
  Json cells = Json::array();
  for (const VolumeCell& c : mesh.cells) {
    cells.push_back(Json{{"r0", c.r0},
                         {"r1", c.r1},
                         {"th0", c.th0},
                         {"th1", c.th1},
                         {"rc", c.rc},
                         {"thc", c.thc},
                         {"area", c.area}});
  }
  j["cells"] = std::move(cells);
  Json bnds = Json::array();
  for (const SurfaceMesh& s : mesh.boundaries) {
    Json segs = Json::array();
    for (const SurfaceCell& seg : s.cells) {
      segs.push_back(Json{{"th0", seg.th0},
                          {"th1", seg.th1},
                          {"length", seg.length},
                          {"cell", seg.adjacent_cell}});
    }
    bnds.push_back(Json{{"id", boundary_name(s.boundary)},
                        {"closed", s.closed},
                        {"radius", s.radius},
                        {"total_length", s.total_length},
                        {"segments", std::move(segs)}});
  }
  j["boundaries"] = std::move(bnds);
  dump(path, j);
}

ReactionNetwork read_network_json(const std::string& path) {
  const Json j = load(path);
  if (!j.contains("species") || !j.contains("rates"))
    throw InvalidNetwork("network file needs 'species' and 'rates' fields");
  ReactionNetwork net;
  try {
    net.species = j.at("species").get<std::vector<std::string>>();
    const auto& rows = j.at("rates");
    const int n = static_cast<int>(net.species.size());
    if (static_cast<int>(rows.size()) != n)
      throw InvalidNetwork("rate matrix must be square with one row per species");
    net.rates = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows.at(static_cast<size_t>(i)).size()) != n)
        throw InvalidNetwork("rate matrix must be square with one row per species");
      for (int k = 0; k < n; ++k)
        net.rates(i, k) = rows.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<double>();
    }
  } catch (const Json::exception& e) {
    throw InvalidNetwork(std::string("malformed network file: ") + e.what());
  }
  net.validate();
  return net;
}

void write_network_json(const std::string& path, const ReactionNetwork& net) {
  Json j;
  j["schema"] = "vsrd/network/v1";
  j["species"] = net.species;
  j["rates"] = matrix_rows(net.rates);
  dump(path, j);
}

void write_gap_json(const std::string& path, const ReactionNetwork& net,
                    const std::vector<double>& weights, const GapResult& gap) {
  Json j;
  j["schema"] = "vsrd/gap/v1";
  j["species"] = net.species;
  j["weights"] = weights;
  j["rates"] = matrix_rows(net.rates);
  j["gap"] = gap_to_json(gap);
  dump(path, j);
}

Eigen::VectorXd read_state_json(const std::string& path, const Layout& layout) {
  const Json j = load(path);
  if (!j.contains("blocks")) throw ConfigError("state file needs a 'blocks' field");
  Eigen::VectorXd u(layout.total);
  for (const SpeciesBlock& b : layout.blocks) {
    if (!j["blocks"].contains(b.name))
      throw ConfigError("state file is missing species '" + b.name + "'");
    const auto& vals = j["blocks"][b.name];
    if (static_cast<int>(vals.size()) != b.size)
      throw ConfigError("state block '" + b.name + "' has " + std::to_string(vals.size()) +
                        " entries, layout expects " + std::to_string(b.size));
    for (int i = 0; i < b.size; ++i) u[b.offset + i] = vals.at(static_cast<size_t>(i)).get<double>();
  }
  return u;
}

void write_state_json(const std::string& path, const Layout& layout,
                      const Eigen::VectorXd& u) {
  if (u.size() != layout.total) throw LayoutMismatch("state size does not match layout");
  Json j;
  j["schema"] = "vsrd/state/v1";
  Json blocks;
  for (const SpeciesBlock& b : layout.blocks) {
    Json vals = Json::array();
    for (int i = 0; i < b.size; ++i) vals.push_back(u[b.offset + i]);
    blocks[b.name] = std::move(vals);
  }
  j["blocks"] = std::move(blocks);
  dump(path, j);
}

}  // namespace vsrd

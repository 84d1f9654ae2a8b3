#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "vsrd/artifacts.hpp"
#include "vsrd/certifier.hpp"
#include "vsrd/entropy.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/errors.hpp"
#include "vsrd/timestepper.hpp"

using namespace vsrd;
using nlohmann::json;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("vsrd-artifacts-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

json parse_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

}  // namespace

TEST_CASE("network json survives a round trip") {
  TempDir dir;
  ReactionNetwork net;
  net.species = {"a", "b", "c"};
  net.rates = Eigen::MatrixXd::Zero(3, 3);
  net.rates(1, 0) = 1.5;
  net.rates(2, 1) = 0.725;
  net.rates(0, 2) = 2.0;
  const std::string path = dir.file("net.json");
  write_network_json(path, net);

  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/network/v1");
  CHECK(j.at("species").size() == 3);
  CHECK(j.at("rates")[1][0].get<double>() == 1.5);

  const ReactionNetwork back = read_network_json(path);
  CHECK(back.species == net.species);
  CHECK((back.rates - net.rates).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("malformed network json is rejected") {
  TempDir dir;
  const std::string path = dir.file("bad.json");
  auto write_text = [&](const std::string& text) {
    std::ofstream out(path);
    out << text;
  };
  write_text("{\"species\": [\"a\",\"b\"]}");  // missing rates
  CHECK_THROWS_AS(read_network_json(path), InvalidNetwork);
  write_text("{\"species\": [\"a\",\"b\"], \"rates\": [[0,1],[2]]}");  // ragged
  CHECK_THROWS_AS(read_network_json(path), InvalidNetwork);
  write_text("{\"species\": [\"a\",\"b\"], \"rates\": [[0,-1],[2,0]]}");  // negative
  CHECK_THROWS_AS(read_network_json(path), InvalidNetwork);
  write_text("not json at all");
  CHECK_THROWS_AS(read_network_json(path), IoError);
  CHECK_THROWS_AS(read_network_json(dir.file("missing.json")), IoError);
}

TEST_CASE("state json restores the exact vector") {
  TempDir dir;
  const Operator op = assemble(vsrd_test::lgl_spec(4, 8));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  Eigen::VectorXd u(op.layout.total);
  for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);

  const std::string path = dir.file("state.json");
  write_state_json(path, op.layout, u);
  const Eigen::VectorXd back = read_state_json(path, op.layout);
  REQUIRE(back.size() == u.size());
  for (int i = 0; i < u.size(); ++i) CHECK(back[i] == u[i]);

  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/state/v1");

  // Wrong-size payloads never silently truncate.
  CHECK_THROWS_AS(write_state_json(dir.file("x.json"), op.layout, u.head(5)), LayoutMismatch);
  const Operator other = assemble(vsrd_test::jak_spec(4, 8));
  CHECK_THROWS_AS(read_state_json(path, other.layout), ConfigError);
  CHECK_THROWS_AS(read_state_json(dir.file("absent.json"), op.layout), IoError);
}

TEST_CASE("trajectory csv has the promised shape") {
  TempDir dir;
  const Operator op = assemble(vsrd_test::generic_cycle_spec());
  const EquilibriumProfile eq = equilibrium_kernel(op, op.mass.sum());
  TimeSpec time;
  time.dt = 0.05;
  time.t_end = 0.5;
  time.scheme = Scheme::implicit_euler;
  time.sample_every = 2;
  Eigen::VectorXd u0 = 1.3 * eq.values;
  u0[0] *= 1.4;
  const Trajectory traj = run_simulation(op, eq.values, u0, time);

  std::vector<std::string> names;
  for (const auto& b : op.layout.blocks) names.push_back(b.name);
  const std::string path = dir.file("traj.csv");
  write_trajectory_csv(path, traj, names);

  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# vsrd-trajectory v1");
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,mass,entropy,dissipation,fitted_rate,dist_a,dist_b,dist_c");
  size_t rows = 0;
  double prev_t = -1.0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 8);
    CHECK(vals[0] > prev_t);
    prev_t = vals[0];
    CHECK(vals[2] >= 0.0);  // entropy column
  }
  CHECK(rows == traj.samples.size());
}

TEST_CASE("matrix market dump matches the sparse operator") {
  TempDir dir;
  const Operator op = assemble(vsrd_test::lgl_spec(4, 8));
  const std::string path = dir.file("op.mtx");
  write_matrix_market(path, op.L);

  std::ifstream in(path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "%%MatrixMarket matrix coordinate real general");
  int rows = 0, cols = 0;
  long nnz = 0;
  in >> rows >> cols >> nnz;
  CHECK(rows == op.layout.total);
  CHECK(cols == op.layout.total);
  CHECK(nnz == static_cast<long>(op.L.nonZeros()));
  // Spot-check the first entry round-trips at full precision.
  int r = 0, c = 0;
  double v = 0.0;
  REQUIRE((in >> r >> c >> v));
  CHECK(r >= 1);
  CHECK(c >= 1);
  CHECK(v == op.L.coeff(r - 1, c - 1));
}

TEST_CASE("equilibrium json records both routes") {
  TempDir dir;
  const Operator op = assemble(vsrd_test::jak_spec(4, 8));
  const EquilibriumProfile eq = equilibrium_kernel(op, 2.0);
  const EquilibriumProfile pic = equilibrium_picard(op, 2.0);
  const double dist =
      (eq.values - pic.values).lpNorm<Eigen::Infinity>() / eq.values.lpNorm<Eigen::Infinity>();
  const std::string path = dir.file("eq.json");
  write_equilibrium_json(path, op, eq, &pic, dist);

  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/equilibrium/v1");
  CHECK(j.at("mass").get<double>() == doctest::Approx(2.0));
  CHECK(j.at("species").contains("u0"));
  CHECK(j.at("species").contains("u7"));
  CHECK(j.at("fixed_point").at("sweeps").get<int>() == pic.sweeps);
  CHECK(j.at("fixed_point").at("cross_distance").get<double>() == dist);
  CHECK(j.at("positive").get<bool>());
}

TEST_CASE("certificate json is valid, tagged, and complete") {
  TempDir dir;
  const Operator op = assemble(vsrd_test::lgl_spec(6, 12));
  const EquilibriumProfile eq = equilibrium_kernel(op, op.mass.sum());
  const RateCertificate cert = certify(op, eq);
  const std::string path = dir.file("cert.json");
  write_certificate_json(path, cert);

  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/certificate/v1");
  CHECK(j.at("lambda").get<double>() == cert.lambda);
  CHECK(j.at("lambda_chain").get<double>() == cert.lambda_chain);
  CHECK(j.at("epsilons").size() == 6);
  CHECK(j.at("constants").at("K0").get<double>() == constant_of(cert, "K0"));
  CHECK(j.at("network").at("gap").at("zeta").get<double>() == cert.gap.zeta);
  CHECK(j.at("network").at("species").size() == 4);
  // The file content equals the in-memory rendering byte for byte.
  std::ifstream in(path, std::ios::binary);
  std::stringstream whole;
  whole << in.rdbuf();
  CHECK(whole.str() == certificate_json_text(cert));
}

TEST_CASE("summary json nulls the certificate fields when absent") {
  TempDir dir;
  RunSummary s;
  s.model = "generic";
  s.n_r = 4;
  s.n_theta = 8;
  s.n_steps = 10;
  s.dt = 0.1;
  s.mass_initial = s.mass_final = 3.0;
  s.entropy_initial = 1.0;
  s.entropy_final = 0.5;
  s.certificate_present = false;
  const std::string path = dir.file("summary.json");
  write_summary_json(path, s);
  json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/summary/v1");
  CHECK(j.at("decay").at("lambda_certified").is_null());
  CHECK(j.at("soundness").at("checked").get<bool>() == false);

  s.certificate_present = true;
  s.lambda_certified = 0.25;
  s.soundness_checked = true;
  s.soundness_pass = true;
  s.soundness_margin = 0.1;
  write_summary_json(path, s);
  j = parse_file(path);
  CHECK(j.at("decay").at("lambda_certified").get<double>() == 0.25);
  CHECK(j.at("soundness").at("pass").get<bool>());
}

TEST_CASE("mesh json describes cells, segments, and the active arc") {
  TempDir dir;
  const Mesh mesh = build_mesh(vsrd_test::lgl_spec(4, 8).geometry);
  const std::string path = dir.file("mesh.json");
  write_mesh_json(path, mesh);
  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/mesh/v1");
  CHECK(j.at("cells").size() == mesh.cells.size());
  REQUIRE(j.at("boundaries").size() == 1);
  const json& outer = j.at("boundaries")[0];
  CHECK(outer.at("id").get<std::string>() == "outer");
  CHECK(outer.at("closed").get<bool>());
  CHECK(outer.at("segments").size() == 8);
  CHECK(outer.at("segments")[0].contains("cell"));
  double area = 0.0;
  for (const auto& cell : j.at("cells")) area += cell.at("area").get<double>();
  CHECK(area == doctest::Approx(3.14159265358979).epsilon(1e-12));
  CHECK(j.at("cells")[0].contains("rc"));
  CHECK(j.at("active_arc").at("segments").get<int>() == 2);
}

TEST_CASE("gap json reports constants and routing chains") {
  TempDir dir;
  ReactionNetwork net = make_two_cycle(2.0, 1.0);
  const std::vector<double> weights{1.0, 2.0};
  const GapResult gap =
      gap_constants(net, Eigen::Map<const Eigen::VectorXd>(weights.data(), 2));
  const std::string path = dir.file("gap.json");
  write_gap_json(path, net, weights, gap);
  const json j = parse_file(path);
  CHECK(j.at("schema").get<std::string>() == "vsrd/gap/v1");
  CHECK(j.at("gap").at("eta_optimal").get<double>() == gap.eta_optimal);
  CHECK(j.at("gap").at("eta_constructive").get<double>() == gap.eta_constructive);
  CHECK(j.at("gap").at("zeta").get<double>() == gap.zeta);
  CHECK(j.at("gap").at("chains").is_array());
  CHECK(j.at("weights")[1].get<double>() == 2.0);
}

TEST_CASE("json writers refuse unwritable paths") {
  const Mesh mesh = build_mesh(vsrd_test::lgl_spec(4, 8).geometry);
  CHECK_THROWS_AS(write_mesh_json("/nonexistent-dir/mesh.json", mesh), IoError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("vsrd-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args, const std::string& log_path) {
  const std::string cmd = std::string(VSRD_CLI_PATH) + " " + args + " > " + log_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_file(const std::string& path) { return json::parse(read_text(path)); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

const std::string kTinyLgl =
    "--model.kind lgl --geometry.kind disk --geometry.n_r 4 --geometry.n_theta 8 "
    "--geometry.arc_fraction 0.25 --time.dt 0.05 --time.t_end 0.25";

}  // namespace

TEST_CASE("help exits cleanly and lists the subcommands") {
  TempDir dir;
  const std::string log = dir.file("help.txt");
  CHECK(run_cli("--help", log) == 0);
  const std::string text = read_text(log);
  for (const char* sub : {"run", "equilibrium", "certify", "network-gap", "mesh-export"})
    CHECK(text.find(sub) != std::string::npos);
}

TEST_CASE("a tiny polarity run writes the full artifact set") {
  TempDir dir;
  const std::string out = dir.file("out");
  const int code = run_cli("run " + kTinyLgl + " --out " + out, dir.file("log.txt"));
  CHECK(code == 0);
  for (const char* name :
       {"trajectory.csv", "equilibrium.json", "certificate.json", "summary.json", "decay.gp"})
    CHECK(fs::exists(fs::path(out) / name));

  const json summary = parse_file(out + "/summary.json");
  CHECK(summary.at("schema").get<std::string>() == "vsrd/summary/v1");
  CHECK(summary.at("model").get<std::string>() == "lgl");
  CHECK(summary.at("time").at("steps").get<int>() == 5);
  CHECK(summary.at("decay").at("lambda_certified").get<double>() > 0.0);
  CHECK(std::abs(summary.at("mass").at("drift").get<double>()) < 1e-12);

  const std::string csv = read_text(out + "/trajectory.csv");
  CHECK(csv.rfind("# vsrd-trajectory v1", 0) == 0);
}

TEST_CASE("identical runs produce byte-identical artifacts") {
  TempDir dir;
  const std::string out1 = dir.file("a"), out2 = dir.file("b");
  CHECK(run_cli("run " + kTinyLgl + " --out " + out1, dir.file("l1.txt")) == 0);
  CHECK(run_cli("run " + kTinyLgl + " --out " + out2, dir.file("l2.txt")) == 0);
  for (const char* name : {"certificate.json", "equilibrium.json", "trajectory.csv"})
    CHECK(read_text(out1 + "/" + name) == read_text(out2 + "/" + name));
}

TEST_CASE("random initial data is reproducible through the seed") {
  TempDir dir;
  const std::string base = "run " + kTinyLgl + " --ic.kind random_positive ";
  CHECK(run_cli(base + "--seed 3 --out " + dir.file("s3"), dir.file("l1.txt")) == 0);
  CHECK(run_cli(base + "--seed 3 --out " + dir.file("s3b"), dir.file("l2.txt")) == 0);
  CHECK(run_cli(base + "--seed 4 --out " + dir.file("s4"), dir.file("l3.txt")) == 0);
  const std::string t3 = read_text(dir.file("s3") + "/trajectory.csv");
  CHECK(t3 == read_text(dir.file("s3b") + "/trajectory.csv"));
  CHECK(t3 != read_text(dir.file("s4") + "/trajectory.csv"));
}

TEST_CASE("config file values are used and command-line values win") {
  TempDir dir;
  const std::string net = dir.file("net.json");
  write_text(net,
             "{\"species\": [\"a\", \"b\", \"c\"],"
             " \"rates\": [[0, 0, 2.0], [1.5, 0, 0], [0, 0.7, 0]]}");
  const std::string cfg = dir.file("run.toml");
  write_text(cfg,
             "[model]\nkind = \"generic\"\n\n"
             "[geometry]\nkind = \"disk\"\nn_r = 3\nn_theta = 6\n\n"
             "[generic]\nnetwork = \"" + net + "\"\ndiffusion = [1.0, 0.5, 2.0]\n\n"
             "[time]\ndt = 0.05\nt_end = 0.2\n");
  const std::string out = dir.file("out");
  const int code = run_cli("run --config " + cfg + " --time.t_end 0.1 --out " + out,
                           dir.file("log.txt"));
  CHECK(code == 0);
  const json summary = parse_file(out + "/summary.json");
  CHECK(summary.at("model").get<std::string>() == "generic");
  CHECK(summary.at("time").at("steps").get<int>() == 2);  // 0.1 overrides 0.2
  // No certificate pipeline for user-supplied networks.
  CHECK(summary.at("decay").at("lambda_certified").is_null());
  CHECK_FALSE(fs::exists(fs::path(out) / "certificate.json"));
}

TEST_CASE("configuration mistakes exit with the config code") {
  TempDir dir;
  const std::string log = dir.file("log.txt");
  CHECK(run_cli("run --no-such-flag", log) == 2);
  CHECK(run_cli("run --model.kind banana", log) == 2);
  CHECK(run_cli("run " + kTinyLgl + " --time.dt -0.05", log) == 2);
  CHECK(run_cli("run --model.kind generic --generic.network " + dir.file("absent.json"), log) ==
        2);
  CHECK(run_cli("", log) == 2);  // a subcommand is required
  CHECK(run_cli("equilibrium " + kTinyLgl + " --geometry.arc_fraction 0", log) == 2);
}

TEST_CASE("numerical failure exits with the numerical code") {
  TempDir dir;
  const std::string log = dir.file("log.txt");
  const int code = run_cli(
      "certify --model.kind lgl --geometry.kind disk --geometry.n_r 4 --geometry.n_theta 8 "
      "--geometry.arc_fraction 0.25 --lgl.alpha 1e6 --lgl.beta 1e6 --lgl.gamma 1e6 "
      "--lgl.lambda 1e6 --lgl.sigma 1e6 --lgl.xi 1e6 --lgl.d_L 1e-6 --lgl.d_P 1e-6 "
      "--lgl.d_ell 1e-6 --lgl.d_p 1e-6 --out " + dir.file("out"),
      log);
  CHECK(code == 3);
  const std::string text = read_text(log);
  CHECK(text.find("InfeasibleEpsilons") != std::string::npos);
}

TEST_CASE("equilibrium subcommand reports both routes") {
  TempDir dir;
  const std::string out = dir.file("out");
  const int code = run_cli("equilibrium " + kTinyLgl + " --out " + out, dir.file("log.txt"));
  CHECK(code == 0);
  const json eq = parse_file(out + "/equilibrium.json");
  CHECK(eq.at("schema").get<std::string>() == "vsrd/equilibrium/v1");
  CHECK(eq.at("positive").get<bool>());
  CHECK(eq.at("fixed_point").at("cross_distance").get<double>() < 1e-8);
}

TEST_CASE("mesh export honors the refinement level") {
  TempDir dir;
  const std::string out = dir.file("out");
  const int code =
      run_cli("mesh-export " + kTinyLgl + " --mesh-level 1 --out " + out, dir.file("log.txt"));
  CHECK(code == 0);
  const json mesh = parse_file(out + "/mesh.json");
  CHECK(mesh.at("schema").get<std::string>() == "vsrd/mesh/v1");
  CHECK(mesh.at("n_r").get<int>() == 8);
  CHECK(mesh.at("n_theta").get<int>() == 16);
  const std::string mtx = read_text(out + "/operator.mtx");
  CHECK(mtx.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
}

TEST_CASE("certify subcommand writes the refinement study") {
  TempDir dir;
  const std::string out = dir.file("out");
  const int code = run_cli("certify --model.kind lgl --geometry.kind disk --geometry.n_r 3 "
                           "--geometry.n_theta 8 --geometry.arc_fraction 0.25 --out " + out,
                           dir.file("log.txt"));
  CHECK(code == 0);
  const json cert = parse_file(out + "/certificate.json");
  CHECK(cert.at("schema").get<std::string>() == "vsrd/certificate/v1");
  CHECK(cert.at("lambda").get<double>() > 0.0);
  const json ref = parse_file(out + "/refinement.json");
  CHECK(ref.at("schema").get<std::string>() == "vsrd/refinement/v1");
  REQUIRE(ref.at("rows").size() == 3);
  CHECK(ref.at("rows")[0].at("level").get<int>() == 0);
  CHECK(ref.at("rows")[0].at("cells").get<int>() == 24);
  CHECK(ref.at("rows")[2].at("cells").get<int>() == 384);
  CHECK(ref.at("rows")[2].at("lambda").get<double>() > 0.0);
  CHECK(ref.at("rows")[2].at("K0").get<double>() > 0.0);
  const std::string table = read_text(dir.file("log.txt"));
  CHECK(table.find("lambda") != std::string::npos);
}

TEST_CASE("network gap subcommand analyzes a user network") {
  TempDir dir;
  const std::string net = dir.file("net.json");
  write_text(net,
             "{\"species\": [\"a\", \"b\", \"c\"],"
             " \"rates\": [[0, 1, 2], [3, 0, 0], [0, 4, 0]]}");
  const std::string out = dir.file("gap.json");
  CHECK(run_cli("network-gap --network " + net + " --out " + out, dir.file("log.txt")) == 0);
  const json gap = parse_file(out);
  CHECK(gap.at("schema").get<std::string>() == "vsrd/gap/v1");
  CHECK(gap.at("gap").at("eta_optimal").get<double>() == doctest::Approx(7.93069).epsilon(1e-3));
  CHECK(gap.at("gap").at("eta_constructive").get<double>() ==
        doctest::Approx(1.81481).epsilon(1e-3));
  CHECK(gap.at("gap").at("eta_constructive").get<double>() <=
        gap.at("gap").at("eta_optimal").get<double>() + 1e-12);

  // Explicit weights are honored.
  const std::string out2 = dir.file("gap2.json");
  CHECK(run_cli("network-gap --network " + net + " --weights 1 2 3 --out " + out2,
                dir.file("log.txt")) == 0);
  const json gap2 = parse_file(out2);
  CHECK(gap2.at("weights")[2].get<double>() == 3.0);
  CHECK(gap2.at("gap").at("eta_optimal").get<double>() !=
        gap.at("gap").at("eta_optimal").get<double>());

  // Disconnected networks are a config-level failure.
  const std::string bad = dir.file("bad.json");
  write_text(bad, "{\"species\": [\"a\", \"b\"], \"rates\": [[0, 0], [1, 0]]}");
  CHECK(run_cli("network-gap --network " + bad + " --out " + dir.file("g3.json"),
                dir.file("log.txt")) == 2);
}

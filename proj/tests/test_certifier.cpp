#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "test_support.hpp"
#include "vsrd/artifacts.hpp"
#include "vsrd/certifier.hpp"
#include "vsrd/equilibrium.hpp"
#include "vsrd/errors.hpp"

using namespace vsrd;

namespace {

constexpr double kPi = 3.14159265358979323846;
// Square of the first zero of J1', the sharp constant for the unit disk.
constexpr double kDiskPoincare = 3.3899573905639816;

RateCertificate certify_spec(const ModelSpec& spec, const CertifyOptions& opt = {}) {
  const Operator op = assemble(spec);
  const EquilibriumProfile eq = equilibrium_kernel(op, op.mass.sum());
  return certify(op, eq, opt);
}

double c_of(const RateCertificate& cert, const std::string& key) {
  return constant_of(cert, key);
}

}  // namespace

TEST_CASE("uniform-weight volume constant approaches the disk value") {
  ModelSpec spec = vsrd_test::lgl_spec(32, 64);
  const Mesh mesh = build_mesh(spec.geometry);
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<int>(mesh.cells.size()));
  const double p = weighted_poincare_volume(mesh, w);  // 2048 cells: iterative path
  CHECK(std::abs(p - kDiskPoincare) / kDiskPoincare < 0.02);
}

TEST_CASE("uniform-weight circle constants match the discrete chain exactly") {
  ModelSpec spec = vsrd_test::lgl_spec(8, 64);
  const Mesh mesh = build_mesh(spec.geometry);
  const SurfaceMesh& surf = mesh.boundary(BoundaryId::outer);
  const int n = static_cast<int>(surf.cells.size());
  REQUIRE(n == 64);
  const double h = 2.0 * kPi / n;

  const Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  const double full = weighted_poincare_arc(surf, 0, n, w);
  const double full_discrete = 4.0 / (h * h) * std::pow(std::sin(kPi / n), 2);
  CHECK(full == doctest::Approx(full_discrete).epsilon(1e-10));
  CHECK(std::abs(full - 1.0) < 1e-2);  // unit circle continuum value

  const int quarter = n / 4;
  const Eigen::VectorXd wq = Eigen::VectorXd::Ones(quarter);
  const double arc = weighted_poincare_arc(surf, 0, quarter, wq);
  const double arc_discrete = 4.0 / (h * h) * std::pow(std::sin(kPi / (2.0 * quarter)), 2);
  CHECK(arc == doctest::Approx(arc_discrete).epsilon(1e-10));
  const double continuum = std::pow(kPi / (quarter * h), 2);
  CHECK(std::abs(arc - continuum) / continuum < 2e-2);
}

TEST_CASE("functional constants are invariant under weight rescaling") {
  ModelSpec spec = vsrd_test::lgl_spec(8, 16);
  const Mesh mesh = build_mesh(spec.geometry);
  const int nc = static_cast<int>(mesh.cells.size());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.3, 2.5);
  Eigen::VectorXd w(nc);
  for (int i = 0; i < nc; ++i) w[i] = dist(rng);

  const double p1 = weighted_poincare_volume(mesh, w);
  const double p7 = weighted_poincare_volume(mesh, 7.0 * w);
  CHECK(p7 == doctest::Approx(p1).epsilon(1e-12));

  const int nseg = static_cast<int>(mesh.boundary(BoundaryId::outer).cells.size());
  const double t1 = weighted_trace_constant(mesh, w, BoundaryId::outer, 0, nseg);
  const double t7 = weighted_trace_constant(mesh, 7.0 * w, BoundaryId::outer, 0, nseg);
  CHECK(t7 == doctest::Approx(t1).epsilon(1e-12));

  // Two-sided comparison with the uniform constant.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nc);
  const double pu = weighted_poincare_volume(mesh, ones);
  const double lo = w.minCoeff() / w.maxCoeff(), hi = w.maxCoeff() / w.minCoeff();
  CHECK(p1 >= lo * pu * (1.0 - 1e-12));
  CHECK(p1 <= hi * pu * (1.0 + 1e-12));
}

TEST_CASE("trace constant is stable under refinement") {
  ModelSpec coarse = vsrd_test::lgl_spec(16, 32);
  ModelSpec fine = vsrd_test::lgl_spec(32, 64);
  double t[2];
  int k = 0;
  for (const ModelSpec& spec : {coarse, fine}) {
    const Mesh mesh = build_mesh(spec.geometry);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<int>(mesh.cells.size()));
    t[k++] = weighted_trace_constant(mesh, w, BoundaryId::outer, 0,
                                     static_cast<int>(mesh.boundary(BoundaryId::outer).cells.size()));
  }
  CHECK(std::abs(t[0] - t[1]) / t[1] < 0.05);
  CHECK(t[1] > 0.5);
  CHECK(t[1] < 2.0);
}

TEST_CASE("arc constant rejects degenerate inputs") {
  ModelSpec spec = vsrd_test::lgl_spec(4, 8);
  const Mesh mesh = build_mesh(spec.geometry);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
  CHECK_THROWS_AS(weighted_poincare_arc(mesh.boundary(BoundaryId::outer), 0, 1, one), EigensolveFailure);
  const Eigen::VectorXd w3 = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(weighted_poincare_arc(mesh.boundary(BoundaryId::outer), 0, 4, w3), EigensolveFailure);
}

TEST_CASE("polarity certificate reproduces its reference values") {
  const RateCertificate cert = certify_spec(vsrd_test::lgl_spec(8, 16));
  CHECK(cert.lambda == doctest::Approx(0.0036927).epsilon(2e-3));
  CHECK(cert.lambda_chain == doctest::Approx(0.0018463).epsilon(2e-3));
  CHECK(c_of(cert, "K0") == doctest::Approx(0.033544).epsilon(2e-3));
  CHECK(c_of(cert, "eta_gap_constructive") == doctest::Approx(0.18646).epsilon(2e-3));
  CHECK(c_of(cert, "eta_gap_optimal") == doctest::Approx(2.4284).epsilon(2e-3));
  CHECK(c_of(cert, "zeta") == doctest::Approx(0.32785).epsilon(2e-3));
  CHECK(c_of(cert, "P_L") == doctest::Approx(3.4067).epsilon(2e-3));
  CHECK(c_of(cert, "P_ell") == doctest::Approx(0.9324).epsilon(2e-3));
  CHECK(c_of(cert, "T_L") == doctest::Approx(1.0866).epsilon(2e-3));
  for (int k = 0; k < 4; ++k)
    CHECK(cert.epsilons[static_cast<size_t>(k)] == doctest::Approx(0.1101).epsilon(2e-3));
  CHECK(cert.epsilons[4] == 0.0);
  CHECK(cert.epsilons[5] == doctest::Approx(0.35374).epsilon(2e-3));
  CHECK_FALSE(cert.sharp_mode);
  // Every remainder coefficient of the winning grid point is positive.
  for (const char* key : {"eta1", "eta2", "eta3", "eta4", "eta_trace", "omega"})
    CHECK(c_of(cert, key) > 0.0);
}

TEST_CASE("certificates are deterministic and self-consistent") {
  const RateCertificate a = certify_spec(vsrd_test::lgl_spec(8, 16));
  const RateCertificate b = certify_spec(vsrd_test::lgl_spec(8, 16));
  CHECK(certificate_json_text(a) == certificate_json_text(b));
  CHECK(recompute_lambda(a) == a.lambda);
  for (const auto& [key, value] : a.constants) {
    INFO(key);
    CHECK(std::isfinite(value));
  }
}

TEST_CASE("certified rate grows under refinement") {
  const double l0 = certify_spec(vsrd_test::lgl_spec(4, 8)).lambda;
  const double l1 = certify_spec(vsrd_test::lgl_spec(8, 16)).lambda;
  const double l2 = certify_spec(vsrd_test::lgl_spec(16, 32)).lambda;
  CHECK(l0 == doctest::Approx(0.00354376).epsilon(2e-3));
  CHECK(l1 == doctest::Approx(0.0036927).epsilon(2e-3));
  CHECK(l2 == doctest::Approx(0.00374089).epsilon(2e-3));
  CHECK(l0 < l1);
  CHECK(l1 < l2);
}

TEST_CASE("doubling every diffusivity cannot lower the certified rate") {
  ModelSpec base = vsrd_test::lgl_spec(8, 16);
  ModelSpec fast = base;
  fast.lgl.d_L *= 2.0;
  fast.lgl.d_P *= 2.0;
  fast.lgl.d_ell *= 2.0;
  fast.lgl.d_p *= 2.0;
  const double lb = certify_spec(base).lambda;
  const double lf = certify_spec(fast).lambda;
  CHECK(lf >= lb * (1.0 - 1e-12));
}

TEST_CASE("hostile parameter ratios leave no feasible balance point") {
  ModelSpec spec = vsrd_test::lgl_spec(4, 8);
  spec.lgl.alpha = spec.lgl.beta = spec.lgl.gamma = 1e6;
  spec.lgl.lambda = spec.lgl.sigma = spec.lgl.xi = 1e6;
  spec.lgl.d_L = spec.lgl.d_P = spec.lgl.d_ell = spec.lgl.d_p = 1e-6;
  const Operator op = assemble(spec);
  const EquilibriumProfile eq = equilibrium_kernel(op, op.mass.sum());
  CHECK_THROWS_AS(certify(op, eq), InfeasibleEpsilons);
}

TEST_CASE("sharp mode keeps the active-arc release term explicitly") {
  CertifyOptions opt;
  opt.sharp = true;
  opt.grid_points = 18;
  opt.sharp_points = 8;
  const RateCertificate cert = certify_spec(vsrd_test::lgl_spec(6, 12), opt);
  CHECK(cert.sharp_mode);
  CHECK(cert.lambda > 0.0);
  CHECK(cert.epsilons[4] > 0.0);
  CHECK(c_of(cert, "eta_trace_arc") >= -1e-12);
  CHECK(c_of(cert, "T_P_arc") > 0.0);
  CHECK(recompute_lambda(cert) == cert.lambda);
}

TEST_CASE("signalling certificate reproduces its reference values") {
  const RateCertificate cert = certify_spec(vsrd_test::jak_spec(8, 16));
  CHECK(cert.lambda == doctest::Approx(3.2625e-5).epsilon(2e-3));
  CHECK(c_of(cert, "L0") == doctest::Approx(5.6011e-4).epsilon(2e-3));
  CHECK(c_of(cert, "L1") == doctest::Approx(2.5743).epsilon(2e-3));
  CHECK(c_of(cert, "L2") == doctest::Approx(0.058246).epsilon(2e-3));
  CHECK(c_of(cert, "C1") == doctest::Approx(0.28639).epsilon(2e-3));
  CHECK(c_of(cert, "C2") == doctest::Approx(0.42959).epsilon(2e-3));
  CHECK(c_of(cert, "C3") == doctest::Approx(0.42959).epsilon(2e-3));
  CHECK(c_of(cert, "T_mu") == doctest::Approx(0.85918).epsilon(2e-3));
  CHECK(c_of(cert, "P_u0") == doctest::Approx(2.7632).epsilon(2e-3));
  CHECK(c_of(cert, "P_u1") == doctest::Approx(2.5743).epsilon(2e-3));
  CHECK(recompute_lambda(cert) == cert.lambda);
  CHECK(cert.lambda == std::min(c_of(cert, "L1"), c_of(cert, "L0") * c_of(cert, "L2")));
}

TEST_CASE("delay-chain transport rates do not depend on the delay constant") {
  ModelSpec slow = vsrd_test::jak_spec(6, 12);
  ModelSpec fast = slow;
  fast.jak.r_delay = 10.0 * slow.jak.r_delay;
  const RateCertificate cs = certify_spec(slow);
  const RateCertificate cf = certify_spec(fast);
  // At equilibrium each delay stage carries the same flux, so rate * level is
  // a pure function of the import side.
  for (int k = 3; k <= 7; ++k) {
    const std::string key = "u" + std::to_string(k) + "_inf";
    const double flux_s = slow.jak.r_delay * c_of(cs, key);
    const double flux_f = fast.jak.r_delay * c_of(cf, key);
    CHECK(flux_f == doctest::Approx(flux_s).epsilon(1e-9));
  }
}

TEST_CASE("certification rejects what it cannot certify") {
  const Operator generic = assemble(vsrd_test::generic_cycle_spec());
  const EquilibriumProfile geq = equilibrium_kernel(generic, 1.0);
  CHECK_THROWS_AS(certify(generic, geq), ConfigError);

  ModelSpec zero_rate = vsrd_test::lgl_spec(4, 8);
  zero_rate.lgl.gamma = 0.0;
  const Operator zop = assemble(zero_rate);
  const EquilibriumProfile zeq = equilibrium_kernel(zop, 1.0);
  CHECK_THROWS_AS(certify(zop, zeq), ConfigError);

  const Operator op = assemble(vsrd_test::lgl_spec(4, 8));
  EquilibriumProfile eq = equilibrium_kernel(op, 1.0);
  eq.values[0] = -eq.values[0];
  eq.positivity_ok = false;
  CHECK_THROWS_AS(certify(op, eq), NonpositiveEquilibrium);
}

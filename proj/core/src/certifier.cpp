#include "vsrd/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::SparseMatrix<double> face_stiffness(const std::vector<Face>& faces, int n,
                                           const Eigen::VectorXd& weight) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * faces.size());
  for (const Face& f : faces) {
    const double coef = f.tau * 0.5 * (weight[f.a] + weight[f.b]);
    trip.emplace_back(f.a, f.a, coef);
    trip.emplace_back(f.b, f.b, coef);
    trip.emplace_back(f.a, f.b, -coef);
    trip.emplace_back(f.b, f.a, -coef);
  }
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(trip.begin(), trip.end());
  S.makeCompressed();
  return S;
}

void require_positive_weight(const Eigen::VectorXd& w) {
  if (w.size() == 0 || w.minCoeff() <= 0.0)
    throw EigensolveFailure("weight must be strictly positive");
}

}  // namespace

double weighted_poincare_volume(const Mesh& mesh, const Eigen::VectorXd& cell_weight,
                                const EigOptions& opt) {
  const int n = static_cast<int>(mesh.cells.size());
  if (cell_weight.size() != n) throw EigensolveFailure("weight size mismatch");
  require_positive_weight(cell_weight);
  const Eigen::SparseMatrix<double> S = face_stiffness(volume_faces(mesh), n, cell_weight);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = mesh.cells[i].area * cell_weight[i];
  return constrained_smallest_eigenvalue(S, b, b, opt);
}

double weighted_poincare_arc(const SurfaceMesh& surf, int offset, int count,
                             const Eigen::VectorXd& seg_weight, const EigOptions& opt) {
  if (seg_weight.size() != count) throw EigensolveFailure("weight size mismatch");
  require_positive_weight(seg_weight);
  if (count < 2) throw EigensolveFailure("arc constant needs at least two segments");
  const Eigen::SparseMatrix<double> S =
      face_stiffness(arc_faces(surf, offset, count), count, seg_weight);
  Eigen::VectorXd b(count);
  for (int i = 0; i < count; ++i) b[i] = surf.cells[offset + i].length * seg_weight[i];
  return constrained_smallest_eigenvalue(S, b, b, opt);
}

double weighted_trace_constant(const Mesh& mesh, const Eigen::VectorXd& cell_weight,
                               BoundaryId boundary, int seg_offset, int seg_count,
                               const EigOptions& opt) {
  const int n = static_cast<int>(mesh.cells.size());
  if (cell_weight.size() != n) throw EigensolveFailure("weight size mismatch");
  require_positive_weight(cell_weight);
  const SurfaceMesh& surf = mesh.boundary(boundary);
  if (seg_offset < 0 || seg_count < 1 ||
      seg_offset + seg_count > static_cast<int>(surf.cells.size()))
    throw EigensolveFailure("trace segment range out of bounds");

  const Eigen::SparseMatrix<double> S = face_stiffness(volume_faces(mesh), n, cell_weight);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = mesh.cells[i].area * cell_weight[i];
  Eigen::VectorXd tr = Eigen::VectorXd::Zero(n);
  for (int s = seg_offset; s < seg_offset + seg_count; ++s) {
    const SurfaceCell& seg = surf.cells[s];
    tr[seg.adjacent_cell] += seg.length * cell_weight[seg.adjacent_cell];
  }
  return 1.0 / constrained_largest_ratio(S, tr, b, opt);
}

// ---------------------------------------------------------------------------
// Polarity (disk) certificate
// ---------------------------------------------------------------------------

namespace {

struct LglData {
  // Equilibrium integrals.
  double W_L = 0, W_Pi = 0, W_ell = 0, W_pi = 0;  // entropy weights per species
  double W_SL = 0;   // trace measure of the first volume species on the circle
  double W_ell2 = 0; // surface species measure restricted to the active arc
  // Supremum ratios between equilibrium components.
  double sup_Pi_over_L = 0, sup_L_over_Pi = 0;
  double sup_L_over_ell = 0, sup_ell_over_L = 0, sup_ell_over_pi = 0;
  double sup_pi_over_Pi = 0;  // sharp mode only
  // Functional-inequality constants.
  double P_L = 0, P_P = 0, P_ell = 0, P_p = 0, T_L = 0;
  double T_P_arc = 0;  // sharp mode only
  double K0 = 0;
};

struct LglSearchResult {
  std::array<double, 6> eps{};
  double lambda = -kInf;
  double eta1 = 0, eta2 = 0, eta3 = 0, eta4 = 0;
  double eta_trace = 0, eta_trace_arc = 0;
  double omega = 0;
  double theta = 0;
  double lambda_chain = 0;
};

std::vector<double> log_grid(int points, double lo, double hi) {
  std::vector<double> g(static_cast<size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    g[static_cast<size_t>(k)] = lo * std::pow(hi / lo, t);
  }
  return g;
}

double young(double eps) { return 2.0 * eps / (1.0 - eps); }

/// Exhaustive deterministic search over the parameter grid, maximizing the
/// emitted min-formula.  Ties are broken toward the lexicographically
/// smallest (eps1..eps6) tuple.
LglSearchResult lgl_grid_search(const LglData& d, const LglParams& par,
                                const CertifyOptions& opt) {
  const std::vector<double> eps = log_grid(opt.grid_points, opt.eps_lo, opt.eps_hi);
  const std::vector<double> eps5 =
      opt.sharp ? log_grid(opt.sharp_points, opt.eps_lo, opt.eps_hi) : std::vector<double>{0.0};
  const int N = static_cast<int>(eps.size());
  const int N5 = static_cast<int>(eps5.size());

  // Per-index gain/debit tables.
  std::vector<double> K2e(N), A1(N), A2(N), B1(N), B2(N), C3(N), Tr3(N), C4(N), Tr4(N), C6(N),
      D6(N), w2(N), w3(N), w6(N);
  for (int k = 0; k < N; ++k) {
    const double g = young(eps[k]);
    K2e[k] = 2.0 * d.K0 * eps[k];
    A1[k] = g * par.alpha * d.sup_Pi_over_L;  // debit against the first volume slot
    A2[k] = g * par.alpha;                    // debit against the second volume slot
    B1[k] = g * par.beta;
    B2[k] = g * par.beta * d.sup_L_over_Pi;
    C3[k] = g * par.lambda * d.sup_L_over_ell;  // debit against the surface slot
    Tr3[k] = g * par.lambda;                    // debit against the trace budget
    C4[k] = g * par.gamma;
    Tr4[k] = g * par.gamma * d.sup_ell_over_L;
    C6[k] = g * par.sigma;
    D6[k] = g * par.sigma * d.sup_ell_over_pi;  // debit against the arc slot
    w2[k] = eps[k] * par.beta * d.W_L;
    w3[k] = eps[k] * par.lambda * d.W_SL;
    w6[k] = eps[k] * par.sigma * d.W_ell2;
  }
  std::vector<double> K2e5(static_cast<size_t>(N5)), D5(static_cast<size_t>(N5)),
      Tr5(static_cast<size_t>(N5));
  for (int k = 0; k < N5; ++k) {
    const double g = opt.sharp ? young(eps5[static_cast<size_t>(k)]) : 0.0;
    K2e5[static_cast<size_t>(k)] = 2.0 * d.K0 * eps5[static_cast<size_t>(k)];
    D5[static_cast<size_t>(k)] = g * par.xi;
    Tr5[static_cast<size_t>(k)] = g * par.xi * d.sup_pi_over_Pi;
  }

  const double base1 = par.d_L * d.P_L;
  const double base2 = par.d_P * d.P_P;
  const double base3 = 2.0 * par.d_ell * d.P_ell;
  const double base4 = 2.0 * par.d_p * d.P_p;
  const double trace_budget = par.d_L * d.T_L;
  const double arc_trace_budget = par.d_P * d.T_P_arc;

  LglSearchResult best;
  bool found = false;
  std::array<double, 6> cur{};

  auto consider = [&](double lambda) {
    if (lambda > best.lambda ||
        (lambda == best.lambda && found &&
         std::lexicographical_compare(cur.begin(), cur.end(), best.eps.begin(),
                                      best.eps.end()))) {
      best.lambda = lambda;
      best.eps = cur;
      found = true;
    }
  };

  for (int i3 = 0; i3 < N; ++i3) {
    cur[2] = eps[i3];
    if (Tr3[i3] > trace_budget) break;  // trace debits only grow from here
    for (int i4 = 0; i4 < N; ++i4) {
      cur[3] = eps[i4];
      const double eta_trace = trace_budget - Tr3[i3] - Tr4[i4];
      if (eta_trace < 0.0) break;
      const double eta34 = base3 - C3[i3] - C4[i4];
      if (eta34 <= 0.0) break;
      for (int i5 = 0; i5 < N5; ++i5) {
        cur[4] = opt.sharp ? eps5[static_cast<size_t>(i5)] : 0.0;
        if (opt.sharp && arc_trace_budget - Tr5[static_cast<size_t>(i5)] < 0.0) break;
        for (int i6 = 0; i6 < N; ++i6) {
          cur[5] = eps[i6];
          const double eta3 = eta34 - C6[i6];
          if (eta3 <= 0.0) break;
          const double eta4 = base4 - D6[i6] - D5[static_cast<size_t>(i5)];
          if (eta4 <= 0.0) break;
          const double slot5 = opt.sharp ? K2e5[static_cast<size_t>(i5)] : kInf;
          const double cap346 = std::min(
              {K2e[i3], K2e[i4], K2e[i6], slot5, eta3, eta4});
          if (0.5 * cap346 <= best.lambda) continue;
          const double wa = std::min(w3[i3], w6[i6]);
          for (int i2 = 0; i2 < N; ++i2) {
            cur[1] = eps[i2];
            const double eta1_part = base1 - B1[i2];
            const double eta2_part = base2 - B2[i2];
            if (eta1_part <= 0.0 || eta2_part <= 0.0) break;
            // Without the sharp arc-trace route, the release term is dropped
            // and its slot is recovered by the triangle-inequality surrogate.
            const double omega = opt.sharp ? 0.0 : std::min(w2[i2], wa) / 6.0;
            const double slot_omega = opt.sharp ? kInf : 4.0 * d.K0 * omega;
            const double cap2 =
                std::min({cap346, K2e[i2], slot_omega, eta1_part, eta2_part});
            if (0.5 * cap2 <= best.lambda) continue;
            for (int i1 = 0; i1 < N; ++i1) {
              cur[0] = eps[i1];
              const double eta1 = eta1_part - A1[i1];
              const double eta2 = eta2_part - A2[i1];
              if (eta1 <= 0.0 || eta2 <= 0.0) break;
              consider(0.5 * std::min({cap346, K2e[i2], slot_omega, K2e[i1], eta1, eta2}));
            }
          }
        }
      }
    }
  }

  if (!found)
    throw InfeasibleEpsilons(
        "no parameter tuple keeps every remainder coefficient positive; refine the mesh or "
        "moderate the rate constants");

  // Re-evaluate every named constant at the winning tuple.
  const double e1 = best.eps[0], e2 = best.eps[1], e3 = best.eps[2], e4 = best.eps[3],
               e5 = best.eps[4], e6 = best.eps[5];
  best.eta1 = base1 - young(e1) * par.alpha * d.sup_Pi_over_L - young(e2) * par.beta;
  best.eta2 = base2 - young(e1) * par.alpha - young(e2) * par.beta * d.sup_L_over_Pi;
  best.eta3 = base3 - young(e3) * par.lambda * d.sup_L_over_ell - young(e4) * par.gamma -
              young(e6) * par.sigma;
  best.eta4 = base4 - young(e6) * par.sigma * d.sup_ell_over_pi -
              (opt.sharp ? young(e5) * par.xi : 0.0);
  best.eta_trace =
      trace_budget - young(e3) * par.lambda - young(e4) * par.gamma * d.sup_ell_over_L;
  best.eta_trace_arc =
      opt.sharp ? arc_trace_budget - young(e5) * par.xi * d.sup_pi_over_Pi : 0.0;
  best.omega = opt.sharp ? 0.0
                         : std::min({e2 * par.beta * d.W_L, e3 * par.lambda * d.W_SL,
                                     e6 * par.sigma * d.W_ell2}) /
                               6.0;

  // Conservative audit chain: the fraction of each averaged-dissipation slot
  // actually recovered, times the network gap.
  if (opt.sharp) {
    best.theta = std::min({e1, e2, e3, e4, e5, e6});
  } else {
    const double pp_slot = best.omega / (par.xi * d.W_pi);
    best.theta = std::min({e1, e2 / 2.0, e3 / 2.0, e4, e6 / 2.0, pp_slot});
  }
  best.lambda_chain =
      std::min({best.theta * d.K0, best.eta1, best.eta2, best.eta3, best.eta4});
  return best;
}

RateCertificate certify_lgl(const Operator& op, const EquilibriumProfile& eq,
                            const CertifyOptions& opt) {
  const LglParams& par = op.model.lgl;
  for (double r : {par.alpha, par.beta, par.gamma, par.lambda, par.sigma, par.xi})
    if (!(r > 0.0))
      throw ConfigError("certification requires strictly positive rate constants");
  if (op.mesh.gamma2_count < 2)
    throw ConfigError("certification needs at least two active-arc segments");

  const Mesh& mesh = op.mesh;
  const SurfaceMesh& outer = mesh.boundary(BoundaryId::outer);
  const Eigen::VectorXd& w = eq.values;
  const SpeciesBlock& bL = op.layout.block("L");
  const SpeciesBlock& bP = op.layout.block("P");
  const SpeciesBlock& bl = op.layout.block("ell");
  const SpeciesBlock& bp = op.layout.block("p");
  const int nc = static_cast<int>(mesh.cells.size());
  const int ns = static_cast<int>(outer.cells.size());
  const int g2 = mesh.gamma2_count;

  const Eigen::VectorXd wL = w.segment(bL.offset, bL.size);
  const Eigen::VectorXd wP = w.segment(bP.offset, bP.size);
  const Eigen::VectorXd wl = w.segment(bl.offset, bl.size);
  const Eigen::VectorXd wp = w.segment(bp.offset, bp.size);
  if (wL.minCoeff() <= 0 || wP.minCoeff() <= 0 || wl.minCoeff() <= 0 || wp.minCoeff() <= 0)
    throw NonpositiveEquilibrium("certificate requires a strictly positive equilibrium");

  LglData d;
  for (int c = 0; c < nc; ++c) {
    d.W_L += mesh.cells[c].area * wL[c];
    d.W_Pi += mesh.cells[c].area * wP[c];
    d.sup_Pi_over_L = std::max(d.sup_Pi_over_L, wP[c] / wL[c]);
    d.sup_L_over_Pi = std::max(d.sup_L_over_Pi, wL[c] / wP[c]);
  }
  for (int s = 0; s < ns; ++s) {
    const SurfaceCell& seg = outer.cells[s];
    d.W_ell += seg.length * wl[s];
    d.W_SL += seg.length * wL[seg.adjacent_cell];
    d.sup_L_over_ell = std::max(d.sup_L_over_ell, wL[seg.adjacent_cell] / wl[s]);
    d.sup_ell_over_L = std::max(d.sup_ell_over_L, wl[s] / wL[seg.adjacent_cell]);
  }
  for (int s = 0; s < g2; ++s) {
    const SurfaceCell& seg = outer.cells[s];
    d.W_pi += seg.length * wp[s];
    d.W_ell2 += seg.length * wl[s];
    d.sup_ell_over_pi = std::max(d.sup_ell_over_pi, wl[s] / wp[s]);
    if (opt.sharp)
      d.sup_pi_over_Pi = std::max(d.sup_pi_over_Pi, wp[s] / wP[seg.adjacent_cell]);
  }

  d.P_L = weighted_poincare_volume(mesh, wL, opt.eig);
  d.P_P = weighted_poincare_volume(mesh, wP, opt.eig);
  d.P_ell = weighted_poincare_arc(outer, 0, ns, wl, opt.eig);
  d.P_p = weighted_poincare_arc(outer, 0, g2, wp, opt.eig);
  d.T_L = weighted_trace_constant(mesh, wL, BoundaryId::outer, 0, ns, opt.eig);
  if (opt.sharp)
    d.T_P_arc = weighted_trace_constant(mesh, wP, BoundaryId::outer, 0, g2, opt.eig);

  // Network gap of the averaged four-species system.  Each exchange pathway
  // keeps its true direction so the averaged digraph stays strongly
  // connected: L->P carries beta*W_L, P->L alpha*W_Pi, L->ell lambda*W_SL,
  // ell->L gamma*W_ell, ell->p sigma*W_ell2, p->P xi*W_pi.
  ReactionNetwork avg;
  avg.species = {"L", "P", "ell", "p"};
  avg.rates = Eigen::MatrixXd::Zero(4, 4);
  avg.rates(1, 0) = par.beta * d.W_L;
  avg.rates(0, 1) = par.alpha * d.W_Pi;
  avg.rates(2, 0) = par.lambda * d.W_SL;
  avg.rates(0, 2) = par.gamma * d.W_ell;
  avg.rates(3, 2) = par.sigma * d.W_ell2;
  avg.rates(1, 3) = par.xi * d.W_pi;
  const std::vector<double> weights = {d.W_L, d.W_Pi, d.W_ell, d.W_pi};
  const GapResult gap = gap_constants(
      avg, Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<int>(weights.size())));
  d.K0 = gap.eta_constructive / *std::max_element(weights.begin(), weights.end());

  const LglSearchResult sr = lgl_grid_search(d, par, opt);

  RateCertificate cert;
  cert.model = ModelKind::lgl;
  cert.mass = eq.mass;
  cert.sharp_mode = opt.sharp;
  cert.options = opt;
  cert.epsilons = sr.eps;
  cert.gap_species = avg.species;
  cert.gap_weights = weights;
  cert.gap_rates = avg.rates;
  cert.gap = gap;

  auto& c = cert.constants;
  c["P_L"] = d.P_L;
  c["P_P"] = d.P_P;
  c["P_ell"] = d.P_ell;
  c["P_p"] = d.P_p;
  c["T_L"] = d.T_L;
  c["K0"] = d.K0;
  c["eta_gap_constructive"] = gap.eta_constructive;
  c["eta_gap_optimal"] = gap.eta_optimal;
  c["zeta"] = gap.zeta;
  c["W_L"] = d.W_L;
  c["W_Pi"] = d.W_Pi;
  c["W_ell"] = d.W_ell;
  c["W_pi"] = d.W_pi;
  c["W_SL"] = d.W_SL;
  c["W_ell2"] = d.W_ell2;
  c["sup_Pi_over_L"] = d.sup_Pi_over_L;
  c["sup_L_over_Pi"] = d.sup_L_over_Pi;
  c["sup_L_over_ell"] = d.sup_L_over_ell;
  c["sup_ell_over_L"] = d.sup_ell_over_L;
  c["sup_ell_over_pi"] = d.sup_ell_over_pi;
  c["eta1"] = sr.eta1;
  c["eta2"] = sr.eta2;
  c["eta3"] = sr.eta3;
  c["eta4"] = sr.eta4;
  c["eta_trace"] = sr.eta_trace;
  c["omega"] = sr.omega;
  c["theta"] = sr.theta;
  if (opt.sharp) {
    c["T_P_arc"] = d.T_P_arc;
    c["sup_pi_over_Pi"] = d.sup_pi_over_Pi;
    c["eta_trace_arc"] = sr.eta_trace_arc;
  }
  cert.lambda_chain = sr.lambda_chain;
  cert.lambda = recompute_lambda(cert);
  return cert;
}

// ---------------------------------------------------------------------------
// Signalling (annulus) certificate
// ---------------------------------------------------------------------------

RateCertificate certify_jak(const Operator& op, const EquilibriumProfile& eq,
                            const CertifyOptions& opt) {
  const JakParams& par = op.model.jak;
  const double ab = par.r_act * par.p_jak;
  for (double r : {ab, par.r_imp, par.r_exp, par.r_imp2, par.r_delay})
    if (!(r > 0.0))
      throw ConfigError("certification requires strictly positive rate constants");

  const Mesh& mesh = op.mesh;
  const SurfaceMesh& outer = mesh.boundary(BoundaryId::outer);
  const SurfaceMesh& inner = mesh.boundary(BoundaryId::inner);
  const Eigen::VectorXd& w = eq.values;
  const SpeciesBlock& b0 = op.layout.block("u0");
  const SpeciesBlock& b1 = op.layout.block("u1");
  const int nc = static_cast<int>(mesh.cells.size());

  const Eigen::VectorXd w0 = w.segment(b0.offset, b0.size);
  const Eigen::VectorXd w1 = w.segment(b1.offset, b1.size);
  if (w0.minCoeff() <= 0 || w1.minCoeff() <= 0)
    throw NonpositiveEquilibrium("certificate requires a strictly positive equilibrium");
  std::array<double, 6> ode{};
  for (int k = 0; k < 6; ++k) {
    ode[static_cast<size_t>(k)] = w[op.layout.block("u" + std::to_string(k + 2)).offset];
    if (!(ode[static_cast<size_t>(k)] > 0.0))
      throw NonpositiveEquilibrium("certificate requires positive nuclear levels");
  }

  double W0 = 0, W1 = 0;
  for (int c = 0; c < nc; ++c) {
    W0 += mesh.cells[c].area * w0[c];
    W1 += mesh.cells[c].area * w1[c];
  }
  double Iout0 = 0, I0 = 0, I1 = 0;
  double min_ratio = kInf;
  for (const SurfaceCell& seg : outer.cells) {
    Iout0 += seg.length * w0[seg.adjacent_cell];
    min_ratio = std::min(min_ratio, w1[seg.adjacent_cell] / w0[seg.adjacent_cell]);
  }
  for (const SurfaceCell& seg : inner.cells) {
    I0 += seg.length * w0[seg.adjacent_cell];
    I1 += seg.length * w1[seg.adjacent_cell];
  }

  const double D = std::min(par.diff0(), par.diff1());
  const double P0 = weighted_poincare_volume(mesh, w0, opt.eig);
  const double P1 = weighted_poincare_volume(mesh, w1, opt.eig);
  const double L1c = D * std::min(P0, P1);

  const int ns_out = static_cast<int>(outer.cells.size());
  const int ns_in = static_cast<int>(inner.cells.size());
  const double T_out0 = weighted_trace_constant(mesh, w0, BoundaryId::outer, 0, ns_out, opt.eig);
  const double T_out1 = weighted_trace_constant(mesh, w1, BoundaryId::outer, 0, ns_out, opt.eig);
  const double T_in0 = weighted_trace_constant(mesh, w0, BoundaryId::inner, 0, ns_in, opt.eig);
  const double T_in1 = weighted_trace_constant(mesh, w1, BoundaryId::inner, 0, ns_in, opt.eig);
  const double Tmu = std::min({T_out0, T_out1, T_in0, T_in1});

  const double C1 = (D * Tmu / 3.0) * std::min({1.0, ab, min_ratio});
  const double C2 = 0.5 * std::min(D * Tmu, par.r_imp);
  const double C3 = 0.5 * std::min(D * Tmu, par.r_imp2);
  const double u2inf = ode[0];
  const double L2c = 0.5 * std::min({C1 / ab, C2 / (2.0 * par.r_imp),
                                     C2 * I0 / (2.0 * par.r_exp * u2inf * inner.total_length),
                                     C3 / par.r_imp2, 1.0});

  // Averaged eight-state pair system with the lemma's coefficients; true
  // directions keep the digraph strongly connected (the activation loop plus
  // the direct import/export pair).
  ReactionNetwork avg;
  avg.species = {"u0", "u1", "u2", "u3", "u4", "u5", "u6", "u7"};
  avg.rates = Eigen::MatrixXd::Zero(8, 8);
  avg.rates(1, 0) = ab * Iout0;
  avg.rates(2, 0) = par.r_imp * I0;
  avg.rates(0, 2) = par.r_exp * u2inf * inner.total_length;
  avg.rates(3, 1) = par.r_imp2 * I1;
  for (int k = 3; k <= 7; ++k)
    avg.rates(k + 1 == 8 ? 2 : k + 1, k) = par.r_delay * ode[static_cast<size_t>(k - 2)];
  std::vector<double> weights = {W0, W1};
  for (int k = 0; k < 6; ++k)
    weights.push_back(mesh.nucleus_area * ode[static_cast<size_t>(k)]);
  const GapResult gap = gap_constants(
      avg, Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<int>(weights.size())));
  const double L0c = gap.eta_constructive / *std::max_element(weights.begin(), weights.end());

  RateCertificate cert;
  cert.model = ModelKind::jak;
  cert.mass = eq.mass;
  cert.options = opt;
  cert.gap_species = avg.species;
  cert.gap_weights = weights;
  cert.gap_rates = avg.rates;
  cert.gap = gap;

  auto& c = cert.constants;
  c["P_u0"] = P0;
  c["P_u1"] = P1;
  c["T_outer_u0"] = T_out0;
  c["T_outer_u1"] = T_out1;
  c["T_inner_u0"] = T_in0;
  c["T_inner_u1"] = T_in1;
  c["T_mu"] = Tmu;
  c["C1"] = C1;
  c["C2"] = C2;
  c["C3"] = C3;
  c["L0"] = L0c;
  c["L1"] = L1c;
  c["L2"] = L2c;
  c["D"] = D;
  c["W_u0"] = W0;
  c["W_u1"] = W1;
  c["I_outer_u0"] = Iout0;
  c["I_inner_u0"] = I0;
  c["I_inner_u1"] = I1;
  c["min_u1_over_u0_outer"] = min_ratio;
  c["inner_length"] = inner.total_length;
  c["outer_length"] = outer.total_length;
  c["nucleus_area"] = mesh.nucleus_area;
  c["eta_gap_constructive"] = gap.eta_constructive;
  c["eta_gap_optimal"] = gap.eta_optimal;
  c["zeta"] = gap.zeta;
  for (int k = 0; k < 6; ++k)
    c["u" + std::to_string(k + 2) + "_inf"] = ode[static_cast<size_t>(k)];

  cert.lambda = recompute_lambda(cert);
  cert.lambda_chain = cert.lambda;
  return cert;
}

}  // namespace

double constant_of(const RateCertificate& cert, const std::string& name) {
  const auto it = cert.constants.find(name);
  if (it == cert.constants.end())
    throw ConfigError("certificate is missing constant '" + name + "'");
  return it->second;
}

RateCertificate certify(const Operator& op, const EquilibriumProfile& eq,
                        const CertifyOptions& opt) {
  if (!eq.positivity_ok || eq.values.size() != op.layout.total)
    throw NonpositiveEquilibrium("certificate requires a positive equilibrium on this layout");
  switch (op.model.kind) {
    case ModelKind::lgl:
      return certify_lgl(op, eq, opt);
    case ModelKind::jak:
      return certify_jak(op, eq, opt);
    case ModelKind::generic:
      throw ConfigError("certification is defined for the polarity and signalling models");
  }
  throw ConfigError("unknown model kind");
}

double recompute_lambda(const RateCertificate& cert) {
  if (cert.model == ModelKind::jak)
    return std::min(constant_of(cert, "L1"), constant_of(cert, "L0") * constant_of(cert, "L2"));

  const double K0 = constant_of(cert, "K0");
  const auto& e = cert.epsilons;
  double m = std::min({2.0 * K0 * e[0], 2.0 * K0 * e[1], 2.0 * K0 * e[2], 2.0 * K0 * e[3],
                       2.0 * K0 * e[5], constant_of(cert, "eta1"), constant_of(cert, "eta2"),
                       constant_of(cert, "eta3"), constant_of(cert, "eta4")});
  if (cert.sharp_mode)
    m = std::min(m, 2.0 * K0 * e[4]);
  else
    m = std::min(m, 4.0 * K0 * constant_of(cert, "omega"));
  return 0.5 * m;
}

}  // namespace vsrd

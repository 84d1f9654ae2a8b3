#include "vsrd/equilibrium.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "vsrd/errors.hpp"
#include "vsrd/network.hpp"

namespace vsrd {

namespace {

void require_mass(double mass) {
  if (!(std::isfinite(mass) && mass > 0.0)) throw ConfigError("target mass must be positive");
}

/// Relative kernel residual: max_i |(L w)_i| / max_i (|L| |w|)_i.
double kernel_residual(const Operator& op, const Eigen::VectorXd& w) {
  const Eigen::VectorXd r = op.L * w;
  const Eigen::VectorXd s = op.L.cwiseAbs() * w.cwiseAbs();
  const double scale = std::max(s.maxCoeff(), 1e-300);
  return r.cwiseAbs().maxCoeff() / scale;
}

void finalize_profile(const Operator& op, double mass, EquilibriumProfile& prof) {
  const double got = op.mass.dot(prof.values);
  if (!(std::abs(got) > 0.0)) throw SingularNetwork("computed profile carries no mass");
  prof.values *= mass / got;
  prof.mass = op.mass.dot(prof.values);
  prof.residual_linf = kernel_residual(op, prof.values);
  prof.min_value = prof.values.minCoeff();
  prof.max_value = prof.values.maxCoeff();
  prof.positivity_ok = prof.min_value > 0.0;
}

void require_single_component(const Operator& op) {
  if (op.model.kind != ModelKind::generic) return;
  const SccResult scc = strongly_connected_components(op.model.generic.network);
  if (scc.count != 1)
    throw KernelDimensionError("reaction network has " + std::to_string(scc.count) +
                               " strongly connected components; the equilibrium is not unique");
}

}  // namespace

EquilibriumProfile equilibrium_kernel(const Operator& op, double mass) {
  require_mass(mass);
  require_single_component(op);
  const int n = op.layout.total;

  // Pin the mass functional by replacing the first generator row: the zero
  // column sums make that row redundant, so the pinned system is square and
  // nonsingular iff the kernel is simple.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(op.L.nonZeros()) + n);
  for (int j = 0; j < op.L.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.L, j); it; ++it)
      if (it.row() != 0) trip.emplace_back(static_cast<int>(it.row()), j, it.value());
  for (int j = 0; j < n; ++j) trip.emplace_back(0, j, op.mass[j]);

  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure("mass-pinned kernel system could not be factored");

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[0] = mass;
  EquilibriumProfile prof;
  prof.values = lu.solve(b);
  if (lu.info() != Eigen::Success) throw LinearSolveFailure("mass-pinned kernel solve failed");

  finalize_profile(op, mass, prof);
  return prof;
}

EquilibriumProfile equilibrium_picard(const Operator& op, double mass,
                                      const PicardOptions& opt) {
  require_mass(mass);
  require_single_component(op);
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) throw ConfigError("damping must be in (0,1]");
  if (!(opt.tol > 0.0) || opt.max_sweeps < 1) throw ConfigError("invalid picard options");
  const int n = op.layout.total;

  // Split the generator into its species-diagonal part (within-species
  // diffusion plus the full diagonal) and the nonnegative cross coupling.
  auto species_of = [&](int idx) {
    for (size_t k = 0; k < op.layout.blocks.size(); ++k) {
      const auto& b = op.layout.blocks[k];
      if (idx >= b.offset && idx < b.offset + b.size) return static_cast<int>(k);
    }
    throw LayoutMismatch("index outside layout");
  };
  std::vector<int> block_of(n);
  for (int i = 0; i < n; ++i) block_of[i] = species_of(i);

  std::vector<Eigen::Triplet<double>> diag_trip, cross_trip;
  for (int j = 0; j < op.L.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.L, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (block_of[i] == block_of[j])
        diag_trip.emplace_back(i, j, -it.value());  // assemble -L_diag directly
      else
        cross_trip.emplace_back(i, j, it.value());
    }
  }
  Eigen::SparseMatrix<double> neg_diag(n, n), cross(n, n);
  neg_diag.setFromTriplets(diag_trip.begin(), diag_trip.end());
  cross.setFromTriplets(cross_trip.begin(), cross_trip.end());
  neg_diag.makeCompressed();
  cross.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(neg_diag);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure(
        "within-species system is singular; some species has no exit pathway");

  // Start from the uniform state with the correct mass.
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  w *= mass / op.mass.dot(w);

  EquilibriumProfile prof;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    Eigen::VectorXd w_new = lu.solve(cross * w);
    if (lu.info() != Eigen::Success) throw LinearSolveFailure("picard sweep solve failed");
    w_new = (1.0 - opt.damping) * w + opt.damping * w_new;
    const double got = op.mass.dot(w_new);
    if (!(std::abs(got) > 0.0)) throw SingularNetwork("picard iterate lost all mass");
    w_new *= mass / got;
    const double change = (w_new - w).cwiseAbs().maxCoeff();
    const double scale = std::max(w_new.cwiseAbs().maxCoeff(), 1e-300);
    w = std::move(w_new);
    if (change <= opt.tol * scale) {
      prof.values = std::move(w);
      prof.sweeps = sweep;
      finalize_profile(op, mass, prof);
      return prof;
    }
  }
  throw NoConvergence("picard iteration did not converge within " +
                      std::to_string(opt.max_sweeps) + " sweeps");
}

namespace {

/// Inner-boundary integral of one volume species using the adjacent-cell
/// trace, matching the assembled exchange stencils.
double inner_trace_integral(const Operator& op, const Eigen::VectorXd& u,
                            const SpeciesBlock& blk) {
  const SurfaceMesh& inner = op.mesh.boundary(BoundaryId::inner);
  double acc = 0.0;
  for (const SurfaceCell& seg : inner.cells) acc += seg.length * u[blk.offset + seg.adjacent_cell];
  return acc;
}

}  // namespace

std::array<double, 6> jak_ode_closed_form(const Operator& op, const Eigen::VectorXd& u) {
  if (op.model.kind != ModelKind::jak)
    throw ConfigError("closed-form nuclear levels require the signalling model");
  const JakParams& p = op.model.jak;
  if (!(p.r_exp > 0.0 && p.r_delay > 0.0))
    throw SingularNetwork("closed forms need positive export and delay rates");
  const double len = op.mesh.boundary(BoundaryId::inner).total_length;
  const double i0 = inner_trace_integral(op, u, op.layout.block("u0"));
  const double i1 = inner_trace_integral(op, u, op.layout.block("u1"));
  const double chain = p.r_imp2 * i1 / (p.r_delay * len);
  const double u2 = (p.r_imp * i0 + p.r_imp2 * i1) / (p.r_exp * len);
  return {u2, chain, chain, chain, chain, chain};
}

double jak_reduced_mass(const Operator& op, const Eigen::VectorXd& u) {
  const std::array<double, 6> ode = jak_ode_closed_form(op, u);
  const SpeciesBlock& b0 = op.layout.block("u0");
  const SpeciesBlock& b1 = op.layout.block("u1");
  double volume_mass = 0.0;
  for (int i = 0; i < b0.size; ++i)
    volume_mass += op.mesh.cells[i].area * (u[b0.offset + i] + u[b1.offset + i]);
  double nuclear = 0.0;
  for (double v : ode) nuclear += v;
  return volume_mass + op.mesh.nucleus_area * nuclear;
}

}  // namespace vsrd

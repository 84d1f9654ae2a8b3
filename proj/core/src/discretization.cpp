#include "vsrd/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

/// Collects triplets for the generator and the per-pair bookkeeping used by
/// the dissipation breakdown.  All couplings funnel through exchange() and
/// diffuse() so that zero column sums hold by construction.
class Assembler {
 public:
  int category_id(const std::string& name) {
    auto it = cat_ids_.find(name);
    if (it != cat_ids_.end()) return it->second;
    const int id = static_cast<int>(categories_.size());
    categories_.push_back(name);
    cat_ids_.emplace(name, id);
    return id;
  }

  /// Mass transfer from unknown `from` to unknown `to` at nonnegative rate
  /// (already weighted by the source measure): L(to,from) += rate,
  /// L(from,from) -= rate.
  void exchange(int to, int from, double rate, int category) {
    if (rate == 0.0) return;
    trip_.emplace_back(to, from, rate);
    trip_.emplace_back(from, from, -rate);
    PairTerm& p = pair_slot(to, from, category);
    if (p.i == to)
      p.lij += rate;
    else
      p.lji += rate;
  }

  /// Symmetric diffusive coupling with transmissibility tau across one face.
  void diffuse(int a, int b, double tau, int category) {
    if (tau == 0.0) return;
    trip_.emplace_back(a, b, tau);
    trip_.emplace_back(b, a, tau);
    trip_.emplace_back(a, a, -tau);
    trip_.emplace_back(b, b, -tau);
    PairTerm& p = pair_slot(a, b, category);
    p.lij += tau;
    p.lji += tau;
  }

  void finalize(Operator& op, int n) {
    op.L.resize(n, n);
    op.L.setFromTriplets(trip_.begin(), trip_.end());
    op.L.makeCompressed();
    op.pairs = std::move(pairs_);
    op.categories = std::move(categories_);
  }

 private:
  PairTerm& pair_slot(int a, int b, int category) {
    const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = slots_.find(key);
    if (it == slots_.end()) {
      PairTerm p;
      p.i = key.first;
      p.j = key.second;
      p.category = category;
      pairs_.push_back(p);
      it = slots_.emplace(key, pairs_.size() - 1).first;
    }
    return pairs_[it->second];
  }

  std::vector<Eigen::Triplet<double>> trip_;
  std::map<std::pair<int, int>, size_t> slots_;
  std::vector<PairTerm> pairs_;
  std::vector<std::string> categories_;
  std::map<std::string, int> cat_ids_;
};

/// Diffusion of one volume species over the polar (or interval) mesh.
void add_volume_diffusion(Assembler& as, const Mesh& mesh, const SpeciesBlock& blk, double d,
                          int category) {
  for (const Face& f : volume_faces(mesh))
    as.diffuse(blk.offset + f.a, blk.offset + f.b, d * f.tau, category);
}

/// Diffusion of one surface species along its (sub-)arc of a surface mesh.
void add_surface_diffusion(Assembler& as, const SurfaceMesh& surf, const SpeciesBlock& blk,
                           double d, int category) {
  for (const Face& f : arc_faces(surf, blk.surface_offset, blk.surface_count))
    as.diffuse(blk.offset + f.a, blk.offset + f.b, d * f.tau, category);
}

void assemble_lgl(Assembler& as, const Mesh& mesh, const Layout& layout, const LglParams& par) {
  const SpeciesBlock& L = layout.block("L");
  const SpeciesBlock& P = layout.block("P");
  const SpeciesBlock& ell = layout.block("ell");
  const SpeciesBlock& p = layout.block("p");
  const SurfaceMesh& outer = mesh.boundary(BoundaryId::outer);

  add_volume_diffusion(as, mesh, L, par.d_L, as.category_id("diffusion:L"));
  add_volume_diffusion(as, mesh, P, par.d_P, as.category_id("diffusion:P"));
  add_surface_diffusion(as, outer, ell, par.d_ell, as.category_id("diffusion:ell"));
  add_surface_diffusion(as, outer, p, par.d_p, as.category_id("diffusion:p"));

  // Volume exchange L <-> P in every cell.
  const int vol_cat = as.category_id("volume_exchange");
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    const double m = mesh.cells[c].area;
    const int ci = static_cast<int>(c);
    as.exchange(P.offset + ci, L.offset + ci, par.beta * m, vol_cat);
    as.exchange(L.offset + ci, P.offset + ci, par.alpha * m, vol_cat);
  }

  // Attachment/detachment L <-> ell across the whole boundary circle.
  const int mem_cat = as.category_id("membrane_exchange");
  for (size_t s = 0; s < outer.cells.size(); ++s) {
    const SurfaceCell& seg = outer.cells[s];
    const int si = static_cast<int>(s);
    as.exchange(ell.offset + si, L.offset + seg.adjacent_cell, par.lambda * seg.length, mem_cat);
    as.exchange(L.offset + seg.adjacent_cell, ell.offset + si, par.gamma * seg.length, mem_cat);
  }

  // Active arc: conversion ell -> p and release p -> P.
  const int conv_cat = as.category_id("arc_conversion");
  const int rel_cat = as.category_id("arc_release");
  for (int s = 0; s < mesh.gamma2_count; ++s) {
    const SurfaceCell& seg = outer.cells[s];
    as.exchange(p.offset + s, ell.offset + s, par.sigma * seg.length, conv_cat);
    as.exchange(P.offset + seg.adjacent_cell, p.offset + s, par.xi * seg.length, rel_cat);
  }
}

void assemble_jak(Assembler& as, const Mesh& mesh, const Layout& layout, const JakParams& par) {
  const SpeciesBlock& u0 = layout.block("u0");
  const SpeciesBlock& u1 = layout.block("u1");
  const int u2 = layout.block("u2").offset;
  const int u3 = layout.block("u3").offset;
  const SurfaceMesh& outer = mesh.boundary(BoundaryId::outer);
  const SurfaceMesh& inner = mesh.boundary(BoundaryId::inner);

  add_volume_diffusion(as, mesh, u0, par.diff0(), as.category_id("diffusion:u0"));
  add_volume_diffusion(as, mesh, u1, par.diff1(), as.category_id("diffusion:u1"));

  // Activation u0 -> u1 on the outer membrane; the rate density is
  // normalized by the total outer boundary length.
  const int act_cat = as.category_id("activation");
  const double act = par.r_act * par.p_jak / outer.total_length;
  for (const SurfaceCell& seg : outer.cells)
    as.exchange(u1.offset + seg.adjacent_cell, u0.offset + seg.adjacent_cell, act * seg.length,
                act_cat);

  // Inner membrane: import/export u0 <-> u2 and import u1 -> u3, with rate
  // densities normalized by the inner boundary length.
  const int shuttle_cat = as.category_id("nuclear_shuttle");
  const int import_cat = as.category_id("nuclear_import");
  for (const SurfaceCell& seg : inner.cells) {
    const double frac = seg.length / inner.total_length;
    as.exchange(u2, u0.offset + seg.adjacent_cell, par.r_imp * frac, shuttle_cat);
    as.exchange(u0.offset + seg.adjacent_cell, u2, par.r_exp * frac, shuttle_cat);
    as.exchange(u3, u1.offset + seg.adjacent_cell, par.r_imp2 * frac, import_cat);
  }

  // Delay chain u3 -> u4 -> ... -> u7 -> u2 between the well-mixed slots.
  const int chain_cat = as.category_id("delay_chain");
  for (int k = 3; k < 7; ++k) {
    const int a = layout.block("u" + std::to_string(k)).offset;
    const int b = layout.block("u" + std::to_string(k + 1)).offset;
    as.exchange(b, a, par.r_delay, chain_cat);
  }
  as.exchange(u2, layout.block("u7").offset, par.r_delay, chain_cat);
}

void assemble_generic(Assembler& as, const Mesh& mesh, const Layout& layout,
                      const GenericParams& par) {
  const int n = static_cast<int>(par.network.species.size());
  for (int k = 0; k < n; ++k)
    add_volume_diffusion(as, mesh, layout.blocks[k], par.diffusion[k],
                         as.category_id("diffusion:" + par.network.species[k]));

  const int rxn_cat = as.category_id("reaction");
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    const double m = mesh.cells[c].area;
    const int ci = static_cast<int>(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double rate = par.network.rates(i, j);  // reaction j -> i
        if (rate > 0.0)
          as.exchange(layout.blocks[i].offset + ci, layout.blocks[j].offset + ci, rate * m,
                      rxn_cat);
      }
    }
  }
}

}  // namespace

Operator assemble(const ModelSpec& spec) { return assemble(spec, build_mesh(spec.geometry)); }

Operator assemble(const ModelSpec& spec, const Mesh& mesh) {
  spec.validate();
  Operator op;
  op.mesh = mesh;
  op.model = spec;
  op.layout = build_layout(spec, mesh);
  op.mass = op.layout.measures;

  Assembler as;
  switch (spec.kind) {
    case ModelKind::lgl:
      assemble_lgl(as, mesh, op.layout, spec.lgl);
      break;
    case ModelKind::jak:
      assemble_jak(as, mesh, op.layout, spec.jak);
      break;
    case ModelKind::generic:
      assemble_generic(as, mesh, op.layout, spec.generic);
      break;
  }
  as.finalize(op, op.layout.total);
  check_conservative(op);
  check_metzler(op);
  return op;
}

void check_conservative(const Operator& op, double tol) {
  const Eigen::VectorXd colsum = Eigen::RowVectorXd::Ones(op.L.rows()) * op.L;
  for (int j = 0; j < op.L.cols(); ++j) {
    double abssum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.L, j); it; ++it)
      abssum += std::abs(it.value());
    const double scale = std::max(1.0, abssum);
    if (std::abs(colsum[j]) > tol * scale) {
      std::ostringstream msg;
      msg << "column " << j << " sums to " << colsum[j] << " (scale " << scale << ")";
      throw NonConservative(msg.str());
    }
  }
}

void check_metzler(const Operator& op) {
  for (int j = 0; j < op.L.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.L, j); it; ++it) {
      if (it.row() != it.col() && it.value() < 0.0) {
        std::ostringstream msg;
        msg << "negative coupling L(" << it.row() << "," << it.col() << ") = " << it.value();
        throw NonConservative(msg.str());
      }
    }
  }
}

}  // namespace vsrd

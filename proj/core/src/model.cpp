#include "vsrd/model.hpp"

#include <cmath>
#include <random>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
}

void require_nonneg(double v, const char* what) {
  if (!(std::isfinite(v) && v >= 0.0))
    throw ConfigError(std::string(what) + " must be nonnegative");
}

}  // namespace

std::vector<std::string> ModelSpec::species_names() const {
  switch (kind) {
    case ModelKind::lgl:
      return {"L", "P", "ell", "p"};
    case ModelKind::jak:
      return {"u0", "u1", "u2", "u3", "u4", "u5", "u6", "u7"};
    case ModelKind::generic:
      return generic.network.species;
  }
  throw ConfigError("unknown model kind");
}

void ModelSpec::validate() const {
  geometry.validate();
  switch (kind) {
    case ModelKind::lgl: {
      if (geometry.kind != MeshKind::disk) throw ConfigError("lgl model requires a disk mesh");
      if (geometry.gamma2_fraction <= 0.0)
        throw ConfigError("lgl model requires gamma2_fraction > 0");
      require_nonneg(lgl.alpha, "alpha");
      require_nonneg(lgl.beta, "beta");
      require_nonneg(lgl.gamma, "gamma");
      require_nonneg(lgl.lambda, "lambda");
      require_nonneg(lgl.sigma, "sigma");
      require_nonneg(lgl.xi, "xi");
      require_positive(lgl.d_L, "d_L");
      require_positive(lgl.d_P, "d_P");
      require_positive(lgl.d_ell, "d_ell");
      require_positive(lgl.d_p, "d_p");
      break;
    }
    case ModelKind::jak: {
      if (geometry.kind != MeshKind::annulus)
        throw ConfigError("jak model requires an annulus mesh");
      require_nonneg(jak.r_act, "r_act");
      require_nonneg(jak.p_jak, "p_jak");
      require_nonneg(jak.r_imp, "r_imp");
      require_nonneg(jak.r_exp, "r_exp");
      require_nonneg(jak.r_imp2, "r_imp2");
      require_nonneg(jak.r_delay, "r_delay");
      require_positive(jak.diff0(), "d0");
      require_positive(jak.diff1(), "d1");
      break;
    }
    case ModelKind::generic: {
      generic.network.validate();
      const size_t n = generic.network.species.size();
      if (generic.diffusion.size() != n)
        throw ConfigError("generic model needs one diffusion constant per species");
      for (double d : generic.diffusion) require_positive(d, "diffusion");
      break;
    }
  }
}

const SpeciesBlock& Layout::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw LayoutMismatch("no species block named '" + name + "'");
}

int Layout::global_index(const std::string& name, int local) const {
  const SpeciesBlock& b = block(name);
  if (local < 0 || local >= b.size) throw LayoutMismatch("local index out of range for " + name);
  return b.offset + local;
}

namespace {

SpeciesBlock volume_block(const std::string& name, const Mesh& mesh, int offset) {
  SpeciesBlock b;
  b.name = name;
  b.domain = DomainKind::volume;
  b.offset = offset;
  b.size = static_cast<int>(mesh.cells.size());
  return b;
}

SpeciesBlock surface_block(const std::string& name, BoundaryId id, int seg_offset, int count,
                           int offset) {
  SpeciesBlock b;
  b.name = name;
  b.domain = DomainKind::surface;
  b.boundary = id;
  b.surface_offset = seg_offset;
  b.surface_count = count;
  b.offset = offset;
  b.size = count;
  return b;
}

SpeciesBlock point_block(const std::string& name, int offset) {
  SpeciesBlock b;
  b.name = name;
  b.domain = DomainKind::point;
  b.offset = offset;
  b.size = 1;
  return b;
}

void fill_measures(Layout& layout, const Mesh& mesh) {
  layout.measures.resize(layout.total);
  for (const auto& b : layout.blocks) {
    switch (b.domain) {
      case DomainKind::volume:
        for (int i = 0; i < b.size; ++i) layout.measures[b.offset + i] = mesh.cells[i].area;
        break;
      case DomainKind::surface: {
        const SurfaceMesh& surf = mesh.boundary(b.boundary);
        for (int i = 0; i < b.size; ++i)
          layout.measures[b.offset + i] = surf.cells[b.surface_offset + i].length;
        break;
      }
      case DomainKind::point:
        layout.measures[b.offset] = mesh.nucleus_area;
        break;
    }
  }
}

}  // namespace

Layout build_layout(const ModelSpec& spec, const Mesh& mesh) {
  Layout layout;
  int off = 0;
  auto push = [&](SpeciesBlock b) {
    layout.blocks.push_back(b);
    off += b.size;
  };

  switch (spec.kind) {
    case ModelKind::lgl: {
      const int n_outer = static_cast<int>(mesh.boundary(BoundaryId::outer).cells.size());
      if (mesh.gamma2_count < 1) throw LayoutMismatch("lgl layout needs an active arc");
      push(volume_block("L", mesh, off));
      push(volume_block("P", mesh, off));
      push(surface_block("ell", BoundaryId::outer, 0, n_outer, off));
      push(surface_block("p", BoundaryId::outer, 0, mesh.gamma2_count, off));
      break;
    }
    case ModelKind::jak: {
      push(volume_block("u0", mesh, off));
      push(volume_block("u1", mesh, off));
      for (int k = 2; k <= 7; ++k) push(point_block("u" + std::to_string(k), off));
      break;
    }
    case ModelKind::generic: {
      for (const auto& name : spec.generic.network.species) push(volume_block(name, mesh, off));
      break;
    }
  }
  layout.total = off;
  fill_measures(layout, mesh);
  return layout;
}

Eigen::VectorXd ic_uniform(const Layout& layout, const std::vector<double>& values) {
  if (values.size() != layout.blocks.size())
    throw LayoutMismatch("ic_uniform needs one value per species");
  Eigen::VectorXd u(layout.total);
  for (size_t k = 0; k < layout.blocks.size(); ++k) {
    const auto& b = layout.blocks[k];
    u.segment(b.offset, b.size).setConstant(values[k]);
  }
  return u;
}

Eigen::VectorXd ic_random_positive(const Layout& layout, std::uint64_t seed, double lo,
                                   double hi) {
  if (!(lo > 0.0 && hi > lo)) throw ConfigError("random ic needs 0 < lo < hi");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd u(layout.total);
  for (int i = 0; i < layout.total; ++i) u[i] = dist(rng);
  return u;
}

double total_mass(const Layout& layout, const Eigen::VectorXd& u) {
  if (u.size() != layout.total) throw LayoutMismatch("state size does not match layout");
  return layout.measures.dot(u);
}

}  // namespace vsrd

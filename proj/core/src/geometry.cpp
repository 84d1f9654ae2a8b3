#include "vsrd/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }
}  // namespace

void GeometrySpec::validate() const {
  if (n_r < 1) throw InvalidGeometry("n_r must be >= 1");
  switch (kind) {
    case MeshKind::disk:
      if (!finite_positive(radius)) throw InvalidGeometry("disk radius must be positive");
      if (n_theta < 3) throw InvalidGeometry("disk needs n_theta >= 3");
      if (gamma2_fraction < 0.0 || gamma2_fraction > 1.0)
        throw InvalidGeometry("gamma2_fraction must lie in [0, 1]");
      break;
    case MeshKind::annulus:
      if (!finite_positive(r_inner) || !finite_positive(r_outer) || r_inner >= r_outer)
        throw InvalidGeometry("annulus needs 0 < r_inner < r_outer");
      if (n_theta < 3) throw InvalidGeometry("annulus needs n_theta >= 3");
      if (gamma2_fraction != 0.0)
        throw InvalidGeometry("gamma2_fraction applies to disk meshes only");
      break;
    case MeshKind::interval:
      if (!finite_positive(radius)) throw InvalidGeometry("interval length must be positive");
      break;
  }
}

bool Mesh::has_boundary(BoundaryId id) const {
  for (const auto& b : boundaries)
    if (b.boundary == id) return true;
  return false;
}

const SurfaceMesh& Mesh::boundary(BoundaryId id) const {
  for (const auto& b : boundaries)
    if (b.boundary == id) return b;
  throw UnknownBoundary(id == BoundaryId::outer ? "outer" : "inner");
}

namespace {

SurfaceMesh circle_boundary(BoundaryId id, double radius, int n_theta, int ring,
                            const Mesh& mesh) {
  SurfaceMesh surf;
  surf.boundary = id;
  surf.closed = true;
  surf.radius = radius;
  const double dth = 2.0 * kPi / n_theta;
  surf.cells.reserve(static_cast<size_t>(n_theta));
  for (int j = 0; j < n_theta; ++j) {
    SurfaceCell sc;
    sc.th0 = j * dth;
    sc.th1 = (j + 1) * dth;
    sc.mid_theta = 0.5 * (sc.th0 + sc.th1);
    sc.length = radius * dth;
    sc.adjacent_cell = mesh.cell_index(ring, j);
    surf.cells.push_back(sc);
    surf.total_length += sc.length;
  }
  return surf;
}

Mesh build_polar(const GeometrySpec& spec) {
  Mesh mesh;
  mesh.spec = spec;
  const bool annulus = spec.kind == MeshKind::annulus;
  const double ra = annulus ? spec.r_inner : 0.0;
  const double rb = annulus ? spec.r_outer : spec.radius;
  const int nr = spec.n_r;
  const int nth = spec.n_theta;
  const double dr = (rb - ra) / nr;
  const double dth = 2.0 * kPi / nth;

  mesh.cells.reserve(static_cast<size_t>(nr) * nth);
  for (int i = 0; i < nr; ++i) {
    const double r0 = ra + i * dr;
    const double r1 = ra + (i + 1) * dr;
    for (int j = 0; j < nth; ++j) {
      VolumeCell c;
      c.r0 = r0;
      c.r1 = r1;
      c.th0 = j * dth;
      c.th1 = (j + 1) * dth;
      c.rc = 0.5 * (r0 + r1);
      c.thc = 0.5 * (c.th0 + c.th1);
      c.area = 0.5 * (r1 * r1 - r0 * r0) * dth;
      mesh.volume_area += c.area;
      mesh.cells.push_back(c);
    }
  }

  mesh.boundaries.push_back(circle_boundary(BoundaryId::outer, rb, nth, nr - 1, mesh));
  if (annulus) {
    mesh.boundaries.push_back(circle_boundary(BoundaryId::inner, ra, nth, 0, mesh));
    mesh.nucleus_area = kPi * ra * ra;
  }

  if (!annulus && spec.gamma2_fraction > 0.0) {
    int k = static_cast<int>(std::lround(spec.gamma2_fraction * nth));
    k = std::clamp(k, 1, nth - 1);
    mesh.gamma2_count = k;
    mesh.gamma2_realized_fraction = static_cast<double>(k) / nth;
  }
  return mesh;
}

Mesh build_interval(const GeometrySpec& spec) {
  Mesh mesh;
  mesh.spec = spec;
  const int nr = spec.n_r;
  const double h = spec.radius / nr;
  mesh.cells.reserve(static_cast<size_t>(nr));
  for (int i = 0; i < nr; ++i) {
    VolumeCell c;
    c.r0 = i * h;
    c.r1 = (i + 1) * h;
    c.rc = 0.5 * (c.r0 + c.r1);
    c.area = h;
    mesh.volume_area += c.area;
    mesh.cells.push_back(c);
  }
  return mesh;
}

}  // namespace

Mesh build_mesh(const GeometrySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case MeshKind::disk:
    case MeshKind::annulus:
      return build_polar(spec);
    case MeshKind::interval:
      return build_interval(spec);
  }
  throw InvalidGeometry("unknown mesh kind");
}

std::vector<Face> volume_faces(const Mesh& mesh) {
  std::vector<Face> faces;
  if (mesh.spec.kind == MeshKind::interval) {
    for (size_t i = 0; i + 1 < mesh.cells.size(); ++i) {
      const double dist = mesh.cells[i + 1].rc - mesh.cells[i].rc;
      faces.push_back({static_cast<int>(i), static_cast<int>(i) + 1, 1.0 / dist});
    }
    return faces;
  }
  const int nr = mesh.n_r();
  const int nth = mesh.n_theta();
  faces.reserve(static_cast<size_t>(2) * nr * nth);
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nth; ++j) {
      const int c = mesh.cell_index(i, j);
      const VolumeCell& cell = mesh.cells[c];
      const double dth = cell.th1 - cell.th0;
      // Face to the next ring: arc of length r1 * dtheta, center distance dr.
      if (i + 1 < nr) {
        const int cu = mesh.cell_index(i + 1, j);
        faces.push_back({c, cu, cell.r1 * dth / (mesh.cells[cu].rc - cell.rc)});
      }
      // Face to the next sector: radial segment of length dr, arc distance
      // rc * dtheta between midpoints.  Periodic wrap covers each face once.
      const int cn = mesh.cell_index(i, (j + 1) % nth);
      faces.push_back({c, cn, (cell.r1 - cell.r0) / (cell.rc * dth)});
    }
  }
  return faces;
}

std::vector<Face> arc_faces(const SurfaceMesh& surf, int offset, int count) {
  if (offset < 0 || count < 1 || offset + count > static_cast<int>(surf.cells.size()))
    throw InvalidGeometry("arc segment range out of bounds");
  std::vector<Face> faces;
  if (count < 2) return faces;  // a single segment has no interior faces
  const bool whole_circle = surf.closed && count == static_cast<int>(surf.cells.size());
  const int n_faces = whole_circle ? count : count - 1;
  faces.reserve(static_cast<size_t>(n_faces));
  for (int f = 0; f < n_faces; ++f) {
    const int a = f;
    const int b = (f + 1) % count;
    const double dist = 0.5 * (surf.cells[offset + a].length + surf.cells[offset + b].length);
    faces.push_back({a, b, 1.0 / dist});
  }
  return faces;
}

Eigen::SparseMatrix<double> surface_laplacian(const SurfaceMesh& surf) {
  const int n = static_cast<int>(surf.cells.size());
  Eigen::SparseMatrix<double> S(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(4) * n);
  for (const Face& f : arc_faces(surf, 0, n)) {
    trip.emplace_back(f.a, f.a, -f.tau);
    trip.emplace_back(f.b, f.b, -f.tau);
    trip.emplace_back(f.a, f.b, f.tau);
    trip.emplace_back(f.b, f.a, f.tau);
  }
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

double integrate_volume(const Mesh& mesh, const std::function<double(double, double)>& f) {
  double acc = 0.0;
  for (const auto& c : mesh.cells) acc += c.area * f(c.rc, c.thc);
  return acc;
}

}  // namespace vsrd

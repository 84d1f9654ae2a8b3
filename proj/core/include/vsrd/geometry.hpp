#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <vector>

namespace vsrd {

enum class MeshKind { disk, annulus, interval };
enum class BoundaryId { outer, inner };

struct GeometrySpec {
  MeshKind kind = MeshKind::disk;
  double radius = 1.0;    // disk: outer radius; interval: length
  double r_inner = 0.25;  // annulus only
  double r_outer = 1.0;   // annulus only
  /// Fraction of the outer circle carrying the active arc (disk only).
  /// 0 disables the arc.  The arc is snapped to whole angular segments.
  double gamma2_fraction = 0.0;
  int n_r = 8;
  int n_theta = 16;

  void validate() const;  // throws InvalidGeometry
};

/// Annular sector r in [r0, r1], theta in [th0, th1].  Areas are exact, the
/// quadrature/stencil point is the (r, theta) midpoint.  The interval mode
/// reuses r as the coordinate and has th0 = th1 = 0, area = length.
struct VolumeCell {
  double r0 = 0, r1 = 0, th0 = 0, th1 = 0;
  double rc = 0, thc = 0;
  double area = 0;
};

/// One boundary segment: an exact arc with its adjacent volume cell.
struct SurfaceCell {
  double th0 = 0, th1 = 0;
  double mid_theta = 0;
  double length = 0;
  int adjacent_cell = -1;
};

struct SurfaceMesh {
  BoundaryId boundary = BoundaryId::outer;
  bool closed = true;  // full circle; open arcs get zero-flux ends
  double radius = 0;
  std::vector<SurfaceCell> cells;
  double total_length = 0;
};

struct Mesh {
  GeometrySpec spec;
  std::vector<VolumeCell> cells;  // ring-major: index = ring * n_theta + sector
  double volume_area = 0;
  std::vector<SurfaceMesh> boundaries;

  /// Disk with an active arc: sectors [0, gamma2_count) of the outer boundary.
  int gamma2_count = 0;
  double gamma2_realized_fraction = 0;

  /// Annulus: measure of the enclosed (unmeshed) disk and its boundary.
  double nucleus_area = 0;

  int n_r() const { return spec.n_r; }
  int n_theta() const { return spec.kind == MeshKind::interval ? 1 : spec.n_theta; }
  int cell_index(int ring, int sector) const { return ring * n_theta() + sector; }
  bool has_boundary(BoundaryId id) const;
  const SurfaceMesh& boundary(BoundaryId id) const;  // throws UnknownBoundary
};

Mesh build_mesh(const GeometrySpec& spec);

/// One interior face of a finite-volume stencil: cells (or segments) a and b
/// exchange diffusive flux tau * (u_b - u_a), where tau is the geometric
/// transmissibility (face length over center distance; unit diffusivity).
struct Face {
  int a = 0, b = 0;
  double tau = 0;
};

/// All interior faces of the volume mesh (radial and angular, with periodic
/// wrap in the angle; neighbor pairs in a 1D interval).
std::vector<Face> volume_faces(const Mesh& mesh);

/// Faces of the arc spanned by segments [offset, offset+count): periodic if
/// it covers a closed surface mesh entirely, otherwise an open chain with
/// zero-flux ends.  Indices are local to the arc (0..count-1).
std::vector<Face> arc_faces(const SurfaceMesh& surf, int offset, int count);

/// Arc-length second-difference stencil on a surface mesh in flux form:
/// d/dt (len_j u_j) = (S u)_j for unit diffusivity.  Rows sum to zero; closed
/// meshes couple periodically, open arcs get zero-flux ends (the endpoint row
/// sees only its single interior face, i.e. a mirror ghost).
Eigen::SparseMatrix<double> surface_laplacian(const SurfaceMesh& surf);

/// Midpoint quadrature of f(r, theta) (or f(x, 0) on intervals) against the
/// exact cell areas.  Second order on smooth integrands.
double integrate_volume(const Mesh& mesh, const std::function<double(double, double)>& f);

}  // namespace vsrd

#pragma once

#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "vsrd/model.hpp"

namespace vsrd {

/// One coupled pair of unknowns (i < j) with the accumulated off-diagonal
/// generator entries lij = L(i,j), lji = L(j,i) and a mechanism label.  The
/// quadratic dissipation of a state u against an equilibrium w decomposes
/// exactly over these pairs:
///   D(u) = sum_{pairs} (lij * w_j + lji * w_i) * (z_i - z_j)^2,
///   z_k = (u_k - w_k) / w_k,
/// which equals -dE/dt up to the kernel residual of w.
struct PairTerm {
  int i = 0, j = 0;
  double lij = 0, lji = 0;
  int category = 0;
};

/// Semi-discrete finite-volume operator in flux form:
///   diag(mass) * du/dt = L * u.
/// L has exactly zero column sums (mass conservation holds to rounding) and
/// nonnegative off-diagonal entries.
struct Operator {
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd mass;
  Layout layout;
  Mesh mesh;
  ModelSpec model;
  std::vector<PairTerm> pairs;
  std::vector<std::string> categories;
};

Operator assemble(const ModelSpec& spec);
Operator assemble(const ModelSpec& spec, const Mesh& mesh);

/// Verify exact conservation: every column of L sums to zero within
/// tol * (column absolute sum).  Throws NonConservative.
void check_conservative(const Operator& op, double tol = 1e-13);

/// Verify the off-diagonal sign structure (all couplings nonnegative).
/// Throws NonConservative on a negative coupling.
void check_metzler(const Operator& op);

}  // namespace vsrd

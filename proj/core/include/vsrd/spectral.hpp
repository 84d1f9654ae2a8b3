#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

namespace vsrd {

struct EigOptions {
  int dense_threshold = 1500;  // up to this size solve the projected pencil densely
  int max_iters = 50000;
  double tol = 1e-12;  // relative Rayleigh-quotient stagnation
};

/// Smallest eigenvalue of the pencil (S, diag(b)) restricted to {q'x = 0}:
///   min x'Sx / x'diag(b)x  subject to q'x = 0,
/// with S symmetric positive semidefinite (kernel spanned by constants), b
/// strictly positive, and q not orthogonal to constants.  Dense projection
/// below the threshold, otherwise inverse iteration through the bordered
/// saddle system [[S, q],[q', 0]].  Throws EigensolveFailure.
double constrained_smallest_eigenvalue(const Eigen::SparseMatrix<double>& S,
                                       const Eigen::VectorXd& b, const Eigen::VectorXd& q,
                                       const EigOptions& opt = {});

/// Largest eigenvalue of max x'diag(n)x / x'Sx over {q'x = 0}, where diag(n)
/// is nonnegative (and may be singular).  This is the reciprocal form used
/// for trace constants: T = 1 / constrained_largest_ratio.  Power iteration
/// on the bordered solve above the dense threshold.  Throws EigensolveFailure.
double constrained_largest_ratio(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& n,
                                 const Eigen::VectorXd& q, const EigOptions& opt = {});

/// All eigenvalues of a general (nonsymmetric) dense matrix.
std::vector<std::complex<double>> dense_spectrum(const Eigen::MatrixXd& A);

}  // namespace vsrd

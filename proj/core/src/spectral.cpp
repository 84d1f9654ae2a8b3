#include "vsrd/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <random>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

void validate_inputs(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& q) {
  if (S.rows() != S.cols() || S.rows() != d.size() || S.rows() != q.size())
    throw EigensolveFailure("pencil dimension mismatch");
  if (S.rows() < 2) throw EigensolveFailure("pencil needs at least two unknowns");
}

/// Orthonormal basis of the complement of q (columns 1..n-1 of the Q factor).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& q) {
  const int n = static_cast<int>(q.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n).rightCols(n - 1);
}

/// LU of the bordered saddle matrix [[S, q], [q', 0]]; solving with rhs
/// [b; 0] yields the S-solve of b constrained to {q'x = 0}.
class BorderedSolver {
 public:
  BorderedSolver(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& q) {
    const int n = static_cast<int>(q.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(S.nonZeros()) + 2 * n);
    for (int j = 0; j < S.outerSize(); ++j)
      for (Eigen::SparseMatrix<double>::InnerIterator it(S, j); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()), j, it.value());
    for (int i = 0; i < n; ++i) {
      trip.emplace_back(i, n, q[i]);
      trip.emplace_back(n, i, q[i]);
    }
    Eigen::SparseMatrix<double> K(n + 1, n + 1);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    lu_.compute(K);
    if (lu_.info() != Eigen::Success)
      throw EigensolveFailure("bordered stiffness factorization failed");
    rhs_.resize(n + 1);
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) {
    rhs_.head(b.size()) = b;
    rhs_[b.size()] = 0.0;
    Eigen::VectorXd x = lu_.solve(rhs_);
    if (lu_.info() != Eigen::Success) throw EigensolveFailure("bordered solve failed");
    return x.head(b.size());
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  Eigen::VectorXd rhs_;
};

Eigen::VectorXd seed_vector(int n, const Eigen::VectorXd& q) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(rng);
  x -= q * (q.dot(x) / q.squaredNorm());
  const double nrm = x.norm();
  if (!(nrm > 0.0)) throw EigensolveFailure("degenerate start vector");
  return x / nrm;
}

/// Power iteration for the largest Rayleigh ratio x'diag(num)x / x'Sx on the
/// constraint subspace, via x <- S^{-1} diag(num) x (bordered).
double power_largest_ratio(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& num,
                           const Eigen::VectorXd& q, const EigOptions& opt) {
  BorderedSolver solver(S, q);
  const int n = static_cast<int>(q.size());
  Eigen::VectorXd x = seed_vector(n, q);
  double prev = 0.0;
  int stagnant = 0;
  for (int it = 0; it < opt.max_iters; ++it) {
    const Eigen::VectorXd nx = num.cwiseProduct(x);
    Eigen::VectorXd y = solver.solve(nx);
    const double nrm = y.norm();
    if (!(nrm > 0.0)) throw EigensolveFailure("power iteration collapsed");
    y /= nrm;
    const double sy = y.dot(S * y);
    const double ny = y.dot(num.cwiseProduct(y));
    if (!(sy > 0.0)) throw EigensolveFailure("stiffness energy vanished on constraint space");
    const double ratio = ny / sy;
    if (std::abs(ratio - prev) <= opt.tol * std::max(std::abs(ratio), 1e-300)) {
      if (++stagnant >= 3) return ratio;
    } else {
      stagnant = 0;
    }
    prev = ratio;
    x = std::move(y);
  }
  throw EigensolveFailure("power iteration did not converge");
}

}  // namespace

double constrained_smallest_eigenvalue(const Eigen::SparseMatrix<double>& S,
                                       const Eigen::VectorXd& b, const Eigen::VectorXd& q,
                                       const EigOptions& opt) {
  validate_inputs(S, b, q);
  if (b.minCoeff() <= 0.0)
    throw EigensolveFailure("mass weights must be strictly positive");
  const int n = static_cast<int>(q.size());
  if (n <= opt.dense_threshold) {
    const Eigen::MatrixXd Z = complement_basis(q);
    const Eigen::MatrixXd Sd = Eigen::MatrixXd(S);
    const Eigen::MatrixXd A = Z.transpose() * Sd * Z;
    const Eigen::MatrixXd B = Z.transpose() * b.asDiagonal() * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    if (es.info() != Eigen::Success) throw EigensolveFailure("dense pencil solve failed");
    return std::max(es.eigenvalues()[0], 0.0);
  }
  // min x'Sx/x'Bx = 1 / max x'Bx/x'Sx.
  return 1.0 / power_largest_ratio(S, b, q, opt);
}

double constrained_largest_ratio(const Eigen::SparseMatrix<double>& S, const Eigen::VectorXd& nn,
                                 const Eigen::VectorXd& q, const EigOptions& opt) {
  validate_inputs(S, nn, q);
  if (nn.minCoeff() < 0.0) throw EigensolveFailure("numerator weights must be nonnegative");
  if (!(nn.maxCoeff() > 0.0)) throw EigensolveFailure("numerator weights all vanish");
  const int n = static_cast<int>(q.size());
  if (n <= opt.dense_threshold) {
    const Eigen::MatrixXd Z = complement_basis(q);
    const Eigen::MatrixXd Sd = Eigen::MatrixXd(S);
    const Eigen::MatrixXd A = Z.transpose() * nn.asDiagonal() * Z;
    const Eigen::MatrixXd B = Z.transpose() * Sd * Z;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
    if (es.info() != Eigen::Success) throw EigensolveFailure("dense pencil solve failed");
    return es.eigenvalues()[n - 2];  // largest of the n-1 projected eigenvalues
  }
  return power_largest_ratio(S, nn, q, opt);
}

std::vector<std::complex<double>> dense_spectrum(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw EigensolveFailure("spectrum of a non-square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw EigensolveFailure("dense eigensolve failed");
  std::vector<std::complex<double>> out(static_cast<size_t>(A.rows()));
  for (int i = 0; i < A.rows(); ++i) out[static_cast<size_t>(i)] = es.eigenvalues()[i];
  return out;
}

}  // namespace vsrd

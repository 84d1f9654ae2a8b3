#include "vsrd/entropy.hpp"

#include <cmath>

#include "vsrd/errors.hpp"

namespace vsrd {

namespace {

void require_valid(const Operator& op, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  if (u.size() != op.layout.total || w.size() != op.layout.total)
    throw LayoutMismatch("state size does not match operator layout");
  for (int i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw NonpositiveEquilibrium("reference state must be strictly positive");
}

}  // namespace

double relative_entropy(const Operator& op, const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  double e = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double d = u[i] - w[i];
    e += op.mass[i] * d * d / w[i];
  }
  return e;
}

double relative_entropy_unshifted(const Operator& op, const Eigen::VectorXd& u,
                                  const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  double e = 0.0;
  for (int i = 0; i < u.size(); ++i) e += op.mass[i] * u[i] * u[i] / w[i];
  return e;
}

double entropy_dissipation(const Operator& op, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  double d = 0.0;
  for (const PairTerm& p : op.pairs) {
    const double zi = (u[p.i] - w[p.i]) / w[p.i];
    const double zj = (u[p.j] - w[p.j]) / w[p.j];
    const double dz = zi - zj;
    d += (p.lij * w[p.j] + p.lji * w[p.i]) * dz * dz;
  }
  return d;
}

double entropy_dissipation_operator(const Operator& op, const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  const Eigen::VectorXd z = (u - w).cwiseQuotient(w);
  return -2.0 * z.dot(op.L * u);
}

std::map<std::string, double> dissipation_breakdown(const Operator& op,
                                                    const Eigen::VectorXd& u,
                                                    const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  std::map<std::string, double> out;
  for (const auto& name : op.categories) out.emplace(name, 0.0);
  for (const PairTerm& p : op.pairs) {
    const double zi = (u[p.i] - w[p.i]) / w[p.i];
    const double zj = (u[p.j] - w[p.j]) / w[p.j];
    const double dz = zi - zj;
    out[op.categories[p.category]] += (p.lij * w[p.j] + p.lji * w[p.i]) * dz * dz;
  }
  return out;
}

std::vector<double> per_species_distance(const Operator& op, const Eigen::VectorXd& u,
                                         const Eigen::VectorXd& w) {
  require_valid(op, u, w);
  std::vector<double> out;
  out.reserve(op.layout.blocks.size());
  for (const auto& b : op.layout.blocks) {
    double e = 0.0;
    for (int i = b.offset; i < b.offset + b.size; ++i) {
      const double d = u[i] - w[i];
      e += op.mass[i] * d * d / w[i];
    }
    out.push_back(std::sqrt(e));
  }
  return out;
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& entropy) {
  if (t.size() != entropy.size()) throw InsufficientData("time/entropy length mismatch");
  const size_t n = t.size();
  const size_t start = n / 2;
  std::vector<double> xs, ys;
  for (size_t k = start; k < n; ++k) {
    if (entropy[k] > 1e-30) {
      xs.push_back(t[k]);
      ys.push_back(std::log(entropy[k]));
    }
  }
  if (xs.size() < 10) throw InsufficientData("fewer than 10 usable entropy samples");

  const size_t m = xs.size();
  double mx = 0, my = 0;
  for (size_t k = 0; k < m; ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t k = 0; k < m; ++k) {
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.n_used = static_cast<int>(m);
  if (sxx == 0.0) throw InsufficientData("degenerate time samples");
  const double slope = sxy / sxx;
  fit.rate = -slope;
  // Residual variance of the fit; a constant log-entropy is fitted perfectly
  // by slope zero.
  const double ss_res = syy - sxy * sxy / sxx;
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace vsrd

#include "vsrd/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stack>

#include "vsrd/errors.hpp"

namespace vsrd {

Eigen::MatrixXd ReactionNetwork::generator() const {
  validate();
  const int n = size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double out = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      a(i, j) = rates(i, j);
      out += rates(i, j);
    }
    a(j, j) = -out;
  }
  return a;
}

void ReactionNetwork::validate() const {
  const int n = size();
  if (n < 2) throw InvalidNetwork("need at least two species, got " + std::to_string(n));
  if (rates.rows() != n || rates.cols() != n)
    throw InvalidNetwork("rates matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (!(rates(i, j) >= 0.0) || !std::isfinite(rates(i, j)))
        throw InvalidNetwork("rate " + std::to_string(i) + "," + std::to_string(j) +
                             " must be finite and nonnegative");
    }
}

ReactionNetwork make_two_cycle(double rate_1_to_2, double rate_2_to_1) {
  ReactionNetwork net;
  net.species = {"s1", "s2"};
  net.rates = Eigen::MatrixXd::Zero(2, 2);
  net.rates(1, 0) = rate_1_to_2;
  net.rates(0, 1) = rate_2_to_1;
  return net;
}

namespace {

// Iterative Tarjan; recursion depth would be fine for our sizes, but the
// explicit stack keeps it safe for adversarial test networks.
struct TarjanState {
  const Eigen::MatrixXd& rates;
  int n;
  std::vector<int> index, lowlink, component;
  std::vector<bool> on_stack;
  std::stack<int> stack;
  int next_index = 0;
  int next_component = 0;
};

void tarjan_from(TarjanState& st, int root) {
  struct Frame {
    int v;
    int next_child;
  };
  std::vector<Frame> frames{{root, 0}};
  st.index[root] = st.lowlink[root] = st.next_index++;
  st.stack.push(root);
  st.on_stack[root] = true;

  while (!frames.empty()) {
    Frame& f = frames.back();
    bool descended = false;
    // Edge v -> w exists when rates(w, v) > 0 (w gains from v).
    for (int w = f.next_child; w < st.n; ++w) {
      if (w == f.v || !(st.rates(w, f.v) > 0.0)) continue;
      f.next_child = w + 1;
      if (st.index[w] < 0) {
        st.index[w] = st.lowlink[w] = st.next_index++;
        st.stack.push(w);
        st.on_stack[w] = true;
        frames.push_back({w, 0});
        descended = true;
        break;
      }
      if (st.on_stack[w]) st.lowlink[f.v] = std::min(st.lowlink[f.v], st.index[w]);
    }
    if (descended) continue;
    const int v = f.v;
    if (st.lowlink[v] == st.index[v]) {
      while (true) {
        const int w = st.stack.top();
        st.stack.pop();
        st.on_stack[w] = false;
        st.component[w] = st.next_component;
        if (w == v) break;
      }
      ++st.next_component;
    }
    frames.pop_back();
    if (!frames.empty()) {
      const int parent = frames.back().v;
      st.lowlink[parent] = std::min(st.lowlink[parent], st.lowlink[v]);
    }
  }
}

}  // namespace

SccResult strongly_connected_components(const ReactionNetwork& net) {
  net.validate();
  const int n = net.size();
  TarjanState st{net.rates, n, std::vector<int>(n, -1), std::vector<int>(n, -1),
                 std::vector<int>(n, -1), std::vector<bool>(n, false), {}, 0, 0};
  for (int v = 0; v < n; ++v)
    if (st.index[v] < 0) tarjan_from(st, v);
  return SccResult{st.component, st.next_component};
}

bool weakly_reversible(const ReactionNetwork& net) {
  const SccResult scc = strongly_connected_components(net);
  const int n = net.size();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      if (net.rates(i, j) > 0.0 && scc.component[i] != scc.component[j]) return false;
    }
  return true;
}

Eigen::VectorXd network_equilibrium(const ReactionNetwork& net, double mass) {
  net.validate();
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw InvalidNetwork("equilibrium mass must be positive and finite");
  const SccResult scc = strongly_connected_components(net);
  if (scc.count != 1)
    throw DisconnectedNetwork("positive-rate digraph splits into " +
                              std::to_string(scc.count) + " strongly connected components");

  const Eigen::MatrixXd a = net.generator();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-12);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() != 1)
    throw SingularNetwork("generator kernel has dimension " + std::to_string(kernel.cols()));

  Eigen::VectorXd c = kernel.col(0);
  const double total = c.sum();
  if (std::abs(total) < 1e-14 * c.cwiseAbs().maxCoeff())
    throw NonPositiveKernel("kernel vector has vanishing total mass");
  c *= mass / total;
  if (c.minCoeff() <= 0.0)
    throw NonPositiveKernel("kernel vector changes sign");
  return c;
}

Eigen::MatrixXd pair_form_matrix(const ReactionNetwork& net) {
  net.validate();
  const int n = net.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double w = net.rates(i, j) + net.rates(j, i);
      g(i, j) -= w;
      g(j, i) -= w;
      g(i, i) += w;
      g(j, j) += w;
    }
  return g;
}

namespace {

/// All-pairs shortest hop counts on the undirected pair-rate support graph,
/// preferring the largest bottleneck rate among equally short paths.
/// mid(i,j) records an intermediate vertex for path reconstruction.
struct PairRouting {
  Eigen::MatrixXi dist;
  Eigen::MatrixXd bottleneck;
  Eigen::MatrixXi mid;
};

PairRouting route_pairs(const Eigen::MatrixXd& w) {
  const int n = static_cast<int>(w.rows());
  const int inf = std::numeric_limits<int>::max() / 4;
  PairRouting r;
  r.dist = Eigen::MatrixXi::Constant(n, n, inf);
  r.bottleneck = Eigen::MatrixXd::Zero(n, n);
  r.mid = Eigen::MatrixXi::Constant(n, n, -1);
  for (int i = 0; i < n; ++i) {
    r.dist(i, i) = 0;
    r.bottleneck(i, i) = std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && w(i, j) > 0.0) {
        r.dist(i, j) = 1;
        r.bottleneck(i, j) = w(i, j);
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || r.dist(i, k) >= inf || r.dist(k, j) >= inf) continue;
        const int d = r.dist(i, k) + r.dist(k, j);
        const double b = std::min(r.bottleneck(i, k), r.bottleneck(k, j));
        if (d < r.dist(i, j) || (d == r.dist(i, j) && b > r.bottleneck(i, j))) {
          r.dist(i, j) = d;
          r.bottleneck(i, j) = b;
          r.mid(i, j) = k;
        }
      }
  return r;
}

void reconstruct_path(const PairRouting& r, int i, int j, std::vector<int>& out) {
  const int k = r.mid(i, j);
  if (k < 0) {
    out.push_back(j);
    return;
  }
  reconstruct_path(r, i, k, out);
  reconstruct_path(r, k, j, out);
}

}  // namespace

GapResult gap_constants(const ReactionNetwork& net, const Eigen::VectorXd& alpha) {
  net.validate();
  const int n = net.size();
  if (alpha.size() != n) throw InvalidNetwork("weight vector size mismatch");
  if (alpha.minCoeff() <= 0.0) throw InvalidNetwork("weights must be positive");

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) w(i, j) = net.rates(i, j) + net.rates(j, i);

  GapResult res;

  // Sharp constant: project the pair form onto { c : alpha . c = 0 } with an
  // orthonormal basis and take the smallest eigenvalue.
  const Eigen::MatrixXd g = pair_form_matrix(net);
  Eigen::MatrixXd acol = alpha;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(acol);
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd z = q.rightCols(n - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(z.transpose() * g * z);
  if (es.info() != Eigen::Success) throw EigensolveFailure("pair form eigensolve failed");
  res.eta_optimal = std::max(es.eigenvalues().minCoeff(), 0.0);

  // Chain comparison: bound sum over all pairs of (c_i - c_j)^2 by the pair
  // form.  Direct pairs collectively cost 1/min(direct rate); each routed
  // pair costs (hops)/(bottleneck).
  const PairRouting routing = route_pairs(w);
  double min_direct = std::numeric_limits<double>::infinity();
  double loss = 0.0;
  bool any_direct = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (w(i, j) > 0.0) {
        any_direct = true;
        min_direct = std::min(min_direct, w(i, j));
        continue;
      }
      if (routing.dist(i, j) >= std::numeric_limits<int>::max() / 4)
        throw DisconnectedNetwork("pair support graph is disconnected");
      GapChain chain;
      chain.from = i;
      chain.to = j;
      chain.path.push_back(i);
      reconstruct_path(routing, i, j, chain.path);
      chain.bottleneck = routing.bottleneck(i, j);
      loss += static_cast<double>(routing.dist(i, j)) / chain.bottleneck;
      res.chains.push_back(std::move(chain));
    }
  if (!any_direct) throw DisconnectedNetwork("network has no reactions");
  loss += 1.0 / min_direct;
  res.zeta = 1.0 / loss;

  const double alpha_sum = alpha.sum();
  const double alpha_max = alpha.maxCoeff();
  res.eta_constructive_raw =
      res.zeta * alpha_sum * alpha_sum / (static_cast<double>(n) * (n - 1) * alpha_max * alpha_max);
  res.clamped = res.eta_constructive_raw > res.eta_optimal;
  res.eta_constructive = res.clamped ? res.eta_optimal : res.eta_constructive_raw;
  return res;
}

}  // namespace vsrd

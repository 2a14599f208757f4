#include "syncnet/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "syncnet/errors.hpp"

namespace syncnet {

WeightedGraph::WeightedGraph(std::size_t n_nodes, std::vector<Edge> edges)
    : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes_ == 0) throw std::invalid_argument("graph must have at least one node");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto& e : edges_) {
    if (e.i == e.j) throw std::invalid_argument("self-loop on node " + std::to_string(e.i + 1));
    if (e.i >= n_nodes_ || e.j >= n_nodes_)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("edge weight must be finite and nonnegative");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.i, e.j).second)
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.i + 1) + ", " +
                                  std::to_string(e.j + 1) + ")");
  }
}

WeightedGraph WeightedGraph::cycle(std::size_t n, double weight) {
  std::vector<Edge> edges;
  if (n == 2) {
    edges.push_back({0, 1, weight});
  } else if (n > 2) {
    for (std::size_t k = 0; k < n; ++k) edges.push_back({k, (k + 1) % n, weight});
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::path(std::size_t n, double weight) {
  std::vector<Edge> edges;
  for (std::size_t k = 0; k + 1 < n; ++k) edges.push_back({k, k + 1, weight});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::complete(std::size_t n, double weight) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) throw std::invalid_argument("with_weights: size mismatch");
  auto edges = edges_;
  for (std::size_t k = 0; k < edges.size(); ++k) edges[k].weight = weights[k];
  return WeightedGraph(n_nodes_, std::move(edges));
}

Laplacian build_laplacian(const WeightedGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Matrix m = Matrix::Zero(n, n);
  for (const auto& e : graph.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    m(i, j) -= e.weight;
    m(j, i) -= e.weight;
    m(i, i) += e.weight;
    m(j, j) += e.weight;
  }
  return Laplacian(std::move(m));
}

double mu2(const Laplacian& l) {
  if (l.size() < 2) throw std::invalid_argument("mu2 requires at least two nodes");
  return symmetric_eigenvalues(l.matrix())(1);
}

bool is_connected(const Laplacian& l) { return l.size() == 1 || mu2(l) >= 1e-9; }

bool is_connected_bfs(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : graph.edges()) {
    if (e.weight <= 0.0) continue;
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  return count == n;
}

ProjectionPair projection_pair(std::size_t n) {
  if (n < 2) throw std::invalid_argument("projection_pair requires n >= 2");
  const auto nn = static_cast<Eigen::Index>(n);
  ProjectionPair out;
  out.pi = Matrix::Identity(nn, nn) - Matrix::Constant(nn, nn, 1.0 / static_cast<double>(n));
  out.q = Matrix::Zero(nn - 1, nn);
  for (Eigen::Index k = 1; k < nn; ++k) {
    const double kd = static_cast<double>(k);
    const double norm = std::sqrt(kd * (kd + 1.0));
    for (Eigen::Index c = 0; c < k; ++c) out.q(k - 1, c) = 1.0 / norm;
    out.q(k - 1, k) = -kd / norm;
  }
  return out;
}

Matrix gamma_pseudoinverse(const Laplacian& l) {
  const auto pair = projection_pair(l.size());
  const Matrix reduced = pair.q * l.matrix() * pair.q.transpose();
  Matrix reduced_inv;
  try {
    reduced_inv = inverse(reduced);
  } catch (const SingularMatrixError&) {
    throw GraphError("graph not connected: Q L Q^T is singular");
  }
  return pair.q.transpose() * reduced_inv * pair.q;
}

}  // namespace syncnet

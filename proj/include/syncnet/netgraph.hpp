#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "syncnet/linalg.hpp"

namespace syncnet {

struct Edge {
  std::size_t i = 0;  // zero-based, i < j after normalization
  std::size_t j = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected edge-weighted graph. Edges are stored once per unordered pair
/// with i < j; weights are nonnegative.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t n_nodes, std::vector<Edge> edges = {});

  static WeightedGraph cycle(std::size_t n, double weight = 1.0);
  static WeightedGraph path(std::size_t n, double weight = 1.0);
  static WeightedGraph complete(std::size_t n, double weight = 1.0);

  std::size_t size() const noexcept { return n_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Same topology, new weights (one per edge, in edge order).
  WeightedGraph with_weights(std::span<const double> weights) const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
};

/// Symmetric graph Laplacian with zero row sums.
class Laplacian {
 public:
  Laplacian() = default;
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }

 private:
  friend Laplacian build_laplacian(const WeightedGraph& graph);
  explicit Laplacian(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

struct ProjectionPair {
  Matrix pi;  // I - (1/n) 1 1^T
  Matrix q;   // (n-1) x n, Q 1 = 0, Q Q^T = I, Q^T Q = pi
};

Laplacian build_laplacian(const WeightedGraph& graph);

/// Second-smallest Laplacian eigenvalue (algebraic connectivity).
double mu2(const Laplacian& l);

/// Connectivity as decided by mu2 >= 1e-9.
bool is_connected(const Laplacian& l);

/// Breadth-first reachability over positive-weight edges. Diagnostic only.
bool is_connected_bfs(const WeightedGraph& graph);

/// Pi and the Helmert-row Q for n nodes (n >= 2).
ProjectionPair projection_pair(std::size_t n);

/// Moore-Penrose pseudoinverse Q^T (Q L Q^T)^{-1} Q of a connected-graph Laplacian.
Matrix gamma_pseudoinverse(const Laplacian& l);

}  // namespace syncnet

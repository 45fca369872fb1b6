#include "sdpkit/graph.hpp"

#include <random>
#include <string>

namespace sdpkit {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "graph needs at least one vertex");
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    if (i == j) throw Error(ErrorKind::InvalidArgument, "self-loop on vertex " + std::to_string(i + 1));
    if (i > j) std::swap(i, j);
    if (!edges_.emplace(i, j).second)
      throw Error(ErrorKind::InvalidArgument,
                  "duplicate edge " + std::to_string(i + 1) + "-" + std::to_string(j + 1));
  }
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return edges_.count({i, j}) > 0;
}

Matrix Graph::adjacency() const {
  Matrix a = Matrix::Zero(n_, n_);
  for (auto [i, j] : edges_) a(i, j) = a(j, i) = 1.0;
  return a;
}

Graph Graph::complement() const {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!has_edge(i, j)) e.emplace_back(i, j);
  return Graph(n_, e);
}

std::vector<std::uint64_t> Graph::neighbour_masks() const {
  if (n_ > 64) throw Error(ErrorKind::UnsupportedSize, "bitmask helpers need n <= 64");
  std::vector<std::uint64_t> m(n_, 0);
  for (auto [i, j] : edges_) {
    m[i] |= std::uint64_t{1} << j;
    m[j] |= std::uint64_t{1} << i;
  }
  return m;
}

Graph Graph::complete(int n) { return empty(n).complement(); }

Graph Graph::empty(int n) { return Graph(n, {}); }

Graph Graph::cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph Graph::petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);          // outer cycle
    e.emplace_back(i, i + 5);                // spokes
    e.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return Graph(10, e);
}

Graph Graph::random(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) e.emplace_back(i, j);
  return Graph(n, e);
}

WeightedGraph::WeightedGraph(const Matrix& weights) : w_(weights) {
  if (w_.rows() != w_.cols() || w_.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "weight matrix must be square");
  for (int i = 0; i < w_.rows(); ++i) {
    if (w_(i, i) != 0.0) throw Error(ErrorKind::InvalidArgument, "weights must have a zero diagonal");
    for (int j = 0; j < w_.cols(); ++j) {
      if (w_(i, j) != w_(j, i)) throw Error(ErrorKind::InvalidArgument, "weights must be symmetric");
      if (w_(i, j) < 0.0) throw Error(ErrorKind::InvalidArgument, "weights must be nonnegative");
    }
  }
}

WeightedGraph WeightedGraph::unit(const Graph& g) { return WeightedGraph(g.adjacency()); }

double WeightedGraph::total_weight() const { return 0.5 * w_.sum(); }

}  // namespace sdpkit

#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "sdpkit/symcore.hpp"

namespace sdpkit {

// Simple undirected graph. Vertices are 0-based in code; the text formats are 1-based.
class Graph {
 public:
  Graph() = default;
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  const std::set<std::pair<int, int>>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool has_edge(int i, int j) const;
  Matrix adjacency() const;
  Graph complement() const;
  // Bitmask of neighbours, n <= 64.
  std::vector<std::uint64_t> neighbour_masks() const;

  static Graph complete(int n);
  static Graph empty(int n);
  static Graph cycle(int n);
  static Graph petersen();
  // Erdos-Renyi G(n, p) from std::mt19937_64 seeded with `seed`.
  static Graph random(int n, double p, std::uint64_t seed);

 private:
  int n_ = 0;
  std::set<std::pair<int, int>> edges_;
};

class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(const Matrix& weights);
  static WeightedGraph unit(const Graph& g);

  int n() const { return static_cast<int>(w_.rows()); }
  const Matrix& weights() const { return w_; }
  double weight(int i, int j) const { return w_(i, j); }
  double total_weight() const;  // sum over i < j

 private:
  Matrix w_;
};

}  // namespace sdpkit

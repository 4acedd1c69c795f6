#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "dynst/errors.hpp"

namespace dynst {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vertex = int;

/// Canonical key of an undirected vertex pair; used as a deterministic
/// tie-break wherever equal-weight edges have to be ordered.
inline std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;
};

/// Undirected graph with positive edge weights, immutable after load.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[id]; }

  struct Arc {
    Vertex to;
    double w;
    int edge_id;
  };
  const std::vector<Arc>& neighbors(Vertex v) const { return adj_[v]; }

  double min_edge_weight() const { return min_w_; }
  double max_edge_weight() const { return max_w_; }

  bool connected() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adj_;
  double min_w_ = kInf;
  double max_w_ = 0.0;
};

/// All-pairs shortest-path distances; symmetric, zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n, kInf) {}

  int n() const { return n_; }
  double entry(Vertex u, Vertex v) const { return d_[static_cast<size_t>(u) * n_ + v]; }
  void set(Vertex u, Vertex v, double d) {
    d_[static_cast<size_t>(u) * n_ + v] = d;
    d_[static_cast<size_t>(v) * n_ + u] = d;
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

/// Tree as an explicit weighted edge list.
struct Tree {
  std::vector<Edge> edges;
  double cost = 0.0;
};

WeightedGraph load_graph(std::istream& in);
WeightedGraph load_graph_file(const std::string& path);
WeightedGraph load_graph_string(const std::string& text);
void save_graph(const WeightedGraph& g, std::ostream& out);

/// Dijkstra from src; unreachable entries are +inf.
std::vector<double> shortest_paths(const WeightedGraph& g, Vertex src);

DistanceMatrix metric_closure(const WeightedGraph& g);

/// MST over an explicit point set with pairwise distances from `dist`.
/// Kruskal under the order (weight, insertion index of the generated pair
/// list), so the result is deterministic for a fixed input.
Tree mst_over(const std::vector<Vertex>& points,
              const std::function<double(Vertex, Vertex)>& dist);

/// Optimal Steiner tree cost via the Dreyfus-Wagner dynamic program.
/// |terminals| must be at most 12.
double exact_steiner_cost(const WeightedGraph& g, const std::vector<Vertex>& terminals);

/// Smallest power of `base` that is >= d; idempotent and monotone.
double discretize(double d, double base);
/// Integer exponent k with discretize(d, base) == base^k.
long discretize_level(double d, double base);
double level_value(long level, double base);

}  // namespace dynst

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dynst/dyn_msf.hpp"
#include "dynst/graph.hpp"

namespace dynst {

/// Bipartite distance sketch: original vertices on one side, auxiliary hubs
/// on the other; every pairwise distance is approximated by some two-edge
/// path. Auxiliary ids live in their own 0-based space.
class BipartiteEmulator {
 public:
  BipartiteEmulator(int n, int aux_count, double alpha)
      : n_(n), aux_count_(aux_count), alpha_(alpha), adj_(n), aux_adj_(aux_count) {}

  int n() const { return n_; }
  int aux_count() const { return aux_count_; }
  double alpha() const { return alpha_; }

  void add_edge(Vertex v, int aux, double w) {
    adj_[v].push_back({aux, w});
    aux_adj_[aux].push_back({v, w});
  }
  void finalize();

  const std::vector<std::pair<int, double>>& neighbors(Vertex v) const { return adj_[v]; }
  const std::vector<std::pair<Vertex, double>>& aux_neighbors(int aux) const {
    return aux_adj_[aux];
  }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }

  /// min over shared auxiliary hubs of the two-edge route; +inf if none.
  double distance(Vertex u, Vertex w) const;

 private:
  int n_;
  int aux_count_;
  double alpha_;
  std::vector<std::vector<std::pair<int, double>>> adj_;      // vertex -> (aux, w)
  std::vector<std::vector<std::pair<Vertex, double>>> aux_adj_;
};

/// Bunch-based emulator with stretch 2l-1; every vertex gets a zero-length
/// edge to its own hub.
BipartiteEmulator build_emulator(const WeightedGraph& g, int l, std::uint64_t seed);

/// Steiner maintenance over an emulator: the dynamic spanning forest runs on
/// the subgraph induced by the terminals and their hubs; the reported tree
/// is the terminal component with auxiliary leaves pruned away.
class EmulatorSteiner {
 public:
  explicit EmulatorSteiner(const BipartiteEmulator& emulator);

  void add_terminal(Vertex v);
  void remove_terminal(Vertex v);
  bool is_terminal(Vertex v) const { return terminal_[v]; }
  int terminal_count() const { return terminal_count_; }

  /// Tree in emulator units over original + auxiliary vertices; auxiliary
  /// ids are offset by n in the returned edges.
  Tree current_tree() const;

 private:
  const BipartiteEmulator* emulator_;
  std::unique_ptr<DynMsf> msf_;
  std::vector<char> terminal_;
  std::vector<std::vector<int>> edge_ids_;  // per terminal
  int terminal_count_ = 0;
  std::uint64_t ts_ = 0;
};

}  // namespace dynst

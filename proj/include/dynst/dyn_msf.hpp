#pragma once

#include <cstdint>
#include <cstdio>
#include <memory>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynst/errors.hpp"
#include "dynst/euler_tour_forest.hpp"
#include "dynst/graph.hpp"
#include "dynst/path_forest.hpp"

namespace dynst {

struct MsfDelta {
  std::vector<int> added;    // edge ids that entered the forest
  std::vector<int> removed;  // edge ids that left the forest
  bool empty() const { return added.empty() && removed.empty(); }
};

struct MsfInsert {
  int id = -1;  // id of the new edge
  MsfDelta delta;
};

struct MsfEdge {
  Vertex u = -1, v = -1;
  double w = 0.0;
  std::uint64_t tie = 0;
  bool live = false;
  bool tree = false;
  int level = 0;
};

/// Fully dynamic minimum spanning forest. The default engine keeps the
/// hierarchical-levels structure (per-level Euler tour forests, non-tree
/// edges promoted during replacement searches); a from-scratch Kruskal
/// engine is selectable for differential runs.
///
/// The forest is unique under the total order (weight, tie, id). With
/// TieMode::timestamp the tie value is the caller-supplied timestamp; with
/// TieMode::canonical_pair it is the canonical key of the endpoint pair,
/// which makes the forest reproducible independently of insertion order.
class DynMsf {
 public:
  enum class Engine { hierarchical, kruskal };
  enum class TieMode { timestamp, canonical_pair };

  explicit DynMsf(int n, Engine engine = Engine::hierarchical,
                  TieMode tie_mode = TieMode::timestamp);

  int n() const { return n_; }
  Engine engine() const { return engine_; }

  MsfInsert insert(Vertex u, Vertex v, double w, std::uint64_t timestamp);
  MsfDelta erase(int edge_id);

  const MsfEdge& edge(int edge_id) const;
  bool is_tree_edge(int edge_id) const;
  bool connected(Vertex u, Vertex v);
  std::vector<int> forest() const;
  double component_weight(Vertex v);
  /// Live edge ids incident to v.
  std::vector<int> incident_edges(Vertex v) const;
  int tree_degree(Vertex v) const { return tree_degree_[v]; }
  /// Maximum forest edge on the u-v path under (weight, tie, id).
  std::pair<int, EdgeOrderKey> path_max(Vertex u, Vertex v);
  /// Raw record access including retired edges (for delta consumers).
  const MsfEdge& edge_record(int id) const { return edges_[id]; }
  bool check_levels(FILE* out);

 private:
  EdgeOrderKey key_of(int id) const {
    const MsfEdge& e = edges_[id];
    return EdgeOrderKey{e.w, e.tie, id};
  }

  void register_nontree(int id);
  void unregister_nontree(int id);
  void make_tree(int id, int level);
  void drop_tree(int id);
  MsfDelta kruskal_recompute();
  int find_replacement(Vertex u, Vertex v, int max_level);

  int n_;
  Engine engine_;
  TieMode tie_mode_;
  int levels_;
  std::vector<MsfEdge> edges_;
  std::vector<int> tree_degree_;

  // hierarchical engine state
  std::vector<std::unique_ptr<EulerTourForest>> ett_;           // per level
  std::vector<std::vector<std::unordered_set<int>>> nontree_;   // [level][vertex]
  std::vector<std::vector<std::unordered_set<int>>> tree_ids_;  // [level][vertex]
  std::unique_ptr<SplayPathForest> pf_;
  std::unordered_map<int, int> pf_id_;  // edge id -> path forest id

  // kruskal engine state
  std::unordered_set<int> live_ids_;
  std::unordered_set<int> last_forest_;

  std::vector<std::vector<int>> incident_;
};

}  // namespace dynst

#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "dynst/color_state.hpp"
#include "dynst/dyn_msf.hpp"
#include "dynst/level_index.hpp"
#include "dynst/online_ref.hpp"
#include "dynst/oracle.hpp"
#include "dynst/path_forest.hpp"

namespace dynst {

/// Approximate minimum spanning tree of the terminal set in the oracle's
/// complete-graph view, grown Prim-style through per-vertex piece heaps and
/// per-portal cluster heaps.
Tree query_steiner(const GenericOracle& oracle, const std::vector<Vertex>& terminals);

/// Oracle-accelerated dynamic Steiner engines. The decremental and fully
/// dynamic variants run a dynamic spanning forest over an auxiliary edge set
/// fed from the oracle (piece edges, reconnecting portal routes, replacement
/// winners); the incremental variant keeps level layers of merge-only color
/// states; the online-greedy variant attaches each terminal to the
/// approximately nearest one and never reworks old edges.
class SteinerEngine {
 public:
  enum class Mode { decremental, incremental, fully_dynamic, online_greedy };

  static SteinerEngine decremental(const WeightedGraph& g, const GenericOracle& oracle,
                                   const std::vector<Vertex>& terminals, double eps);
  static SteinerEngine incremental(const WeightedGraph& g, const GenericOracle& oracle,
                                   double tau);
  static SteinerEngine fully_dynamic(const WeightedGraph& g, const GenericOracle& oracle,
                                     double eps, double tau);
  static SteinerEngine online_greedy(const WeightedGraph& g, const GenericOracle& oracle);

  Mode mode() const { return mode_; }
  std::vector<ChangeRecord> add_terminal(Vertex v);
  std::vector<ChangeRecord> remove_terminal(Vertex v);

  double tree_cost() const { return cost_; }
  std::vector<Edge> tree_edges() const;
  bool is_terminal(Vertex v) const { return terminal_[v]; }
  bool in_tree(Vertex v) const { return in_tree_[v]; }
  int terminal_count() const { return terminal_count_; }

  long long replacements_total() const { return replacements_; }
  long long oracle_ops_total() const;
  /// distance/nearest queries and merge counts, for the online-greedy claim
  ColorState::Counters greedy_counters() const;

  /// Layer partitions must equal the components of the tree restricted to
  /// each level; used by the consistency tests.
  bool check_layer_consistency() const;
  /// Debug: every tree vertex active in every state, detached ones inactive.
  bool check_activity(FILE* out) const;
  /// Standing piece-route edges between tree vertices, for invariant scans.
  std::vector<std::tuple<Vertex, Vertex, double>> aux_edges() const;

 private:
  SteinerEngine(const WeightedGraph& g, const GenericOracle& oracle, Mode mode,
                SchemeParams params, double base);

  // fully dynamic / decremental internals
  void ensure_level_states(long level);
  ColorState& top_state();
  void apply_delta(const MsfDelta& delta);
  void insert_aux_edge(Vertex u, Vertex v, double w, std::vector<ChangeRecord>* log,
                       ChangeRecord::Kind kind);
  void remove_eta(Vertex v, std::vector<ChangeRecord>& log);
  void activate_everywhere(Vertex v);
  void deactivate_everywhere(Vertex v);
  std::pair<double, Vertex> nearest_tree_vertex(Vertex v);
  void fd_sweep(Vertex v, long lo, long hi, std::vector<ChangeRecord>& log,
                std::set<Vertex>& dropped);
  long max_tree_level() const;
  double round_w(double raw) const { return view_.round_up(raw); }
  long level_of(double w) const { return levels_.level_of(w); }

  // incremental internals
  void inc_sweep(Vertex v, std::vector<ChangeRecord>& log);
  void inc_apply_layer_merges(Vertex a, Vertex b, long edge_level);
  void inc_slide_window();
  void inc_link(Vertex u, Vertex v, double w);
  void inc_cut(Vertex u, Vertex v);

  const WeightedGraph* graph_;
  const GenericOracle* oracle_;
  Mode mode_;
  SchemeParams params_;
  NearMetricView view_;
  LevelIndex levels_{};
  bool leveled_ = false;
  long global_min_level_ = 0;

  std::vector<char> terminal_;
  std::vector<char> in_tree_;
  int terminal_count_ = 0;
  double cost_ = 0.0;
  double max_cost_seen_ = 0.0;
  long long replacements_ = 0;

  // fully dynamic / decremental
  std::unique_ptr<DynMsf> msf_;
  std::map<long, ColorState> states_;  // level -> color layer (dec: one entry)
  std::multiset<long> tree_levels_;

  // incremental: merge-only layers over a sliding level window
  struct Layer {
    long level;
    ColorState state;
  };
  std::vector<Layer> layers_;
  std::vector<std::map<Vertex, double>> inc_adj_;
  std::multimap<long, std::pair<Vertex, Vertex>> inc_edges_by_level_;
  std::unique_ptr<PathForest> inc_pf_;
  std::map<std::uint64_t, int> inc_pf_ids_;

  // online greedy
  int greedy_color_ = -1;
  std::vector<Edge> greedy_edges_;

  std::uint64_t aux_ts_ = 0;
};

}  // namespace dynst

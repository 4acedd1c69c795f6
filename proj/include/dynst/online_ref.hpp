#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "dynst/level_index.hpp"
#include "dynst/oracle.hpp"

namespace dynst {

struct ChangeRecord {
  enum class Kind { mark, unmark, connect, replace, reconnect };
  Kind kind;
  Vertex u = -1, v = -1;       // the edge (or vertex for mark/unmark)
  double w = 0.0;              // edge weight in view units
  long level = 0;              // edge level when discretized
  Vertex out_u = -1, out_v = -1;  // replaced edge for Kind::replace
  double out_w = 0.0;
};

struct ReplacementFlags {
  bool is_friend = false;
  bool heavy = false;
  bool efficient = false;
  bool good = false;
};

struct SchemeParams {
  double tau = 0.25;    // efficiency slack of surviving replacements
  double sigma = 0.25;  // efficiency of replacements actually applied
  double eps = 0.25;    // degree-threshold accuracy
  int eta = 5;          // nonterminal degree threshold, 1 + ceil(1/eps)
  double good_c = 0.0;  // 2*mu*(1+tau)^2, the heaviness divisor

  static SchemeParams incremental(double tau, double mu);
  static SchemeParams decremental(double eps);
  static SchemeParams fully_dynamic(double eps, double tau, double mu);
};

/// Reference implementations of the online schemes, running brute-force
/// scans over an explicit near-metric view. They follow the level-sweep
/// formulation the engines use, so per-operation trees are comparable
/// edge-for-edge; the scheme-level survivor clauses are validated on top by
/// the property tests.
class ReferenceScheme {
 public:
  enum class Mode { decremental, incremental, fully_dynamic };

  ReferenceScheme(const NearMetricView& view, Mode mode, SchemeParams params);

  /// Decremental runs start from a terminal set.
  void init_terminals(const std::vector<Vertex>& terminals);

  std::vector<ChangeRecord> add_terminal(Vertex v);
  std::vector<ChangeRecord> remove_terminal(Vertex v);

  double tree_cost() const { return cost_; }
  std::vector<Edge> tree_edges() const;
  bool is_terminal(Vertex v) const { return terminal_[v]; }
  bool in_tree(Vertex v) const { return in_tree_[v]; }
  int tree_degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  long long replacements_total() const { return replacements_; }
  const SchemeParams& params() const { return params_; }
  const NearMetricView& view() const { return *view_; }

  /// Classification of a candidate replacement pair per the definitional
  /// inequalities; theta is the efficiency/heaviness parameter.
  ReplacementFlags classify_replacement(Vertex eu, Vertex ev, Vertex tu, Vertex tv,
                                        double theta, double c) const;

  /// Exhaustive scans used by the survivor-invariant tests.
  bool has_efficient_replacement(double theta) const;
  bool has_good_replacement(double theta, double c) const;

 private:
  struct TreeEdge {
    double w;
    long level;
  };

  double edge_weight(Vertex u, Vertex v) const { return view_->distance(u, v); }
  void link(Vertex u, Vertex v, double w);
  void cut(Vertex u, Vertex v);
  void recompute_tree();  // derived modes: tree := canonical MSF of h_edges_
  std::vector<Vertex> path(Vertex u, Vertex v) const;  // vertex sequence
  std::pair<std::pair<Vertex, Vertex>, double> path_max_edge(Vertex u, Vertex v) const;
  std::vector<std::vector<Vertex>> level_components(long max_level) const;
  void remove_eta(Vertex v, std::vector<ChangeRecord>& log);
  void sweep(Vertex v, long lo, long hi, std::vector<ChangeRecord>& log,
             std::set<Vertex>* degree_dropped);
  void note_h_edge(Vertex u, Vertex v, double w);
  long max_tree_level() const;
  double min_positive_weight() const;

  const NearMetricView* view_;
  Mode mode_;
  SchemeParams params_;
  int n_;
  LevelIndex levels_;
  long global_min_level_ = 0;
  bool leveled_ = false;  // incremental / fully dynamic discretized modes
  bool derived_ = false;  // dec/fd: the tree is the MSF of the mirror edge set

  std::vector<char> terminal_;
  std::vector<char> in_tree_;
  std::vector<std::map<Vertex, TreeEdge>> adj_;
  double cost_ = 0.0;
  double max_cost_seen_ = 0.0;  // running maximum of post-operation costs
  long long replacements_ = 0;

  // mirror of the auxiliary edge set the accelerated engines keep: every
  // edge ever offered to the spanning structure, keyed by vertex pair
  std::unordered_map<std::uint64_t, double> h_edges_;
};

}  // namespace dynst

#pragma once

#include <memory>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "dynst/addressable_heap.hpp"
#include "dynst/errors.hpp"
#include "dynst/euler_tour_forest.hpp"
#include "dynst/oracle.hpp"

namespace dynst {

struct ColorAnswer {
  double dist;
  Vertex witness;
  int color;
};

struct ColorEdge {
  int color_a, color_b;
  Vertex endpoint_a, endpoint_b;
  double dist;
};

/// Vertex-color layer over a generic oracle. Vertices carry colors, colors
/// carry an active flag, and every portal keeps a heap of per-color nearest
/// distances so nearest-colored-vertex queries stay cheap.
///
/// The incremental variant only merges colors (smaller list relabeled into
/// the larger); the fully dynamic variant also splits, with per-color
/// spanning trees kept in an Euler tour forest whose root aggregates give
/// per-portal component minima.
class ColorState {
 public:
  enum class Mode { incremental, fully_dynamic };

  struct Counters {
    long long activates = 0;
    long long deactivates = 0;
    long long merges = 0;
    long long splits = 0;
    long long distance_queries = 0;
    long long nearest_queries = 0;
    long long relabels = 0;  // vertex relabel events, incremental mode
  };

  static ColorState incremental(const GenericOracle& oracle);
  /// initial_forest edges define the starting colors (other vertices stay
  /// singletons); every color starts inactive.
  static ColorState fully_dynamic(const GenericOracle& oracle,
                                  const std::vector<Edge>& initial_forest = {});

  Mode mode() const { return mode_; }
  const GenericOracle& oracle() const { return *oracle_; }
  const Counters& counters() const { return counters_; }

  int color_of(Vertex v) const;
  bool is_active(int color) const;
  bool has_tree_edge(Vertex u, Vertex v) const;  // fully dynamic only

  void activate(int color);
  void deactivate(int color);  // fully dynamic only

  /// Merge two active colors; returns the surviving color id. The fully
  /// dynamic variant links the spanning trees through the edge (u, v).
  int merge(int i, int j, Vertex u = -1, Vertex v = -1);

  /// Split an active color along the spanning-tree edge (u, v); both sides
  /// come out active. Returns (color of u's side, color of v's side).
  std::pair<int, int> split(int color, Vertex u, Vertex v);

  /// Exact nearest vertex of the given active color in the oracle's
  /// complete-graph view; absent when the color is inactive or empty.
  std::optional<std::pair<double, Vertex>> distance(Vertex v, int color);

  /// The k nearest active colors from v, ascending; shorter when fewer
  /// active colors exist.
  std::vector<ColorAnswer> nearest(Vertex v, int k);

  /// MST over the given active colors where an edge is the cheapest
  /// portal-routed connection between two colors. Per portal only the edges
  /// from its nearest color to each other color are generated. Throws
  /// PortalDisconnected when the colors do not all share portal routes,
  /// unless allow_partial is set, in which case the maximal forest comes
  /// back.
  /// rounding_base > 1 ranks candidates by their rounded length (matching
  /// a discretized consumer); returned distances stay raw.
  std::vector<ColorEdge> portal_reconnect_mst(const std::vector<int>& colors,
                                              bool allow_partial = false,
                                              double rounding_base = 0.0);

 private:
  using HeapKey = std::pair<double, Vertex>;  // (distance, witness)
  using Heap = AddressableHeap<HeapKey, int>;

  ColorState(const GenericOracle& oracle, Mode mode);

  void check_color(int color) const;
  void heap_insert(int portal, int color, double d, Vertex witness);
  void heap_erase(int portal, int color);
  std::optional<HeapKey> portal_color_min(int portal, int color) const;
  std::optional<std::pair<double, Vertex>> piece_nearest(Vertex v, int color);

  const GenericOracle* oracle_;
  Mode mode_;
  int n_;
  Counters counters_;

  std::vector<char> color_alive_;  // indexed by color id (grows)
  std::vector<char> active_;
  int next_color_;

  // per-portal heap of (distance, witness) per active color in the cluster
  std::vector<Heap> heaps_;
  std::vector<std::unordered_map<int, int>> active_handle_;  // portal -> color -> handle

  // incremental mode
  std::vector<int> color_of_;
  std::vector<std::vector<std::pair<Vertex, int>>> member_portals_;  // color -> (v, portal)
  std::vector<std::unordered_map<int, HeapKey>> inactive_min_;       // portal -> color -> min

  // fully dynamic mode
  std::unique_ptr<EulerTourForest> etf_;
  std::unordered_map<const void*, int> root_color_;
  std::vector<Vertex> repr_;  // color -> any member vertex (grows)
};

}  // namespace dynst

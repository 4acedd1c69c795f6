#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynst/graph.hpp"

namespace dynst {

/// Static distance substrate: every vertex carries a portal list with stored
/// distances and a family of small piece graphs with exact local distances.
/// Portals are indexed densely; a portal is itself a vertex of the graph.
class GenericOracle {
 public:
  struct PortalDist {
    int portal;  // dense portal index
    double d;
  };
  struct Piece {
    std::vector<Vertex> vertices;  // sorted original ids
    std::vector<Edge> edges;       // endpoints are original ids
  };

  GenericOracle(int n, double alpha) : n_(n), alpha_(alpha), portals_of_(n), pieces_of_(n) {}

  int n() const { return n_; }
  double alpha() const { return alpha_; }

  int add_portal(Vertex p) {
    portal_vertex_.push_back(p);
    cluster_.emplace_back();
    return static_cast<int>(portal_vertex_.size()) - 1;
  }
  void set_portal_dist(Vertex v, int portal_idx, double d) {
    portals_of_[v].push_back({portal_idx, d});
    cluster_[portal_idx].push_back({v, d});
  }
  int add_piece(Piece piece) {
    pieces_.push_back(std::move(piece));
    return static_cast<int>(pieces_.size()) - 1;
  }
  void assign_piece(Vertex v, int piece_id) { pieces_of_[v].push_back(piece_id); }
  /// Call once after construction; sorts lists for deterministic iteration.
  void finalize();

  int portal_count() const { return static_cast<int>(portal_vertex_.size()); }
  Vertex portal_vertex(int portal_idx) const { return portal_vertex_[portal_idx]; }
  const std::vector<PortalDist>& portals(Vertex v) const { return portals_of_[v]; }
  const std::vector<std::pair<Vertex, double>>& cluster(int portal_idx) const {
    return cluster_[portal_idx];
  }
  const std::vector<int>& pieces(Vertex v) const { return pieces_of_[v]; }
  const Piece& piece(int piece_id) const { return pieces_[piece_id]; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }

  /// Stored distance from v to the portal with dense index portal_idx,
  /// or absent when the portal is not on v's list.
  std::optional<double> portal_dist(Vertex v, int portal_idx) const;

  /// Single-source distances inside one piece, sorted by vertex id.
  std::vector<std::pair<Vertex, double>> piece_sssp(int piece_id, Vertex src) const;

  /// min over pieces(v) of the in-piece distance to w; +inf if not visible.
  double piece_distance(Vertex v, Vertex w) const;
  /// min over shared portals of D[v][p] + D[w][p]; +inf if no shared portal.
  double portal_distance(Vertex v, Vertex w) const;
  /// The distance the oracle sees: min(piece distance, portal distance).
  double distance(Vertex u, Vertex w) const;

  // aggregate statistics (ptot, pnum, pmax, piece totals)
  struct Stats {
    long long portal_connections = 0;
    int portal_count = 0;
    int max_portals_per_vertex = 0;
    long long piece_size_total = 0;
    int piece_count = 0;
    int max_piece_size = 0;
    int max_pieces_per_vertex = 0;
  };
  Stats stats() const;

 private:
  int n_;
  double alpha_;
  std::vector<std::vector<PortalDist>> portals_of_;
  std::vector<std::vector<int>> pieces_of_;
  std::vector<Piece> pieces_;
  std::vector<Vertex> portal_vertex_;
  std::vector<std::vector<std::pair<Vertex, double>>> cluster_;
};

/// The complete-graph lens the algorithms work through: d(u,v) is the oracle
/// distance, optionally rounded up to a power of `base` on every read.
class NearMetricView {
 public:
  NearMetricView(const GenericOracle& oracle, double base = 0.0)
      : oracle_(&oracle), base_(base) {}

  const GenericOracle& oracle() const { return *oracle_; }
  bool discretized() const { return base_ > 0.0; }
  double base() const { return base_; }
  double mu() const { return oracle_->alpha() * (discretized() ? base_ : 1.0); }

  double distance(Vertex u, Vertex w) const {
    if (u == w) return 0.0;
    double d = oracle_->distance(u, w);
    return discretized() ? discretize(d, base_) : d;
  }
  long level(Vertex u, Vertex w) const { return discretize_level(oracle_->distance(u, w), base_); }
  long level_of(double d) const { return discretize_level(d, base_); }
  double round_up(double d) const { return discretized() ? discretize(d, base_) : d; }

 private:
  const GenericOracle* oracle_;
  double base_;
};

struct OracleViolation {
  Vertex u, v;
  std::string reason;
};

struct OracleReport {
  std::vector<OracleViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every defining clause of the oracle against exact distances.
OracleReport verify_generic(const GenericOracle& oracle, const WeightedGraph& g, double alpha,
                            int max_violations = 64);

/// Degenerate exact oracle: every vertex is a portal, stored distances are
/// the metric closure, no pieces. Used to drive the color layers and the
/// engines with mu = 1.
GenericOracle build_exact_oracle(const WeightedGraph& g);

}  // namespace dynst

#include "dynst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

namespace dynst {

void GenericOracle::finalize() {
  for (auto& ps : portals_of_)
    std::sort(ps.begin(), ps.end(),
              [](const PortalDist& a, const PortalDist& b) { return a.portal < b.portal; });
  for (auto& c : cluster_) std::sort(c.begin(), c.end());
  for (auto& p : pieces_) std::sort(p.vertices.begin(), p.vertices.end());
}

std::optional<double> GenericOracle::portal_dist(Vertex v, int portal_idx) const {
  const auto& ps = portals_of_[v];
  auto it = std::lower_bound(ps.begin(), ps.end(), portal_idx,
                             [](const PortalDist& a, int p) { return a.portal < p; });
  if (it == ps.end() || it->portal != portal_idx) return std::nullopt;
  return it->d;
}

std::vector<std::pair<Vertex, double>> GenericOracle::piece_sssp(int piece_id, Vertex src) const {
  const Piece& pc = pieces_[piece_id];
  const int k = static_cast<int>(pc.vertices.size());
  auto local = [&](Vertex v) -> int {
    auto it = std::lower_bound(pc.vertices.begin(), pc.vertices.end(), v);
    if (it == pc.vertices.end() || *it != v) return -1;
    return static_cast<int>(it - pc.vertices.begin());
  };
  int s = local(src);
  std::vector<std::pair<Vertex, double>> out;
  if (s < 0) return out;
  std::vector<std::vector<std::pair<int, double>>> adj(k);
  for (const Edge& e : pc.edges) {
    int a = local(e.u), b = local(e.v);
    adj[a].push_back({b, e.w});
    adj[b].push_back({a, e.w});
  }
  std::vector<double> dist(k, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s] = 0.0;
  pq.push({0.0, s});
  while (!pq.empty()) {
    auto [d, x] = pq.top();
    pq.pop();
    if (d > dist[x]) continue;
    for (auto [y, w] : adj[x])
      if (d + w < dist[y]) {
        dist[y] = d + w;
        pq.push({dist[y], y});
      }
  }
  out.reserve(k);
  for (int i = 0; i < k; ++i)
    if (dist[i] < kInf) out.push_back({pc.vertices[i], dist[i]});
  return out;
}

double GenericOracle::piece_distance(Vertex v, Vertex w) const {
  if (v == w) {
    for (int pid : pieces_of_[v]) {
      const Piece& pc = pieces_[pid];
      if (std::binary_search(pc.vertices.begin(), pc.vertices.end(), v)) return 0.0;
    }
    return kInf;
  }
  double best = kInf;
  for (int pid : pieces_of_[v]) {
    const Piece& pc = pieces_[pid];
    if (!std::binary_search(pc.vertices.begin(), pc.vertices.end(), w)) continue;
    for (const auto& [x, d] : piece_sssp(pid, v))
      if (x == w) best = std::min(best, d);
  }
  return best;
}

double GenericOracle::portal_distance(Vertex v, Vertex w) const {
  const auto& a = portals_of_[v];
  const auto& b = portals_of_[w];
  double best = kInf;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].portal < b[j].portal)
      ++i;
    else if (b[j].portal < a[i].portal)
      ++j;
    else {
      best = std::min(best, a[i].d + b[j].d);
      ++i;
      ++j;
    }
  }
  return best;
}

double GenericOracle::distance(Vertex u, Vertex w) const {
  if (u == w) return 0.0;
  return std::min(piece_distance(u, w), portal_distance(u, w));
}

GenericOracle::Stats GenericOracle::stats() const {
  Stats s;
  s.portal_count = portal_count();
  s.piece_count = piece_count();
  for (int v = 0; v < n_; ++v) {
    s.portal_connections += static_cast<long long>(portals_of_[v].size());
    s.max_portals_per_vertex =
        std::max(s.max_portals_per_vertex, static_cast<int>(portals_of_[v].size()));
    s.max_pieces_per_vertex =
        std::max(s.max_pieces_per_vertex, static_cast<int>(pieces_of_[v].size()));
  }
  for (const Piece& p : pieces_) {
    s.piece_size_total += static_cast<long long>(p.vertices.size());
    s.max_piece_size = std::max(s.max_piece_size, static_cast<int>(p.vertices.size()));
  }
  return s;
}

OracleReport verify_generic(const GenericOracle& oracle, const WeightedGraph& g, double alpha,
                            int max_violations) {
  OracleReport report;
  auto add = [&](Vertex u, Vertex v, std::string reason) {
    if (static_cast<int>(report.violations.size()) < max_violations)
      report.violations.push_back({u, v, std::move(reason)});
  };
  const double tol = 1e-9;
  DistanceMatrix dm = metric_closure(g);
  const int n = g.n();

  for (int pi = 0; pi < oracle.portal_count(); ++pi) {
    Vertex p = oracle.portal_vertex(pi);
    for (const auto& [v, d] : oracle.cluster(pi))
      if (d < dm.entry(p, v) * (1.0 - tol) - tol)
        add(p, v, "stored portal distance below the true distance");
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex w = u + 1; w < n; ++w) {
      double exact = dm.entry(u, w);
      double ruw = oracle.piece_distance(u, w);
      double rwu = oracle.piece_distance(w, u);
      if (std::abs(ruw - rwu) > tol * std::max({1.0, ruw, rwu}) &&
          !(ruw == kInf && rwu == kInf))
        add(u, w, "piece distance not symmetric");
      if (ruw < kInf && ruw < exact * (1.0 - tol) - tol)
        add(u, w, "piece distance below the true distance");
      bool piece_exact = ruw < kInf && std::abs(ruw - exact) <= tol * std::max(1.0, exact);
      if (!piece_exact) {
        double pd = oracle.portal_distance(u, w);
        if (!(pd <= alpha * exact * (1.0 + tol) + tol))
          add(u, w, "no piece match and portal distance exceeds alpha times the true distance");
      }
      double gd = oracle.distance(u, w);
      if (gd < exact * (1.0 - tol) - tol) add(u, w, "oracle distance below the true distance");
    }
  }
  return report;
}

GenericOracle build_exact_oracle(const WeightedGraph& g) {
  GenericOracle oracle(g.n(), 1.0);
  DistanceMatrix dm = metric_closure(g);
  for (Vertex p = 0; p < g.n(); ++p) {
    int idx = oracle.add_portal(p);
    for (Vertex v = 0; v < g.n(); ++v)
      if (dm.entry(p, v) < kInf) oracle.set_portal_dist(v, idx, dm.entry(p, v));
  }
  oracle.finalize();
  return oracle;
}

}  // namespace dynst

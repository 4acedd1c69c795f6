#include "dynst/oracle_build.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace dynst {

namespace {

using Item = std::pair<double, Vertex>;
using MinQueue = std::priority_queue<Item, std::vector<Item>, std::greater<>>;

// Dijkstra that stops as soon as the first portal is settled; returns the
// settled (vertex, distance) list and the portal that ended the run.
struct TruncatedRun {
  std::vector<std::pair<Vertex, double>> settled;
  Vertex stop_portal = -1;
  double stop_dist = kInf;
};

TruncatedRun truncated_dijkstra(const WeightedGraph& g, Vertex src,
                                const std::vector<char>& is_portal) {
  TruncatedRun run;
  std::vector<double> dist(g.n(), kInf);
  std::vector<char> done(g.n(), 0);
  MinQueue pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (is_portal[v]) {
      run.stop_portal = v;
      run.stop_dist = d;
      break;
    }
    run.settled.push_back({v, d});
    for (const auto& a : g.neighbors(v))
      if (!done[a.to] && d + a.w < dist[a.to]) {
        dist[a.to] = d + a.w;
        pq.push({dist[a.to], a.to});
      }
  }
  return run;
}

std::vector<double> multi_source_dist(const WeightedGraph& g, const std::vector<Vertex>& srcs) {
  std::vector<double> dist(g.n(), kInf);
  MinQueue pq;
  for (Vertex s : srcs) {
    dist[s] = 0.0;
    pq.push({0.0, s});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& a : g.neighbors(v))
      if (d + a.w < dist[a.to]) {
        dist[a.to] = d + a.w;
        pq.push({dist[a.to], a.to});
      }
  }
  return dist;
}

}  // namespace

GenericOracle build_tz3(const WeightedGraph& g, std::uint64_t seed) {
  if (!g.connected()) throw DisconnectedError("oracle construction needs a connected graph");
  const int n = g.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double p = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<char> is_portal(n, 0);
  std::vector<Vertex> portals;
  while (portals.empty()) {  // resample on an empty draw; possible at tiny n
    for (Vertex v = 0; v < n; ++v)
      if (coin(rng) < p) {
        is_portal[v] = 1;
        portals.push_back(v);
      }
  }

  GenericOracle oracle(n, 3.0);
  for (Vertex pv : portals) {
    int idx = oracle.add_portal(pv);
    auto dist = shortest_paths(g, pv);
    for (Vertex v = 0; v < n; ++v) oracle.set_portal_dist(v, idx, dist[v]);
  }

  // Balls: vertices strictly closer to w than w's nearest portal, then the
  // symmetric reduction so piece distances agree from both sides.
  std::vector<std::vector<std::pair<Vertex, double>>> ball(n);
  std::vector<std::vector<Vertex>> ball_ids(n);
  for (Vertex w = 0; w < n; ++w) {
    if (is_portal[w]) continue;  // the nearest portal of a portal is itself
    auto run = truncated_dijkstra(g, w, is_portal);
    for (const auto& [v, d] : run.settled)
      if (d < run.stop_dist) {  // ties with the portal radius stay out
        ball[w].push_back({v, d});
        ball_ids[w].push_back(v);
      }
    std::sort(ball_ids[w].begin(), ball_ids[w].end());
  }
  for (Vertex w = 0; w < n; ++w) {
    GenericOracle::Piece piece;
    piece.vertices.push_back(w);
    for (const auto& [v, d] : ball[w]) {
      if (v == w) continue;
      if (!std::binary_search(ball_ids[v].begin(), ball_ids[v].end(), w)) continue;
      piece.vertices.push_back(v);
      piece.edges.push_back({w, v, d});
    }
    int pid = oracle.add_piece(std::move(piece));
    oracle.assign_piece(w, pid);
  }
  oracle.finalize();
  return oracle;
}

std::vector<std::vector<std::pair<Vertex, double>>> compute_bunches(const WeightedGraph& g,
                                                                    int l, std::uint64_t seed) {
  if (l < 1) throw DomainError("level count must be at least 1");
  if (!g.connected()) throw DisconnectedError("bunch construction needs a connected graph");
  const int n = g.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double p = std::pow(static_cast<double>(n), -1.0 / l);

  // nested level samples A_0 = V down to A_l = empty
  std::vector<std::vector<Vertex>> levels(l + 1);
  levels[0].resize(n);
  for (Vertex v = 0; v < n; ++v) levels[0][v] = v;
  for (int i = 1; i < l; ++i)
    for (Vertex v : levels[i - 1])
      if (coin(rng) < p) levels[i].push_back(v);

  std::vector<std::vector<char>> in_level(l + 1, std::vector<char>(n, 0));
  for (int i = 0; i <= l; ++i)
    for (Vertex v : levels[i]) in_level[i][v] = 1;

  // distance to the next level, +inf for the empty one
  std::vector<std::vector<double>> next_dist(l + 1, std::vector<double>(n, kInf));
  for (int i = 1; i < l; ++i)
    if (!levels[i].empty()) next_dist[i] = multi_source_dist(g, levels[i]);

  std::vector<std::vector<std::pair<Vertex, double>>> bunch(n);
  for (int i = 0; i < l; ++i) {
    for (Vertex w : levels[i]) {
      if (i + 1 <= l && in_level[i + 1][w]) continue;  // w belongs to a deeper level
      // cluster of w: truncated Dijkstra over vertices with d(w, v) < d(v, A_{i+1})
      std::vector<double> dist(n, kInf);
      std::vector<char> done(n, 0);
      MinQueue pq;
      dist[w] = 0.0;
      pq.push({0.0, w});
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (done[v]) continue;
        done[v] = 1;
        bunch[v].push_back({w, d});
        for (const auto& a : g.neighbors(v)) {
          double nd = d + a.w;
          if (!done[a.to] && nd < dist[a.to] && nd < next_dist[i + 1][a.to]) {
            dist[a.to] = nd;
            pq.push({nd, a.to});
          }
        }
      }
    }
  }
  return bunch;
}

GenericOracle build_bunch_oracle(const WeightedGraph& g, int l, std::uint64_t seed) {
  auto bunches = compute_bunches(g, l, seed);
  const int n = g.n();
  GenericOracle oracle(n, 2.0 * l - 1.0);
  std::vector<int> portal_index(n, -1);
  for (Vertex v = 0; v < n; ++v)
    for (const auto& [w, d] : bunches[v]) {
      if (portal_index[w] < 0) portal_index[w] = oracle.add_portal(w);
      oracle.set_portal_dist(v, portal_index[w], d);
    }
  oracle.finalize();
  return oracle;
}

}  // namespace dynst

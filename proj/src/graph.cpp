#include "dynst/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace dynst {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adj_(n) {
  if (n < 0) throw InvariantError("vertex count must be nonnegative");
  std::unordered_set<std::uint64_t> seen;
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    const Edge& e = edges_[id];
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw InvariantError("edge endpoint out of range");
    if (e.u == e.v) throw InvariantError("self-loops are not allowed");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw InvariantError("edge weights must be positive and finite");
    if (!seen.insert(pair_key(e.u, e.v)).second)
      throw InvariantError("duplicate undirected edge");
    adj_[e.u].push_back({e.v, e.w, id});
    adj_[e.v].push_back({e.u, e.w, id});
    min_w_ = std::min(min_w_, e.w);
    max_w_ = std::max(max_w_, e.w);
  }
}

bool WeightedGraph::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> vis(n_, 0);
  std::vector<Vertex> stack{0};
  vis[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const Arc& a : adj_[v])
      if (!vis[a.to]) {
        vis[a.to] = 1;
        ++cnt;
        stack.push_back(a.to);
      }
  }
  return cnt == n_;
}

WeightedGraph load_graph(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  };
  if (!next_line(line)) throw ParseError("empty graph file");
  std::istringstream head(line);
  long long n = -1, m = -1;
  if (!(head >> n >> m) || n < 0 || m < 0) throw ParseError("bad header line: " + line);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) throw ParseError("unexpected end of file, expected edge line");
    std::istringstream ls(line);
    Edge e;
    if (!(ls >> e.u >> e.v >> e.w)) throw ParseError("bad edge line: " + line);
    std::string rest;
    if (ls >> rest) throw ParseError("trailing tokens on edge line: " + line);
    edges.push_back(e);
  }
  return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file: " + path);
  return load_graph(in);
}

WeightedGraph load_graph_string(const std::string& text) {
  std::istringstream in(text);
  return load_graph(in);
}

void save_graph(const WeightedGraph& g, std::ostream& out) {
  out << g.n() << " " << g.m() << "\n";
  out.precision(17);
  for (const Edge& e : g.edges()) out << e.u << " " << e.v << " " << e.w << "\n";
}

std::vector<double> shortest_paths(const WeightedGraph& g, Vertex src) {
  if (src < 0 || src >= g.n()) throw IndexError("source vertex out of range");
  std::vector<double> dist(g.n(), kInf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& a : g.neighbors(v)) {
      double nd = d + a.w;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pq.push({nd, a.to});
      }
    }
  }
  return dist;
}

DistanceMatrix metric_closure(const WeightedGraph& g) {
  DistanceMatrix dm(g.n());
  for (Vertex s = 0; s < g.n(); ++s) {
    auto d = shortest_paths(g, s);
    for (Vertex v = 0; v < g.n(); ++v) dm.set(s, v, d[v]);
  }
  return dm;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

Tree mst_over(const std::vector<Vertex>& points,
              const std::function<double(Vertex, Vertex)>& dist) {
  Tree t;
  const int k = static_cast<int>(points.size());
  if (k <= 1) return t;
  struct Cand {
    double w;
    int index;
    int a, b;  // indices into points
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<size_t>(k) * (k - 1) / 2);
  int idx = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      double w = dist(points[i], points[j]);
      if (!(w < kInf)) throw DisconnectedError("infinite pairwise distance in mst_over");
      cands.push_back({w, idx++, i, j});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.w != y.w) return x.w < y.w;
    return x.index < y.index;
  });
  UnionFind uf(k);
  for (const Cand& c : cands) {
    if (uf.unite(c.a, c.b)) {
      t.edges.push_back({points[c.a], points[c.b], c.w});
      t.cost += c.w;
      if (static_cast<int>(t.edges.size()) == k - 1) break;
    }
  }
  if (static_cast<int>(t.edges.size()) != k - 1)
    throw DisconnectedError("points are not mutually connected");
  return t;
}

double exact_steiner_cost(const WeightedGraph& g, const std::vector<Vertex>& terminals) {
  const int k = static_cast<int>(terminals.size());
  if (k > 12) throw TooManyTerminals("exact_steiner_cost supports at most 12 terminals");
  for (Vertex t : terminals)
    if (t < 0 || t >= g.n()) throw IndexError("terminal out of range");
  if (k <= 1) return 0.0;
  const int n = g.n();
  const int full = 1 << k;
  // dp[mask][v] = cheapest tree connecting terminal subset `mask` and vertex v.
  std::vector<std::vector<double>> dp(full, std::vector<double>(n, kInf));
  for (int i = 0; i < k; ++i) dp[1 << i][terminals[i]] = 0.0;
  using Item = std::pair<double, Vertex>;
  for (int mask = 1; mask < full; ++mask) {
    auto& cur = dp[mask];
    for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
      int other = mask ^ sub;
      if (sub < other) continue;  // each split once
      const auto& a = dp[sub];
      const auto& b = dp[other];
      for (int v = 0; v < n; ++v)
        if (a[v] < kInf && b[v] < kInf) cur[v] = std::min(cur[v], a[v] + b[v]);
    }
    // Dijkstra-style relaxation over the graph.
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (int v = 0; v < n; ++v)
      if (cur[v] < kInf) pq.push({cur[v], v});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > cur[v]) continue;
      for (const auto& arc : g.neighbors(v)) {
        double nd = d + arc.w;
        if (nd < cur[arc.to]) {
          cur[arc.to] = nd;
          pq.push({nd, arc.to});
        }
      }
    }
  }
  double best = kInf;
  for (int v = 0; v < n; ++v) best = std::min(best, dp[full - 1][v]);
  if (!(best < kInf)) throw DisconnectedError("terminals are not in one component");
  return best;
}

double discretize(double d, double base) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("discretize requires d > 0");
  if (!(base > 1.0)) throw DomainError("discretize requires base > 1");
  return level_value(discretize_level(d, base), base);
}

long discretize_level(double d, double base) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("discretize requires d > 0");
  if (!(base > 1.0)) throw DomainError("discretize requires base > 1");
  double t = std::log(d) / std::log(base);
  long k = std::lround(t);
  double at_k = std::pow(base, static_cast<double>(k));
  // Snap when d already sits on a power of the base (within fp noise).
  if (std::abs(at_k - d) <= 1e-9 * std::max(at_k, d)) return k;
  long up = static_cast<long>(std::ceil(t));
  if (std::pow(base, static_cast<double>(up)) < d) ++up;
  while (up > k && std::pow(base, static_cast<double>(up - 1)) >= d) --up;
  return up;
}

double level_value(long level, double base) {
  return std::pow(base, static_cast<double>(level));
}

}  // namespace dynst

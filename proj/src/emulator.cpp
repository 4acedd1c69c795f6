#include "dynst/emulator.hpp"

#include <algorithm>

#include "dynst/oracle_build.hpp"

namespace dynst {

void BipartiteEmulator::finalize() {
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  for (auto& a : aux_adj_) std::sort(a.begin(), a.end());
}

double BipartiteEmulator::distance(Vertex u, Vertex w) const {
  const auto& a = adj_[u];
  const auto& b = adj_[w];
  double best = kInf;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first)
      ++i;
    else if (b[j].first < a[i].first)
      ++j;
    else {
      best = std::min(best, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return best;
}

BipartiteEmulator build_emulator(const WeightedGraph& g, int l, std::uint64_t seed) {
  auto bunches = compute_bunches(g, l, seed);
  const int n = g.n();
  BipartiteEmulator em(n, n, 2.0 * l - 1.0);
  for (Vertex v = 0; v < n; ++v) {
    em.add_edge(v, v, 0.0);  // hub copy
    for (const auto& [w, d] : bunches[v])
      if (w != v) em.add_edge(v, w, d);
  }
  em.finalize();
  return em;
}

EmulatorSteiner::EmulatorSteiner(const BipartiteEmulator& emulator)
    : emulator_(&emulator),
      terminal_(emulator.n(), 0),
      edge_ids_(emulator.n()) {
  msf_ = std::make_unique<DynMsf>(emulator.n() + emulator.aux_count());
}

void EmulatorSteiner::add_terminal(Vertex v) {
  if (v < 0 || v >= emulator_->n()) throw IndexError("vertex out of range");
  if (terminal_[v]) throw AlreadyTerminal("vertex is already a terminal");
  terminal_[v] = 1;
  ++terminal_count_;
  for (const auto& [aux, w] : emulator_->neighbors(v))
    edge_ids_[v].push_back(msf_->insert(v, emulator_->n() + aux, w, ++ts_).id);
}

void EmulatorSteiner::remove_terminal(Vertex v) {
  if (v < 0 || v >= emulator_->n()) throw IndexError("vertex out of range");
  if (!terminal_[v]) throw NotATerminal("vertex is not a terminal");
  terminal_[v] = 0;
  --terminal_count_;
  for (int id : edge_ids_[v]) msf_->erase(id);
  edge_ids_[v].clear();
}

Tree EmulatorSteiner::current_tree() const {
  Tree out;
  if (terminal_count_ == 0) return out;
  const int n = emulator_->n();
  const int total = n + emulator_->aux_count();
  std::vector<std::vector<std::pair<int, double>>> adj(total);
  for (int id : msf_->forest()) {
    const MsfEdge& e = msf_->edge(id);
    adj[e.u].push_back({e.v, e.w});
    adj[e.v].push_back({e.u, e.w});
  }
  // the terminal component (every terminal shares hubs with every other)
  Vertex root = -1;
  for (Vertex v = 0; v < n && root < 0; ++v)
    if (terminal_[v]) root = v;
  std::vector<char> in_comp(total, 0);
  std::vector<int> stack{root};
  in_comp[root] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (auto [y, w] : adj[x])
      if (!in_comp[y]) {
        in_comp[y] = 1;
        stack.push_back(y);
      }
  }
  // prune auxiliary leaves down to the fixpoint
  std::vector<int> degree(total, 0);
  for (int x = 0; x < total; ++x)
    if (in_comp[x]) degree[x] = static_cast<int>(adj[x].size());
  std::vector<int> queue;
  for (int x = n; x < total; ++x)
    if (in_comp[x] && degree[x] <= 1) queue.push_back(x);
  std::vector<char> pruned(total, 0);
  while (!queue.empty()) {
    int x = queue.back();
    queue.pop_back();
    if (pruned[x]) continue;
    pruned[x] = 1;
    for (auto [y, w] : adj[x]) {
      if (pruned[y] || !in_comp[y]) continue;
      if (--degree[y] <= 1 && y >= n) queue.push_back(y);
    }
  }
  for (int x = 0; x < total; ++x) {
    if (!in_comp[x] || pruned[x]) continue;
    for (auto [y, w] : adj[x])
      if (x < y && in_comp[y] && !pruned[y]) {
        out.edges.push_back({x, y, w});
        out.cost += w;
      }
  }
  return out;
}

}  // namespace dynst

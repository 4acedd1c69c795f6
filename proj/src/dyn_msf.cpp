#include "dynst/dyn_msf.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace dynst {

DynMsf::DynMsf(int n, Engine engine, TieMode tie_mode)
    : n_(n), engine_(engine), tie_mode_(tie_mode), tree_degree_(n, 0), incident_(n) {
  if (n < 0) throw DomainError("vertex count must be nonnegative");
  levels_ = 1;
  while ((1 << levels_) < std::max(1, n)) ++levels_;
  ++levels_;  // levels 0..levels_-1, pushes from levels_-2 stay in range
  if (engine_ == Engine::hierarchical) {
    ett_.reserve(levels_);
    for (int i = 0; i < levels_; ++i) ett_.push_back(std::make_unique<EulerTourForest>(n));
    nontree_.assign(levels_, std::vector<std::unordered_set<int>>(n));
    tree_ids_.assign(levels_, std::vector<std::unordered_set<int>>(n));
    pf_ = std::make_unique<SplayPathForest>(n);
  }
}

const MsfEdge& DynMsf::edge(int edge_id) const {
  if (edge_id < 0 || edge_id >= static_cast<int>(edges_.size()) || !edges_[edge_id].live)
    throw NoSuchEdge("no such edge");
  return edges_[edge_id];
}

bool DynMsf::is_tree_edge(int edge_id) const { return edge(edge_id).tree; }

bool DynMsf::connected(Vertex u, Vertex v) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) throw IndexError("vertex out of range");
  if (u == v) return true;
  if (engine_ == Engine::hierarchical) return ett_[0]->connected(u, v);
  // kruskal engine: union-find over the last forest
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int id : last_forest_) parent[find(edges_[id].u)] = find(edges_[id].v);
  return find(u) == find(v);
}

std::vector<int> DynMsf::forest() const {
  std::vector<int> out;
  if (engine_ == Engine::hierarchical) {
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id)
      if (edges_[id].live && edges_[id].tree) out.push_back(id);
  } else {
    out.assign(last_forest_.begin(), last_forest_.end());
    std::sort(out.begin(), out.end());
  }
  return out;
}

double DynMsf::component_weight(Vertex v) {
  if (v < 0 || v >= n_) throw IndexError("vertex out of range");
  double sum = 0.0;
  if (engine_ == Engine::hierarchical) {
    for (Vertex x : ett_[0]->component_vertices(v))
      for (int lvl = 0; lvl < levels_; ++lvl)
        for (int id : tree_ids_[lvl][x])
          if (edges_[id].u == x) sum += edges_[id].w;  // count each edge once
  } else {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int id : last_forest_) parent[find(edges_[id].u)] = find(edges_[id].v);
    int root = find(v);
    for (int id : last_forest_)
      if (find(edges_[id].u) == root) sum += edges_[id].w;
  }
  return sum;
}

std::vector<int> DynMsf::incident_edges(Vertex v) const {
  if (v < 0 || v >= n_) throw IndexError("vertex out of range");
  std::vector<int> out;
  for (int id : incident_[v])
    if (edges_[id].live) out.push_back(id);
  return out;
}

void DynMsf::register_nontree(int id) {
  const MsfEdge& e = edges_[id];
  nontree_[e.level][e.u].insert(id);
  nontree_[e.level][e.v].insert(id);
}

void DynMsf::unregister_nontree(int id) {
  const MsfEdge& e = edges_[id];
  nontree_[e.level][e.u].erase(id);
  nontree_[e.level][e.v].erase(id);
}

void DynMsf::make_tree(int id, int level) {
  MsfEdge& e = edges_[id];
  e.tree = true;
  e.level = level;
  for (int i = 0; i <= level; ++i) ett_[i]->link(e.u, e.v);
  tree_ids_[level][e.u].insert(id);
  tree_ids_[level][e.v].insert(id);
  pf_id_[id] = pf_->link(e.u, e.v, e.w, e.tie, id);
  ++tree_degree_[e.u];
  ++tree_degree_[e.v];
}

void DynMsf::drop_tree(int id) {
  MsfEdge& e = edges_[id];
  for (int i = 0; i <= e.level; ++i) ett_[i]->cut(e.u, e.v);
  tree_ids_[e.level][e.u].erase(id);
  tree_ids_[e.level][e.v].erase(id);
  pf_->cut(pf_id_[id]);
  pf_id_.erase(id);
  e.tree = false;
  --tree_degree_[e.u];
  --tree_degree_[e.v];
}

MsfInsert DynMsf::insert(Vertex u, Vertex v, double w, std::uint64_t timestamp) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) throw DomainError("endpoint out of range");
  if (u == v) throw DomainError("self-loops are not allowed");
  if (w < 0.0 || !std::isfinite(w)) throw DomainError("weight must be nonnegative and finite");
  int id = static_cast<int>(edges_.size());
  MsfEdge e;
  e.u = u;
  e.v = v;
  e.w = w;
  e.tie = tie_mode_ == TieMode::timestamp ? timestamp : pair_key(u, v);
  e.live = true;
  edges_.push_back(e);
  incident_[u].push_back(id);
  incident_[v].push_back(id);

  if (engine_ == Engine::kruskal) {
    live_ids_.insert(id);
    return {id, kruskal_recompute()};
  }

  MsfDelta delta;
  if (!ett_[0]->connected(u, v)) {
    make_tree(id, 0);
    delta.added.push_back(id);
    return {id, delta};
  }
  auto [pf_max, max_key] = pf_->path_max_edge(u, v);
  if (key_of(id) < max_key) {
    // Evict the path maximum f and rerun the replacement search for its cut.
    // The new edge is the strict minimum crossing edge (every other crossing
    // edge has f on its tree path, hence compares above f), so the search
    // must return it; the search also demotes crossing edges stranded at
    // levels above the reconnection.
    int out_id = max_key.id;
    int out_level = edges_[out_id].level;
    Vertex fu = edges_[out_id].u, fv = edges_[out_id].v;
    edges_[id].level = 0;
    register_nontree(id);
    drop_tree(out_id);
    int repl = find_replacement(fu, fv, out_level);
    if (repl != id) throw EngineError("replacement search missed the inserted edge");
    unregister_nontree(repl);
    make_tree(repl, edges_[repl].level);
    edges_[out_id].level = 0;
    register_nontree(out_id);
    delta.added.push_back(id);
    delta.removed.push_back(out_id);
  } else {
    edges_[id].level = 0;
    register_nontree(id);
  }
  (void)pf_max;
  return {id, delta};
}

// Lightest reconnecting edge for the cut left by removing a level-`max_level`
// tree edge with endpoints u, v. Levels go top-down; at each level the tree
// edges of the smaller side move one level up and its incident non-tree edges
// are classified: edges internal to the smaller side move up as well, cut
// crossing edges become candidates. The lightest candidate wins; the other
// crossing candidates drop to the winner's level so their endpoints stay
// connected in the forest of that level.
int DynMsf::find_replacement(Vertex u, Vertex v, int max_level) {
  std::vector<int> crossing;
  for (int i = max_level; i >= 0; --i) {
    Vertex small_side = u, big_side = v;
    if (ett_[i]->component_size(u) > ett_[i]->component_size(v)) std::swap(small_side, big_side);
    auto small_vertices = ett_[i]->component_vertices(small_side);
    for (Vertex x : small_vertices) {
      auto ids = std::vector<int>(tree_ids_[i][x].begin(), tree_ids_[i][x].end());
      for (int t : ids) {
        MsfEdge& te = edges_[t];
        if (te.level != i) continue;
        tree_ids_[i][te.u].erase(t);
        tree_ids_[i][te.v].erase(t);
        te.level = i + 1;
        tree_ids_[i + 1][te.u].insert(t);
        tree_ids_[i + 1][te.v].insert(t);
        ett_[i + 1]->link(te.u, te.v);
      }
    }
    std::vector<int> cands;
    for (Vertex x : small_vertices)
      for (int id : nontree_[i][x]) cands.push_back(id);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    const void* other = ett_[i]->component_id(big_side);
    const void* small_id = ett_[i]->component_id(small_side);
    for (int id : cands) {
      const MsfEdge& e = edges_[id];
      Vertex a = e.u, b = e.v;
      if (ett_[i]->component_id(a) != small_id) std::swap(a, b);
      if (ett_[i]->component_id(b) == other) {
        crossing.push_back(id);
      } else {
        unregister_nontree(id);
        edges_[id].level = i + 1;
        register_nontree(id);
      }
    }
  }
  if (crossing.empty()) return -1;
  int best = crossing[0];
  for (int id : crossing)
    if (key_of(id) < key_of(best)) best = id;
  for (int id : crossing) {
    if (id == best) continue;
    if (edges_[id].level > edges_[best].level) {
      unregister_nontree(id);
      edges_[id].level = edges_[best].level;
      register_nontree(id);
    }
  }
  return best;
}

MsfDelta DynMsf::erase(int edge_id) {
  const MsfEdge& e = edge(edge_id);
  if (engine_ == Engine::kruskal) {
    live_ids_.erase(edge_id);
    edges_[edge_id].live = false;
    edges_[edge_id].tree = false;
    return kruskal_recompute();
  }
  MsfDelta delta;
  if (!e.tree) {
    unregister_nontree(edge_id);
    edges_[edge_id].live = false;
    return delta;
  }
  Vertex u = e.u, v = e.v;
  int level = e.level;
  drop_tree(edge_id);
  edges_[edge_id].live = false;
  delta.removed.push_back(edge_id);
  int repl = find_replacement(u, v, level);
  if (repl != -1) {
    unregister_nontree(repl);
    make_tree(repl, edges_[repl].level);
    delta.added.push_back(repl);
  }
  return delta;
}

std::pair<int, EdgeOrderKey> DynMsf::path_max(Vertex u, Vertex v) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) throw IndexError("vertex out of range");
  if (engine_ == Engine::hierarchical) {
    auto [pf_id, key] = pf_->path_max_edge(u, v);
    (void)pf_id;
    return {key.id, key};
  }
  // kruskal engine: walk the explicit forest
  std::vector<int> via(n_, -1);
  std::vector<char> vis(n_, 0);
  std::vector<std::vector<int>> adj(n_);
  for (int id : last_forest_) {
    adj[edges_[id].u].push_back(id);
    adj[edges_[id].v].push_back(id);
  }
  std::vector<Vertex> stack{u};
  vis[u] = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (int id : adj[x]) {
      Vertex y = edges_[id].u == x ? edges_[id].v : edges_[id].u;
      if (!vis[y]) {
        vis[y] = 1;
        via[y] = id;
        stack.push_back(y);
      }
    }
  }
  if (!vis[v]) throw NotConnected("vertices not connected in the forest");
  int best = -1;
  for (Vertex cur = v; cur != u;) {
    int id = via[cur];
    if (best < 0 || key_of(best) < key_of(id)) best = id;
    cur = edges_[id].u == cur ? edges_[id].v : edges_[id].u;
  }
  return {best, key_of(best)};
}

bool DynMsf::check_levels(FILE* out) {
  bool ok = true;
  for (int id = 0; id < (int)edges_.size(); ++id) {
    const MsfEdge& e = edges_[id];
    if (!e.live) continue;
    if (e.tree) {
      for (int j = 0; j < levels_; ++j) {
        bool has = ett_[j]->has_edge(e.u, e.v);
        bool want = j <= e.level;
        if (has != want) {
          fprintf(out, "tree edge %d (%d,%d) level %d: ett[%d] has=%d want=%d\n", id, e.u, e.v, e.level, j, (int)has, (int)want);
          ok = false;
        }
      }
      if (!tree_ids_[e.level][e.u].count(id)) { fprintf(out, "tree edge %d not in tree_ids\n", id); ok = false; }
    } else {
      if (!nontree_[e.level][e.u].count(id) || !nontree_[e.level][e.v].count(id)) {
        fprintf(out, "nontree edge %d (%d,%d) level %d missing from nontree sets\n", id, e.u, e.v, e.level);
        ok = false;
      }
      if (!ett_[e.level]->connected(e.u, e.v)) {
        fprintf(out, "nontree edge %d (%d,%d) level %d endpoints not connected in F_level\n", id, e.u, e.v, e.level);
        ok = false;
      }
    }
  }
  return ok;
}

MsfDelta DynMsf::kruskal_recompute() {
  std::vector<int> ids(live_ids_.begin(), live_ids_.end());
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return key_of(a) < key_of(b); });
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_set<int> next_forest;
  for (int id : ids) {
    int a = find(edges_[id].u), b = find(edges_[id].v);
    if (a != b) {
      parent[a] = b;
      next_forest.insert(id);
    }
  }
  MsfDelta delta;
  for (int id : next_forest)
    if (!last_forest_.count(id)) delta.added.push_back(id);
  for (int id : last_forest_)
    if (!next_forest.count(id)) delta.removed.push_back(id);
  std::sort(delta.added.begin(), delta.added.end());
  std::sort(delta.removed.begin(), delta.removed.end());
  for (int id : next_forest) edges_[id].tree = true;
  for (int id : last_forest_)
    if (!next_forest.count(id) && edges_[id].live) edges_[id].tree = false;
  last_forest_ = std::move(next_forest);
  std::fill(tree_degree_.begin(), tree_degree_.end(), 0);
  for (int id : last_forest_) {
    ++tree_degree_[edges_[id].u];
    ++tree_degree_[edges_[id].v];
  }
  return delta;
}

}  // namespace dynst

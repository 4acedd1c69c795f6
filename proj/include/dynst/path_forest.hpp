#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <queue>
#include <tuple>
#include <vector>

#include "dynst/errors.hpp"
#include "dynst/graph.hpp"

namespace dynst {

/// Total order on tree edges used by path-maximum queries: later timestamps
/// and larger ids compare as heavier among equal weights.
struct EdgeOrderKey {
  double w = 0.0;
  std::uint64_t ts = 0;
  int id = -1;

  friend bool operator<(const EdgeOrderKey& a, const EdgeOrderKey& b) {
    return std::tie(a.w, a.ts, a.id) < std::tie(b.w, b.ts, b.id);
  }
  friend bool operator==(const EdgeOrderKey& a, const EdgeOrderKey& b) {
    return a.w == b.w && a.ts == b.ts && a.id == b.id;
  }
};

/// Link/cut forest with maximum-edge-on-path queries, splay-based. Edges are
/// represented as extra nodes so path aggregates only look at edge values.
class SplayPathForest {
 public:
  explicit SplayPathForest(int n) : n_(n) {
    nodes_.resize(n_);
    for (int v = 0; v < n_; ++v) nodes_[v].edge_id = -1;
  }

  /// `tie_id` is the id recorded inside the order key; it defaults to the
  /// forest's own edge id but callers tracking their own ids may pass one.
  int link(Vertex u, Vertex v, double w, std::uint64_t timestamp, int tie_id = -1) {
    check(u);
    check(v);
    if (connected(u, v)) throw CycleError("pf_link would close a cycle");
    int id = alloc_edge();
    Node& e = *edges_[id];
    e.edge_id = id;
    e.key = EdgeOrderKey{w, timestamp, tie_id >= 0 ? tie_id : id};
    e.u = u;
    e.v = v;
    Node* en = &e;
    make_root(&nodes_[u]);
    nodes_[u].path_parent = en;
    make_root(en);
    en->path_parent = &nodes_[v];
    return id;
  }

  void cut(int edge_id) {
    Node* en = edge_node(edge_id);
    Vertex u = en->u, v = en->v;
    // detach e from u, then from v
    make_root(&nodes_[u]);
    access(en);
    splay(&nodes_[u]);
    detach_child(&nodes_[u], en);
    make_root(&nodes_[v]);
    access(en);
    splay(&nodes_[v]);
    detach_child(&nodes_[v], en);
    release_edge(edge_id);
  }

  bool connected(Vertex u, Vertex v) {
    if (u == v) return true;
    return find_root(&nodes_[u]) == find_root(&nodes_[v]);
  }

  /// Maximum edge under (weight, timestamp, id) on the u-v path.
  std::pair<int, EdgeOrderKey> path_max_edge(Vertex u, Vertex v) {
    check(u);
    check(v);
    if (u == v || !connected(u, v)) throw NotConnected("vertices not connected");
    make_root(&nodes_[u]);
    access(&nodes_[v]);
    splay(&nodes_[v]);
    Node* best = nodes_[v].sub_max;
    if (!best || best->edge_id < 0) throw NotConnected("no edge on path");
    return {best->edge_id, best->key};
  }

  std::pair<Vertex, Vertex> edge_endpoints(int edge_id) {
    Node* en = edge_node(edge_id);
    return {en->u, en->v};
  }

 private:
  struct Node {
    Node* ch[2] = {nullptr, nullptr};
    Node* parent = nullptr;
    Node* path_parent = nullptr;
    bool flip = false;
    int edge_id = -2;  // -1: vertex node, >=0: edge node
    EdgeOrderKey key;
    Node* sub_max = nullptr;  // node with max key among edge nodes in splay subtree
    Vertex u = -1, v = -1;
  };

  void check(Vertex v) const {
    if (v < 0 || v >= n_) throw IndexError("vertex out of range");
  }

  Node* edge_node(int edge_id) {
    if (edge_id < 0 || edge_id >= static_cast<int>(edges_.size()) || !edges_[edge_id] ||
        edges_[edge_id]->edge_id < 0)
      throw NoSuchEdge("no such forest edge");
    return edges_[edge_id];
  }

  int alloc_edge() {
    if (!free_ids_.empty()) {
      int id = free_ids_.back();
      free_ids_.pop_back();
      *edges_[id] = Node{};
      return id;
    }
    store_.emplace_back();
    edges_.push_back(&store_.back());
    return static_cast<int>(edges_.size()) - 1;
  }

  void release_edge(int id) {
    *edges_[id] = Node{};
    edges_[id]->edge_id = -2;
    free_ids_.push_back(id);
  }

  static bool is_splay_root(Node* x) {
    return !x->parent || (x->parent->ch[0] != x && x->parent->ch[1] != x);
  }

  void push_down(Node* x) {
    if (x->flip) {
      std::swap(x->ch[0], x->ch[1]);
      for (Node* c : x->ch)
        if (c) c->flip = !c->flip;
      x->flip = false;
    }
  }

  void pull(Node* x) {
    x->sub_max = x->edge_id >= 0 ? x : nullptr;
    for (Node* c : x->ch) {
      if (!c || !c->sub_max) continue;
      if (!x->sub_max || x->sub_max->key < c->sub_max->key) x->sub_max = c->sub_max;
    }
  }

  void rotate(Node* x) {
    Node* p = x->parent;
    Node* g = p->parent;
    int dir = (p->ch[1] == x);
    Node* b = x->ch[!dir];
    if (!is_splay_root(p))
      g->ch[g->ch[1] == p] = x;
    else
      x->path_parent = p->path_parent, p->path_parent = nullptr;
    x->parent = g;
    p->ch[dir] = b;
    if (b) b->parent = p;
    x->ch[!dir] = p;
    p->parent = x;
    pull(p);
    pull(x);
  }

  void splay(Node* x) {
    // push pending flips root-down along x's access path
    static thread_local std::vector<Node*> stack;
    stack.clear();
    Node* cur = x;
    stack.push_back(cur);
    while (!is_splay_root(cur)) {
      cur = cur->parent;
      stack.push_back(cur);
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) push_down(*it);
    while (!is_splay_root(x)) {
      Node* p = x->parent;
      if (!is_splay_root(p)) {
        Node* g = p->parent;
        if ((g->ch[1] == p) == (p->ch[1] == x))
          rotate(p);
        else
          rotate(x);
      }
      rotate(x);
    }
  }

  Node* access(Node* x) {
    splay(x);
    if (x->ch[1]) {
      x->ch[1]->path_parent = x;
      x->ch[1]->parent = nullptr;
      x->ch[1] = nullptr;
      pull(x);
    }
    Node* last = x;
    while (x->path_parent) {
      Node* p = x->path_parent;
      last = p;
      splay(p);
      if (p->ch[1]) {
        p->ch[1]->path_parent = p;
        p->ch[1]->parent = nullptr;
      }
      p->ch[1] = x;
      x->parent = p;
      x->path_parent = nullptr;
      pull(p);
      splay(x);
    }
    return last;
  }

  void make_root(Node* x) {
    access(x);
    splay(x);
    x->flip = !x->flip;
    push_down(x);
  }

  Node* find_root(Node* x) {
    access(x);
    splay(x);
    while (true) {
      push_down(x);
      if (!x->ch[0]) break;
      x = x->ch[0];
    }
    splay(x);
    return x;
  }

  void detach_child(Node* p, Node* c) {
    // p was splayed to the root of its preferred path with c expected below
    push_down(p);
    if (p->ch[0] == c) {
      p->ch[0]->parent = nullptr;
      p->ch[0] = nullptr;
    } else if (p->ch[1] == c) {
      p->ch[1]->parent = nullptr;
      p->ch[1] = nullptr;
    } else {
      throw NoSuchEdge("edge not adjacent in forest");
    }
    c->path_parent = nullptr;
    pull(p);
  }

  int n_;
  std::vector<Node> nodes_;
  std::deque<Node> store_;
  std::vector<Node*> edges_;
  std::vector<int> free_ids_;
};

/// Reference path forest: adjacency lists plus a BFS walk per query.
class NaivePathForest {
 public:
  explicit NaivePathForest(int n) : n_(n), adj_(n) {}

  int link(Vertex u, Vertex v, double w, std::uint64_t timestamp, int tie_id = -1) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) throw IndexError("vertex out of range");
    if (connected(u, v)) throw CycleError("pf_link would close a cycle");
    int id;
    if (!free_ids_.empty()) {
      id = free_ids_.back();
      free_ids_.pop_back();
    } else {
      id = static_cast<int>(edges_.size());
      edges_.push_back({});
    }
    edges_[id] = {u, v, EdgeOrderKey{w, timestamp, tie_id >= 0 ? tie_id : id}, true};
    adj_[u].push_back(id);
    adj_[v].push_back(id);
    return id;
  }

  void cut(int edge_id) {
    if (edge_id < 0 || edge_id >= static_cast<int>(edges_.size()) || !edges_[edge_id].live)
      throw NoSuchEdge("no such forest edge");
    auto& e = edges_[edge_id];
    e.live = false;
    auto drop = [&](Vertex x) {
      auto& a = adj_[x];
      a.erase(std::find(a.begin(), a.end(), edge_id));
    };
    drop(e.u);
    drop(e.v);
    free_ids_.push_back(edge_id);
  }

  bool connected(Vertex u, Vertex v) {
    if (u == v) return true;
    return !walk(u, v).empty() || u == v;
  }

  std::pair<int, EdgeOrderKey> path_max_edge(Vertex u, Vertex v) {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) throw IndexError("vertex out of range");
    if (u == v) throw NotConnected("no edge on empty path");
    auto path = walk(u, v);
    if (path.empty()) throw NotConnected("vertices not connected");
    int best = path[0];
    for (int id : path)
      if (edges_[best].key < edges_[id].key) best = id;
    return {best, edges_[best].key};
  }

  std::pair<Vertex, Vertex> edge_endpoints(int edge_id) {
    if (edge_id < 0 || edge_id >= static_cast<int>(edges_.size()) || !edges_[edge_id].live)
      throw NoSuchEdge("no such forest edge");
    return {edges_[edge_id].u, edges_[edge_id].v};
  }

 private:
  struct E {
    Vertex u = -1, v = -1;
    EdgeOrderKey key;
    bool live = false;
  };

  // edge-id path from u to v, empty when disconnected
  std::vector<int> walk(Vertex u, Vertex v) {
    std::vector<int> via(n_, -1);
    std::vector<char> vis(n_, 0);
    std::queue<Vertex> q;
    q.push(u);
    vis[u] = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      if (x == v) break;
      for (int id : adj_[x]) {
        Vertex y = edges_[id].u == x ? edges_[id].v : edges_[id].u;
        if (!vis[y]) {
          vis[y] = 1;
          via[y] = id;
          q.push(y);
        }
      }
    }
    std::vector<int> path;
    if (!vis[v]) return path;
    Vertex cur = v;
    while (cur != u) {
      int id = via[cur];
      path.push_back(id);
      cur = edges_[id].u == cur ? edges_[id].v : edges_[id].u;
    }
    return path;
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<E> edges_;
  std::vector<int> free_ids_;
};

#ifdef DYNST_NAIVE_PATH_FOREST
using PathForest = NaivePathForest;
#else
using PathForest = SplayPathForest;
#endif

}  // namespace dynst

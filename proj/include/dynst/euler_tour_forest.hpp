#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynst/errors.hpp"
#include "dynst/graph.hpp"

namespace dynst {

/// Euler tour forest over n vertices, backed by randomized-priority sequence
/// trees. Every vertex owns a sparse, portal-sorted key list; internal nodes
/// aggregate per-portal minima (with the witnessing vertex), so the minimum
/// key of a whole component is read off the root of its tour.
class EulerTourForest {
 public:
  struct KeyEntry {
    int portal;
    double dist;
    Vertex witness;
  };

  explicit EulerTourForest(int n, std::uint64_t seed = 0x9e3779b97f4a7c15ULL)
      : n_(n), rng_(seed) {
    loops_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) {
      Node* nd = new_node(v);
      loops_[v] = nd;
    }
  }

  ~EulerTourForest() {
    for (Node* nd : all_) delete nd;
  }
  EulerTourForest(const EulerTourForest&) = delete;
  EulerTourForest& operator=(const EulerTourForest&) = delete;

  int n() const { return n_; }

  bool connected(Vertex u, Vertex v) const { return root_of(loops_[u]) == root_of(loops_[v]); }

  bool has_edge(Vertex u, Vertex v) const { return arcs_.count(pair_key(u, v)) > 0; }

  void link(Vertex u, Vertex v) {
    check_vertex(u);
    check_vertex(v);
    if (connected(u, v)) throw CycleError("link would close a cycle");
    Node* su = reroot(u);
    Node* sv = reroot(v);
    Node* auv = new_node(-1);
    Node* avu = new_node(-1);
    arcs_[pair_key(u, v)] = {auv, avu};
    // tour(u) ++ [u->v] ++ tour(v) ++ [v->u]
    Node* t = join(su, auv);
    t = join(t, sv);
    join(t, avu);
  }

  void cut(Vertex u, Vertex v) {
    auto it = arcs_.find(pair_key(u, v));
    if (it == arcs_.end()) throw NoSuchEdge("no such forest edge");
    auto [a, b] = it->second;
    size_t pa = position(a), pb = position(b);
    if (pa > pb) std::swap(a, b);
    // sequence = A ++ [a] ++ M ++ [b] ++ C ; M and A++C are the components
    auto [left, rest] = split(root_of(a), position(a));
    auto [amid, rest2] = split(rest, 1);
    auto [mid, rest3] = split(rest2, position(b));
    auto [bmid, tail] = split(rest3, 1);
    (void)amid;
    (void)bmid;
    join(left, tail);
    (void)mid;
    free_node(a);
    free_node(b);
    arcs_.erase(it);
  }

  void set_key(Vertex v, int portal, double dist) {
    check_vertex(v);
    if (dist < 0.0) throw DomainError("key distance must be nonnegative");
    Node* nd = loops_[v];
    auto& keys = nd->own;
    auto it = std::lower_bound(keys.begin(), keys.end(), portal,
                               [](const KeyEntry& e, int p) { return e.portal < p; });
    if (it != keys.end() && it->portal == portal)
      it->dist = dist;
    else
      keys.insert(it, KeyEntry{portal, dist, v});
    for (Node* cur = nd; cur; cur = cur->parent) pull(cur);
  }

  std::optional<std::pair<double, Vertex>> component_min(Vertex v, int portal) const {
    check_vertex(v);
    Node* r = root_of(loops_[v]);
    const auto& agg = r->agg;
    auto it = std::lower_bound(agg.begin(), agg.end(), portal,
                               [](const KeyEntry& e, int p) { return e.portal < p; });
    if (it == agg.end() || it->portal != portal) return std::nullopt;
    return std::make_pair(it->dist, it->witness);
  }

  /// Per-portal minima over v's whole component (sorted by portal id).
  const std::vector<KeyEntry>& component_keys(Vertex v) const {
    check_vertex(v);
    return root_of(loops_[v])->agg;
  }

  /// Opaque component handle, stable until the next link/cut.
  const void* component_id(Vertex v) const { return root_of(loops_[v]); }

  int component_size(Vertex v) const {
    // every vertex contributes one self loop; a component with k vertices
    // has k loops and 2(k-1) arcs
    return (root_of(loops_[v])->sz + 2) / 3;
  }

  std::vector<Vertex> component_vertices(Vertex v) const {
    check_vertex(v);
    std::vector<Vertex> out;
    std::vector<Node*> stack{root_of(loops_[v])};
    while (!stack.empty()) {
      Node* t = stack.back();
      stack.pop_back();
      if (t->loop_vertex >= 0) out.push_back(t->loop_vertex);
      if (t->left) stack.push_back(t->left);
      if (t->right) stack.push_back(t->right);
    }
    return out;
  }

  int height(Vertex v) const {
    int h = 0;
    for (Node* cur = loops_[v]; cur; cur = cur->parent) ++h;
    return h;
  }

  int max_height() const {
    int h = 0;
    for (Vertex v = 0; v < n_; ++v) h = std::max(h, height(v));
    return h;
  }

 private:
  struct Node {
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
    std::uint64_t prio = 0;
    int sz = 1;
    Vertex loop_vertex = -1;  // >= 0 iff self-loop node
    std::vector<KeyEntry> own;
    std::vector<KeyEntry> agg;
  };

  void check_vertex(Vertex v) const {
    if (v < 0 || v >= n_) throw IndexError("vertex out of range");
  }

  Node* new_node(Vertex loop_vertex) {
    Node* nd;
    if (!free_.empty()) {
      nd = free_.back();
      free_.pop_back();
      *nd = Node{};
    } else {
      nd = new Node();
      all_.push_back(nd);
    }
    nd->prio = rng_();
    nd->loop_vertex = loop_vertex;
    pull(nd);
    return nd;
  }

  void free_node(Node* nd) { free_.push_back(nd); }

  static void merge_keys(std::vector<KeyEntry>& out, const std::vector<KeyEntry>& a,
                         const std::vector<KeyEntry>& b) {
    out.clear();
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i].portal < b[j].portal)
        out.push_back(a[i++]);
      else if (b[j].portal < a[i].portal)
        out.push_back(b[j++]);
      else {
        const KeyEntry& x = a[i];
        const KeyEntry& y = b[j];
        bool xa = x.dist < y.dist || (x.dist == y.dist && x.witness <= y.witness);
        out.push_back(xa ? x : y);
        ++i;
        ++j;
      }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
  }

  void pull(Node* t) {
    t->sz = 1 + (t->left ? t->left->sz : 0) + (t->right ? t->right->sz : 0);
    scratch_.clear();
    if (t->left && t->right) {
      merge_keys(scratch_, t->left->agg, t->right->agg);
      merge_keys(t->agg, scratch_, t->own);
    } else if (t->left) {
      merge_keys(t->agg, t->left->agg, t->own);
    } else if (t->right) {
      merge_keys(t->agg, t->right->agg, t->own);
    } else {
      t->agg = t->own;
    }
  }

  Node* root_of(Node* t) const {
    while (t->parent) t = t->parent;
    return t;
  }

  size_t position(Node* t) const {
    size_t pos = t->left ? t->left->sz : 0;
    for (Node* cur = t; cur->parent; cur = cur->parent)
      if (cur->parent->right == cur)
        pos += 1 + (cur->parent->left ? cur->parent->left->sz : 0);
    return pos;
  }

  Node* join(Node* a, Node* b) {
    if (!a) return b;
    if (!b) return a;
    if (a->prio > b->prio) {
      Node* r = join(a->right, b);
      a->right = r;
      if (r) r->parent = a;
      pull(a);
      return a;
    }
    Node* l = join(a, b->left);
    b->left = l;
    if (l) l->parent = b;
    pull(b);
    return b;
  }

  // first k nodes in .first
  std::pair<Node*, Node*> split(Node* t, size_t k) {
    if (!t) return {nullptr, nullptr};
    size_t lsz = t->left ? t->left->sz : 0;
    if (k <= lsz) {
      auto [a, b] = split(t->left, k);
      t->left = b;
      if (b) b->parent = t;
      if (a) a->parent = nullptr;
      pull(t);
      return {a, t};
    }
    auto [a, b] = split(t->right, k - lsz - 1);
    t->right = a;
    if (a) a->parent = t;
    if (b) b->parent = nullptr;
    pull(t);
    return {t, b};
  }

  // Rotate the tour so it starts at v's self loop; returns the new root.
  Node* reroot(Vertex v) {
    Node* nd = loops_[v];
    Node* r = root_of(nd);
    size_t pos = position(nd);
    if (pos == 0) return r;
    auto [a, b] = split(r, pos);
    return join(b, a);
  }

  int n_;
  std::mt19937_64 rng_;
  std::vector<Node*> loops_;
  std::unordered_map<std::uint64_t, std::pair<Node*, Node*>> arcs_;
  std::vector<Node*> all_;
  std::vector<Node*> free_;
  std::vector<KeyEntry> scratch_;
};

}  // namespace dynst

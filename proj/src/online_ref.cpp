#include "dynst/online_ref.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace dynst {

SchemeParams SchemeParams::incremental(double tau, double mu) {
  SchemeParams p;
  p.tau = tau;
  p.sigma = tau / 2.0;
  p.eps = 0.0;
  p.eta = 0;  // no nonterminals in the incremental flow
  p.good_c = 2.0 * mu * (1.0 + tau) * (1.0 + tau);
  return p;
}

SchemeParams SchemeParams::decremental(double eps) {
  SchemeParams p;
  p.tau = 0.0;
  p.sigma = 0.0;
  p.eps = eps;
  p.eta = 1 + static_cast<int>(std::ceil(1.0 / eps));
  p.good_c = 0.0;
  return p;
}

SchemeParams SchemeParams::fully_dynamic(double eps, double tau, double mu) {
  SchemeParams p;
  p.tau = tau;
  p.sigma = tau;
  p.eps = eps;
  p.eta = 1 + static_cast<int>(std::ceil(1.0 / eps));
  p.good_c = 2.0 * mu * (1.0 + tau) * (1.0 + tau);
  return p;
}

ReferenceScheme::ReferenceScheme(const NearMetricView& view, Mode mode, SchemeParams params)
    : view_(&view), mode_(mode), params_(params), n_(view.oracle().n()), adj_(n_) {
  terminal_.assign(n_, 0);
  in_tree_.assign(n_, 0);
  leveled_ = view.discretized();
  derived_ = mode != Mode::incremental;
  if (leveled_) {
    levels_ = LevelIndex{view.base(), params_.tau, view.oracle().alpha(), n_};
    global_min_level_ = levels_.level_of(min_positive_weight());
  }
}

std::vector<Edge> ReferenceScheme::tree_edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < n_; ++u)
    for (const auto& [v, e] : adj_[u])
      if (u < v) out.push_back({u, v, e.w});
  return out;
}

void ReferenceScheme::link(Vertex u, Vertex v, double w) {
  long lvl = leveled_ ? levels_.level_of(w) : 0;
  adj_[u][v] = TreeEdge{w, lvl};
  adj_[v][u] = TreeEdge{w, lvl};
  cost_ += w;
}

void ReferenceScheme::cut(Vertex u, Vertex v) {
  cost_ -= adj_[u][v].w;
  adj_[u].erase(v);
  adj_[v].erase(u);
}

// Derived modes only: rebuild the tree as the unique spanning forest of
// the mirror edge set under (weight, canonical pair) -- the same order the
// accelerated engines' dynamic forest uses.
void ReferenceScheme::recompute_tree() {
  for (auto& a : adj_) a.clear();
  cost_ = 0.0;
  struct Cand {
    double w;
    Vertex a, b;
  };
  std::vector<Cand> cands;
  cands.reserve(h_edges_.size());
  for (const auto& [key, w] : h_edges_) {
    Vertex a = static_cast<Vertex>(key >> 32);
    Vertex b = static_cast<Vertex>(key & 0xffffffffu);
    if (!in_tree_[a] || !in_tree_[b]) continue;
    cands.push_back({w, a, b});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.w != y.w) return x.w < y.w;
    return pair_key(x.a, x.b) < pair_key(y.a, y.b);
  });
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Cand& c : cands)
    if (find(c.a) != find(c.b)) {
      parent[find(c.a)] = find(c.b);
      link(c.a, c.b, c.w);
    }
  int root = -1;
  for (Vertex v = 0; v < n_; ++v)
    if (in_tree_[v]) {
      if (root < 0) root = find(v);
      if (find(v) != root) throw EngineError("mirror edge set left the tree disconnected");
    }
}

std::vector<Vertex> ReferenceScheme::path(Vertex u, Vertex v) const {
  std::vector<Vertex> via(n_, -2);
  std::queue<Vertex> q;
  q.push(u);
  via[u] = -1;
  while (!q.empty()) {
    Vertex x = q.front();
    q.pop();
    if (x == v) break;
    for (const auto& [y, e] : adj_[x])
      if (via[y] == -2) {
        via[y] = x;
        q.push(y);
      }
  }
  std::vector<Vertex> out;
  if (via[v] == -2) return out;
  for (Vertex cur = v; cur != -1; cur = via[cur]) out.push_back(cur);
  std::reverse(out.begin(), out.end());
  return out;
}

std::pair<std::pair<Vertex, Vertex>, double> ReferenceScheme::path_max_edge(Vertex u,
                                                                            Vertex v) const {
  auto p = path(u, v);
  if (p.size() < 2) throw NotConnected("no tree path");
  std::pair<Vertex, Vertex> best{-1, -1};
  double best_w = -1.0;
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    Vertex a = p[i], b = p[i + 1];
    double w = adj_[a].at(b).w;
    // ties resolve toward the larger pair key, the maximum under the
    // (weight, pair) order the engines' forests use
    if (w > best_w || (w == best_w && pair_key(a, b) > pair_key(best.first, best.second))) {
      best = {a, b};
      best_w = w;
    }
  }
  return {best, best_w};
}

std::vector<std::vector<Vertex>> ReferenceScheme::level_components(long max_level) const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Vertex u = 0; u < n_; ++u)
    for (const auto& [v, e] : adj_[u])
      if (u < v && (!leveled_ || e.level <= max_level)) parent[find(u)] = find(v);
  std::vector<std::vector<Vertex>> groups;
  std::vector<int> group_of(n_, -1);
  for (Vertex v = 0; v < n_; ++v) {
    if (!in_tree_[v]) continue;
    int r = find(v);
    if (group_of[r] < 0) {
      group_of[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[r]].push_back(v);
  }
  return groups;
}

void ReferenceScheme::note_h_edge(Vertex u, Vertex v, double w) {
  auto key = pair_key(u, v);
  auto it = h_edges_.find(key);
  if (it == h_edges_.end() || w < it->second) h_edges_[key] = w;
}

long ReferenceScheme::max_tree_level() const {
  long best = global_min_level_;
  for (Vertex u = 0; u < n_; ++u)
    for (const auto& [v, e] : adj_[u])
      if (u < v) best = std::max(best, e.level);
  return best;
}

double ReferenceScheme::min_positive_weight() const {
  // lower bound for levels: the view never reports below the cheapest
  // stored oracle entry
  double best = kInf;
  for (Vertex v = 0; v < n_; ++v)
    for (const auto& pd : view_->oracle().portals(v))
      if (pd.d > 0.0) best = std::min(best, pd.d);
  for (int pid = 0; pid < view_->oracle().piece_count(); ++pid)
    for (const Edge& e : view_->oracle().piece(pid).edges)
      if (e.w > 0.0) best = std::min(best, e.w);
  return best < kInf ? best : 1.0;
}

void ReferenceScheme::sweep(Vertex v, long lo, long hi, std::vector<ChangeRecord>& log,
                            std::set<Vertex>* degree_dropped) {
  const GenericOracle& oracle = view_->oracle();
  long iterations = 0;
  const long cap = 10LL * n_ * (hi - lo + 2) + 100;
  for (long j = lo; j <= hi; ++j) {
    while (true) {
      if (++iterations > cap) throw EngineError("replacement sweep exceeded its budget");
      auto groups = level_components(j);
      int my_group = -1;
      for (size_t gi = 0; gi < groups.size(); ++gi)
        for (Vertex x : groups[gi])
          if (x == v) my_group = static_cast<int>(gi);
      // nearest tree vertex outside v's level-j component, by raw oracle
      // distance then vertex id (matching the oracle layer's tie rule)
      double best_raw = kInf;
      Vertex other_end = -1;
      for (size_t gi = 0; gi < groups.size(); ++gi) {
        if (static_cast<int>(gi) == my_group) continue;
        for (Vertex w : groups[gi]) {
          double d = oracle.distance(v, w);
          if (d < best_raw || (d == best_raw && w < other_end)) {
            best_raw = d;
            other_end = w;
          }
        }
      }
      if (other_end < 0) break;
      if (levels_.level_of(best_raw) > j) break;
      double w_new = view_->round_up(best_raw);
      auto [out_edge, out_w] = path_max_edge(v, other_end);
      note_h_edge(v, other_end, w_new);
      if (derived_) {
        recompute_tree();
      } else {
        cut(out_edge.first, out_edge.second);
        link(v, other_end, w_new);
      }
      ++replacements_;
      if (degree_dropped) {
        degree_dropped->insert(out_edge.first);
        degree_dropped->insert(out_edge.second);
      }
      ChangeRecord rec;
      rec.kind = ChangeRecord::Kind::replace;
      rec.u = v;
      rec.v = other_end;
      rec.w = w_new;
      rec.level = leveled_ ? levels_.level_of(w_new) : 0;
      rec.out_u = out_edge.first;
      rec.out_v = out_edge.second;
      rec.out_w = out_w;
      log.push_back(rec);
    }
  }
}

void ReferenceScheme::init_terminals(const std::vector<Vertex>& terminals) {
  if (mode_ == Mode::incremental)
    throw ModeError("incremental runs start from an empty terminal set");
  if (terminals.empty()) return;
  for (Vertex v : terminals) {
    terminal_[v] = 1;
    in_tree_[v] = 1;
  }
  if (terminals.size() >= 2) {
    struct Cand {
      double w;
      Vertex a, b;
    };
    std::vector<Cand> cands;
    for (size_t i = 0; i < terminals.size(); ++i)
      for (size_t j = i + 1; j < terminals.size(); ++j) {
        Vertex a = std::min(terminals[i], terminals[j]);
        Vertex b = std::max(terminals[i], terminals[j]);
        cands.push_back({edge_weight(a, b), a, b});
      }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      if (x.w != y.w) return x.w < y.w;
      return pair_key(x.a, x.b) < pair_key(y.a, y.b);
    });
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Cand& c : cands) {
      if (find(c.a) == find(c.b)) continue;
      parent[find(c.a)] = find(c.b);
      note_h_edge(c.a, c.b, c.w);
    }
  }
  // standing edges between mutually piece-visible terminals
  const GenericOracle& oracle = view_->oracle();
  for (Vertex u : terminals)
    for (int pid : oracle.pieces(u))
      for (const auto& [x, d] : oracle.piece_sssp(pid, u))
        if (x != u && terminal_[x]) note_h_edge(u, x, view_->round_up(d));
  recompute_tree();
  max_cost_seen_ = cost_;
}

std::vector<ChangeRecord> ReferenceScheme::add_terminal(Vertex v) {
  if (mode_ == Mode::decremental) throw ModeError("decremental runs only remove terminals");
  if (terminal_[v]) throw AlreadyTerminal("vertex is already a terminal");
  std::vector<ChangeRecord> log;
  terminal_[v] = 1;
  log.push_back({ChangeRecord::Kind::mark, v, -1, 0, 0, -1, -1, 0});
  if (in_tree_[v]) {
    max_cost_seen_ = std::max(max_cost_seen_, cost_);
    return log;
  }
  bool empty_tree = std::none_of(in_tree_.begin(), in_tree_.end(), [](char c) { return c; });
  in_tree_[v] = 1;
  if (empty_tree) {
    max_cost_seen_ = std::max(max_cost_seen_, cost_);
    return log;
  }
  // cheapest connection, raw distance then vertex id
  const GenericOracle& oracle = view_->oracle();
  double best_raw = kInf;
  Vertex attach = -1;
  for (Vertex u = 0; u < n_; ++u) {
    if (!in_tree_[u] || u == v) continue;
    double d = oracle.distance(v, u);
    if (d < best_raw || (d == best_raw && u < attach)) {
      best_raw = d;
      attach = u;
    }
  }
  double w0 = view_->round_up(best_raw);
  note_h_edge(v, attach, w0);
  if (derived_)
    recompute_tree();
  else
    link(v, attach, w0);
  log.push_back({ChangeRecord::Kind::connect, v, attach, w0,
                 leveled_ ? levels_.level_of(w0) : 0, -1, -1, 0});

  if (mode_ == Mode::incremental) {
    long lo = levels_.window_lo(max_cost_seen_, global_min_level_);
    long hi = lo + levels_.window_size() - 1;
    sweep(v, lo, hi, log, nullptr);
  } else {
    std::set<Vertex> dropped;
    long hi = std::max(max_tree_level(), levels_.level_of(w0));
    sweep(v, global_min_level_, hi, log, &dropped);
    for (Vertex u : dropped) remove_eta(u, log);
    if (in_tree_[v]) {
      bool noted = false;
      for (int pid : oracle.pieces(v))
        for (const auto& [x, d] : oracle.piece_sssp(pid, v))
          if (x != v && in_tree_[x]) {
            note_h_edge(v, x, view_->round_up(d));
            noted = true;
          }
      if (noted) recompute_tree();
    }
  }
  max_cost_seen_ = std::max(max_cost_seen_, cost_);
  return log;
}

std::vector<ChangeRecord> ReferenceScheme::remove_terminal(Vertex v) {
  if (mode_ == Mode::incremental) throw ModeError("incremental runs only add terminals");
  if (!terminal_[v]) throw NotATerminal("vertex is not a terminal");
  std::vector<ChangeRecord> log;
  terminal_[v] = 0;
  log.push_back({ChangeRecord::Kind::unmark, v, -1, 0, 0, -1, -1, 0});
  remove_eta(v, log);
  max_cost_seen_ = std::max(max_cost_seen_, cost_);
  return log;
}

void ReferenceScheme::remove_eta(Vertex v, std::vector<ChangeRecord>& log) {
  if (terminal_[v] || !in_tree_[v]) return;
  if (static_cast<int>(adj_[v].size()) > params_.eta) return;
  std::vector<Vertex> neighbors;
  for (const auto& [u, e] : adj_[v]) neighbors.push_back(u);

  // split components of the tree with v taken out, before any reconnection
  std::vector<std::vector<Vertex>> groups;
  {
    std::vector<int> group_of(n_, -1);
    for (Vertex s = 0; s < n_; ++s) {
      if (!in_tree_[s] || s == v || group_of[s] >= 0) continue;
      int gi = static_cast<int>(groups.size());
      groups.emplace_back();
      std::vector<Vertex> stack{s};
      group_of[s] = gi;
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        groups[gi].push_back(x);
        for (const auto& [y, e] : adj_[x])
          if (y != v && group_of[y] < 0) {
            group_of[y] = gi;
            stack.push_back(y);
          }
      }
    }
  }

  const int k = static_cast<int>(groups.size());
  if (k >= 2) {
    // fresh portal-routed candidates, mirroring the oracle layer: per portal
    // take each group's nearest member, emit nearest-group-to-others edges,
    // then keep a spanning subset of them
    const GenericOracle& oracle = view_->oracle();
    struct Cand {
      double d;  // rounded, for ordering
      Vertex wa, wb;
      int ga, gb;
    };
    std::vector<Cand> fresh;
    for (int p = 0; p < oracle.portal_count(); ++p) {
      std::vector<std::tuple<double, Vertex, int>> present;
      for (int gi = 0; gi < k; ++gi) {
        double best = kInf;
        Vertex wit = -1;
        for (Vertex x : groups[gi]) {
          auto d = oracle.portal_dist(x, p);
          if (d && (*d < best || (*d == best && x < wit))) {
            best = *d;
            wit = x;
          }
        }
        if (wit >= 0) present.push_back({best, wit, gi});
      }
      if (present.size() < 2) continue;
      auto nearest = *std::min_element(present.begin(), present.end());
      for (const auto& [d, w, gi] : present) {
        if (gi == std::get<2>(nearest)) continue;
        double raw = std::get<0>(nearest) + d;
        fresh.push_back({view_->round_up(raw), std::get<1>(nearest), w,
                         std::get<2>(nearest), gi});
      }
    }
    std::sort(fresh.begin(), fresh.end(), [](const Cand& a, const Cand& b) {
      if (a.d != b.d) return a.d < b.d;
      return pair_key(a.wa, a.wb) < pair_key(b.wa, b.wb);
    });
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Cand& c : fresh) {
      int a = find(c.ga), b = find(c.gb);
      if (a == b) continue;
      parent[a] = b;
      note_h_edge(c.wa, c.wb, c.d);
      log.push_back({ChangeRecord::Kind::reconnect, c.wa, c.wb, c.d,
                     leveled_ ? levels_.level_of(c.d) : 0, -1, -1, 0});
    }
  }

  // drop v and its standing edges, then rebuild
  in_tree_[v] = 0;
  for (auto it = h_edges_.begin(); it != h_edges_.end();) {
    Vertex a = static_cast<Vertex>(it->first >> 32);
    Vertex b = static_cast<Vertex>(it->first & 0xffffffffu);
    if (a == v || b == v)
      it = h_edges_.erase(it);
    else
      ++it;
  }
  recompute_tree();
  for (Vertex u : neighbors) remove_eta(u, log);
}

ReplacementFlags ReferenceScheme::classify_replacement(Vertex eu, Vertex ev, Vertex tu,
                                                       Vertex tv, double theta,
                                                       double c) const {
  if (!in_tree_[eu] || !in_tree_[ev]) throw NotInTree("candidate endpoints must span the tree");
  auto it = adj_[tu].find(tv);
  if (it == adj_[tu].end()) throw NotInTree("(tu, tv) is not a tree edge");
  ReplacementFlags flags;
  auto p = path(eu, ev);
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if ((p[i] == tu && p[i + 1] == tv) || (p[i] == tv && p[i + 1] == tu)) flags.is_friend = true;
  double d_e = edge_weight(eu, ev);
  double d_t = it->second.w;
  flags.heavy = d_t > theta * cost_ / n_;
  flags.efficient = (1.0 + theta) * d_e < d_t;
  bool heavy_over_c = c > 0.0 && d_t > (theta / c) * cost_ / n_;
  flags.good = flags.efficient && heavy_over_c;
  return flags;
}

bool ReferenceScheme::has_efficient_replacement(double theta) const {
  for (Vertex u = 0; u < n_; ++u) {
    if (!in_tree_[u]) continue;
    for (Vertex w = u + 1; w < n_; ++w) {
      if (!in_tree_[w] || adj_[u].count(w)) continue;
      auto [edge, max_w] = path_max_edge(u, w);
      (void)edge;
      if ((1.0 + theta) * edge_weight(u, w) < max_w) return true;
    }
  }
  return false;
}

bool ReferenceScheme::has_good_replacement(double theta, double c) const {
  for (Vertex u = 0; u < n_; ++u) {
    if (!in_tree_[u]) continue;
    for (Vertex w = u + 1; w < n_; ++w) {
      if (!in_tree_[w] || adj_[u].count(w)) continue;
      auto [edge, max_w] = path_max_edge(u, w);
      (void)edge;
      if ((1.0 + theta) * edge_weight(u, w) < max_w && max_w > (theta / c) * cost_ / n_)
        return true;
    }
  }
  return false;
}

}  // namespace dynst

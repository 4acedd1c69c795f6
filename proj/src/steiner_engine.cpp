#include "dynst/steiner_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

namespace dynst {

namespace {

struct PrimCand {
  double d;
  Vertex tree_end, new_end;
  bool operator<(const PrimCand& o) const {
    if (d != o.d) return d > o.d;  // min-heap via priority_queue
    return pair_key(tree_end, new_end) > pair_key(o.tree_end, o.new_end);
  }
};

}  // namespace

Tree query_steiner(const GenericOracle& oracle, const std::vector<Vertex>& terminals) {
  Tree tree;
  std::vector<Vertex> terms = terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.size() <= 1) return tree;
  const int n = oracle.n();
  std::vector<char> is_term(n, 0), in_tree(n, 0);
  for (Vertex t : terms) is_term[t] = 1;

  // piece side: best piece route from each outside terminal to the tree
  std::vector<double> best_piece(n, kInf);
  std::vector<Vertex> best_piece_wit(n, -1);
  std::priority_queue<PrimCand> piece_heap;

  // portal side: per portal, nearest tree member + outstanding terminals
  const int pnum = oracle.portal_count();
  std::vector<double> tree_dist(pnum, kInf);
  std::vector<Vertex> tree_wit(pnum, -1);
  std::vector<std::set<std::pair<double, Vertex>>> cluster_left(pnum);
  struct PortalCand {
    double d;
    Vertex tree_end, new_end;
    int portal;
    bool operator<(const PortalCand& o) const {
      if (d != o.d) return d > o.d;
      return pair_key(tree_end, new_end) > pair_key(o.tree_end, o.new_end);
    }
  };
  std::priority_queue<PortalCand> portal_heap;

  for (Vertex t : terms)
    for (const auto& pd : oracle.portals(t)) cluster_left[pd.portal].insert({pd.d, t});

  auto push_portal_cand = [&](int p) {
    if (tree_wit[p] < 0 || cluster_left[p].empty()) return;
    auto [d, x] = *cluster_left[p].begin();
    portal_heap.push({tree_dist[p] + d, tree_wit[p], x, p});
  };

  auto attach = [&](Vertex x) {
    in_tree[x] = 1;
    for (const auto& pd : oracle.portals(x)) {
      int p = pd.portal;
      cluster_left[p].erase({pd.d, x});
      if (pd.d < tree_dist[p] || (pd.d == tree_dist[p] && x < tree_wit[p])) {
        tree_dist[p] = pd.d;
        tree_wit[p] = x;
      }
      push_portal_cand(p);
    }
    for (int pid : oracle.pieces(x))
      for (const auto& [y, dy] : oracle.piece_sssp(pid, x)) {
        if (in_tree[y] || !is_term[y]) continue;
        if (dy < best_piece[y] ||
            (dy == best_piece[y] && x < best_piece_wit[y])) {
          best_piece[y] = dy;
          best_piece_wit[y] = x;
          piece_heap.push({dy, x, y});
        }
      }
  };

  attach(terms.front());
  for (size_t round = 1; round < terms.size(); ++round) {
    bool have_piece = false, have_portal = false;
    while (!piece_heap.empty()) {
      const PrimCand& c = piece_heap.top();
      if (in_tree[c.new_end] || c.d != best_piece[c.new_end] ||
          c.tree_end != best_piece_wit[c.new_end])
        piece_heap.pop();
      else {
        have_piece = true;
        break;
      }
    }
    while (!portal_heap.empty()) {
      const PortalCand& c = portal_heap.top();
      bool stale = in_tree[c.new_end] || c.tree_end != tree_wit[c.portal] ||
                   cluster_left[c.portal].empty() ||
                   cluster_left[c.portal].begin()->second != c.new_end ||
                   c.d != tree_dist[c.portal] + cluster_left[c.portal].begin()->first;
      if (stale) {
        int p = c.portal;
        portal_heap.pop();
        push_portal_cand(p);
      } else {
        have_portal = true;
        break;
      }
    }
    if (!have_piece && !have_portal)
      throw DisconnectedError("terminals are not connected through the oracle");
    PrimCand chosen{kInf, -1, -1};
    if (have_piece) chosen = piece_heap.top();
    if (have_portal) {
      const PortalCand& pc = portal_heap.top();
      if (!have_piece || pc.d < chosen.d ||
          (pc.d == chosen.d &&
           pair_key(pc.tree_end, pc.new_end) < pair_key(chosen.tree_end, chosen.new_end)))
        chosen = PrimCand{pc.d, pc.tree_end, pc.new_end};
    }
    tree.edges.push_back({chosen.tree_end, chosen.new_end, chosen.d});
    tree.cost += chosen.d;
    attach(chosen.new_end);
  }
  return tree;
}

SteinerEngine::SteinerEngine(const WeightedGraph& g, const GenericOracle& oracle, Mode mode,
                             SchemeParams params, double base)
    : graph_(&g),
      oracle_(&oracle),
      mode_(mode),
      params_(params),
      view_(oracle, base),
      terminal_(g.n(), 0),
      in_tree_(g.n(), 0) {
  leveled_ = base > 0.0;
  if (leveled_) {
    levels_ = LevelIndex{base, params_.tau, oracle.alpha(), g.n()};
    global_min_level_ = levels_.level_of(g.min_edge_weight());
  }
}

SteinerEngine SteinerEngine::decremental(const WeightedGraph& g, const GenericOracle& oracle,
                                         const std::vector<Vertex>& terminals, double eps) {
  SteinerEngine e(g, oracle, Mode::decremental, SchemeParams::decremental(eps), 0.0);
  e.msf_ = std::make_unique<DynMsf>(g.n(), DynMsf::Engine::hierarchical,
                                    DynMsf::TieMode::canonical_pair);
  std::vector<Vertex> terms = terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::uint64_t ts = 0;
  for (Vertex t : terms) {
    e.terminal_[t] = 1;
    e.in_tree_[t] = 1;
    ++e.terminal_count_;
  }
  Tree t0 = query_steiner(oracle, terms);
  for (const Edge& edge : t0.edges) e.msf_->insert(edge.u, edge.v, edge.w, ++ts);
  for (Vertex u : terms)
    for (int pid : oracle.pieces(u))
      for (const auto& [x, d] : oracle.piece_sssp(pid, u))
        if (x > u && e.terminal_[x]) e.msf_->insert(u, x, d, ++ts);
  for (int id : e.msf_->forest()) e.cost_ += e.msf_->edge(id).w;

  std::vector<Edge> forest;
  for (int id : e.msf_->forest()) {
    const MsfEdge& me = e.msf_->edge(id);
    forest.push_back({me.u, me.v, me.w});
  }
  e.states_.emplace(0L, ColorState::fully_dynamic(oracle, forest));
  ColorState& cs = e.states_.begin()->second;
  for (Vertex v : terms)
    if (!cs.is_active(cs.color_of(v))) cs.activate(cs.color_of(v));
  return e;
}

SteinerEngine SteinerEngine::incremental(const WeightedGraph& g, const GenericOracle& oracle,
                                         double tau) {
  SteinerEngine e(g, oracle, Mode::incremental,
                  SchemeParams::incremental(tau, oracle.alpha()), 1.0 + tau / 2.0);
  int h = e.levels_.window_size();
  for (int i = 0; i < h; ++i)
    e.layers_.push_back({e.global_min_level_ + i, ColorState::incremental(oracle)});
  e.inc_adj_.resize(g.n());
  e.inc_pf_ = std::make_unique<PathForest>(g.n());
  return e;
}

SteinerEngine SteinerEngine::fully_dynamic(const WeightedGraph& g, const GenericOracle& oracle,
                                           double eps, double tau) {
  SteinerEngine e(g, oracle, Mode::fully_dynamic,
                  SchemeParams::fully_dynamic(eps, tau, oracle.alpha()), 1.0 + tau);
  e.msf_ = std::make_unique<DynMsf>(g.n(), DynMsf::Engine::hierarchical,
                                    DynMsf::TieMode::canonical_pair);
  e.states_.emplace(e.global_min_level_, ColorState::fully_dynamic(oracle));
  return e;
}

SteinerEngine SteinerEngine::online_greedy(const WeightedGraph& g, const GenericOracle& oracle) {
  SteinerEngine e(g, oracle, Mode::online_greedy, SchemeParams{}, 0.0);
  e.layers_.push_back({0, ColorState::incremental(oracle)});
  return e;
}

std::vector<Edge> SteinerEngine::tree_edges() const {
  std::vector<Edge> out;
  if (mode_ == Mode::online_greedy) return greedy_edges_;
  if (mode_ == Mode::incremental) {
    for (Vertex u = 0; u < graph_->n(); ++u)
      for (const auto& [v, w] : inc_adj_[u])
        if (u < v) out.push_back({u, v, w});
    return out;
  }
  for (int id : msf_->forest()) {
    const MsfEdge& e = msf_->edge(id);
    out.push_back({e.u, e.v, e.w});
  }
  return out;
}

long long SteinerEngine::oracle_ops_total() const {
  auto sum = [](const ColorState::Counters& c) {
    return c.activates + c.deactivates + c.merges + c.splits + c.distance_queries +
           c.nearest_queries;
  };
  long long total = 0;
  for (const auto& [lvl, st] : states_) total += sum(st.counters());
  for (const auto& layer : layers_) total += sum(layer.state.counters());
  return total;
}

ColorState::Counters SteinerEngine::greedy_counters() const {
  return layers_.empty() ? ColorState::Counters{} : layers_[0].state.counters();
}

ColorState& SteinerEngine::top_state() { return states_.rbegin()->second; }

void SteinerEngine::ensure_level_states(long level) {
  long cur = states_.rbegin()->first;
  while (cur < level) {
    ++cur;
    // a level-L layer reflects only the tree edges of level at most L
    std::vector<Edge> forest;
    for (int id : msf_->forest()) {
      const MsfEdge& e = msf_->edge(id);
      if (level_of(e.w) <= cur) forest.push_back({e.u, e.v, e.w});
    }
    auto it = states_.emplace(cur, ColorState::fully_dynamic(*oracle_, forest)).first;
    ColorState& cs = it->second;
    // active colors mirror the sibling states: any component holding a tree
    // vertex, including one that is mid-removal but still wired up
    for (Vertex v = 0; v < graph_->n(); ++v)
      if ((in_tree_[v] || msf_->tree_degree(v) > 0) && !cs.is_active(cs.color_of(v)))
        cs.activate(cs.color_of(v));
  }
}

void SteinerEngine::apply_delta(const MsfDelta& delta) {
  for (int id : delta.removed) {
    const MsfEdge& e = msf_->edge_record(id);
    long lvl = leveled_ ? level_of(e.w) : 0;
    for (auto& [state_level, cs] : states_) {
      if (leveled_ && state_level < lvl) continue;
      if (cs.has_tree_edge(e.u, e.v)) cs.split(cs.color_of(e.u), e.u, e.v);
    }
    cost_ -= e.w;
    if (leveled_) tree_levels_.erase(tree_levels_.find(lvl));
  }
  for (int id : delta.added) {
    const MsfEdge& e = msf_->edge_record(id);
    long lvl = leveled_ ? level_of(e.w) : 0;
    if (leveled_) ensure_level_states(lvl);
    for (auto& [state_level, cs] : states_) {
      if (leveled_ && state_level < lvl) continue;
      int cu = cs.color_of(e.u), cv = cs.color_of(e.v);
      if (cu != cv) cs.merge(cu, cv, e.u, e.v);
    }
    cost_ += e.w;
    if (leveled_) tree_levels_.insert(lvl);
  }
}

void SteinerEngine::insert_aux_edge(Vertex u, Vertex v, double w,
                                    std::vector<ChangeRecord>* log,
                                    ChangeRecord::Kind kind) {
  auto res = msf_->insert(u, v, w, ++aux_ts_);
  apply_delta(res.delta);
  if (log) {
    ChangeRecord rec;
    rec.kind = kind;
    rec.u = u;
    rec.v = v;
    rec.w = w;
    rec.level = leveled_ ? level_of(w) : 0;
    log->push_back(rec);
  }
}

void SteinerEngine::activate_everywhere(Vertex v) {
  for (auto& [lvl, cs] : states_)
    if (!cs.is_active(cs.color_of(v))) cs.activate(cs.color_of(v));
}

void SteinerEngine::deactivate_everywhere(Vertex v) {
  for (auto& [lvl, cs] : states_)
    if (cs.is_active(cs.color_of(v))) cs.deactivate(cs.color_of(v));
}

std::pair<double, Vertex> SteinerEngine::nearest_tree_vertex(Vertex v) {
  auto ans = top_state().nearest(v, 1);
  if (ans.empty()) throw EngineError("no active tree vertex to connect to");
  return {ans[0].dist, ans[0].witness};
}

long SteinerEngine::max_tree_level() const {
  return tree_levels_.empty() ? global_min_level_ : *tree_levels_.rbegin();
}

void SteinerEngine::fd_sweep(Vertex v, long lo, long hi, std::vector<ChangeRecord>& log,
                             std::set<Vertex>& dropped) {
  ensure_level_states(hi);
  long iterations = 0;
  const long cap = 10LL * graph_->n() * (hi - lo + 2) + 100;
  for (long j = lo; j <= hi; ++j) {
    ColorState& cs = states_.at(j);
    while (true) {
      if (++iterations > cap) throw EngineError("replacement sweep exceeded its budget");
      auto near2 = cs.nearest(v, 2);
      if (near2.size() < 2) break;
      double raw = near2[1].dist;
      Vertex other_end = near2[1].witness;
      if (level_of(raw) > j) break;
      double w_new = round_w(raw);
      auto [out_id, out_key] = msf_->path_max(v, other_end);
      const MsfEdge out_edge = msf_->edge_record(out_id);
      auto res = msf_->insert(v, other_end, w_new, ++aux_ts_);
      if (res.delta.removed.size() != 1 || res.delta.removed[0] != out_id)
        throw EngineError("forest replacement disagreed with the path maximum");
      apply_delta(res.delta);
      dropped.insert(out_edge.u);
      dropped.insert(out_edge.v);
      ++replacements_;
      ChangeRecord rec;
      rec.kind = ChangeRecord::Kind::replace;
      rec.u = v;
      rec.v = other_end;
      rec.w = w_new;
      rec.level = level_of(w_new);
      rec.out_u = out_edge.u;
      rec.out_v = out_edge.v;
      rec.out_w = out_edge.w;
      log.push_back(rec);
      (void)out_key;
    }
  }
}

void SteinerEngine::remove_eta(Vertex v, std::vector<ChangeRecord>& log) {
  if (terminal_[v] || !in_tree_[v]) return;
  if (msf_->tree_degree(v) > params_.eta) return;

  std::vector<int> tree_edge_ids;
  std::vector<Vertex> neighbors;
  for (int id : msf_->incident_edges(v))
    if (msf_->is_tree_edge(id)) {
      tree_edge_ids.push_back(id);
      const MsfEdge& e = msf_->edge(id);
      neighbors.push_back(e.u == v ? e.v : e.u);
    }
  std::sort(neighbors.begin(), neighbors.end());

  // detach v in every color layer, then retire its singleton color
  for (int id : tree_edge_ids) {
    const MsfEdge& e = msf_->edge(id);
    long lvl = leveled_ ? level_of(e.w) : 0;
    for (auto& [state_level, cs] : states_) {
      if (leveled_ && state_level < lvl) continue;
      if (cs.has_tree_edge(e.u, e.v)) cs.split(cs.color_of(e.u), e.u, e.v);
    }
  }
  in_tree_[v] = 0;

  // cheapest portal routes between the split components
  if (neighbors.size() >= 2) {
    ColorState& top = top_state();
    std::vector<int> colors;
    for (Vertex u : neighbors) colors.push_back(top.color_of(u));
    auto edges = top.portal_reconnect_mst(colors, true, leveled_ ? view_.base() : 0.0);
    for (const auto& ce : edges)
      insert_aux_edge(ce.endpoint_a, ce.endpoint_b, round_w(ce.dist), &log,
                      ChangeRecord::Kind::reconnect);
  }

  // deleting v's edges may transiently reconnect through v, so its color
  // stays active until the forest has fully let go of it
  for (int id : msf_->incident_edges(v)) {
    auto delta = msf_->erase(id);
    apply_delta(delta);
  }
  deactivate_everywhere(v);
  for (Vertex u : neighbors) remove_eta(u, log);
}

std::vector<ChangeRecord> SteinerEngine::add_terminal(Vertex v) {
  if (v < 0 || v >= graph_->n()) throw IndexError("vertex out of range");
  if (mode_ == Mode::decremental) throw ModeError("decremental engine only removes terminals");
  if (terminal_[v]) throw AlreadyTerminal("vertex is already a terminal");
  std::vector<ChangeRecord> log;
  log.push_back({ChangeRecord::Kind::mark, v, -1, 0, 0, -1, -1, 0});
  terminal_[v] = 1;
  ++terminal_count_;

  if (mode_ == Mode::online_greedy) {
    ColorState& cs = layers_[0].state;
    if (greedy_color_ < 0) {
      cs.activate(cs.color_of(v));
      greedy_color_ = cs.color_of(v);
      in_tree_[v] = 1;
      return log;
    }
    auto ans = cs.distance(v, greedy_color_);
    if (!ans) throw EngineError("greedy attach found no terminal");
    cs.activate(cs.color_of(v));
    greedy_color_ = cs.merge(greedy_color_, cs.color_of(v));
    greedy_edges_.push_back({v, ans->second, ans->first});
    cost_ += ans->first;
    in_tree_[v] = 1;
    log.push_back({ChangeRecord::Kind::connect, v, ans->second, ans->first, 0, -1, -1, 0});
    return log;
  }

  if (mode_ == Mode::incremental) {
    bool empty_tree = terminal_count_ == 1;
    double raw0 = 0.0;
    Vertex attach = -1;
    if (!empty_tree) {
      auto ans = layers_.back().state.nearest(v, 1);
      if (ans.empty()) throw EngineError("no active terminal to connect to");
      raw0 = ans[0].dist;
      attach = ans[0].witness;
    }
    for (auto& layer : layers_) layer.state.activate(layer.state.color_of(v));
    in_tree_[v] = 1;
    if (!empty_tree) {
      double w0 = round_w(raw0);
      inc_link(v, attach, w0);
      log.push_back({ChangeRecord::Kind::connect, v, attach, w0, level_of(w0), -1, -1, 0});
      inc_apply_layer_merges(v, attach, level_of(w0));
      inc_sweep(v, log);
    }
    max_cost_seen_ = std::max(max_cost_seen_, cost_);
    inc_slide_window();
    return log;
  }

  // fully dynamic
  if (in_tree_[v]) return log;  // a retained nonterminal turned terminal again
  bool tree_empty = std::none_of(in_tree_.begin(), in_tree_.end(), [](char c) { return c; });
  if (tree_empty) {
    in_tree_[v] = 1;
    activate_everywhere(v);
    return log;
  }
  auto [raw0, attach] = nearest_tree_vertex(v);
  activate_everywhere(v);
  in_tree_[v] = 1;
  double w0 = round_w(raw0);
  insert_aux_edge(v, attach, w0, &log, ChangeRecord::Kind::connect);
  long hi = std::max(max_tree_level(), level_of(w0));
  std::set<Vertex> dropped;
  fd_sweep(v, global_min_level_, hi, log, dropped);
  for (Vertex u : dropped) remove_eta(u, log);
  if (in_tree_[v]) {
    for (int pid : oracle_->pieces(v))
      for (const auto& [x, d] : oracle_->piece_sssp(pid, v))
        if (x != v && in_tree_[x])
          insert_aux_edge(v, x, round_w(d), nullptr, ChangeRecord::Kind::connect);
  }
  return log;
}

std::vector<ChangeRecord> SteinerEngine::remove_terminal(Vertex v) {
  if (v < 0 || v >= graph_->n()) throw IndexError("vertex out of range");
  if (mode_ == Mode::incremental || mode_ == Mode::online_greedy)
    throw ModeError("this engine only adds terminals");
  if (!terminal_[v]) throw NotATerminal("vertex is not a terminal");
  std::vector<ChangeRecord> log;
  log.push_back({ChangeRecord::Kind::unmark, v, -1, 0, 0, -1, -1, 0});
  terminal_[v] = 0;
  --terminal_count_;
  remove_eta(v, log);
  return log;
}

void SteinerEngine::inc_link(Vertex u, Vertex v, double w) {
  inc_adj_[u][v] = w;
  inc_adj_[v][u] = w;
  cost_ += w;
  long lvl = level_of(w);
  inc_edges_by_level_.insert({lvl, {std::min(u, v), std::max(u, v)}});
  inc_pf_ids_[pair_key(u, v)] = inc_pf_->link(u, v, w, pair_key(u, v));
}

void SteinerEngine::inc_cut(Vertex u, Vertex v) {
  double w = inc_adj_[u][v];
  cost_ -= w;
  inc_adj_[u].erase(v);
  inc_adj_[v].erase(u);
  long lvl = level_of(w);
  auto range = inc_edges_by_level_.equal_range(lvl);
  for (auto it = range.first; it != range.second; ++it)
    if (it->second == std::make_pair(std::min(u, v), std::max(u, v))) {
      inc_edges_by_level_.erase(it);
      break;
    }
  inc_pf_->cut(inc_pf_ids_.at(pair_key(u, v)));
  inc_pf_ids_.erase(pair_key(u, v));
}

void SteinerEngine::inc_apply_layer_merges(Vertex a, Vertex b, long edge_level) {
  for (auto& layer : layers_) {
    if (layer.level < edge_level) continue;
    int ca = layer.state.color_of(a), cb = layer.state.color_of(b);
    if (ca != cb) layer.state.merge(ca, cb);
  }
}

void SteinerEngine::inc_sweep(Vertex v, std::vector<ChangeRecord>& log) {
  long iterations = 0;
  const long cap = 10LL * graph_->n() * (static_cast<long>(layers_.size()) + 2) + 100;
  for (auto& layer : layers_) {
    long j = layer.level;
    while (true) {
      if (++iterations > cap) throw EngineError("replacement sweep exceeded its budget");
      auto near2 = layer.state.nearest(v, 2);
      if (near2.size() < 2) break;
      double raw = near2[1].dist;
      Vertex other_end = near2[1].witness;
      if (level_of(raw) > j) break;
      double w_new = round_w(raw);
      auto [pf_id, out_key] = inc_pf_->path_max_edge(v, other_end);
      auto [ou, ov] = inc_pf_->edge_endpoints(pf_id);
      inc_cut(ou, ov);
      inc_link(v, other_end, w_new);
      inc_apply_layer_merges(v, other_end, level_of(w_new));
      ++replacements_;
      ChangeRecord rec;
      rec.kind = ChangeRecord::Kind::replace;
      rec.u = v;
      rec.v = other_end;
      rec.w = w_new;
      rec.level = level_of(w_new);
      rec.out_u = ou;
      rec.out_v = ov;
      rec.out_w = out_key.w;
      log.push_back(rec);
    }
  }
}

void SteinerEngine::inc_slide_window() {
  long lo_target = levels_.window_lo(max_cost_seen_, global_min_level_);
  while (layers_.front().level < lo_target) {
    Layer layer = std::move(layers_.front());
    layers_.erase(layers_.begin());
    long new_level = layers_.back().level + 1;
    // catch the recycled layer up with every current tree edge in range
    for (auto it = inc_edges_by_level_.upper_bound(layer.level);
         it != inc_edges_by_level_.end() && it->first <= new_level; ++it) {
      auto [a, b] = it->second;
      int ca = layer.state.color_of(a), cb = layer.state.color_of(b);
      if (ca != cb) layer.state.merge(ca, cb);
    }
    layer.level = new_level;
    layers_.push_back(std::move(layer));
  }
}

bool SteinerEngine::check_layer_consistency() const {
  auto check_partition = [&](const ColorState& cs, long level) {
    std::vector<int> parent(graph_->n());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Edge& e : tree_edges())
      if (!leveled_ || level_of(e.w) <= level) parent[find(e.u)] = find(e.v);
    for (Vertex u = 0; u < graph_->n(); ++u) {
      if (!in_tree_[u]) continue;
      if (!cs.is_active(cs.color_of(u))) return false;
      for (Vertex w = u + 1; w < graph_->n(); ++w) {
        if (!in_tree_[w]) continue;
        bool same_comp = find(u) == find(w);
        bool same_color = cs.color_of(u) == cs.color_of(w);
        if (same_comp != same_color) return false;
      }
    }
    return true;
  };
  for (const auto& [lvl, cs] : states_)
    if (!check_partition(cs, lvl)) return false;
  if (mode_ == Mode::incremental)
    for (const auto& layer : layers_)
      if (!check_partition(layer.state, layer.level)) return false;
  return true;
}

bool SteinerEngine::check_activity(FILE* out) const {
  bool ok = true;
  for (const auto& [lvl, cs] : states_) {
    for (Vertex v = 0; v < graph_->n(); ++v) {
      bool should = in_tree_[v] || msf_->tree_degree(v) > 0;
      bool is = cs.is_active(cs.color_of(v));
      if (should != is) {
        fprintf(out, "state %ld vertex %d: active=%d expected=%d (in_tree=%d deg=%d)\n",
                lvl, v, (int)is, (int)should, (int)in_tree_[v], msf_->tree_degree(v));
        ok = false;
      }
    }
  }
  return ok;
}

std::vector<std::tuple<Vertex, Vertex, double>> SteinerEngine::aux_edges() const {
  std::vector<std::tuple<Vertex, Vertex, double>> out;
  if (!msf_) return out;
  for (Vertex v = 0; v < graph_->n(); ++v)
    for (int id : msf_->incident_edges(v)) {
      const MsfEdge& e = msf_->edge(id);
      if (e.u == v) out.push_back({e.u, e.v, e.w});
    }
  return out;
}

}  // namespace dynst

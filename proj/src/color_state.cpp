#include "dynst/color_state.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace dynst {

ColorState::ColorState(const GenericOracle& oracle, Mode mode)
    : oracle_(&oracle), mode_(mode), n_(oracle.n()) {
  heaps_.resize(oracle.portal_count());
  active_handle_.resize(oracle.portal_count());
}

ColorState ColorState::incremental(const GenericOracle& oracle) {
  ColorState cs(oracle, Mode::incremental);
  const int n = oracle.n();
  cs.color_of_.resize(n);
  std::iota(cs.color_of_.begin(), cs.color_of_.end(), 0);
  cs.color_alive_.assign(n, 1);
  cs.active_.assign(n, 0);
  cs.next_color_ = n;
  cs.member_portals_.resize(n);
  cs.inactive_min_.resize(oracle.portal_count());
  for (Vertex v = 0; v < n; ++v)
    for (const auto& pd : oracle.portals(v)) {
      cs.member_portals_[v].push_back({v, pd.portal});
      cs.inactive_min_[pd.portal].emplace(v, HeapKey{pd.d, v});
    }
  return cs;
}

ColorState ColorState::fully_dynamic(const GenericOracle& oracle,
                                     const std::vector<Edge>& initial_forest) {
  ColorState cs(oracle, Mode::fully_dynamic);
  const int n = oracle.n();
  cs.etf_ = std::make_unique<EulerTourForest>(n);
  for (Vertex v = 0; v < n; ++v)
    for (const auto& pd : oracle.portals(v)) cs.etf_->set_key(v, pd.portal, pd.d);
  for (const Edge& e : initial_forest) cs.etf_->link(e.u, e.v);
  cs.next_color_ = 0;
  cs.repr_.clear();
  for (Vertex v = 0; v < n; ++v) {
    const void* root = cs.etf_->component_id(v);
    if (!cs.root_color_.count(root)) {
      int c = cs.next_color_++;
      cs.root_color_[root] = c;
      cs.repr_.push_back(v);
      cs.color_alive_.push_back(1);
      cs.active_.push_back(0);
    }
  }
  return cs;
}

void ColorState::check_color(int color) const {
  if (color < 0 || color >= static_cast<int>(color_alive_.size()) || !color_alive_[color])
    throw NoSuchColor("unknown or retired color");
}

int ColorState::color_of(Vertex v) const {
  if (v < 0 || v >= n_) throw IndexError("vertex out of range");
  if (mode_ == Mode::incremental) return color_of_[v];
  return root_color_.at(etf_->component_id(v));
}

bool ColorState::is_active(int color) const {
  check_color(color);
  return active_[color];
}

bool ColorState::has_tree_edge(Vertex u, Vertex v) const {
  if (mode_ != Mode::fully_dynamic) throw ModeError("tree edges exist only in fully dynamic mode");
  return etf_->has_edge(u, v);
}

void ColorState::heap_insert(int portal, int color, double d, Vertex witness) {
  int h = heaps_[portal].push(HeapKey{d, witness}, color);
  active_handle_[portal][color] = h;
}

void ColorState::heap_erase(int portal, int color) {
  auto it = active_handle_[portal].find(color);
  if (it == active_handle_[portal].end()) return;
  heaps_[portal].erase(it->second);
  active_handle_[portal].erase(it);
}

std::optional<ColorState::HeapKey> ColorState::portal_color_min(int portal, int color) const {
  auto it = active_handle_[portal].find(color);
  if (it == active_handle_[portal].end()) return std::nullopt;
  return heaps_[portal].get(it->second).key;
}

void ColorState::activate(int color) {
  check_color(color);
  if (active_[color]) return;
  ++counters_.activates;
  active_[color] = 1;
  if (mode_ == Mode::incremental) {
    for (const auto& [v, p] : member_portals_[color]) {
      auto it = inactive_min_[p].find(color);
      if (it == inactive_min_[p].end()) continue;  // already moved via another member
      heap_insert(p, color, it->second.first, it->second.second);
      inactive_min_[p].erase(it);
    }
  } else {
    for (const auto& entry : etf_->component_keys(repr_[color]))
      heap_insert(entry.portal, color, entry.dist, entry.witness);
  }
}

void ColorState::deactivate(int color) {
  if (mode_ != Mode::fully_dynamic)
    throw ModeError("deactivate is only available in fully dynamic mode");
  check_color(color);
  if (!active_[color]) return;
  ++counters_.deactivates;
  active_[color] = 0;
  for (const auto& entry : etf_->component_keys(repr_[color])) heap_erase(entry.portal, color);
}

int ColorState::merge(int i, int j, Vertex u, Vertex v) {
  check_color(i);
  check_color(j);
  if (i == j) throw DomainError("cannot merge a color with itself");
  if (!active_[i] || !active_[j]) throw InactiveColor("merge requires two active colors");
  ++counters_.merges;

  if (mode_ == Mode::incremental) {
    int small = i, big = j;
    if (member_portals_[small].size() > member_portals_[big].size() ||
        (member_portals_[small].size() == member_portals_[big].size() && small < big))
      std::swap(small, big);
    for (const auto& [v2, p] : member_portals_[small]) {
      if (color_of_[v2] != big) {
        color_of_[v2] = big;
        ++counters_.relabels;
      }
      auto it = active_handle_[p].find(small);
      if (it == active_handle_[p].end()) continue;  // this portal already handled
      HeapKey small_key = heaps_[p].get(it->second).key;
      auto itb = active_handle_[p].find(big);
      if (itb != active_handle_[p].end()) {
        if (small_key < heaps_[p].get(itb->second).key)
          heaps_[p].update_key(itb->second, small_key);
        heaps_[p].erase(it->second);
        active_handle_[p].erase(small);
      } else {
        heaps_[p].erase(it->second);
        active_handle_[p].erase(small);
        heap_insert(p, big, small_key.first, small_key.second);
      }
    }
    auto& dst = member_portals_[big];
    auto& src = member_portals_[small];
    dst.insert(dst.end(), src.begin(), src.end());
    src.clear();
    src.shrink_to_fit();
    color_alive_[small] = 0;
    active_[small] = 0;
    return big;
  }

  if (u < 0 || v < 0) throw WrongColorEndpoint("fully dynamic merge needs tree endpoints");
  if (color_of(u) != i) throw WrongColorEndpoint("u is not in the first color");
  if (color_of(v) != j) throw WrongColorEndpoint("v is not in the second color");
  const void* root_a = etf_->component_id(u);
  const void* root_b = etf_->component_id(v);
  etf_->link(u, v);
  int survivor = std::min(i, j);
  int retired = std::max(i, j);
  root_color_.erase(root_a);
  root_color_.erase(root_b);
  root_color_[etf_->component_id(u)] = survivor;
  repr_[survivor] = u;
  color_alive_[retired] = 0;
  active_[retired] = 0;
  for (const auto& entry : etf_->component_keys(u)) {
    heap_erase(entry.portal, i);
    heap_erase(entry.portal, j);
    heap_insert(entry.portal, survivor, entry.dist, entry.witness);
  }
  return survivor;
}

std::pair<int, int> ColorState::split(int color, Vertex u, Vertex v) {
  if (mode_ != Mode::fully_dynamic)
    throw ModeError("split is only available in fully dynamic mode");
  check_color(color);
  if (color_of(u) != color || color_of(v) != color || !etf_->has_edge(u, v))
    throw NoSuchTreeEdge("(u, v) is not an edge of this color's tree");
  ++counters_.splits;
  bool was_active = active_[color];
  const void* old_root = etf_->component_id(u);
  std::vector<EulerTourForest::KeyEntry> old_keys;
  if (was_active) old_keys = etf_->component_keys(u);
  etf_->cut(u, v);
  int side_u = next_color_++;
  int side_v = next_color_++;
  color_alive_.push_back(1);
  color_alive_.push_back(1);
  active_.push_back(was_active);
  active_.push_back(was_active);
  repr_.push_back(u);
  repr_.push_back(v);
  root_color_.erase(old_root);
  root_color_[etf_->component_id(u)] = side_u;
  root_color_[etf_->component_id(v)] = side_v;
  color_alive_[color] = 0;
  active_[color] = 0;
  if (was_active) {
    for (const auto& entry : old_keys) heap_erase(entry.portal, color);
    for (const auto& entry : etf_->component_keys(u))
      heap_insert(entry.portal, side_u, entry.dist, entry.witness);
    for (const auto& entry : etf_->component_keys(v))
      heap_insert(entry.portal, side_v, entry.dist, entry.witness);
  }
  return {side_u, side_v};
}

std::optional<std::pair<double, Vertex>> ColorState::piece_nearest(Vertex v, int color) {
  std::optional<std::pair<double, Vertex>> best;
  for (int pid : oracle_->pieces(v))
    for (const auto& [w, d] : oracle_->piece_sssp(pid, v)) {
      if (color_of(w) != color) continue;
      if (!best || d < best->first || (d == best->first && w < best->second)) best = {{d, w}};
    }
  return best;
}

std::optional<std::pair<double, Vertex>> ColorState::distance(Vertex v, int color) {
  check_color(color);
  ++counters_.distance_queries;
  if (!active_[color]) return std::nullopt;
  std::optional<std::pair<double, Vertex>> best = piece_nearest(v, color);
  for (const auto& pd : oracle_->portals(v)) {
    auto entry = portal_color_min(pd.portal, color);
    if (!entry) continue;
    double d = pd.d + entry->first;
    Vertex w = entry->second;
    if (!best || d < best->first || (d == best->first && w < best->second)) best = {{d, w}};
  }
  return best;
}

std::vector<ColorAnswer> ColorState::nearest(Vertex v, int k) {
  ++counters_.nearest_queries;
  std::vector<ColorAnswer> out;
  std::vector<int> excluded;
  for (int round = 0; round < k; ++round) {
    std::optional<ColorAnswer> best;
    auto consider = [&](double d, Vertex w, int c) {
      if (!best || d < best->dist || (d == best->dist && w < best->witness) ||
          (d == best->dist && w == best->witness && c < best->color))
        best = ColorAnswer{d, w, c};
    };
    for (int pid : oracle_->pieces(v))
      for (const auto& [w, d] : oracle_->piece_sssp(pid, v)) {
        int c = color_of(w);
        if (!active_[c]) continue;
        if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) continue;
        consider(d, w, c);
      }
    for (const auto& pd : oracle_->portals(v)) {
      for (const auto& entry : heaps_[pd.portal].k_smallest(round + 1)) {
        int c = entry.value;
        if (std::find(excluded.begin(), excluded.end(), c) != excluded.end()) continue;
        consider(pd.d + entry.key.first, entry.key.second, c);
        break;  // ascending order: first non-excluded entry is this portal's best
      }
    }
    if (!best) break;
    out.push_back(*best);
    excluded.push_back(best->color);
  }
  return out;
}

std::vector<ColorEdge> ColorState::portal_reconnect_mst(const std::vector<int>& colors,
                                                        bool allow_partial,
                                                        double rounding_base) {
  std::vector<ColorEdge> result;
  const int k = static_cast<int>(colors.size());
  if (k < 2) return result;
  std::unordered_map<int, int> index;
  for (int i = 0; i < k; ++i) {
    check_color(colors[i]);
    if (!active_[colors[i]]) throw InactiveColor("reconnect requires active colors");
    index[colors[i]] = i;
  }
  struct Cand {
    double d;
    Vertex wa, wb;
    int ia, ib;
  };
  std::vector<Cand> cands;
  for (int p = 0; p < oracle_->portal_count(); ++p) {
    std::vector<std::tuple<double, Vertex, int>> present;  // (N, witness, color index)
    for (int i = 0; i < k; ++i) {
      auto entry = portal_color_min(p, colors[i]);
      if (entry) present.push_back({entry->first, entry->second, i});
    }
    if (present.size() < 2) continue;
    auto nearest = *std::min_element(present.begin(), present.end());
    for (const auto& [d, w, i] : present) {
      if (i == std::get<2>(nearest)) continue;
      cands.push_back({std::get<0>(nearest) + d, std::get<1>(nearest), w,
                       std::get<2>(nearest), i});
    }
  }
  auto ranked = [&](double d) { return rounding_base > 1.0 ? discretize(d, rounding_base) : d; };
  std::sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
    double ra = ranked(a.d), rb = ranked(b.d);
    if (ra != rb) return ra < rb;
    return pair_key(a.wa, a.wb) < pair_key(b.wa, b.wb);
  });
  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int joined = 0;
  for (const Cand& c : cands) {
    int a = find(c.ia), b = find(c.ib);
    if (a == b) continue;
    parent[a] = b;
    ++joined;
    result.push_back({colors[c.ia], colors[c.ib], c.wa, c.wb, c.d});
    if (joined == k - 1) break;
  }
  if (joined != k - 1 && !allow_partial)
    throw PortalDisconnected("some colors share no portal route");
  return result;
}

}  // namespace dynst

#include "doctest.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "dynst/dyn_msf.hpp"

using namespace dynst;

namespace {

// From-scratch Kruskal oracle, independent of the DynMsf internals.
struct EdgeRec {
  Vertex u, v;
  double w;
  std::uint64_t ts;
};

std::set<int> kruskal_ids(int n, const std::map<int, EdgeRec>& live) {
  std::vector<std::pair<int, EdgeRec>> edges(live.begin(), live.end());
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.w, a.second.ts, a.first) <
           std::tie(b.second.w, b.second.ts, b.first);
  });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::set<int> out;
  for (const auto& [id, e] : edges) {
    int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      out.insert(id);
    }
  }
  return out;
}

std::set<int> forest_set(DynMsf& m) {
  auto f = m.forest();
  return std::set<int>(f.begin(), f.end());
}

}  // namespace

TEST_CASE("dyn msf small examples") {
  DynMsf first(3);
  auto r0 = first.insert(0, 1, 5.0, 1);
  CHECK(r0.delta.added == std::vector<int>{r0.id});
  CHECK(r0.delta.removed.empty());

  // triangle: third edge is heaviest on its cycle, no forest change
  DynMsf m(3);
  m.insert(0, 1, 1.0, 1);
  m.insert(1, 2, 1.0, 2);
  auto r2 = m.insert(0, 2, 3.0, 3);
  CHECK(r2.delta.empty());

  // cheap edge evicts the weight-1 edge with the larger timestamp
  auto r3 = m.insert(0, 2, 0.5, 4);
  CHECK(r3.delta.added == std::vector<int>{r3.id});
  REQUIRE(r3.delta.removed.size() == 1);
  CHECK(m.edge(r3.delta.removed[0]).w == 1.0);
  CHECK(m.edge(r3.delta.removed[0]).u == 1);  // the (1,2) edge, timestamp 2
  CHECK(m.edge(r3.delta.removed[0]).v == 2);

  CHECK_THROWS_AS(m.insert(0, 0, 1.0, 5), DomainError);
  CHECK_THROWS_AS(m.insert(0, 9, 1.0, 6), DomainError);
}

TEST_CASE("dyn msf tie-break prefers older equal-weight edges") {
  DynMsf m(3);
  m.insert(0, 1, 1.0, 1);
  m.insert(1, 2, 1.0, 2);
  auto r = m.insert(0, 2, 1.0, 3);
  CHECK(r.delta.empty());  // newest equal-weight edge loses
}

TEST_CASE("dyn msf deletion examples") {
  DynMsf m(3);
  int e01 = m.insert(0, 1, 1.0, 1).id;
  m.insert(1, 2, 1.0, 2);
  int nonforest = m.insert(0, 2, 3.0, 3).id;

  SUBCASE("deleting a non-forest edge is a no-op") {
    auto d = m.erase(nonforest);
    CHECK(d.empty());
  }
  SUBCASE("deleting a forest edge pulls in the replacement") {
    auto d = m.erase(e01);
    REQUIRE(d.removed.size() == 1);
    REQUIRE(d.added.size() == 1);
    CHECK(m.edge(d.added[0]).w == 3.0);
    CHECK(m.connected(0, 1));
  }
  SUBCASE("deleting a bridge splits the component") {
    m.erase(nonforest);
    auto d = m.erase(e01);
    CHECK(d.removed.size() == 1);
    CHECK(d.added.empty());
    CHECK(!m.connected(0, 1));
  }
  SUBCASE("double delete throws") {
    m.erase(e01);
    CHECK_THROWS_AS(m.erase(e01), NoSuchEdge);
  }
}

TEST_CASE("dyn msf forest and component weight queries") {
  DynMsf m(4);
  m.insert(0, 1, 1.0, 1);
  m.insert(1, 2, 1.0, 2);
  m.insert(0, 2, 3.0, 3);
  CHECK(forest_set(m).size() == 2);
  CHECK(m.component_weight(0) == doctest::Approx(2.0));
  CHECK(m.component_weight(3) == 0.0);

  DynMsf empty(4);
  CHECK(empty.forest().empty());
  CHECK(empty.component_weight(2) == 0.0);
}

TEST_CASE("dyn msf differential against from-scratch Kruskal (both engines)") {
  for (auto engine : {DynMsf::Engine::hierarchical, DynMsf::Engine::kruskal}) {
    std::mt19937 rng(99);
    const int n = 100;
    DynMsf m(n, engine);
    std::map<int, EdgeRec> live;
    std::uint64_t ts = 0;
    int checked = 0;
    for (int step = 0; step < 10000; ++step) {
      bool do_insert = live.empty() || std::uniform_int_distribution<int>(0, 9)(rng) < 6;
      if (do_insert) {
        int u = std::uniform_int_distribution<int>(0, n - 1)(rng);
        int v = std::uniform_int_distribution<int>(0, n - 1)(rng);
        if (u == v) continue;
        double w = std::uniform_int_distribution<int>(1, 20)(rng) * 0.25;  // forces ties
        ++ts;
        auto before = forest_set(m);
        auto res = m.insert(u, v, w, ts);
        live[res.id] = {u, v, w, ts};
        // delta soundness: applying the delta to the previous forest gives the new forest
        auto after = before;
        for (int rid : res.delta.removed) after.erase(rid);
        for (int aid : res.delta.added) after.insert(aid);
        CHECK(after == forest_set(m));
      } else {
        auto it = live.begin();
        std::advance(it, std::uniform_int_distribution<int>(0, (int)live.size() - 1)(rng));
        auto before = forest_set(m);
        auto delta = m.erase(it->first);
        auto after = before;
        for (int rid : delta.removed) after.erase(rid);
        for (int aid : delta.added) after.insert(aid);
        CHECK(after == forest_set(m));
        CHECK(delta.removed.size() <= 1);
        live.erase(it);
      }
      auto want = kruskal_ids(n, live);
      auto got = forest_set(m);
      REQUIRE(got == want);
      if (engine == DynMsf::Engine::hierarchical && step % 500 == 0)
        REQUIRE(m.check_levels(stderr));
      ++checked;
    }
    CHECK(checked > 9000);
  }
}

TEST_CASE("dyn msf canonical tie mode is insertion-order independent") {
  // same edge multiset inserted in two different orders
  std::vector<EdgeRec> edges = {
      {0, 1, 1.0, 0}, {1, 2, 1.0, 0}, {2, 3, 1.0, 0}, {3, 0, 1.0, 0}, {0, 2, 1.0, 0}};
  auto run = [&](const std::vector<int>& order) {
    DynMsf m(4, DynMsf::Engine::hierarchical, DynMsf::TieMode::canonical_pair);
    std::uint64_t ts = 0;
    std::vector<std::uint64_t> keys;
    for (int i : order) m.insert(edges[i].u, edges[i].v, edges[i].w, ++ts);
    for (int id : m.forest()) {
      const auto& e = m.edge(id);
      keys.push_back(pair_key(e.u, e.v));
    }
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  auto k1 = run({0, 1, 2, 3, 4});
  auto k2 = run({4, 3, 2, 1, 0});
  CHECK(k1 == k2);
}

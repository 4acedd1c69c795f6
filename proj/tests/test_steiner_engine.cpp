#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dynst/oracle_build.hpp"
#include "dynst/steiner_engine.hpp"
#include "test_util.hpp"

using namespace dynst;
using testutil::random_connected;
using testutil::random_subset;

namespace {

std::set<std::uint64_t> edge_pairs(const std::vector<Edge>& edges) {
  std::set<std::uint64_t> out;
  for (const Edge& e : edges) out.insert(pair_key(e.u, e.v));
  return out;
}

// replays a trace on the engine and the brute-force reference side by side,
// checking per-operation cost (and tree equality when asked)
struct Differential {
  const WeightedGraph& g;
  const GenericOracle& oracle;
  bool check_edges = true;

  void run_fully_dynamic(double eps, double tau, const std::vector<std::pair<bool, Vertex>>& ops) {
    NearMetricView view(oracle, 1.0 + tau);
    auto eng = SteinerEngine::fully_dynamic(g, oracle, eps, tau);
    ReferenceScheme ref(view, ReferenceScheme::Mode::fully_dynamic,
                        SchemeParams::fully_dynamic(eps, tau, oracle.alpha()));
    for (auto [add, v] : ops) {
      if (add) {
        eng.add_terminal(v);
        ref.add_terminal(v);
      } else {
        eng.remove_terminal(v);
        ref.remove_terminal(v);
      }
      REQUIRE(eng.tree_cost() == doctest::Approx(ref.tree_cost()).epsilon(1e-12));
      if (check_edges) REQUIRE(edge_pairs(eng.tree_edges()) == edge_pairs(ref.tree_edges()));
    }
  }

  void run_incremental(double tau, const std::vector<Vertex>& adds) {
    NearMetricView view(oracle, 1.0 + tau / 2.0);
    auto eng = SteinerEngine::incremental(g, oracle, tau);
    ReferenceScheme ref(view, ReferenceScheme::Mode::incremental,
                        SchemeParams::incremental(tau, oracle.alpha()));
    for (Vertex v : adds) {
      eng.add_terminal(v);
      ref.add_terminal(v);
      REQUIRE(eng.tree_cost() == doctest::Approx(ref.tree_cost()).epsilon(1e-12));
      if (check_edges) REQUIRE(edge_pairs(eng.tree_edges()) == edge_pairs(ref.tree_edges()));
    }
  }

  void run_decremental(double eps, const std::vector<Vertex>& initial,
                       const std::vector<Vertex>& removals) {
    NearMetricView view(oracle);
    auto eng = SteinerEngine::decremental(g, oracle, initial, eps);
    ReferenceScheme ref(view, ReferenceScheme::Mode::decremental,
                        SchemeParams::decremental(eps));
    ref.init_terminals(initial);
    REQUIRE(eng.tree_cost() == doctest::Approx(ref.tree_cost()).epsilon(1e-12));
    for (Vertex v : removals) {
      eng.remove_terminal(v);
      ref.remove_terminal(v);
      REQUIRE(eng.tree_cost() == doctest::Approx(ref.tree_cost()).epsilon(1e-12));
      if (check_edges) REQUIRE(edge_pairs(eng.tree_edges()) == edge_pairs(ref.tree_edges()));
    }
  }
};

std::vector<std::pair<bool, Vertex>> random_trace(int n, int ops, std::mt19937& rng,
                                                  double add_bias = 0.6) {
  std::vector<std::pair<bool, Vertex>> trace;
  std::set<Vertex> terms;
  for (int i = 0; i < ops; ++i) {
    bool add = terms.empty() ||
               (std::uniform_real_distribution<double>(0, 1)(rng) < add_bias &&
                static_cast<int>(terms.size()) < n);
    if (add) {
      Vertex v;
      do {
        v = std::uniform_int_distribution<int>(0, n - 1)(rng);
      } while (terms.count(v));
      terms.insert(v);
      trace.push_back({true, v});
    } else {
      auto it = terms.begin();
      std::advance(it, std::uniform_int_distribution<int>(0, (int)terms.size() - 1)(rng));
      trace.push_back({false, *it});
      terms.erase(it);
    }
  }
  return trace;
}

}  // namespace

TEST_CASE("query steiner basics") {
  auto p3 = load_graph_string("3 2\n0 1 1.0\n1 2 1.0\n");
  auto oracle = build_exact_oracle(p3);
  CHECK(query_steiner(oracle, {1}).edges.empty());
  auto t = query_steiner(oracle, {0, 2});
  CHECK(t.cost == doctest::Approx(2.0));

  std::mt19937 rng(3);
  for (int iter = 0; iter < 5; ++iter) {
    auto g = random_connected(30, 70, rng);
    auto exact = build_exact_oracle(g);
    auto dm = metric_closure(g);
    auto terms = random_subset(g.n(), 7, rng);
    auto got = query_steiner(exact, terms);
    Tree want = mst_over(terms, [&](Vertex a, Vertex b) { return dm.entry(a, b); });
    CHECK(got.cost == doctest::Approx(want.cost));
  }
}

TEST_CASE("query steiner over tz3 stays within 6x the optimum") {
  std::mt19937 rng(5);
  auto g = random_connected(60, 170, rng);
  for (int seed = 0; seed < 6; ++seed) {
    auto oracle = build_tz3(g, 9000 + seed);
    auto terms = random_subset(g.n(), 8, rng);
    auto tree = query_steiner(oracle, terms);
    double opt = exact_steiner_cost(g, terms);
    CHECK(tree.cost <= 6.0 * opt * (1 + 1e-9));
    CHECK(tree.cost >= opt * (1 - 1e-9));
  }
}

TEST_CASE("fully dynamic engine small example") {
  auto p3 = load_graph_string("3 2\n0 1 1.0\n1 2 1.0\n");
  auto oracle = build_exact_oracle(p3);
  auto eng = SteinerEngine::fully_dynamic(p3, oracle, 0.25, 0.25);
  eng.add_terminal(0);
  CHECK(eng.tree_cost() == 0.0);
  eng.add_terminal(2);
  CHECK(eng.tree_cost() == doctest::Approx(discretize(2.0, 1.25)));
  eng.remove_terminal(2);
  CHECK(eng.tree_cost() == 0.0);
  CHECK_THROWS_AS(eng.remove_terminal(2), NotATerminal);
  CHECK_THROWS_AS(eng.add_terminal(0), AlreadyTerminal);
}

TEST_CASE("decremental engine mark-only above the degree threshold") {
  // star center 0 with 4 unit spokes; eps = 0.5 puts eta at 3
  auto g = load_graph_string("8 7\n0 1 1\n0 2 1\n0 3 1\n0 4 1\n1 5 4\n2 6 4\n3 7 4\n");
  auto oracle = build_exact_oracle(g);
  auto eng = SteinerEngine::decremental(g, oracle, {0, 1, 2, 3, 4}, 0.5);
  double before = eng.tree_cost();
  eng.remove_terminal(0);
  CHECK(eng.in_tree(0));
  CHECK(eng.tree_cost() == doctest::Approx(before));
  eng.remove_terminal(4);
  CHECK(!eng.in_tree(0));
  CHECK(eng.tree_cost() == doctest::Approx(4.0));
}

TEST_CASE("engine/reference differential: decremental (exact backend)") {
  std::mt19937 rng(101);
  for (int trace = 0; trace < 4; ++trace) {
    auto g = random_connected(50, 130, rng);
    auto oracle = build_exact_oracle(g);
    auto terms = random_subset(g.n(), 20, rng);
    auto removals = terms;
    std::shuffle(removals.begin(), removals.end(), rng);
    Differential d{g, oracle};
    d.run_decremental(0.25, terms, removals);
  }
}

TEST_CASE("engine/reference differential: incremental (exact backend)") {
  std::mt19937 rng(103);
  for (int trace = 0; trace < 4; ++trace) {
    auto g = random_connected(50, 130, rng);
    auto oracle = build_exact_oracle(g);
    auto adds = random_subset(g.n(), 25, rng);
    Differential d{g, oracle};
    d.run_incremental(0.25, adds);
  }
}

TEST_CASE("engine/reference differential: fully dynamic (exact backend)") {
  std::mt19937 rng(107);
  for (int trace = 0; trace < 4; ++trace) {
    auto g = random_connected(50, 130, rng);
    auto oracle = build_exact_oracle(g);
    auto ops = random_trace(g.n(), 80, rng);
    Differential d{g, oracle};
    d.run_fully_dynamic(0.25, 0.25, ops);
  }
}

TEST_CASE("fully dynamic engine: add then remove restores the cost") {
  std::mt19937 rng(109);
  auto g = random_connected(24, 60, rng);
  auto oracle = build_exact_oracle(g);
  auto eng = SteinerEngine::fully_dynamic(g, oracle, 0.25, 0.25);
  for (Vertex v : {1, 5, 9, 13}) eng.add_terminal(v);
  double before = eng.tree_cost();
  eng.add_terminal(17);
  eng.remove_terminal(17);
  CHECK(eng.tree_cost() == doctest::Approx(before));
}

TEST_CASE("engine survivor scans and layer consistency (exact backend)") {
  std::mt19937 rng(113);
  auto g = random_connected(22, 50, rng);
  auto oracle = build_exact_oracle(g);
  const double tau = 0.25;
  NearMetricView view(oracle, 1.0 + tau);
  auto eng = SteinerEngine::fully_dynamic(g, oracle, 0.25, tau);
  // a reference object mirrors the trace and doubles as the scan harness
  ReferenceScheme scan(view, ReferenceScheme::Mode::fully_dynamic,
                       SchemeParams::fully_dynamic(0.25, tau, 1.0));
  auto ops = random_trace(g.n(), 60, rng);
  for (auto [add, v] : ops) {
    if (add) {
      eng.add_terminal(v);
      scan.add_terminal(v);
    } else {
      eng.remove_terminal(v);
      scan.remove_terminal(v);
    }
    REQUIRE(edge_pairs(eng.tree_edges()) == edge_pairs(scan.tree_edges()));
    CHECK(!scan.has_efficient_replacement(tau));
    CHECK(eng.check_layer_consistency());
    CHECK(eng.check_activity(stderr));
  }
}

TEST_CASE("aux edge invariant: piece-visible tree pairs are present (tz3)") {
  std::mt19937 rng(127);
  auto g = random_connected(40, 100, rng);
  auto oracle = build_tz3(g, 4242);
  auto eng = SteinerEngine::fully_dynamic(g, oracle, 0.25, 0.25);
  auto ops = random_trace(g.n(), 50, rng);
  for (auto [add, v] : ops) {
    if (add)
      eng.add_terminal(v);
    else
      eng.remove_terminal(v);
    // every mutually piece-visible tree pair must have a standing aux edge
    std::set<std::uint64_t> have;
    for (auto [a, b, w] : eng.aux_edges()) have.insert(pair_key(a, b));
    for (Vertex u = 0; u < g.n(); ++u) {
      if (!eng.in_tree(u)) continue;
      for (int pid : oracle.pieces(u))
        for (const auto& [x, dx] : oracle.piece_sssp(pid, u)) {
          if (x == u || !eng.in_tree(x)) continue;
          CHECK(have.count(pair_key(u, x)) == 1);
        }
    }
  }
}

TEST_CASE("fully dynamic engine with tz3 stays within the theorem envelope") {
  std::mt19937 rng(131);
  const double tau = 0.25, eps = 0.25;
  const double bound = 6.0 * (1.0 + tau) * (1.0 + tau) * (1.0 + eps);
  for (int seed = 0; seed < 6; ++seed) {
    auto g = random_connected(36, 90, rng);
    auto oracle = build_tz3(g, 700 + seed);
    auto eng = SteinerEngine::fully_dynamic(g, oracle, eps, tau);
    std::set<Vertex> terms;
    auto ops = random_trace(g.n(), 24, rng, 0.65);
    for (auto [add, v] : ops) {
      if (add) {
        if (terms.size() >= 8 || terms.count(v)) continue;
        eng.add_terminal(v);
        terms.insert(v);
      } else {
        if (!terms.count(v)) continue;
        eng.remove_terminal(v);
        terms.erase(v);
      }
      if (terms.size() >= 2) {
        double opt = exact_steiner_cost(g, {terms.begin(), terms.end()});
        CHECK(eng.tree_cost() <= bound * opt * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("online greedy engine") {
  auto p3 = load_graph_string("3 2\n0 1 1.0\n1 2 1.0\n");
  auto oracle = build_exact_oracle(p3);
  auto eng = SteinerEngine::online_greedy(p3, oracle);
  eng.add_terminal(0);
  CHECK(eng.tree_edges().empty());
  eng.add_terminal(2);
  CHECK(eng.tree_cost() == doctest::Approx(2.0));
  CHECK(eng.tree_edges().size() == 1);

  std::mt19937 rng(137);
  for (int seed = 0; seed < 5; ++seed) {
    auto g = random_connected(40, 100, rng);
    auto exact = build_exact_oracle(g);
    auto greedy = SteinerEngine::online_greedy(g, exact);
    const int r = 12;
    auto order = random_subset(g.n(), r, rng);
    for (Vertex v : order) greedy.add_terminal(v);
    CHECK(greedy.tree_edges().size() == static_cast<size_t>(r - 1));
    double opt = exact_steiner_cost(g, order);
    double envelope = 2.0 * std::ceil(std::log2((double)r)) * opt;
    CHECK(greedy.tree_cost() <= envelope * (1 + 1e-9));
    // exactly one distance query and one merge per attach
    auto counters = greedy.greedy_counters();
    CHECK(counters.distance_queries == r - 1);
    CHECK(counters.merges == r - 1);
  }
}

TEST_CASE("decremental init matches the reference mst on a tz3 backend") {
  std::mt19937 rng(139);
  auto g = random_connected(60, 150, rng);
  auto oracle = build_tz3(g, 31337);
  auto terms = random_subset(g.n(), 10, rng);
  auto eng = SteinerEngine::decremental(g, oracle, terms, 0.25);
  NearMetricView view(oracle);
  ReferenceScheme ref(view, ReferenceScheme::Mode::decremental, SchemeParams::decremental(0.25));
  ref.init_terminals(terms);
  CHECK(eng.tree_cost() == doctest::Approx(ref.tree_cost()).epsilon(1e-12));
}

TEST_CASE("incremental engine on the C4 detour order") {
  auto g = load_graph_string("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 5\n");
  auto oracle = build_exact_oracle(g);
  auto eng = SteinerEngine::incremental(g, oracle, 0.2);
  eng.add_terminal(0);
  eng.add_terminal(3);
  eng.add_terminal(1);
  eng.add_terminal(2);
  CHECK(eng.replacements_total() >= 1);
  double unit = discretize(1.0, 1.1);
  CHECK(eng.tree_cost() == doctest::Approx(3 * unit));
}

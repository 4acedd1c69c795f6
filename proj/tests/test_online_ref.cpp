#include "doctest.h"

#include <cmath>
#include <random>

#include "dynst/oracle_build.hpp"
#include "dynst/online_ref.hpp"
#include "test_util.hpp"

using namespace dynst;
using testutil::random_connected;

namespace {

ReferenceScheme make_fd(const NearMetricView& view, double eps, double tau) {
  return ReferenceScheme(view, ReferenceScheme::Mode::fully_dynamic,
                         SchemeParams::fully_dynamic(eps, tau, view.oracle().alpha()));
}

}  // namespace

TEST_CASE("classify_replacement arithmetic") {
  auto g2 = load_graph_string("3 2\n0 1 3\n1 2 1\n");
  auto o2 = build_exact_oracle(g2);
  NearMetricView v2(o2);
  ReferenceScheme ref2(v2, ReferenceScheme::Mode::fully_dynamic,
                       SchemeParams::fully_dynamic(0.5, 0.5, 1.0));
  ref2.init_terminals({0, 1, 2});
  // tree edges (0,1) w=3 and (1,2) w=1; candidate (0,2) has view distance 4
  auto f2 = ref2.classify_replacement(0, 2, 0, 1, 0.5, 2.0);
  CHECK(f2.is_friend);
  CHECK(!f2.efficient);  // (1+0.5)*4 >= 3

  // heaviness: d(T)=4, |V|=3: edge (0,1) w=3 > 0.5*4/3
  CHECK(f2.heavy);
  auto light = ref2.classify_replacement(0, 2, 1, 2, 3.1, 4.0);
  CHECK(!light.heavy);  // 1 <= 3.1*4/3

  CHECK_THROWS_AS(ref2.classify_replacement(0, 2, 0, 2, 0.5, 2.0), NotInTree);

  // an actually efficient pair: tree (0,1) w=9, (1,2) w=1, candidate (0,2) w=2
  auto g3 = load_graph_string("3 3\n0 1 9\n1 2 1\n0 2 2\n");
  auto o3 = build_exact_oracle(g3);
  NearMetricView v3(o3);
  ReferenceScheme ref3(v3, ReferenceScheme::Mode::decremental, SchemeParams::decremental(0.5));
  ref3.init_terminals({0, 1, 2});
  // the derived tree keeps (1,2) and (0,2); pair (0,1) vs edge (1,2): 1.5*3 > 1 not efficient
  auto f3 = ref3.classify_replacement(0, 1, 1, 2, 0.5, 2.0);
  CHECK(f3.is_friend);
  CHECK(!f3.efficient);
}

TEST_CASE("decremental reference: path contraction example") {
  // metric path a-b-c with unit edges; removing b leaves the (a,c) closure edge
  auto g = load_graph_string("3 2\n0 1 1\n1 2 1\n");
  auto oracle = build_exact_oracle(g);
  NearMetricView view(oracle);
  ReferenceScheme ref(view, ReferenceScheme::Mode::decremental, SchemeParams::decremental(0.5));
  ref.init_terminals({0, 1, 2});
  CHECK(ref.tree_cost() == doctest::Approx(2.0));
  ref.remove_terminal(1);
  CHECK(ref.tree_cost() == doctest::Approx(2.0));  // single edge (0,2) of closure weight 2
  CHECK(!ref.in_tree(1));
  auto edges = ref.tree_edges();
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].u == 0);
  CHECK(edges[0].v == 2);

  ref.remove_terminal(0);
  CHECK(ref.tree_cost() == 0.0);
  ref.remove_terminal(2);
  CHECK(ref.tree_edges().empty());
  CHECK_THROWS_AS(ref.remove_terminal(2), NotATerminal);
}

TEST_CASE("decremental reference: high-degree nonterminal is retained") {
  // star: center 0 with 4 leaves; eta = 3 at eps = 0.5
  auto g = load_graph_string(
      "8 7\n0 1 1\n0 2 1\n0 3 1\n0 4 1\n1 5 4\n2 6 4\n3 7 4\n");
  auto oracle = build_exact_oracle(g);
  NearMetricView view(oracle);
  ReferenceScheme ref(view, ReferenceScheme::Mode::decremental, SchemeParams::decremental(0.5));
  CHECK(ref.params().eta == 3);
  ref.init_terminals({0, 1, 2, 3, 4});
  double before = ref.tree_cost();
  ref.remove_terminal(0);
  // degree 4 > eta = 3: the center stays in the tree
  CHECK(ref.in_tree(0));
  CHECK(ref.tree_cost() == doctest::Approx(before));
  // after a leaf goes, the center's degree drops to 3 and it gets deleted
  ref.remove_terminal(4);
  CHECK(!ref.in_tree(4));
  CHECK(!ref.in_tree(0));
  // remaining terminals 1,2,3 reconnected at closure distance 2 apiece
  CHECK(ref.tree_cost() == doctest::Approx(4.0));
}

TEST_CASE("incremental reference on the C4 example") {
  auto g = load_graph_string("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 5\n");
  auto oracle = build_exact_oracle(g);
  NearMetricView view(oracle, 1.0 + 0.2 / 2.0);
  ReferenceScheme ref(view, ReferenceScheme::Mode::incremental,
                      SchemeParams::incremental(0.2, 1.0));
  ref.add_terminal(0);
  CHECK(ref.tree_cost() == 0.0);
  ref.add_terminal(1);
  ref.add_terminal(2);
  ref.add_terminal(3);
  // final tree spans the cheap side of the cycle
  double unit = discretize(1.0, view.base());
  CHECK(ref.tree_cost() == doctest::Approx(3 * unit));
  CHECK_THROWS_AS(ref.add_terminal(2), AlreadyTerminal);
  CHECK_THROWS_AS(ref.remove_terminal(2), ModeError);
}

TEST_CASE("incremental reference with a detour insertion order fires a replacement") {
  auto g = load_graph_string("4 4\n0 1 1\n1 2 1\n2 3 1\n3 0 5\n");
  auto oracle = build_exact_oracle(g);
  NearMetricView view(oracle, 1.0 + 0.2 / 2.0);
  ReferenceScheme ref(view, ReferenceScheme::Mode::incremental,
                      SchemeParams::incremental(0.2, 1.0));
  ref.add_terminal(0);
  ref.add_terminal(3);  // connected through the closure distance 3
  ref.add_terminal(1);
  ref.add_terminal(2);
  CHECK(ref.replacements_total() >= 1);
  double unit = discretize(1.0, view.base());
  CHECK(ref.tree_cost() == doctest::Approx(3 * unit));
  // survivor clause: no (tau/2, 1+tau)-good replacement remains
  CHECK(!ref.has_good_replacement(0.1, 1.2));
}

TEST_CASE("fully dynamic reference keeps the survivor invariants (trace)") {
  std::mt19937 rng(31);
  auto g = random_connected(20, 45, rng);
  auto oracle = build_exact_oracle(g);
  const double tau = 0.25, eps = 0.25;
  NearMetricView view(oracle, 1.0 + tau);
  auto ref = make_fd(view, eps, tau);
  std::vector<Vertex> terms;
  for (int step = 0; step < 60; ++step) {
    bool add = terms.empty() || (std::uniform_int_distribution<int>(0, 9)(rng) < 6 &&
                                 static_cast<int>(terms.size()) < g.n());
    if (add) {
      Vertex v;
      do {
        v = std::uniform_int_distribution<int>(0, g.n() - 1)(rng);
      } while (ref.is_terminal(v));
      ref.add_terminal(v);
      terms.push_back(v);
    } else {
      int i = std::uniform_int_distribution<int>(0, (int)terms.size() - 1)(rng);
      ref.remove_terminal(terms[i]);
      terms.erase(terms.begin() + i);
    }
    // survivor clause: no tau-efficient replacement anywhere
    CHECK(!ref.has_efficient_replacement(tau));
    // degree rule: every nonterminal tree vertex has degree above eta
    for (Vertex v = 0; v < g.n(); ++v)
      if (ref.in_tree(v) && !ref.is_terminal(v))
        CHECK(ref.tree_degree(v) > ref.params().eta);
  }
}

TEST_CASE("decremental reference trace stays replacement-free") {
  std::mt19937 rng(33);
  auto g = random_connected(20, 45, rng);
  auto oracle = build_exact_oracle(g);
  NearMetricView view(oracle);  // no discretization in the decremental flow
  ReferenceScheme ref(view, ReferenceScheme::Mode::decremental, SchemeParams::decremental(0.25));
  auto terms = testutil::random_subset(g.n(), 14, rng);
  ref.init_terminals(terms);
  while (terms.size() > 1) {
    int i = std::uniform_int_distribution<int>(0, (int)terms.size() - 1)(rng);
    ref.remove_terminal(terms[i]);
    terms.erase(terms.begin() + i);
    CHECK(!ref.has_efficient_replacement(0.25));
    CHECK(!ref.has_efficient_replacement(0.0));  // it is an exact view mst
  }
}

TEST_CASE("fully dynamic reference: add then remove returns to the same cost class") {
  std::mt19937 rng(37);
  auto g = random_connected(16, 36, rng);
  auto oracle = build_exact_oracle(g);
  const double tau = 0.25, eps = 0.25;
  NearMetricView view(oracle, 1.0 + tau);
  auto ref = make_fd(view, eps, tau);
  for (Vertex v : {0, 3, 7, 9}) ref.add_terminal(v);
  double before = ref.tree_cost();
  ref.add_terminal(12);
  ref.remove_terminal(12);
  CHECK(ref.tree_cost() == doctest::Approx(before));
}

TEST_CASE("scheme cost bounds against the view mst") {
  std::mt19937 rng(41);
  for (int iter = 0; iter < 4; ++iter) {
    auto g = random_connected(18, 40, rng);
    auto oracle = build_exact_oracle(g);
    const double tau = 0.25, eps = 0.25;
    NearMetricView view(oracle, 1.0 + tau);
    auto ref = make_fd(view, eps, tau);
    std::vector<Vertex> terms;
    for (int step = 0; step < 40; ++step) {
      bool add = terms.empty() || std::uniform_int_distribution<int>(0, 9)(rng) < 6;
      if (add && static_cast<int>(terms.size()) < g.n()) {
        Vertex v;
        do {
          v = std::uniform_int_distribution<int>(0, g.n() - 1)(rng);
        } while (ref.is_terminal(v));
        ref.add_terminal(v);
        terms.push_back(v);
      } else if (!terms.empty()) {
        int i = std::uniform_int_distribution<int>(0, (int)terms.size() - 1)(rng);
        ref.remove_terminal(terms[i]);
        terms.erase(terms.begin() + i);
      }
      if (terms.size() >= 2) {
        Tree mst = mst_over(terms, [&](Vertex a, Vertex b) { return view.distance(a, b); });
        double bound = (double)ref.params().eta / (ref.params().eta - 1) * (1.0 + tau);
        CHECK(ref.tree_cost() <= bound * mst.cost + 1e-9);
      }
    }
  }
}

TEST_CASE("incremental reference replacement budget") {
  std::mt19937 rng(43);
  auto g = random_connected(120, 360, rng);
  auto oracle = build_exact_oracle(g);
  const double tau = 0.5;
  NearMetricView view(oracle, 1.0 + tau / 2.0);
  ReferenceScheme ref(view, ReferenceScheme::Mode::incremental,
                      SchemeParams::incremental(tau, 1.0));
  const int r = 100;
  auto order = testutil::random_subset(g.n(), r, rng);
  for (Vertex v : order) ref.add_terminal(v);
  double sigma = tau / 2.0;
  double mu = view.mu();
  double budget = 8.0 * r / sigma * (1.0 + std::log2(mu));
  CHECK(ref.replacements_total() <= budget);
  MESSAGE("incremental replacements: ", ref.replacements_total(), " budget ", budget);
}

TEST_CASE("fully dynamic replacement budget") {
  std::mt19937 rng(47);
  auto g = random_connected(60, 150, rng);
  auto oracle = build_exact_oracle(g);
  const double tau = 0.25;
  NearMetricView view(oracle, 1.0 + tau);
  auto ref = ReferenceScheme(view, ReferenceScheme::Mode::fully_dynamic,
                             SchemeParams::fully_dynamic(0.25, tau, 1.0));
  int adds = 0, removes = 0;
  std::vector<Vertex> terms;
  for (int op = 0; op < 200; ++op) {
    bool add = terms.empty() || std::uniform_int_distribution<int>(0, 9)(rng) < 6;
    if (add && static_cast<int>(terms.size()) < g.n()) {
      Vertex v;
      do {
        v = std::uniform_int_distribution<int>(0, g.n() - 1)(rng);
      } while (ref.is_terminal(v));
      ref.add_terminal(v);
      terms.push_back(v);
      ++adds;
    } else if (!terms.empty()) {
      int i = std::uniform_int_distribution<int>(0, (int)terms.size() - 1)(rng);
      ref.remove_terminal(terms[i]);
      terms.erase(terms.begin() + i);
      ++removes;
    }
  }
  // stretch of the view metric
  auto dm = metric_closure(g);
  double dmin = kInf, dmax = 0;
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex w = u + 1; w < g.n(); ++w) {
      dmin = std::min(dmin, dm.entry(u, w));
      dmax = std::max(dmax, dm.entry(u, w));
    }
  double stretch = dmax / dmin;
  double sigma = tau;
  // documented envelope constant: 8
  double budget = 8.0 / sigma * (adds * std::log2(stretch) + removes);
  CHECK(ref.replacements_total() <= budget);
  MESSAGE("fully dynamic replacements: ", ref.replacements_total(), " budget ", budget);
}

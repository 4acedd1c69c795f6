#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "dynst/oracle_build.hpp"
#include "test_util.hpp"

using namespace dynst;
using testutil::random_connected;

namespace {

std::set<Vertex> portal_set(const GenericOracle& oracle) {
  std::set<Vertex> out;
  for (int i = 0; i < oracle.portal_count(); ++i) out.insert(oracle.portal_vertex(i));
  return out;
}

}  // namespace

TEST_CASE("tz3 on P3 with the portal forced to the middle vertex") {
  auto p3 = load_graph_string("3 2\n0 1 1.0\n1 2 1.0\n");
  std::uint64_t seed = 0;
  bool found = false;
  for (; seed < 5000; ++seed) {
    auto oracle = build_tz3(p3, seed);
    if (portal_set(oracle) == std::set<Vertex>{1}) {
      found = true;
      // D[1][.] = [1, 0, 1]
      CHECK(*oracle.portal_dist(0, 0) == doctest::Approx(1.0));
      CHECK(*oracle.portal_dist(1, 0) == doctest::Approx(0.0));
      CHECK(*oracle.portal_dist(2, 0) == doctest::Approx(1.0));
      // balls: each endpoint only sees itself (radius 1 portal)
      CHECK(oracle.piece(oracle.pieces(0)[0]).vertices == std::vector<Vertex>{0});
      CHECK(oracle.piece(oracle.pieces(2)[0]).vertices == std::vector<Vertex>{2});
      // the pair (0,2) resolves through the portal, exactly here
      CHECK(oracle.distance(0, 2) == doctest::Approx(2.0));
      break;
    }
  }
  REQUIRE(found);
}

TEST_CASE("tz3 on a single vertex") {
  WeightedGraph g(1, {});
  auto oracle = build_tz3(g, 1);
  CHECK(portal_set(oracle) == std::set<Vertex>{0});
  CHECK(oracle.distance(0, 0) == 0.0);
}

TEST_CASE("tz3 oracles verify over random seeds") {
  std::mt19937 rng(2);
  auto g = random_connected(60, 180, rng);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto oracle = build_tz3(g, seed);
    auto report = verify_generic(oracle, g, 3.0);
    if (!report.ok()) {
      for (auto& v : report.violations)
        MESSAGE("violation ", v.u, " ", v.v, ": ", v.reason);
    }
    CHECK(report.ok());
  }
}

TEST_CASE("tz3 ball reduction is symmetric and pieces are stars") {
  std::mt19937 rng(4);
  auto g = random_connected(50, 120, rng);
  auto oracle = build_tz3(g, 99);
  // piece(w) is a star centered at w; u in piece(w) iff w in piece(u)
  std::vector<std::set<Vertex>> members(g.n());
  for (Vertex w = 0; w < g.n(); ++w) {
    REQUIRE(oracle.pieces(w).size() == 1);
    const auto& piece = oracle.piece(oracle.pieces(w)[0]);
    for (const Edge& e : piece.edges) CHECK((e.u == w || e.v == w));
    for (Vertex x : piece.vertices) members[w].insert(x);
    CHECK(members[w].count(w) == 1);
  }
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex w = 0; w < g.n(); ++w)
      CHECK(members[u].count(w) == members[w].count(u));
}

TEST_CASE("tz3 sampling statistics stay near sqrt(n)") {
  std::mt19937 rng(8);
  auto g = random_connected(100, 300, rng);
  const double root = std::sqrt(100.0);
  double total_portals = 0.0, total_ball = 0.0;
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    auto oracle = build_tz3(g, 40000 + s);
    total_portals += oracle.portal_count();
    auto st = oracle.stats();
    total_ball += static_cast<double>(st.piece_size_total) / g.n();
  }
  double mean_portals = total_portals / seeds;
  double mean_ball = total_ball / seeds;
  // loose envelopes documented in the README
  CHECK(mean_portals >= 0.5 * root);
  CHECK(mean_portals <= 2.0 * root);
  CHECK(mean_ball <= 4.0 * root);
}

TEST_CASE("bunch oracle with one level is exact") {
  std::mt19937 rng(12);
  auto g = random_connected(20, 45, rng);
  auto oracle = build_bunch_oracle(g, 1, 5);
  auto dm = metric_closure(g);
  for (Vertex u = 0; u < g.n(); ++u) {
    CHECK(static_cast<int>(oracle.portals(u).size()) == g.n());
    for (Vertex w = 0; w < g.n(); ++w)
      CHECK(oracle.distance(u, w) == doctest::Approx(dm.entry(u, w)));
  }
  CHECK(verify_generic(oracle, g, 1.0).ok());
}

TEST_CASE("bunch oracle with two levels stays within stretch 3") {
  std::mt19937 rng(14);
  auto g = random_connected(60, 150, rng);
  auto dm = metric_closure(g);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto oracle = build_bunch_oracle(g, 2, seed);
    CHECK(verify_generic(oracle, g, 3.0).ok());
    for (Vertex u = 0; u < g.n(); ++u)
      for (Vertex w = u + 1; w < g.n(); ++w) {
        double d = oracle.distance(u, w);
        CHECK(d >= dm.entry(u, w) * (1 - 1e-9));
        CHECK(d <= 3.0 * dm.entry(u, w) * (1 + 1e-9));
      }
    // every pair of bunches intersects
    for (Vertex u = 0; u < g.n(); ++u)
      for (Vertex w = u + 1; w < g.n(); ++w)
        CHECK(oracle.portal_distance(u, w) < kInf);
  }
}

TEST_CASE("builders reject disconnected graphs") {
  WeightedGraph g(3, {{0, 1, 1.0}});
  CHECK_THROWS_AS(build_tz3(g, 1), DisconnectedError);
  CHECK_THROWS_AS(build_bunch_oracle(g, 2, 1), DisconnectedError);
  CHECK_THROWS_AS(build_bunch_oracle(g, 0, 1), DomainError);
}

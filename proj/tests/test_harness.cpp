#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "dynst/harness.hpp"
#include "test_util.hpp"

using namespace dynst;

TEST_CASE("trace parsing and round trip") {
  std::istringstream one("{\"op\":\"add\",\"v\":3}\n");
  auto t = parse_trace(one);
  REQUIRE(t.ops.size() == 1);
  CHECK(t.ops[0].add);
  CHECK(t.ops[0].v == 3);

  std::istringstream bad("{\"op\":\"remove\",\"v\":3}\n");
  CHECK_THROWS_AS(parse_trace(bad), SequenceError);
  std::istringstream dup("{\"op\":\"add\",\"v\":3}\n{\"op\":\"add\",\"v\":3}\n");
  CHECK_THROWS_AS(parse_trace(dup), SequenceError);
  std::istringstream junk("not json\n");
  CHECK_THROWS_AS(parse_trace(junk), ParseError);
  std::istringstream wrong("{\"op\":\"frob\",\"v\":1}\n");
  CHECK_THROWS_AS(parse_trace(wrong), ParseError);

  GenParams gp;
  gp.n = 40;
  gp.m = 90;
  gp.ops = 1000;
  gp.seed = 5;
  auto [g, trace] = generate_instance(gp);
  std::ostringstream out;
  serialize_trace(trace, out);
  std::istringstream in(out.str());
  auto again = parse_trace(in);
  REQUIRE(again.ops.size() == trace.ops.size());
  std::ostringstream out2;
  serialize_trace(again, out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("instance generation is deterministic and valid") {
  GenParams gp;
  gp.kind = "gnm";
  gp.n = 10;
  gp.m = 9;
  gp.ops = 30;
  gp.seed = 1;
  auto [g1, t1] = generate_instance(gp);
  auto [g2, t2] = generate_instance(gp);
  CHECK(g1.m() == g2.m());
  for (int i = 0; i < g1.m(); ++i) {
    CHECK(g1.edge(i).u == g2.edge(i).u);
    CHECK(g1.edge(i).v == g2.edge(i).v);
    CHECK(g1.edge(i).w == g2.edge(i).w);
  }
  REQUIRE(t1.ops.size() == t2.ops.size());
  CHECK(g1.connected());

  gp.mix = 1.0;
  auto [g3, t3] = generate_instance(gp);
  for (const auto& op : t3.ops) CHECK(op.add);  // adds only

  gp.kind = "grid";
  gp.n = 16;
  auto [g4, t4] = generate_instance(gp);
  CHECK(g4.n() == 16);
  CHECK(g4.connected());

  gp.kind = "geometric";
  gp.n = 25;
  auto [g5, t5] = generate_instance(gp);
  CHECK(g5.connected());

  gp.kind = "bogus";
  CHECK_THROWS_AS(generate_instance(gp), ParamError);
}

TEST_CASE("run_scenario with the fully dynamic engine and mst2 baseline") {
  GenParams gp;
  gp.n = 30;
  gp.m = 70;
  gp.ops = 100;
  gp.seed = 9;
  auto [g, trace] = generate_instance(gp);
  RunConfig config;
  config.engine = "fd";
  config.backend = "exact";
  config.baseline = "mst2";
  auto report = run_scenario(g, trace, config);
  CHECK(report.passed);
  CHECK(report.rows.size() == trace.ops.size());
  int eta = 1 + static_cast<int>(std::ceil(1.0 / config.eps));
  double bound = static_cast<double>(eta) / (eta - 1) * (1.0 + config.tau);
  CHECK(report.max_ratio_mst2 <= bound * (1 + 1e-9));
}

TEST_CASE("run_scenario differential mode: fd equals the reference per op") {
  GenParams gp;
  gp.n = 24;
  gp.m = 55;
  gp.ops = 60;
  gp.seed = 11;
  auto [g, trace] = generate_instance(gp);
  RunConfig config;
  config.engine = "fd";
  config.check_against_ref = true;
  auto report = run_scenario(g, trace, config);
  CHECK(report.passed);
  for (const auto& row : report.rows) CHECK(row.ok);
}

TEST_CASE("run_scenario with the emulator engine and exact-steiner baseline") {
  GenParams gp;
  gp.n = 24;
  gp.m = 55;
  gp.ops = 40;
  gp.mix = 0.55;
  gp.seed = 13;
  auto [g, trace] = generate_instance(gp);
  // keep the terminal set small enough for the exact baseline
  Trace capped;
  std::set<Vertex> live;
  for (const auto& op : trace.ops) {
    if (op.add) {
      if (live.size() >= 6) continue;
      live.insert(op.v);
    } else {
      if (!live.count(op.v)) continue;
      live.erase(op.v);
    }
    capped.ops.push_back(op);
  }
  RunConfig config;
  config.engine = "emu";
  config.backend = "bunch:2";
  config.baseline = "exact";
  auto report = run_scenario(g, capped, config);
  CHECK(report.passed);
  CHECK(report.max_ratio_exact <= 12.0 + 1e-9);
}

TEST_CASE("run_scenario rejects bad configurations") {
  GenParams gp;
  gp.n = 10;
  gp.m = 15;
  gp.ops = 10;
  gp.mix = 0.5;
  gp.warmup = 4;
  auto [g, trace] = generate_instance(gp);
  RunConfig config;
  config.engine = "warp";
  CHECK_THROWS_AS(run_scenario(g, trace, config), ConfigError);
  config.engine = "fd";
  config.backend = "quantum";
  CHECK_THROWS_AS(run_scenario(g, trace, config), ConfigError);
}

TEST_CASE("csv reports are byte-identical across runs") {
  GenParams gp;
  gp.n = 20;
  gp.m = 40;
  gp.ops = 40;
  gp.seed = 21;
  auto [g, trace] = generate_instance(gp);
  RunConfig config;
  config.engine = "fd";
  config.baseline = "mst2";
  auto r1 = run_scenario(g, trace, config);
  auto r2 = run_scenario(g, trace, config);
  std::ostringstream a, b;
  write_report_csv(r1, a);
  write_report_csv(r2, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("dynst-report-v1", 0) == 0);
}

TEST_CASE("decremental scenario consumes leading adds as the initial set") {
  GenParams gp;
  gp.n = 20;
  gp.m = 40;
  gp.ops = 8;
  gp.mix = 0.0;
  gp.warmup = 10;
  gp.seed = 23;
  auto [g, trace] = generate_instance(gp);
  RunConfig config;
  config.engine = "dec";
  config.baseline = "mst2";
  auto report = run_scenario(g, trace, config);
  CHECK(report.passed);
  REQUIRE(!report.rows.empty());
  CHECK(report.rows.front().op == "init");
}

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "dynst/harness.hpp"

using namespace dynst;

int main(int argc, char** argv) {
  CLI::App app{"dynamic approximate Steiner trees over a fixed weighted graph"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "replay a terminal trace through an engine");
  std::string graph_path, trace_path, out_path = "-";
  RunConfig config;
  run->add_option("--graph", graph_path, "graph file (n m header, then u v w lines)")
      ->required();
  run->add_option("--trace", trace_path, "JSON-lines trace file")->required();
  run->add_option("--engine", config.engine, "dec|inc|fd|emu|iw|ref")
      ->check(CLI::IsMember({"dec", "inc", "fd", "emu", "iw", "ref"}));
  run->add_option("--backend", config.backend, "exact|tz3|bunch:L");
  run->add_option("--eps", config.eps, "degree-threshold accuracy");
  run->add_option("--tau", config.tau, "replacement efficiency slack");
  run->add_option("--seed", config.seed, "oracle sampling seed");
  run->add_option("--baseline", config.baseline, "none|mst2|exact")
      ->check(CLI::IsMember({"none", "mst2", "exact"}));
  run->add_flag("--check-against-ref", config.check_against_ref,
                "replay the reference scheme alongside and compare costs");
  run->add_flag("--timings", config.timings, "append a wall_ms column (non-deterministic)");
  run->add_option("--out", out_path, "report path, - for stdout");
  run->add_option("--log", config.log_path, "change-record JSON-lines path");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance and trace");
  GenParams gp;
  std::string out_graph = "graph.txt", out_trace = "trace.jsonl";
  gen->add_option("--kind", gp.kind, "gnm|grid|geometric")
      ->check(CLI::IsMember({"gnm", "grid", "geometric"}));
  gen->add_option("--n", gp.n, "vertex count");
  gen->add_option("--m", gp.m, "edge count (gnm)");
  gen->add_option("--radius", gp.radius, "connection radius (geometric, 0 = auto)");
  gen->add_option("--ops", gp.ops, "trace length");
  gen->add_option("--mix", gp.mix, "probability of an add");
  gen->add_option("--warmup", gp.warmup, "adds prepended before the mixed part");
  gen->add_option("--seed", gp.seed, "rng seed");
  gen->add_option("--out-graph", out_graph, "graph output path");
  gen->add_option("--out-trace", out_trace, "trace output path");

  // verify-oracle
  auto* verify = app.add_subcommand("verify-oracle", "check oracle builds against exact distances");
  std::string v_graph, v_backend = "tz3";
  int v_seeds = 30;
  std::uint64_t v_seed0 = 1;
  verify->add_option("--graph", v_graph, "graph file")->required();
  verify->add_option("--backend", v_backend, "exact|tz3|bunch:L");
  verify->add_option("--seeds", v_seeds, "number of sampling seeds");
  verify->add_option("--seed0", v_seed0, "first seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      WeightedGraph g = load_graph_file(graph_path);
      Trace trace = parse_trace_file(trace_path);
      RunReport report = run_scenario(g, trace, config);
      if (out_path == "-") {
        write_report_csv(report, std::cout, config.timings);
      } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot open report path: " + out_path);
        write_report_csv(report, out, config.timings);
      }
      return report.passed ? 0 : 1;
    }
    if (*gen) {
      auto [g, trace] = generate_instance(gp);
      std::ofstream og(out_graph);
      if (!og) throw ConfigError("cannot open graph output: " + out_graph);
      save_graph(g, og);
      std::ofstream ot(out_trace);
      if (!ot) throw ConfigError("cannot open trace output: " + out_trace);
      serialize_trace(trace, ot);
      std::cout << "wrote " << out_graph << " (" << g.n() << " vertices, " << g.m()
                << " edges) and " << out_trace << " (" << trace.ops.size() << " ops)\n";
      return 0;
    }
    if (*verify) {
      WeightedGraph g = load_graph_file(v_graph);
      int violations = verify_oracle_seeds(g, v_backend, v_seeds, v_seed0, std::cerr);
      std::cout << "checked " << v_seeds << " seeds: " << violations << " violations\n";
      return violations == 0 ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

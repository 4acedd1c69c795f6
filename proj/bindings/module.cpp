#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dynst/emulator.hpp"
#include "dynst/harness.hpp"
#include "dynst/oracle_build.hpp"
#include "dynst/steiner_engine.hpp"

namespace py = pybind11;
using namespace dynst;

namespace {

std::vector<std::tuple<int, int, double>> edges_out(const std::vector<Edge>& edges) {
  std::vector<std::tuple<int, int, double>> out;
  for (const Edge& e : edges) out.push_back({e.u, e.v, e.w});
  return out;
}

GenericOracle make_oracle(const WeightedGraph& g, const std::string& backend,
                          std::uint64_t seed) {
  if (backend == "exact") return build_exact_oracle(g);
  if (backend == "tz3") return build_tz3(g, seed);
  if (backend.rfind("bunch:", 0) == 0)
    return build_bunch_oracle(g, std::stoi(backend.substr(6)), seed);
  throw ConfigError("unknown backend: " + backend);
}

}  // namespace

PYBIND11_MODULE(_dynst, m) {
  m.doc() = "dynamic approximate Steiner trees over a fixed weighted graph";

  py::register_exception<Error>(m, "DynstError");

  py::class_<WeightedGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<std::tuple<int, int, double>>& edges) {
             std::vector<Edge> es;
             for (auto [u, v, w] : edges) es.push_back({u, v, w});
             return WeightedGraph(n, std::move(es));
           }),
           py::arg("n"), py::arg("edges"))
      .def_static("loads", [](const std::string& text) { return load_graph_string(text); })
      .def_static("load", [](const std::string& path) { return load_graph_file(path); })
      .def_property_readonly("n", &WeightedGraph::n)
      .def_property_readonly("m", &WeightedGraph::m)
      .def("edges",
           [](const WeightedGraph& g) { return edges_out(g.edges()); })
      .def("connected", &WeightedGraph::connected)
      .def("shortest_paths", &shortest_paths, py::arg("src"))
      .def("steiner_cost", &exact_steiner_cost, py::arg("terminals"),
           "optimal Steiner tree cost (at most 12 terminals)");

  py::class_<GenericOracle>(m, "Oracle")
      .def_property_readonly("alpha", &GenericOracle::alpha)
      .def_property_readonly("portal_count", &GenericOracle::portal_count)
      .def("distance", &GenericOracle::distance, py::arg("u"), py::arg("v"));

  m.def("build_oracle", &make_oracle, py::arg("graph"), py::arg("backend") = "tz3",
        py::arg("seed") = 1, py::keep_alive<0, 1>());

  m.def(
      "verify_oracle",
      [](const GenericOracle& oracle, const WeightedGraph& g) {
        auto report = verify_generic(oracle, g, oracle.alpha());
        std::vector<std::tuple<int, int, std::string>> out;
        for (const auto& v : report.violations) out.push_back({v.u, v.v, v.reason});
        return out;
      },
      py::arg("oracle"), py::arg("graph"));

  m.def(
      "query_steiner",
      [](const GenericOracle& oracle, const std::vector<Vertex>& terminals) {
        Tree t = query_steiner(oracle, terminals);
        return py::make_tuple(t.cost, edges_out(t.edges));
      },
      py::arg("oracle"), py::arg("terminals"));

  py::class_<SteinerEngine>(m, "Engine")
      .def_static("decremental", &SteinerEngine::decremental, py::arg("graph"),
                  py::arg("oracle"), py::arg("terminals"), py::arg("eps") = 0.25,
                  py::keep_alive<0, 1>(), py::keep_alive<0, 2>())
      .def_static("incremental", &SteinerEngine::incremental, py::arg("graph"),
                  py::arg("oracle"), py::arg("tau") = 0.25, py::keep_alive<0, 1>(),
                  py::keep_alive<0, 2>())
      .def_static("fully_dynamic", &SteinerEngine::fully_dynamic, py::arg("graph"),
                  py::arg("oracle"), py::arg("eps") = 0.25, py::arg("tau") = 0.25,
                  py::keep_alive<0, 1>(), py::keep_alive<0, 2>())
      .def_static("online_greedy", &SteinerEngine::online_greedy, py::arg("graph"),
                  py::arg("oracle"), py::keep_alive<0, 1>(), py::keep_alive<0, 2>())
      .def("add_terminal", [](SteinerEngine& e, Vertex v) { e.add_terminal(v); })
      .def("remove_terminal", [](SteinerEngine& e, Vertex v) { e.remove_terminal(v); })
      .def("tree_cost", &SteinerEngine::tree_cost)
      .def("tree_edges", [](const SteinerEngine& e) { return edges_out(e.tree_edges()); })
      .def("is_terminal", &SteinerEngine::is_terminal)
      .def("replacements", &SteinerEngine::replacements_total);

  py::class_<BipartiteEmulator>(m, "Emulator")
      .def_property_readonly("alpha", &BipartiteEmulator::alpha)
      .def("distance", &BipartiteEmulator::distance, py::arg("u"), py::arg("v"));
  m.def("build_emulator", &build_emulator, py::arg("graph"), py::arg("levels") = 2,
        py::arg("seed") = 1);

  py::class_<EmulatorSteiner>(m, "EmulatorEngine")
      .def(py::init<const BipartiteEmulator&>(), py::keep_alive<1, 2>())
      .def("add_terminal", &EmulatorSteiner::add_terminal)
      .def("remove_terminal", &EmulatorSteiner::remove_terminal)
      .def("tree", [](const EmulatorSteiner& e) {
        Tree t = e.current_tree();
        return py::make_tuple(t.cost, edges_out(t.edges));
      });

  m.def(
      "generate_instance",
      [](const std::string& kind, int n, int m, int ops, double mix, int warmup,
         std::uint64_t seed) {
        GenParams gp;
        gp.kind = kind;
        gp.n = n;
        gp.m = m;
        gp.ops = ops;
        gp.mix = mix;
        gp.warmup = warmup;
        gp.seed = seed;
        auto [g, trace] = generate_instance(gp);
        std::vector<std::pair<std::string, int>> tout;
        for (const auto& op : trace.ops) tout.push_back({op.add ? "add" : "remove", op.v});
        return py::make_tuple(g, tout);
      },
      py::arg("kind") = "gnm", py::arg("n") = 30, py::arg("m") = 60, py::arg("ops") = 50,
      py::arg("mix") = 0.6, py::arg("warmup") = 0, py::arg("seed") = 1);

  m.def(
      "run_scenario",
      [](const WeightedGraph& g, const std::vector<std::pair<std::string, int>>& trace,
         const std::string& engine, const std::string& backend, double eps, double tau,
         std::uint64_t seed, const std::string& baseline, bool check_against_ref) {
        Trace t;
        std::set<Vertex> terms;
        for (const auto& [op, v] : trace) {
          if (op == "add")
            terms.insert(v);
          else if (!terms.erase(v))
            throw SequenceError("remove of a non-terminal in the trace");
          t.ops.push_back({op == "add", v});
        }
        RunConfig config;
        config.engine = engine;
        config.backend = backend;
        config.eps = eps;
        config.tau = tau;
        config.seed = seed;
        config.baseline = baseline;
        config.check_against_ref = check_against_ref;
        RunReport report = run_scenario(g, t, config);
        py::list rows;
        for (const RunRow& row : report.rows) {
          py::dict d;
          d["index"] = row.index;
          d["op"] = row.op;
          d["v"] = row.v;
          d["tree_cost"] = row.tree_cost;
          d["replacements"] = row.replacements;
          d["oracle_ops"] = row.oracle_ops;
          if (row.ratio_mst2 >= 0) d["ratio_mst2"] = row.ratio_mst2;
          if (row.ratio_exact >= 0) d["ratio_exact"] = row.ratio_exact;
          d["ok"] = row.ok;
          if (!row.note.empty()) d["note"] = row.note;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["passed"] = report.passed;
        out["max_ratio_mst2"] = report.max_ratio_mst2;
        out["max_ratio_exact"] = report.max_ratio_exact;
        out["total_replacements"] = report.total_replacements;
        std::ostringstream csv;
        write_report_csv(report, csv);
        out["csv"] = csv.str();
        return out;
      },
      py::arg("graph"), py::arg("trace"), py::arg("engine") = "fd",
      py::arg("backend") = "exact", py::arg("eps") = 0.25, py::arg("tau") = 0.25,
      py::arg("seed") = 1, py::arg("baseline") = "none", py::arg("check_against_ref") = false);
}

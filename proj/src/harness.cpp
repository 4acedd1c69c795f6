#include "dynst/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dynst/emulator.hpp"
#include "dynst/online_ref.hpp"
#include "dynst/oracle_build.hpp"
#include "dynst/steiner_engine.hpp"

namespace dynst {

namespace {

using nlohmann::json;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct BackendSpec {
  enum class Kind { exact, tz3, bunch } kind;
  int levels = 2;
};

BackendSpec parse_backend(const std::string& backend) {
  if (backend == "exact") return {BackendSpec::Kind::exact, 0};
  if (backend == "tz3") return {BackendSpec::Kind::tz3, 0};
  if (backend.rfind("bunch:", 0) == 0) {
    int l = std::stoi(backend.substr(6));
    if (l < 1) throw ConfigError("bunch backend needs a level count of at least 1");
    return {BackendSpec::Kind::bunch, l};
  }
  throw ConfigError("unknown backend: " + backend);
}

GenericOracle build_backend(const WeightedGraph& g, const BackendSpec& spec,
                            std::uint64_t seed) {
  switch (spec.kind) {
    case BackendSpec::Kind::exact:
      return build_exact_oracle(g);
    case BackendSpec::Kind::tz3:
      return build_tz3(g, seed);
    case BackendSpec::Kind::bunch:
      return build_bunch_oracle(g, spec.levels, seed);
  }
  throw ConfigError("unreachable backend kind");
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::set<Vertex> terminals;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("op") || !j.contains("v") || !j["v"].is_number_integer())
      throw ParseError("trace line " + std::to_string(line_no) + ": expected {\"op\",\"v\"}");
    std::string op = j["op"].get<std::string>();
    Vertex v = j["v"].get<int>();
    if (v < 0) throw ParseError("trace line " + std::to_string(line_no) + ": negative vertex");
    if (op == "add") {
      if (terminals.count(v))
        throw SequenceError("trace line " + std::to_string(line_no) + ": add of a terminal");
      terminals.insert(v);
      trace.ops.push_back({true, v});
    } else if (op == "remove") {
      if (!terminals.count(v))
        throw SequenceError("trace line " + std::to_string(line_no) +
                            ": remove of a non-terminal");
      terminals.erase(v);
      trace.ops.push_back({false, v});
    } else {
      throw ParseError("trace line " + std::to_string(line_no) + ": unknown op " + op);
    }
  }
  return trace;
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file: " + path);
  return parse_trace(in);
}

void serialize_trace(const Trace& trace, std::ostream& out) {
  for (const TraceOp& op : trace.ops)
    out << "{\"op\":\"" << (op.add ? "add" : "remove") << "\",\"v\":" << op.v << "}\n";
}

std::pair<WeightedGraph, Trace> generate_instance(const GenParams& params) {
  if (params.n <= 0 || params.ops < 0) throw ParamError("n and ops must be positive");
  if (params.mix < 0.0 || params.mix > 1.0) throw ParamError("mix must lie in [0,1]");
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> wd(1.0, 10.0);

  WeightedGraph g;
  if (params.kind == "gnm") {
    if (params.m < params.n - 1) throw ParamError("gnm needs m >= n-1");
    while (true) {
      std::vector<Edge> edges;
      std::set<std::uint64_t> used;
      std::vector<int> perm(params.n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int i = 1; i < params.n; ++i) {
        int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
        edges.push_back({perm[i], perm[j], wd(rng)});
        used.insert(pair_key(perm[i], perm[j]));
      }
      long long guard = 0;
      while (static_cast<int>(edges.size()) < params.m && guard++ < 200LL * params.m) {
        int u = std::uniform_int_distribution<int>(0, params.n - 1)(rng);
        int v = std::uniform_int_distribution<int>(0, params.n - 1)(rng);
        if (u == v || used.count(pair_key(u, v))) continue;
        used.insert(pair_key(u, v));
        edges.push_back({u, v, wd(rng)});
      }
      g = WeightedGraph(params.n, std::move(edges));
      if (g.connected()) break;
    }
  } else if (params.kind == "grid") {
    int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(params.n))));
    int n = side * side;
    std::vector<Edge> edges;
    auto id = [&](int r, int c) { return r * side + c; };
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        if (c + 1 < side) edges.push_back({id(r, c), id(r, c + 1), wd(rng)});
        if (r + 1 < side) edges.push_back({id(r, c), id(r + 1, c), wd(rng)});
      }
    g = WeightedGraph(n, std::move(edges));
  } else if (params.kind == "geometric") {
    std::vector<std::pair<double, double>> pts(params.n);
    std::uniform_real_distribution<double> cd(0.0, 1.0);
    for (auto& p : pts) p = {cd(rng), cd(rng)};
    double r = params.radius > 0.0
                   ? params.radius
                   : std::sqrt(2.0 * std::log(std::max(2, params.n)) / params.n);
    while (true) {
      std::vector<Edge> edges;
      for (int i = 0; i < params.n; ++i)
        for (int j = i + 1; j < params.n; ++j) {
          double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
          double d = std::sqrt(dx * dx + dy * dy);
          if (d <= r && d > 0.0) edges.push_back({i, j, d});
        }
      g = WeightedGraph(params.n, std::move(edges));
      if (g.connected()) break;
      r *= 1.3;
    }
  } else {
    throw ParamError("unknown instance kind: " + params.kind);
  }

  Trace trace;
  std::set<Vertex> terminals;
  auto pick_free = [&]() {
    Vertex v;
    do {
      v = std::uniform_int_distribution<int>(0, g.n() - 1)(rng);
    } while (terminals.count(v));
    return v;
  };
  for (int i = 0; i < params.warmup && static_cast<int>(terminals.size()) < g.n(); ++i) {
    Vertex v = pick_free();
    terminals.insert(v);
    trace.ops.push_back({true, v});
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < params.ops; ++i) {
    bool want_add = terminals.empty() || coin(rng) < params.mix;
    bool saturated = static_cast<int>(terminals.size()) >= g.n();
    if (want_add && saturated) {
      if (params.mix >= 1.0) break;  // adds-only traces stop once saturated
      want_add = false;
    }
    if (want_add) {
      Vertex v = pick_free();
      terminals.insert(v);
      trace.ops.push_back({true, v});
    } else {
      auto it = terminals.begin();
      std::advance(it, std::uniform_int_distribution<int>(0, (int)terminals.size() - 1)(rng));
      trace.ops.push_back({false, *it});
      terminals.erase(it);
    }
  }
  return {std::move(g), std::move(trace)};
}

namespace {

// per-engine approximation bound against the exact Steiner optimum
double exact_bound(const RunConfig& config, double mu, int adds_so_far) {
  if (config.engine == "dec") return 2.0 * mu * (1.0 + config.eps);
  if (config.engine == "inc")
    return 2.0 * mu * (1.0 + config.tau) * (1.0 + config.tau / 2.0);
  if (config.engine == "fd" || config.engine == "ref")
    return 2.0 * mu * (1.0 + config.tau) * (1.0 + config.tau) * (1.0 + config.eps);
  if (config.engine == "emu") return 4.0 * mu;  // mu doubles as the emulator stretch
  if (config.engine == "iw")
    return 2.0 * std::ceil(std::log2(std::max(2.0, static_cast<double>(adds_so_far))));
  return kInf;
}

double mst2_bound(const RunConfig& config) {
  if (config.engine == "dec") {
    int eta = 1 + static_cast<int>(std::ceil(1.0 / config.eps));
    return static_cast<double>(eta) / (eta - 1);
  }
  if (config.engine == "inc") return 1.0 + config.tau;
  if (config.engine == "fd" || config.engine == "ref") {
    int eta = 1 + static_cast<int>(std::ceil(1.0 / config.eps));
    return static_cast<double>(eta) / (eta - 1) * (1.0 + config.tau);
  }
  if (config.engine == "emu") return 2.0;
  return kInf;
}

}  // namespace

RunReport run_scenario(const WeightedGraph& g, const Trace& trace, const RunConfig& config) {
  RunReport report;
  BackendSpec backend = parse_backend(config.backend);
  if (config.engine == "emu" && backend.kind == BackendSpec::Kind::exact) backend.levels = 1;
  if (config.engine == "emu" && backend.kind == BackendSpec::Kind::tz3)
    throw ConfigError("the emulator engine runs on exact or bunch:L backends");

  // the emulator engine runs on its own structure
  std::unique_ptr<BipartiteEmulator> emulator;
  std::unique_ptr<EmulatorSteiner> emulator_steiner;
  std::unique_ptr<GenericOracle> oracle;
  std::unique_ptr<SteinerEngine> engine;
  std::unique_ptr<NearMetricView> baseline_view;
  std::unique_ptr<ReferenceScheme> ref;
  double mu = 1.0;

  size_t first_op = 0;
  std::vector<Vertex> initial;
  if (config.engine == "emu") {
    emulator = std::make_unique<BipartiteEmulator>(
        build_emulator(g, std::max(1, backend.levels), config.seed));
    emulator_steiner = std::make_unique<EmulatorSteiner>(*emulator);
    mu = emulator->alpha();
  } else {
    oracle = std::make_unique<GenericOracle>(build_backend(g, backend, config.seed));
    mu = oracle->alpha();
    if (config.engine == "dec") {
      while (first_op < trace.ops.size() && trace.ops[first_op].add) {
        initial.push_back(trace.ops[first_op].v);
        ++first_op;
      }
      for (size_t i = first_op; i < trace.ops.size(); ++i)
        if (trace.ops[i].add)
          throw ConfigError("decremental runs take leading adds, then removals only (op " +
                            std::to_string(i) + ")");
      engine = std::make_unique<SteinerEngine>(
          SteinerEngine::decremental(g, *oracle, initial, config.eps));
    } else if (config.engine == "inc") {
      engine = std::make_unique<SteinerEngine>(SteinerEngine::incremental(g, *oracle, config.tau));
    } else if (config.engine == "fd") {
      engine = std::make_unique<SteinerEngine>(
          SteinerEngine::fully_dynamic(g, *oracle, config.eps, config.tau));
    } else if (config.engine == "iw") {
      engine = std::make_unique<SteinerEngine>(SteinerEngine::online_greedy(g, *oracle));
    } else if (config.engine == "ref") {
      baseline_view = std::make_unique<NearMetricView>(*oracle, 1.0 + config.tau);
      ref = std::make_unique<ReferenceScheme>(
          *baseline_view, ReferenceScheme::Mode::fully_dynamic,
          SchemeParams::fully_dynamic(config.eps, config.tau, oracle->alpha()));
    } else {
      throw ConfigError("unknown engine: " + config.engine);
    }
  }

  std::unique_ptr<NearMetricView> mst_view;
  std::unique_ptr<ReferenceScheme> shadow;
  if (oracle) {
    double base = 0.0;
    if (config.engine == "fd" || config.engine == "ref") base = 1.0 + config.tau;
    if (config.engine == "inc") base = 1.0 + config.tau / 2.0;
    mst_view = std::make_unique<NearMetricView>(*oracle, base);
    if (config.check_against_ref &&
        (config.engine == "fd" || config.engine == "inc" || config.engine == "dec")) {
      ReferenceScheme::Mode mode = config.engine == "fd"
                                       ? ReferenceScheme::Mode::fully_dynamic
                                       : (config.engine == "inc"
                                              ? ReferenceScheme::Mode::incremental
                                              : ReferenceScheme::Mode::decremental);
      SchemeParams params =
          config.engine == "fd"
              ? SchemeParams::fully_dynamic(config.eps, config.tau, oracle->alpha())
              : (config.engine == "inc" ? SchemeParams::incremental(config.tau, oracle->alpha())
                                        : SchemeParams::decremental(config.eps));
      shadow = std::make_unique<ReferenceScheme>(*mst_view, mode, params);
      if (config.engine == "dec") shadow->init_terminals(initial);
    }
  }

  std::set<Vertex> terminals(initial.begin(), initial.end());
  int adds_seen = static_cast<int>(initial.size());
  std::ofstream change_log;
  if (!config.log_path.empty()) {
    change_log.open(config.log_path);
    if (!change_log) throw ConfigError("cannot open change log path: " + config.log_path);
  }
  auto log_changes = [&](int index, const std::vector<ChangeRecord>& records) {
    if (!change_log.is_open()) return;
    static const char* kinds[] = {"mark", "unmark", "connect", "replace", "reconnect"};
    for (const ChangeRecord& r : records) {
      change_log << "{\"op_index\":" << index << ",\"kind\":\""
                 << kinds[static_cast<int>(r.kind)] << "\",\"u\":" << r.u;
      if (r.v >= 0) change_log << ",\"v\":" << r.v << ",\"w\":" << r.w
                               << ",\"level\":" << r.level;
      if (r.out_u >= 0)
        change_log << ",\"out_u\":" << r.out_u << ",\"out_v\":" << r.out_v
                   << ",\"out_w\":" << r.out_w;
      change_log << "}\n";
    }
  };
  bool exact_enabled = config.baseline == "exact";
  long long last_replacements = 0, last_oracle_ops = 0;

  auto current_cost = [&]() -> double {
    if (config.engine == "emu") return emulator_steiner->current_tree().cost;
    if (config.engine == "ref") return ref->tree_cost();
    return engine->tree_cost();
  };

  if (config.engine == "dec" && !initial.empty()) {
    RunRow row;
    row.index = -1;
    row.op = "init";
    row.tree_cost = current_cost();
    report.rows.push_back(row);
  }

  for (size_t i = first_op; i < trace.ops.size(); ++i) {
    const TraceOp& op = trace.ops[i];
    RunRow row;
    row.index = static_cast<int>(i);
    row.op = op.add ? "add" : "remove";
    row.v = op.v;
    double t0 = now_ms();
    try {
      if (config.engine == "emu") {
        if (op.add)
          emulator_steiner->add_terminal(op.v);
        else
          emulator_steiner->remove_terminal(op.v);
      } else if (config.engine == "ref") {
        log_changes(row.index,
                    op.add ? ref->add_terminal(op.v) : ref->remove_terminal(op.v));
      } else {
        log_changes(row.index,
                    op.add ? engine->add_terminal(op.v) : engine->remove_terminal(op.v));
      }
    } catch (const Error& e) {
      throw EngineError("op " + std::to_string(i) + " (" + row.op + " " +
                        std::to_string(op.v) + "): " + e.what());
    }
    row.wall_ms = now_ms() - t0;
    if (op.add) {
      terminals.insert(op.v);
      ++adds_seen;
    } else {
      terminals.erase(op.v);
    }
    row.tree_cost = current_cost();

    if (engine) {
      row.replacements = engine->replacements_total() - last_replacements;
      last_replacements = engine->replacements_total();
      row.oracle_ops = engine->oracle_ops_total() - last_oracle_ops;
      last_oracle_ops = engine->oracle_ops_total();
    } else if (ref) {
      row.replacements = ref->replacements_total() - last_replacements;
      last_replacements = ref->replacements_total();
    }

    if (shadow) {
      if (op.add)
        shadow->add_terminal(op.v);
      else
        shadow->remove_terminal(op.v);
      if (std::abs(shadow->tree_cost() - row.tree_cost) >
          1e-9 * std::max(1.0, row.tree_cost)) {
        row.ok = false;
        row.note = "mismatch against reference cost " + std::to_string(shadow->tree_cost());
      }
    }

    if (config.baseline == "mst2" && terminals.size() >= 2) {
      std::vector<Vertex> terms(terminals.begin(), terminals.end());
      Tree mst =
          config.engine == "emu"
              ? mst_over(terms, [&](Vertex a, Vertex b) { return emulator->distance(a, b); })
              : mst_over(terms, [&](Vertex a, Vertex b) { return mst_view->distance(a, b); });
      if (mst.cost > 0.0) {
        row.ratio_mst2 = row.tree_cost / mst.cost;
        report.max_ratio_mst2 = std::max(report.max_ratio_mst2, row.ratio_mst2);
        if (row.ratio_mst2 > mst2_bound(config) * (1.0 + 1e-9)) {
          row.ok = false;
          row.note = "tree cost " + std::to_string(row.tree_cost) + " exceeds mst2 bound vs " +
                     std::to_string(mst.cost);
        }
      }
    }
    if (exact_enabled && terminals.size() >= 2) {
      if (terminals.size() > 12) {
        exact_enabled = false;
        row.note = "exact baseline disabled: terminal set exceeded 12";
      } else {
        std::vector<Vertex> terms(terminals.begin(), terminals.end());
        double opt = exact_steiner_cost(g, terms);
        if (opt > 0.0) {
          row.ratio_exact = row.tree_cost / opt;
          report.max_ratio_exact = std::max(report.max_ratio_exact, row.ratio_exact);
          if (row.ratio_exact > exact_bound(config, mu, adds_seen) * (1.0 + 1e-9)) {
            row.ok = false;
            row.note = "tree cost " + std::to_string(row.tree_cost) +
                       " exceeds the engine bound vs optimum " + std::to_string(opt);
          }
        }
      }
    }
    report.passed = report.passed && row.ok;
    report.rows.push_back(std::move(row));
  }
  report.total_replacements = last_replacements;
  return report;
}

void write_report_csv(const RunReport& report, std::ostream& out, bool timings) {
  out << "dynst-report-v1,op_index,op,vertex,tree_cost,replacements,oracle_ops,ratio_mst2,"
         "ratio_exact,status,note";
  if (timings) out << ",wall_ms";
  out << "\n";
  char buf[64];
  auto fmt = [&](double x) {
    if (x < 0) return std::string();
    snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
  };
  for (const RunRow& row : report.rows) {
    out << "row," << row.index << "," << row.op << "," << row.v << "," << fmt(row.tree_cost)
        << "," << row.replacements << "," << row.oracle_ops << "," << fmt(row.ratio_mst2) << ","
        << fmt(row.ratio_exact) << "," << (row.ok ? "ok" : "fail") << ",\"" << row.note << "\"";
    if (timings) out << "," << fmt(row.wall_ms);
    out << "\n";
  }
  out << "summary,,,," << fmt(report.rows.empty() ? 0.0 : report.rows.back().tree_cost) << ","
      << report.total_replacements << ",," << fmt(report.max_ratio_mst2) << ","
      << fmt(report.max_ratio_exact) << "," << (report.passed ? "ok" : "fail") << ",\"\"";
  if (timings) out << ",";
  out << "\n";
}

int verify_oracle_seeds(const WeightedGraph& g, const std::string& backend, int seeds,
                        std::uint64_t seed0, std::ostream& log) {
  BackendSpec spec = parse_backend(backend);
  int total = 0;
  for (int s = 0; s < seeds; ++s) {
    GenericOracle oracle = build_backend(g, spec, seed0 + s);
    auto report = verify_generic(oracle, g, oracle.alpha());
    if (!report.ok()) {
      for (const auto& v : report.violations)
        log << "seed " << (seed0 + s) << ": pair (" << v.u << "," << v.v << "): " << v.reason
            << "\n";
      total += static_cast<int>(report.violations.size());
    }
  }
  return total;
}

}  // namespace dynst

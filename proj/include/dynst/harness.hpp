#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynst/graph.hpp"

namespace dynst {

struct TraceOp {
  bool add;
  Vertex v;
};

struct Trace {
  std::vector<TraceOp> ops;
};

/// JSON-lines trace, one {"op":"add"|"remove","v":<int>} per line. Parsing
/// validates the add/remove sequencing.
Trace parse_trace(std::istream& in);
Trace parse_trace_file(const std::string& path);
void serialize_trace(const Trace& trace, std::ostream& out);

struct GenParams {
  std::string kind = "gnm";  // gnm | grid | geometric
  int n = 30;
  int m = 60;          // gnm only
  double radius = 0.0; // geometric; 0 = auto
  int ops = 50;
  double mix = 0.6;    // probability of an add
  int warmup = 0;      // adds prepended before the mixed part
  std::uint64_t seed = 1;
};

std::pair<WeightedGraph, Trace> generate_instance(const GenParams& params);

struct RunConfig {
  std::string engine = "fd";    // dec | inc | fd | emu | iw | ref
  std::string backend = "exact";  // exact | tz3 | bunch:L
  double eps = 0.25;
  double tau = 0.25;
  std::uint64_t seed = 1;
  std::string baseline = "none";  // none | mst2 | exact
  bool check_against_ref = false;
  bool timings = false;
  std::string log_path;  // change-record JSON lines, empty = off
};

struct RunRow {
  int index = -1;
  std::string op;
  Vertex v = -1;
  double tree_cost = 0.0;
  long long replacements = 0;
  long long oracle_ops = 0;
  double ratio_mst2 = -1.0;   // negative = not computed
  double ratio_exact = -1.0;
  bool ok = true;
  std::string note;
  double wall_ms = 0.0;
};

struct RunReport {
  std::vector<RunRow> rows;
  double max_ratio_mst2 = 0.0;
  double max_ratio_exact = 0.0;
  long long total_replacements = 0;
  bool passed = true;
};

RunReport run_scenario(const WeightedGraph& g, const Trace& trace, const RunConfig& config);

void write_report_csv(const RunReport& report, std::ostream& out, bool timings = false);

/// Builds `seeds` oracles for the chosen backend and verifies each against
/// exact distances; returns the total number of violations.
int verify_oracle_seeds(const WeightedGraph& g, const std::string& backend, int seeds,
                        std::uint64_t seed0, std::ostream& log);

}  // namespace dynst

#pragma once

#include <algorithm>
#include <cmath>

#include "dynst/graph.hpp"

namespace dynst {

/// Level arithmetic shared by the engines and the reference schemes: edge
/// levels are integer exponents of the discretization base, and the window
/// of levels worth scanning is derived from the heaviest tree seen so far.
struct LevelIndex {
  double base;  // discretization base (1 + sigma or 1 + tau)
  double tau;   // efficiency slack
  double mu;    // oracle stretch before rounding
  int n;        // vertex count of the host graph

  long level_of(double d) const { return discretize_level(d, base); }

  /// floor(log_base(cost)) with a snap for costs sitting on a power.
  long tree_level(double cost) const {
    return static_cast<long>(std::floor(std::log(cost) / std::log(base) + 1e-9));
  }

  /// Edges at or below this level sum to a negligible fraction of the tree.
  long bottom_level(double cost) const {
    double cut = tau * cost / (8.0 * mu * mu * std::pow(1.0 + tau, 3.0) * n);
    return static_cast<long>(std::floor(std::log(cut) / std::log(base) + 1e-9));
  }

  /// Window width: guaranteed to cover [bottom_level(c), tree_level(c)].
  int window_size() const {
    double span = 8.0 * mu * mu * std::pow(1.0 + tau, 3.0) * n / tau;
    return static_cast<int>(std::ceil(std::log(span) / std::log(base))) + 2;
  }

  long window_lo(double max_tree_cost, long global_min_level) const {
    if (max_tree_cost <= 0.0) return global_min_level;
    return std::max(bottom_level(max_tree_cost), global_min_level);
  }
};

}  // namespace dynst

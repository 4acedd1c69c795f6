#pragma once

#include <cstdint>
#include <vector>

#include "dynst/oracle.hpp"

namespace dynst {

/// 3-approximate oracle for general graphs: portals sampled with probability
/// 1/sqrt(n) (shared by every vertex), one star piece per vertex over its
/// symmetric-reduced ball.
GenericOracle build_tz3(const WeightedGraph& g, std::uint64_t seed);

/// (2l-1)-approximate oracle: nested level samples with probability
/// n^(-1/l), bunches as portals, exact stored distances, no pieces.
GenericOracle build_bunch_oracle(const WeightedGraph& g, int l, std::uint64_t seed);

/// Per-vertex bunches with exact distances; shared by the bunch oracle and
/// the bipartite emulator.
std::vector<std::vector<std::pair<Vertex, double>>> compute_bunches(const WeightedGraph& g,
                                                                    int l, std::uint64_t seed);

}  // namespace dynst

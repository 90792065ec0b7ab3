#pragma once

#include <cstdint>

#include "respars/graph.hpp"

namespace respars {

// Deterministic test-and-benchmark graph families. Every random family is
// fully determined by its seed.

WeightedGraph complete_graph(Vertex n, double w = 1.0);
WeightedGraph path_graph(Vertex n, double w = 1.0);
WeightedGraph cycle_graph(Vertex n, double w = 1.0);
// Center 0, leaves 1..n-1.
WeightedGraph star_graph(Vertex n, double w = 1.0);
WeightedGraph grid_graph(Vertex rows, Vertex cols, double w = 1.0);
// Two cliques of n/2 joined by a single bridge edge. n >= 4.
WeightedGraph dumbbell_graph(Vertex n);

// Random recursive tree: vertex v >= 1 attaches to a uniform vertex below
// it. Weights drawn uniformly (log-uniformly when log_uniform) from
// [w_min, w_max].
WeightedGraph random_tree(Vertex n, std::uint64_t seed, double w_min = 1.0,
                          double w_max = 1.0, bool log_uniform = false);

// Random connected graph: random tree skeleton plus uniformly drawn extra
// edges, m total. Requires n - 1 <= m <= n (n - 1) / 2.
WeightedGraph random_connected_graph(Vertex n, std::size_t m, std::uint64_t seed,
                                     double w_min = 1.0, double w_max = 1.0,
                                     bool log_uniform = false);

// Random d-regular graph: circulant base rewired by double-edge swaps,
// retried until connected. Unit weights. Requires d >= 2, d < n, n * d
// even (and even n when d is odd).
WeightedGraph random_regular_graph(Vertex n, std::uint32_t d, std::uint64_t seed);

} // namespace respars

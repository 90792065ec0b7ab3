#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "respars/graph.hpp"

namespace respars {

enum class SampleMode {
    Resistance,    // p_e proportional to w_e R_e
    DegreeBounded, // mix with degree term; caps w-ratio degrees at 2
};

struct SampleConfig {
    double epsilon = 0.5;
    std::optional<std::uint64_t> q; // unset selects default_q
    double c0 = 4.0;
    std::uint64_t seed = 0;
    SampleMode mode = SampleMode::Resistance;
    // Overrides the oracle's energy-norm tolerance (see OracleBuildOptions).
    std::optional<double> delta_override;
    // Use dense exact resistances instead of the sketch oracle. Subject to
    // dense_vertex_limit().
    bool exact_resistances = false;
    unsigned threads = 1;
};

struct SparsifierResult {
    WeightedGraph graph;
    std::uint64_t q_used = 0;
    std::size_t distinct_edges = 0;
    std::vector<double> probabilities; // the p_e actually sampled from
    SampleMode mode = SampleMode::Resistance;
};

// p_e = w_e r_e / sum(w r), where r is a per-edge (approximate) effective
// resistance. Entries of r below 1e-12 times its maximum are floored there
// before use; an all-nonpositive r is an error. The result sums to 1.
std::vector<double> resistance_probabilities(const WeightedGraph& g,
                                             std::span<const double> r_approx);

// Mix of the resistance rule with a degree fallback: the average of p_e
// above with 1 / (n * min(deg u, deg v)), renormalized to sum to 1. The
// unnormalized sum always lies in (1/2, 1], so renormalization keeps every
// entry within a factor 2 of the mixture and preserves the degree floor.
std::vector<double> mixed_probabilities(const WeightedGraph& g,
                                        std::span<const double> r_approx);

// q i.i.d. draws from p over the edges of g (alias table, with
// replacement); a drawn edge enters H with weight w_e / (q p_e), repeat
// draws summing. H keeps the vertex set of g.
SparsifierResult sample_sparsifier(const WeightedGraph& g, std::span<const double> p,
                                   std::uint64_t q, std::uint64_t seed);

// ceil(c0 * n * ln(n) / epsilon^2). Requires n >= 2, 0 < epsilon <= 1,
// c0 > 0.
std::uint64_t default_q(std::uint32_t n, double epsilon, double c0);

// Full pipeline: resistances (sketch oracle or exact), sampling
// probabilities for the configured mode, then sampling. Requires a
// connected input. Warns on stderr when epsilon leaves the theory's range
// (epsilon > 1 is clamped to 1 for the k and q formulas; epsilon <=
// 1/sqrt(n) only warns). DegreeBounded mode raises q to ceil(8 n ln n)
// when the configured value is below it.
SparsifierResult sparsify(const WeightedGraph& g, const SampleConfig& cfg);

} // namespace respars

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "respars/graph.hpp"
#include "respars/solver.hpp"

namespace respars {

// Sketch dimension k = ceil(24 ln(n) / epsilon^2). Requires n >= 2 and
// 0 < epsilon <= 1.
std::uint32_t jl_dimension(std::uint32_t n, double epsilon);

// Energy-norm solve tolerance sufficient for the oracle's (1 +/- epsilon)
// guarantee: (epsilon / 3) * sqrt(2 (1 - epsilon) w_min /
// ((1 + epsilon) n^3 w_max)). Requires a connected graph with at least one
// edge and 0 < epsilon < 1. Very conservative in practice; see
// OracleBuildOptions::delta for overriding it.
double default_delta(const WeightedGraph& g, double epsilon);

struct RowSolveStat {
    int iterations = 0;
    double residual = 0.0;
};

struct OracleBuildOptions {
    double epsilon = 0.5;
    // Energy-norm tolerance. Unset selects default_delta (evaluated at
    // min(epsilon, 0.9) so epsilon = 1 still yields a usable value).
    std::optional<double> delta;
    // delta is bridged to the solver's relative-residual stopping rule as
    // delta / safety. 100 covers desk-scale conditioning; acceptance-grade
    // runs can set safety = 1 and pass delta as the residual directly.
    double safety = 100.0;
    std::optional<std::uint32_t> k_override;
    int max_iter = 0;   // <= 0 selects 4 n + 200
    unsigned threads = 1; // row solves are independent; 0 = hardware count
};

// Approximate effective-resistance oracle: a k x n sketch whose squared
// column distances reproduce pairwise effective resistances within
// (1 +/- epsilon), built from one random +/-1 projection of the weighted
// incidence matrix and k Laplacian solves. Queries are O(k).
class ResistanceOracle {
public:
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double epsilon = 0.0;
    double delta = 0.0;        // energy-norm tolerance the build targeted
    double residual_tol = 0.0; // relative residual actually given to the solver
    std::uint64_t seed = 0;
    // Sketch entries, stored column-contiguous per vertex: row i of the
    // sketch at vertex v lives at values[v * k + i]. Queries then read two
    // contiguous k-blocks.
    std::vector<double> values;
    std::vector<RowSolveStat> solve_stats; // one per sketch row; empty after load

    double z(std::uint32_t row, Vertex v) const { return values[std::size_t(v) * k + row]; }

    // || sketch (chi_u - chi_v) ||^2. Requires u, v < n; query(u, u) = 0.
    double query(Vertex u, Vertex v) const;
};

ResistanceOracle build_oracle(const WeightedGraph& g, const OracleBuildOptions& opts,
                              std::uint64_t seed);
ResistanceOracle build_oracle(const WeightedGraph& g, double epsilon, double delta,
                              std::uint64_t seed);

// query() over every edge of g, in edge order.
std::vector<double> all_edge_resistances(const ResistanceOracle& oracle,
                                         const WeightedGraph& g);

// Ground truth via the dense factored pseudoinverse. Gated by
// dense_vertex_limit().
class ExactResistances {
public:
    explicit ExactResistances(const WeightedGraph& g);
    std::uint32_t n() const { return grounded_.n(); }
    double query(Vertex u, Vertex v) const;

private:
    GroundedLaplacian grounded_;
};

// Exact effective resistance of every edge of g, in edge order.
std::vector<double> exact_resistances(const WeightedGraph& g);

// Versioned text dump of an oracle (metadata plus row-major sketch values
// at 17 significant digits, so a reload answers queries bit-identically).
void save_oracle(const ResistanceOracle& oracle, std::ostream& out);
void save_oracle_file(const ResistanceOracle& oracle, const std::string& path);
ResistanceOracle load_oracle(std::istream& in);
ResistanceOracle load_oracle_file(const std::string& path);

} // namespace respars

#include "respars/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <utility>

#include "respars/alias.hpp"
#include "respars/errors.hpp"
#include "respars/random.hpp"
#include "respars/resistance.hpp"

namespace respars {

std::vector<double> resistance_probabilities(const WeightedGraph& g,
                                             std::span<const double> r_approx) {
    const std::size_t m = g.m();
    if (m == 0) throw PreconditionError("probabilities need at least one edge");
    if (r_approx.size() != m) {
        throw PreconditionError("resistance vector length does not match edge count");
    }
    double r_max = 0.0;
    for (double r : r_approx) {
        if (!std::isfinite(r)) throw PreconditionError("non-finite resistance entry");
        r_max = std::max(r_max, r);
    }
    if (!(r_max > 0.0)) throw PreconditionError("resistance vector has no positive entry");
    const double floor = 1e-12 * r_max;

    std::vector<double> p(m);
    double total = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
        p[e] = g.edge(e).w * std::max(r_approx[e], floor);
        total += p[e];
    }
    for (double& v : p) v /= total;
    return p;
}

std::vector<double> mixed_probabilities(const WeightedGraph& g,
                                        std::span<const double> r_approx) {
    std::vector<double> p = resistance_probabilities(g, r_approx);
    const std::vector<std::uint32_t> deg = g.degrees();
    const double n = static_cast<double>(g.n());
    double total = 0.0;
    for (std::size_t e = 0; e < g.m(); ++e) {
        const double d = std::min(deg[g.edge(e).u], deg[g.edge(e).v]);
        p[e] = 0.5 * (p[e] + 1.0 / (n * d));
        total += p[e];
    }
    // total is in (1/2, 1]: the degree terms sum to at most 1 because each
    // edge charges only its lower-degree endpoint.
    for (double& v : p) v /= total;
    return p;
}

std::uint64_t default_q(std::uint32_t n, double epsilon, double c0) {
    if (n < 2) throw PreconditionError("sample count needs n >= 2");
    if (!(epsilon > 0.0) || epsilon > 1.0) throw PreconditionError("epsilon must be in (0, 1]");
    if (!(c0 > 0.0)) throw PreconditionError("c0 must be positive");
    const double q = std::ceil(c0 * static_cast<double>(n) * std::log(static_cast<double>(n)) /
                               (epsilon * epsilon));
    if (q > 9.0e18) throw PreconditionError("sample count overflows");
    return static_cast<std::uint64_t>(q);
}

SparsifierResult sample_sparsifier(const WeightedGraph& g, std::span<const double> p,
                                   std::uint64_t q, std::uint64_t seed) {
    const std::size_t m = g.m();
    if (p.size() != m) throw PreconditionError("probability vector length does not match edges");
    if (m == 0) throw PreconditionError("sampling needs at least one edge");
    if (q < 1) throw PreconditionError("sample count must be at least 1");
    double total = 0.0;
    for (double v : p) total += v;
    if (std::abs(total - 1.0) > 1e-9) {
        throw PreconditionError("probabilities do not sum to 1");
    }

    const AliasTable table(p);
    SplitMix64 rng = split_stream(seed, 0);
    std::vector<std::uint64_t> counts(m, 0);
    for (std::uint64_t i = 0; i < q; ++i) ++counts[table.sample(rng)];

    // A drawn edge enters with weight w / (q p); repeats sum.
    std::vector<Edge> edges;
    std::size_t distinct = 0;
    for (std::size_t e = 0; e < m; ++e) {
        if (counts[e] == 0) continue;
        ++distinct;
        const Edge& base = g.edge(e);
        const double scale = static_cast<double>(counts[e]) /
                             (static_cast<double>(q) * p[e]);
        edges.push_back(Edge{base.u, base.v, scale * base.w});
    }

    SparsifierResult out{WeightedGraph(g.n(), std::move(edges)), q, distinct,
                         std::vector<double>(p.begin(), p.end()), SampleMode::Resistance};
    return out;
}

SparsifierResult sparsify(const WeightedGraph& g, const SampleConfig& cfg) {
    if (!is_connected(g)) throw PreconditionError("sparsify needs a connected input graph");
    const std::uint32_t n = g.n();
    if (g.m() == 0) {
        // Single vertex; nothing to sample.
        return SparsifierResult{g, 0, 0, {}, cfg.mode};
    }
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
        throw PreconditionError("epsilon must be positive");
    }
    if (cfg.epsilon > 1.0) {
        std::cerr << "warning: epsilon " << cfg.epsilon
                  << " is above 1; the size formulas use epsilon = 1\n";
    }
    const double eps = std::min(cfg.epsilon, 1.0);
    if (eps <= 1.0 / std::sqrt(static_cast<double>(n))) {
        std::cerr << "warning: epsilon <= 1/sqrt(n); the sampled graph will "
                     "hardly be sparser than the input\n";
    }

    std::vector<double> r;
    if (cfg.exact_resistances) {
        r = exact_resistances(g);
    } else {
        OracleBuildOptions opts;
        opts.epsilon = eps;
        opts.delta = cfg.delta_override;
        opts.threads = cfg.threads;
        const ResistanceOracle oracle = build_oracle(g, opts, split_stream(cfg.seed, 1).next());
        r = all_edge_resistances(oracle, g);
    }

    const std::vector<double> p = cfg.mode == SampleMode::DegreeBounded
                                      ? mixed_probabilities(g, r)
                                      : resistance_probabilities(g, r);

    std::uint64_t q = cfg.q ? *cfg.q : default_q(n, eps, cfg.c0);
    if (q < 1) throw PreconditionError("sample count must be at least 1");
    if (cfg.mode == SampleMode::DegreeBounded) {
        const auto q_min = static_cast<std::uint64_t>(
            std::ceil(8.0 * static_cast<double>(n) * std::log(static_cast<double>(n))));
        if (q < q_min) {
            std::cerr << "note: degree-bounded mode raises q from " << q << " to " << q_min
                      << "\n";
            q = q_min;
        }
    }

    SparsifierResult out = sample_sparsifier(g, p, q, split_stream(cfg.seed, 2).next());
    out.mode = cfg.mode;
    return out;
}

} // namespace respars

#include <doctest.h>

#include <cmath>

#include "respars/errors.hpp"
#include "respars/generators.hpp"
#include "respars/resistance.hpp"
#include "respars/sparsify.hpp"
#include "test_util.hpp"

using namespace respars;
using testutil::graphs_identical;

TEST_CASE("resistance probabilities") {
    SUBCASE("trees are uniform: every edge carries w R = 1") {
        const WeightedGraph t = random_tree(40, 5, 0.1, 1e3, /*log_uniform=*/true);
        const std::vector<double> p = resistance_probabilities(t, exact_resistances(t));
        for (double v : p) CHECK(v == doctest::Approx(1.0 / 39.0).epsilon(1e-9));
    }
    SUBCASE("triangle is uniform") {
        const WeightedGraph g = complete_graph(3);
        for (double v : resistance_probabilities(g, exact_resistances(g))) {
            CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }
    SUBCASE("sums to one") {
        const WeightedGraph g = random_connected_graph(30, 100, 2, 1.0, 50.0);
        const std::vector<double> p = resistance_probabilities(g, exact_resistances(g));
        double total = 0.0;
        for (double v : p) total += v;
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    SUBCASE("tiny entries are floored, not dropped") {
        const WeightedGraph g = path_graph(3);
        const std::vector<double> r{1.0, 1e-300};
        const std::vector<double> p = resistance_probabilities(g, r);
        CHECK(p[1] > 0.0);
        CHECK(p[1] == doctest::Approx(1e-12).epsilon(1e-6));
    }
    SUBCASE("rejects nonsense") {
        const WeightedGraph g = path_graph(3);
        CHECK_THROWS_AS(resistance_probabilities(g, std::vector<double>{1.0}),
                        PreconditionError);
        CHECK_THROWS_AS(resistance_probabilities(g, std::vector<double>{0.0, 0.0}),
                        PreconditionError);
        CHECK_THROWS_AS(
            resistance_probabilities(g, std::vector<double>{1.0, std::nan("")}),
            PreconditionError);
    }
}

TEST_CASE("mixed probabilities") {
    SUBCASE("single edge stays certain") {
        const WeightedGraph g(2, {Edge{0, 1, 3.0}});
        const std::vector<double> p = mixed_probabilities(g, exact_resistances(g));
        CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("triangle stays uniform") {
        const WeightedGraph g = complete_graph(3);
        for (double v : mixed_probabilities(g, exact_resistances(g))) {
            CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }
    SUBCASE("star stays uniform after renormalization") {
        const WeightedGraph g = star_graph(4);
        for (double v : mixed_probabilities(g, exact_resistances(g))) {
            CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }
    SUBCASE("keeps the degree floor after renormalization") {
        const WeightedGraph g = random_connected_graph(40, 90, 3, 1.0, 1e3, true);
        const std::vector<double> p = mixed_probabilities(g, exact_resistances(g));
        const auto deg = g.degrees();
        double total = 0.0;
        for (std::size_t e = 0; e < g.m(); ++e) {
            const double low = std::min(deg[g.edge(e).u], deg[g.edge(e).v]);
            CHECK(p[e] >= 0.5 / (static_cast<double>(g.n()) * low) * (1.0 - 1e-12));
            total += p[e];
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("default sample count") {
    // Frozen against independent evaluation: ceil(4 * 100 * ln 100) = 1843.
    CHECK(default_q(100, 1.0, 4.0) == 1843);
    // Quartering epsilon squares into a 4x bump, up to ceiling slack.
    const auto q1 = static_cast<double>(default_q(500, 0.5, 4.0));
    const auto q2 = static_cast<double>(default_q(500, 0.25, 4.0));
    CHECK(std::abs(q2 - 4.0 * q1) <= 4.0);
    CHECK_THROWS_AS(default_q(1, 0.5, 4.0), PreconditionError);
    CHECK_THROWS_AS(default_q(100, 0.0, 4.0), PreconditionError);
    CHECK_THROWS_AS(default_q(100, 2.0, 4.0), PreconditionError);
    CHECK_THROWS_AS(default_q(100, 0.5, 0.0), PreconditionError);
}

TEST_CASE("sampling a single edge returns the graph unchanged") {
    const WeightedGraph g(2, {Edge{0, 1, 2.5}});
    for (std::uint64_t q : {1ull, 7ull, 100ull}) {
        const SparsifierResult res =
            sample_sparsifier(g, std::vector<double>{1.0}, q, 11);
        CHECK(graphs_identical(res.graph, g));
        CHECK(res.q_used == q);
        CHECK(res.distinct_edges == 1);
    }
}

TEST_CASE("sample bookkeeping: weights are count / (q p) times w") {
    const WeightedGraph g = path_graph(3); // two edges
    const std::vector<double> p{0.25, 0.75};
    const SparsifierResult res = sample_sparsifier(g, p, 8, 5);
    CHECK(res.q_used == 8);
    double total = 0.0;
    for (const Edge& e : res.graph.edges()) {
        const EdgeId idx = g.find_edge(e.u, e.v);
        REQUIRE(idx < g.m());
        // Recover the draw count; it must be a whole number of draws.
        const double count = e.w / g.edge(idx).w * 8.0 * p[idx];
        CHECK(std::abs(count - std::round(count)) <= 1e-9);
        total += std::round(count);
    }
    CHECK(total == 8.0);
}

TEST_CASE("sample_sparsifier validates its inputs") {
    const WeightedGraph g = path_graph(3);
    CHECK_THROWS_AS(sample_sparsifier(g, std::vector<double>{0.5, 0.4}, 5, 0),
                    PreconditionError); // sums to 0.9
    CHECK_THROWS_AS(sample_sparsifier(g, std::vector<double>{1.0}, 5, 0),
                    PreconditionError); // wrong length
    CHECK_THROWS_AS(sample_sparsifier(g, std::vector<double>{0.5, 0.5}, 0, 0),
                    PreconditionError); // q = 0
}

TEST_CASE("estimator is unbiased: K4 Monte Carlo against the analytic error bar") {
    // Binomial draws give Var(w~) = (1 - p) / (q p) per edge; with p = 1/6,
    // q = 20, and 2000 runs the standard error of the mean is 0.0112.
    const WeightedGraph g = complete_graph(4);
    const std::vector<double> p = resistance_probabilities(g, exact_resistances(g));
    for (double v : p) REQUIRE(v == doctest::Approx(1.0 / 6.0).epsilon(1e-9));

    const int runs = 2000;
    std::vector<double> mean(g.m(), 0.0);
    for (int i = 0; i < runs; ++i) {
        const SparsifierResult res = sample_sparsifier(g, p, 20, 1000 + i);
        for (const Edge& e : res.graph.edges()) {
            mean[g.find_edge(e.u, e.v)] += e.w;
        }
    }
    const double se = std::sqrt((1.0 - 1.0 / 6.0) / (20.0 / 6.0) / runs);
    for (std::size_t e = 0; e < g.m(); ++e) {
        mean[e] /= runs;
        CHECK(std::abs(mean[e] - 1.0) <= 4.0 * se);
    }
}

TEST_CASE("pipeline basics") {
    SUBCASE("single edge passes through") {
        const WeightedGraph g(2, {Edge{0, 1, 2.0}});
        SampleConfig cfg;
        cfg.epsilon = 1.0;
        cfg.seed = 3;
        cfg.exact_resistances = true;
        const SparsifierResult res = sparsify(g, cfg);
        CHECK(graphs_identical(res.graph, g));
        CHECK(res.q_used == default_q(2, 1.0, 4.0));
    }
    SUBCASE("single vertex is a no-op") {
        const WeightedGraph g(1, {});
        const SparsifierResult res = sparsify(g, SampleConfig{});
        CHECK(res.graph.n() == 1);
        CHECK(res.q_used == 0);
    }
    SUBCASE("disconnected input is refused") {
        const WeightedGraph g(4, {Edge{0, 1, 1.0}, Edge{2, 3, 1.0}});
        CHECK_THROWS_AS(sparsify(g, SampleConfig{}), PreconditionError);
    }
    SUBCASE("epsilon must be positive") {
        SampleConfig cfg;
        cfg.epsilon = 0.0;
        CHECK_THROWS_AS(sparsify(path_graph(4), cfg), PreconditionError);
    }
    SUBCASE("explicit q is respected; default fills in") {
        const WeightedGraph g = complete_graph(12);
        SampleConfig cfg;
        cfg.epsilon = 0.5;
        cfg.seed = 9;
        cfg.exact_resistances = true;
        cfg.q = 333;
        CHECK(sparsify(g, cfg).q_used == 333);
        cfg.q.reset();
        CHECK(sparsify(g, cfg).q_used == default_q(12, 0.5, 4.0));
    }
    SUBCASE("output is always a reweighted subgraph") {
        const WeightedGraph g = random_connected_graph(25, 70, 8, 1.0, 20.0);
        SampleConfig cfg;
        cfg.epsilon = 0.7;
        cfg.seed = 12;
        cfg.exact_resistances = true;
        const SparsifierResult res = sparsify(g, cfg);
        CHECK(res.graph.n() == g.n());
        CHECK(res.distinct_edges == res.graph.m());
        CHECK(res.graph.m() <= std::min<std::uint64_t>(res.q_used, g.m()));
        for (const Edge& e : res.graph.edges()) {
            CHECK(g.find_edge(e.u, e.v) < g.m());
        }
        CHECK(res.probabilities.size() == g.m());
    }
}

TEST_CASE("pipeline with the sketch oracle hits the expected weights at large q") {
    const WeightedGraph g = complete_graph(3);
    SampleConfig cfg;
    cfg.epsilon = 0.5;
    cfg.q = 3000;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        const SparsifierResult res = sparsify(g, cfg);
        REQUIRE(res.graph.m() == 3); // q >> m; overwhelmingly all edges drawn
        for (const Edge& e : res.graph.edges()) {
            CHECK(e.w == doctest::Approx(1.0).epsilon(0.25));
        }
    }
}

TEST_CASE("degree-bounded mode") {
    const WeightedGraph g = complete_graph(20);
    SampleConfig cfg;
    cfg.epsilon = 0.5;
    cfg.seed = 4;
    cfg.mode = SampleMode::DegreeBounded;
    cfg.exact_resistances = true;
    SUBCASE("enforces the floor on q") {
        cfg.q = 10; // far below 8 n ln n
        const SparsifierResult res = sparsify(g, cfg);
        const auto q_min = static_cast<std::uint64_t>(std::ceil(8.0 * 20.0 * std::log(20.0)));
        CHECK(res.q_used == q_min);
        CHECK(res.mode == SampleMode::DegreeBounded);
    }
    SUBCASE("weight-ratio degrees stay under 2") {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            cfg.seed = seed;
            cfg.q.reset();
            const SparsifierResult res = sparsify(g, cfg);
            std::vector<double> ratio(g.n(), 0.0);
            for (const Edge& e : res.graph.edges()) {
                const double s = e.w / g.edge(g.find_edge(e.u, e.v)).w;
                ratio[e.u] += s;
                ratio[e.v] += s;
            }
            for (Vertex v = 0; v < g.n(); ++v) {
                CHECK(ratio[v] <= 2.0 * g.degrees()[v]);
            }
        }
    }
}

TEST_CASE("pipeline is deterministic in the seed") {
    const WeightedGraph g = random_connected_graph(20, 50, 14, 1.0, 4.0);
    SampleConfig cfg;
    cfg.epsilon = 0.6;
    cfg.seed = 99;
    const SparsifierResult a = sparsify(g, cfg);
    const SparsifierResult b = sparsify(g, cfg);
    CHECK(graphs_identical(a.graph, b.graph));
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.q_used == b.q_used);
    cfg.seed = 100;
    const SparsifierResult c = sparsify(g, cfg);
    CHECK_FALSE(graphs_identical(a.graph, c.graph));
}

#include "respars/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "respars/errors.hpp"
#include "respars/random.hpp"

namespace respars {

namespace {

std::uint64_t edge_key(Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

double draw_weight(SplitMix64& rng, double w_min, double w_max, bool log_uniform) {
    if (!(w_min > 0.0) || w_max < w_min) {
        throw PreconditionError("weight range must satisfy 0 < w_min <= w_max");
    }
    if (w_min == w_max) return w_min;
    const double u = rng.next_double();
    if (log_uniform) {
        return std::exp(std::log(w_min) + u * (std::log(w_max) - std::log(w_min)));
    }
    return w_min + u * (w_max - w_min);
}

} // namespace

WeightedGraph complete_graph(Vertex n, double w) {
    if (n < 1) throw PreconditionError("complete graph needs n >= 1");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) edges.push_back(Edge{u, v, w});
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph path_graph(Vertex n, double w) {
    if (n < 1) throw PreconditionError("path needs n >= 1");
    std::vector<Edge> edges;
    edges.reserve(n > 0 ? n - 1 : 0);
    for (Vertex v = 1; v < n; ++v) edges.push_back(Edge{static_cast<Vertex>(v - 1), v, w});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph cycle_graph(Vertex n, double w) {
    if (n < 3) throw PreconditionError("cycle needs n >= 3");
    std::vector<Edge> edges;
    edges.reserve(n);
    for (Vertex v = 1; v < n; ++v) edges.push_back(Edge{static_cast<Vertex>(v - 1), v, w});
    edges.push_back(Edge{0, static_cast<Vertex>(n - 1), w});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph star_graph(Vertex n, double w) {
    if (n < 2) throw PreconditionError("star needs n >= 2");
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (Vertex v = 1; v < n; ++v) edges.push_back(Edge{0, v, w});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph grid_graph(Vertex rows, Vertex cols, double w) {
    if (rows < 1 || cols < 1) throw PreconditionError("grid needs positive dimensions");
    const std::uint64_t n64 = static_cast<std::uint64_t>(rows) * cols;
    if (n64 > 0xffffffffULL) throw PreconditionError("grid too large");
    std::vector<Edge> edges;
    for (Vertex r = 0; r < rows; ++r) {
        for (Vertex c = 0; c < cols; ++c) {
            const Vertex v = r * cols + c;
            if (c + 1 < cols) edges.push_back(Edge{v, static_cast<Vertex>(v + 1), w});
            if (r + 1 < rows) edges.push_back(Edge{v, static_cast<Vertex>(v + cols), w});
        }
    }
    return WeightedGraph(static_cast<Vertex>(n64), std::move(edges));
}

WeightedGraph dumbbell_graph(Vertex n) {
    if (n < 4 || n % 2 != 0) throw PreconditionError("dumbbell needs even n >= 4");
    const Vertex h = n / 2;
    std::vector<Edge> edges;
    for (Vertex u = 0; u < h; ++u) {
        for (Vertex v = u + 1; v < h; ++v) edges.push_back(Edge{u, v, 1.0});
    }
    for (Vertex u = h; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) edges.push_back(Edge{u, v, 1.0});
    }
    edges.push_back(Edge{static_cast<Vertex>(h - 1), h, 1.0});
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_tree(Vertex n, std::uint64_t seed, double w_min, double w_max,
                          bool log_uniform) {
    if (n < 1) throw PreconditionError("tree needs n >= 1");
    SplitMix64 rng = split_stream(seed, 0);
    std::vector<Edge> edges;
    edges.reserve(n > 0 ? n - 1 : 0);
    for (Vertex v = 1; v < n; ++v) {
        const auto parent = static_cast<Vertex>(rng.next_below(v));
        edges.push_back(Edge{parent, v, draw_weight(rng, w_min, w_max, log_uniform)});
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_connected_graph(Vertex n, std::size_t m, std::uint64_t seed,
                                     double w_min, double w_max, bool log_uniform) {
    if (n < 1) throw PreconditionError("graph needs n >= 1");
    const std::uint64_t max_m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (m + 1 < static_cast<std::size_t>(n) || m > max_m) {
        throw PreconditionError("edge count must lie in [n - 1, n (n - 1) / 2]");
    }
    SplitMix64 rng = split_stream(seed, 0);
    std::vector<Edge> edges;
    edges.reserve(m);
    std::unordered_set<std::uint64_t> present;
    present.reserve(m * 2);
    for (Vertex v = 1; v < n; ++v) {
        const auto parent = static_cast<Vertex>(rng.next_below(v));
        edges.push_back(Edge{parent, v, draw_weight(rng, w_min, w_max, log_uniform)});
        present.insert(edge_key(parent, v));
    }
    while (edges.size() < m) {
        const auto u = static_cast<Vertex>(rng.next_below(n));
        const auto v = static_cast<Vertex>(rng.next_below(n));
        if (u == v || present.count(edge_key(u, v))) continue;
        present.insert(edge_key(u, v));
        edges.push_back(Edge{u, v, draw_weight(rng, w_min, w_max, log_uniform)});
    }
    return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_regular_graph(Vertex n, std::uint32_t d, std::uint64_t seed) {
    if (d < 2 || d >= n) throw PreconditionError("regular graph needs 2 <= d < n");
    if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
        throw PreconditionError("regular graph needs n * d even");
    }
    if (d % 2 == 1 && n % 2 != 0) {
        throw PreconditionError("odd degree needs even n");
    }
    const std::size_t m = static_cast<std::size_t>(n) * d / 2;

    for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
        SplitMix64 rng = split_stream(seed, attempt);
        std::vector<std::pair<Vertex, Vertex>> edges;
        edges.reserve(m);
        std::unordered_set<std::uint64_t> present;
        present.reserve(m * 2);
        // Circulant base: offsets 1..d/2, plus the antipodal matching for
        // odd d.
        for (std::uint32_t off = 1; off <= d / 2; ++off) {
            for (Vertex v = 0; v < n; ++v) {
                const auto t = static_cast<Vertex>((v + off) % n);
                edges.emplace_back(v, t);
                present.insert(edge_key(v, t));
            }
        }
        if (d % 2 == 1) {
            for (Vertex v = 0; v < n / 2; ++v) {
                const auto t = static_cast<Vertex>(v + n / 2);
                edges.emplace_back(v, t);
                present.insert(edge_key(v, t));
            }
        }

        // Randomize by degree-preserving double-edge swaps.
        const std::size_t swaps = 20 * m;
        for (std::size_t s = 0; s < swaps; ++s) {
            const std::size_t i = rng.next_below(m);
            const std::size_t j = rng.next_below(m);
            if (i == j) continue;
            Vertex a = edges[i].first, b = edges[i].second;
            Vertex c = edges[j].first, e = edges[j].second;
            if (rng.next_sign_bit()) std::swap(c, e);
            // Proposed replacement: (a, e) and (c, b).
            if (a == e || c == b) continue;
            const std::uint64_t k1 = edge_key(a, e);
            const std::uint64_t k2 = edge_key(c, b);
            if (k1 == k2 || present.count(k1) || present.count(k2)) continue;
            present.erase(edge_key(a, b));
            present.erase(edge_key(c, e));
            present.insert(k1);
            present.insert(k2);
            edges[i] = {a, e};
            edges[j] = {c, b};
        }

        std::vector<Edge> out;
        out.reserve(m);
        for (const auto& [u, v] : edges) out.push_back(Edge{u, v, 1.0});
        WeightedGraph g(n, std::move(out));
        if (is_connected(g)) return g;
    }
    throw SolveError("could not generate a connected regular graph; try another seed");
}

} // namespace respars

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "respars/sparse.hpp"

namespace respars {

using Vertex = std::uint32_t;
using EdgeId = std::size_t;

struct Edge {
    Vertex u = 0;   // smaller endpoint
    Vertex v = 0;   // larger endpoint
    double w = 0.0; // positive weight (conductance)
};

// Immutable weighted undirected graph. Construction canonicalizes the edge
// list: endpoints are ordered u < v, parallel edges are merged by summing
// their weights, and edges are sorted by (u, v). Self-loops, out-of-range
// endpoints and nonpositive or non-finite weights are rejected.
class WeightedGraph {
public:
    WeightedGraph(Vertex n, std::vector<Edge> edges);

    Vertex n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    double min_weight() const; // requires m() > 0
    double max_weight() const;
    double weight_ratio() const { return max_weight() / min_weight(); }

    // Unweighted degree of every vertex.
    std::vector<std::uint32_t> degrees() const;

    // Index of edge (u, v) in edges(), or m() when absent. Endpoint order
    // does not matter.
    EdgeId find_edge(Vertex u, Vertex v) const;

private:
    Vertex n_ = 0;
    std::vector<Edge> edges_;
};

// Edge-list text format. Lines hold "u v w"; everything from '#' to the end
// of a line is a comment. A leading comment of the form "# n=<N> m=<M>"
// pins the vertex count (so trailing isolated vertices survive) and the
// number of edge records before merging. Without a header, n is one more
// than the largest endpoint.
WeightedGraph load_graph(std::istream& in);
WeightedGraph load_graph(const std::string& text);
WeightedGraph load_graph_file(const std::string& path);

// Canonical serialization: "# n=<n> m=<m>" header, then one "u v w" line
// per edge in (u, v) order, weights printed with 17 significant digits so a
// reload is bit-identical.
void write_graph(std::ostream& out, const WeightedGraph& g);
std::string serialize_graph(const WeightedGraph& g);
void write_graph_file(const std::string& path, const WeightedGraph& g);

// Weighted Laplacian L = D - A as CSR, n x n.
SparseMatrix laplacian(const WeightedGraph& g);

// Signed incidence matrix, m x n: row e of edge (u, v) with u < v carries
// -1 at u and +1 at v.
SparseMatrix incidence(const WeightedGraph& g);

bool is_connected(const WeightedGraph& g);

} // namespace respars

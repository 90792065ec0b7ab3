#include "respars/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "respars/errors.hpp"

namespace respars {

namespace {

std::string format_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    return buf;
}

} // namespace

WeightedGraph::WeightedGraph(Vertex n, std::vector<Edge> edges) : n_(n) {
    if (n < 1) throw PreconditionError("graph needs at least one vertex");
    for (Edge& e : edges) {
        if (e.u == e.v) {
            throw PreconditionError("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u >= n || e.v >= n) {
            throw PreconditionError("edge endpoint out of range: (" + std::to_string(e.u) +
                                    ", " + std::to_string(e.v) + ") with n = " + std::to_string(n));
        }
        if (!std::isfinite(e.w) || e.w <= 0.0) {
            throw PreconditionError("edge weight must be positive and finite");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    // Merge parallel edges by summing weights.
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (out > 0 && edges[out - 1].u == edges[i].u && edges[out - 1].v == edges[i].v) {
            edges[out - 1].w += edges[i].w;
        } else {
            edges[out++] = edges[i];
        }
    }
    edges.resize(out);
    edges_ = std::move(edges);
}

double WeightedGraph::min_weight() const {
    if (edges_.empty()) throw PreconditionError("min_weight on an edgeless graph");
    double w = edges_[0].w;
    for (const Edge& e : edges_) w = std::min(w, e.w);
    return w;
}

double WeightedGraph::max_weight() const {
    if (edges_.empty()) throw PreconditionError("max_weight on an edgeless graph");
    double w = edges_[0].w;
    for (const Edge& e : edges_) w = std::max(w, e.w);
    return w;
}

std::vector<std::uint32_t> WeightedGraph::degrees() const {
    std::vector<std::uint32_t> deg(n_, 0);
    for (const Edge& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

EdgeId WeightedGraph::find_edge(Vertex u, Vertex v) const {
    if (u > v) std::swap(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::make_pair(u, v),
                               [](const Edge& e, const std::pair<Vertex, Vertex>& key) {
                                   return e.u != key.first ? e.u < key.first : e.v < key.second;
                               });
    if (it != edges_.end() && it->u == u && it->v == v) {
        return static_cast<EdgeId>(it - edges_.begin());
    }
    return edges_.size();
}

namespace {

// Parses "u v w" records; '#' starts a comment anywhere. An optional
// leading "# n=<N> m=<M>" header pins the vertex count and the pre-merge
// record count.
struct EdgeListParser {
    bool have_header = false;
    std::uint64_t header_n = 0;
    std::uint64_t header_m = 0;
    std::vector<Edge> edges;
    Vertex max_vertex = 0;
    std::size_t line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(line_no) + ": " + msg);
    }

    void try_header(const std::string& comment) {
        unsigned long long n = 0, m = 0;
        char tail = 0;
        if (std::sscanf(comment.c_str(), " n=%llu m=%llu %c", &n, &m, &tail) == 2) {
            if (n < 1) fail("header vertex count must be at least 1");
            if (n > std::numeric_limits<Vertex>::max()) fail("header vertex count overflows");
            have_header = true;
            header_n = n;
            header_m = m;
        }
    }

    Vertex parse_vertex(const std::string& tok) {
        if (tok.empty() || !std::isdigit(static_cast<unsigned char>(tok[0]))) {
            fail("expected a vertex id, got '" + tok + "'");
        }
        errno = 0;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
        if (errno != 0 || end != tok.c_str() + tok.size()) fail("bad vertex id '" + tok + "'");
        if (v > std::numeric_limits<Vertex>::max()) fail("vertex id " + tok + " overflows");
        if (have_header && v >= header_n) {
            fail("vertex id " + tok + " outside declared n=" + std::to_string(header_n));
        }
        return static_cast<Vertex>(v);
    }

    void parse_line(const std::string& raw) {
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            if (hash == 0 || line.find_first_not_of(" \t\r") == hash) {
                // Comment-only line; the first one may be the header.
                if (edges.empty() && !have_header) try_header(line.substr(hash + 1));
                return;
            }
            line.resize(hash);
        }
        std::istringstream fields(line);
        std::string a, b, c, extra;
        if (!(fields >> a)) return; // blank
        if (!(fields >> b >> c)) fail("expected 'u v w'");
        if (fields >> extra) fail("trailing tokens after 'u v w'");

        const Vertex u = parse_vertex(a);
        const Vertex v = parse_vertex(b);
        if (u == v) fail("self-loop at vertex " + a);

        errno = 0;
        char* end = nullptr;
        const double w = std::strtod(c.c_str(), &end);
        if (errno != 0 || end != c.c_str() + c.size()) fail("bad weight '" + c + "'");
        if (!std::isfinite(w)) fail("weight must be finite");
        if (w <= 0.0) fail("weight must be positive, got " + c);

        edges.push_back(Edge{u, v, w});
        max_vertex = std::max(max_vertex, std::max(u, v));
    }

    WeightedGraph finish() {
        if (have_header && edges.size() != header_m) {
            throw ParseError("header declares m=" + std::to_string(header_m) + " but found " +
                             std::to_string(edges.size()) + " edge records");
        }
        Vertex n;
        if (have_header) {
            n = static_cast<Vertex>(header_n);
        } else if (!edges.empty()) {
            n = max_vertex + 1;
        } else {
            throw ParseError("no edges and no '# n=... m=...' header");
        }
        return WeightedGraph(n, std::move(edges));
    }
};

} // namespace

WeightedGraph load_graph(std::istream& in) {
    EdgeListParser parser;
    std::string line;
    while (std::getline(in, line)) {
        ++parser.line_no;
        parser.parse_line(line);
    }
    if (in.bad()) throw ParseError("read failure on edge-list stream");
    return parser.finish();
}

WeightedGraph load_graph(const std::string& text) {
    std::istringstream in(text);
    return load_graph(in);
}

WeightedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_graph(in);
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
    out << "# n=" << g.n() << " m=" << g.m() << "\n";
    for (const Edge& e : g.edges()) {
        out << e.u << " " << e.v << " " << format_weight(e.w) << "\n";
    }
}

std::string serialize_graph(const WeightedGraph& g) {
    std::ostringstream out;
    write_graph(out, g);
    return out.str();
}

void write_graph_file(const std::string& path, const WeightedGraph& g) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    write_graph(out, g);
    out.flush();
    if (!out) throw ParseError("write failure on '" + path + "'");
}

SparseMatrix laplacian(const WeightedGraph& g) {
    std::vector<SparseMatrix::Triplet> trip;
    trip.reserve(g.m() * 4);
    for (const Edge& e : g.edges()) {
        trip.push_back({e.u, e.v, -e.w});
        trip.push_back({e.v, e.u, -e.w});
        trip.push_back({e.u, e.u, e.w});
        trip.push_back({e.v, e.v, e.w});
    }
    return SparseMatrix::from_triplets(g.n(), g.n(), std::move(trip));
}

SparseMatrix incidence(const WeightedGraph& g) {
    const std::size_t m = g.m();
    if (m > std::numeric_limits<std::uint32_t>::max()) {
        throw PreconditionError("too many edges for an incidence matrix");
    }
    std::vector<std::size_t> row_ptr(m + 1);
    std::vector<std::uint32_t> col_idx(2 * m);
    std::vector<double> values(2 * m);
    for (std::size_t e = 0; e < m; ++e) {
        row_ptr[e] = 2 * e;
        col_idx[2 * e] = g.edge(e).u;
        values[2 * e] = -1.0;
        col_idx[2 * e + 1] = g.edge(e).v;
        values[2 * e + 1] = 1.0;
    }
    row_ptr[m] = 2 * m;
    return SparseMatrix(static_cast<std::uint32_t>(m), g.n(), std::move(row_ptr),
                        std::move(col_idx), std::move(values));
}

bool is_connected(const WeightedGraph& g) {
    const Vertex n = g.n();
    if (n == 1) return true;
    // CSR adjacency without per-vertex allocations.
    std::vector<std::size_t> offset(n + 1, 0);
    for (const Edge& e : g.edges()) {
        ++offset[e.u + 1];
        ++offset[e.v + 1];
    }
    for (Vertex v = 0; v < n; ++v) offset[v + 1] += offset[v];
    std::vector<Vertex> adj(2 * g.m());
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (const Edge& e : g.edges()) {
        adj[cursor[e.u]++] = e.v;
        adj[cursor[e.v]++] = e.u;
    }
    std::vector<char> seen(n, 0);
    std::vector<Vertex> queue;
    queue.reserve(n);
    queue.push_back(0);
    seen[0] = 1;
    std::size_t visited = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        for (std::size_t i = offset[v]; i < offset[v + 1]; ++i) {
            const Vertex t = adj[i];
            if (!seen[t]) {
                seen[t] = 1;
                ++visited;
                queue.push_back(t);
            }
        }
    }
    return visited == n;
}

} // namespace respars

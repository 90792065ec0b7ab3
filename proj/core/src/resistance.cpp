#include "respars/resistance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "respars/errors.hpp"
#include "respars/random.hpp"

namespace respars {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::uint32_t jl_dimension(std::uint32_t n, double epsilon) {
    if (n < 2) throw PreconditionError("sketch dimension needs n >= 2");
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw PreconditionError("epsilon must be in (0, 1]");
    }
    const double k = std::ceil(24.0 * std::log(static_cast<double>(n)) / (epsilon * epsilon));
    if (k > 4.0e9) throw PreconditionError("sketch dimension overflows");
    return static_cast<std::uint32_t>(k);
}

double default_delta(const WeightedGraph& g, double epsilon) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) {
        throw PreconditionError("solve-tolerance formula needs epsilon in (0, 1)");
    }
    if (g.n() < 2 || g.m() < 1) throw PreconditionError("needs a graph with an edge");
    if (!is_connected(g)) throw PreconditionError("graph must be connected");
    const double n = static_cast<double>(g.n());
    const double ratio = g.min_weight() / g.max_weight();
    return (epsilon / 3.0) *
           std::sqrt(2.0 * (1.0 - epsilon) * ratio / ((1.0 + epsilon) * n * n * n));
}

double ResistanceOracle::query(Vertex u, Vertex v) const {
    if (u >= n || v >= n) throw PreconditionError("query vertex out of range");
    if (u == v) return 0.0;
    const double* zu = values.data() + std::size_t(u) * k;
    const double* zv = values.data() + std::size_t(v) * k;
    double acc = 0.0;
    for (std::uint32_t i = 0; i < k; ++i) {
        const double d = zu[i] - zv[i];
        acc += d * d;
    }
    return acc;
}

ResistanceOracle build_oracle(const WeightedGraph& g, const OracleBuildOptions& opts,
                              std::uint64_t seed) {
    const std::uint32_t n = g.n();
    const std::size_t m = g.m();
    if (!is_connected(g)) throw PreconditionError("oracle needs a connected graph");
    const std::uint32_t k = opts.k_override ? *opts.k_override : jl_dimension(n, opts.epsilon);
    if (k < 1) throw PreconditionError("sketch needs at least one row");

    // The tolerance formula degenerates as epsilon -> 1; evaluate it at 0.9
    // in that case so epsilon = 1 builds still get a sound default.
    const double delta = opts.delta
                             ? *opts.delta
                             : default_delta(g, opts.epsilon < 1.0 ? opts.epsilon : 0.9);
    if (!(delta > 0.0)) throw PreconditionError("solve tolerance must be positive");
    if (!(opts.safety >= 1.0)) throw PreconditionError("safety factor must be at least 1");
    const double residual_tol = std::max(delta / opts.safety, 1e-15);
    const int max_iter = opts.max_iter > 0
                             ? opts.max_iter
                             : static_cast<int>(std::min<std::uint64_t>(4 * std::uint64_t(n) + 200,
                                                                        1u << 30));

    ResistanceOracle oracle;
    oracle.n = n;
    oracle.k = k;
    oracle.epsilon = opts.epsilon;
    oracle.delta = delta;
    oracle.residual_tol = residual_tol;
    oracle.seed = seed;
    oracle.values.assign(std::size_t(n) * k, 0.0);
    oracle.solve_stats.assign(k, RowSolveStat{});

    const SparseMatrix lap = laplacian(g);
    std::vector<double> sqrtw(m);
    for (std::size_t e = 0; e < m; ++e) sqrtw[e] = std::sqrt(g.edge(e).w);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));

    // Row i sketches a random +/-1 combination of the scaled incidence rows
    // and solves it against the Laplacian. Each row draws from its own split
    // RNG stream, so any execution order gives bit-identical output.
    std::mutex fail_mutex;
    std::uint32_t failed_row = k;
    std::string fail_what;
    auto solve_row = [&](std::uint32_t row) {
        SplitMix64 rng = split_stream(seed, row);
        std::vector<double> y(n, 0.0);
        for (std::size_t e = 0; e < m; ++e) {
            const double s = (rng.next_sign_bit() ? scale : -scale) * sqrtw[e];
            y[g.edge(e).u] -= s;
            y[g.edge(e).v] += s;
        }
        SolveResult res = detail::pcg_laplacian_unchecked(lap, y, residual_tol, max_iter);
        if (!res.converged) {
            throw SolveError("sketch row " + std::to_string(row) +
                             " did not converge: residual " + fmt17(res.residual) + " after " +
                             std::to_string(res.iterations) + " iterations (tolerance " +
                             fmt17(residual_tol) + ")");
        }
        for (std::uint32_t v = 0; v < n; ++v) {
            oracle.values[std::size_t(v) * k + row] = res.solution[v];
        }
        oracle.solve_stats[row] = RowSolveStat{res.iterations, res.residual};
    };

    unsigned threads = opts.threads;
    if (threads == 0) {
        threads = std::thread::hardware_concurrency();
        if (threads == 0) threads = 1;
    }
    threads = std::min<unsigned>(threads, k);

    if (threads <= 1) {
        for (std::uint32_t row = 0; row < k; ++row) solve_row(row);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint32_t row = next.fetch_add(1);
                    if (row >= k) return;
                    try {
                        solve_row(row);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(fail_mutex);
                        if (row < failed_row) {
                            failed_row = row;
                            fail_what = e.what();
                        }
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (failed_row < k) throw SolveError(fail_what);
    }
    return oracle;
}

ResistanceOracle build_oracle(const WeightedGraph& g, double epsilon, double delta,
                              std::uint64_t seed) {
    OracleBuildOptions opts;
    opts.epsilon = epsilon;
    opts.delta = delta;
    return build_oracle(g, opts, seed);
}

std::vector<double> all_edge_resistances(const ResistanceOracle& oracle,
                                         const WeightedGraph& g) {
    if (oracle.n != g.n()) throw PreconditionError("oracle was built for a different vertex set");
    std::vector<double> r(g.m());
    for (std::size_t e = 0; e < g.m(); ++e) {
        r[e] = oracle.query(g.edge(e).u, g.edge(e).v);
    }
    return r;
}

ExactResistances::ExactResistances(const WeightedGraph& g) : grounded_(laplacian(g)) {}

double ExactResistances::query(Vertex u, Vertex v) const {
    return grounded_.pair_quadratic(u, v);
}

std::vector<double> exact_resistances(const WeightedGraph& g) {
    const ExactResistances exact(g);
    std::vector<double> r(g.m());
    for (std::size_t e = 0; e < g.m(); ++e) {
        r[e] = exact.query(g.edge(e).u, g.edge(e).v);
    }
    return r;
}

namespace {
constexpr const char* kOracleMagic = "respars-oracle";
constexpr int kOracleVersion = 1;
} // namespace

void save_oracle(const ResistanceOracle& oracle, std::ostream& out) {
    out << kOracleMagic << " " << kOracleVersion << "\n";
    out << "n " << oracle.n << "\n";
    out << "k " << oracle.k << "\n";
    out << "epsilon " << fmt17(oracle.epsilon) << "\n";
    out << "delta " << fmt17(oracle.delta) << "\n";
    out << "residual_tol " << fmt17(oracle.residual_tol) << "\n";
    out << "seed " << oracle.seed << "\n";
    out << "values\n";
    for (std::uint32_t row = 0; row < oracle.k; ++row) {
        for (std::uint32_t v = 0; v < oracle.n; ++v) {
            if (v) out << " ";
            out << fmt17(oracle.z(row, v));
        }
        out << "\n";
    }
    out << "end\n";
}

void save_oracle_file(const ResistanceOracle& oracle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    save_oracle(oracle, out);
    out.flush();
    if (!out) throw ParseError("write failure on '" + path + "'");
}

namespace {

[[noreturn]] void oracle_fail(const std::string& msg) {
    throw ParseError("oracle dump: " + msg);
}

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) oracle_fail(std::string("truncated before ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

template <typename T>
T parse_scalar_line(std::istream& in, const std::string& key) {
    std::istringstream fields(expect_line(in, key.c_str()));
    std::string k;
    T value{};
    std::string extra;
    if (!(fields >> k >> value) || k != key || (fields >> extra)) {
        oracle_fail("expected '" + key + " <value>'");
    }
    return value;
}

} // namespace

ResistanceOracle load_oracle(std::istream& in) {
    {
        std::istringstream fields(expect_line(in, "header"));
        std::string magic;
        int version = 0;
        if (!(fields >> magic >> version) || magic != kOracleMagic) {
            oracle_fail("bad magic; not an oracle dump");
        }
        if (version != kOracleVersion) {
            oracle_fail("unsupported version " + std::to_string(version));
        }
    }
    ResistanceOracle oracle;
    oracle.n = parse_scalar_line<std::uint32_t>(in, "n");
    oracle.k = parse_scalar_line<std::uint32_t>(in, "k");
    oracle.epsilon = parse_scalar_line<double>(in, "epsilon");
    oracle.delta = parse_scalar_line<double>(in, "delta");
    oracle.residual_tol = parse_scalar_line<double>(in, "residual_tol");
    oracle.seed = parse_scalar_line<std::uint64_t>(in, "seed");
    if (oracle.n < 1 || oracle.k < 1) oracle_fail("n and k must be positive");
    if (expect_line(in, "values") != "values") oracle_fail("expected 'values'");
    oracle.values.assign(std::size_t(oracle.n) * oracle.k, 0.0);
    for (std::uint32_t row = 0; row < oracle.k; ++row) {
        std::istringstream fields(expect_line(in, "sketch row"));
        for (std::uint32_t v = 0; v < oracle.n; ++v) {
            double x = 0.0;
            if (!(fields >> x)) oracle_fail("row " + std::to_string(row) + " is too short");
            oracle.values[std::size_t(v) * oracle.k + row] = x;
        }
        std::string extra;
        if (fields >> extra) oracle_fail("row " + std::to_string(row) + " has trailing tokens");
    }
    if (expect_line(in, "end") != "end") oracle_fail("expected 'end'");
    return oracle;
}

ResistanceOracle load_oracle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_oracle(in);
}

} // namespace respars

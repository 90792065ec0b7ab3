#include "respars/verify.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "respars/errors.hpp"
#include "respars/random.hpp"
#include "respars/resistance.hpp"
#include "respars/solver.hpp"

namespace respars {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::MatrixXd dense_laplacian(const WeightedGraph& g) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const Edge& e : g.edges()) {
        l(e.u, e.v) -= e.w;
        l(e.v, e.u) -= e.w;
        l(e.u, e.u) += e.w;
        l(e.v, e.v) += e.w;
    }
    return l;
}

void check_dense_size(std::uint32_t size, const char* what) {
    const std::uint32_t limit = dense_vertex_limit();
    if (size > limit) {
        throw PreconditionError(std::string(what) + " needs size <= " + std::to_string(limit) +
                                " (RESPARS_DENSE_LIMIT), got " + std::to_string(size));
    }
}

} // namespace

std::pair<double, double> spectral_bounds(const WeightedGraph& g, const WeightedGraph& h) {
    if (g.n() != h.n()) throw PreconditionError("vertex sets differ");
    const std::uint32_t n = g.n();
    check_dense_size(n, "spectral certification");
    if (!is_connected(g)) throw PreconditionError("base graph must be connected");
    if (n == 1) return {1.0, 1.0};

    // Reduce the pencil (L_H, L_G) to the orthogonal complement of the
    // kernel of L_G, then symmetric-scale to an ordinary eigenproblem.
    const Eigen::MatrixXd lg = dense_laplacian(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_g(lg);
    if (es_g.info() != Eigen::Success) throw SolveError("eigendecomposition failed");
    const Eigen::VectorXd lambda = es_g.eigenvalues();
    const Eigen::MatrixXd u1 = es_g.eigenvectors().rightCols(n - 1);
    Eigen::VectorXd inv_sqrt(n - 1);
    for (std::uint32_t i = 0; i < n - 1; ++i) {
        const double li = lambda[i + 1];
        if (!(li > 0.0)) throw PreconditionError("base laplacian is numerically singular");
        inv_sqrt[i] = 1.0 / std::sqrt(li);
    }

    const Eigen::MatrixXd lh = dense_laplacian(h);
    const Eigen::MatrixXd a = u1.transpose() * lh * u1;
    const Eigen::MatrixXd scaled = inv_sqrt.asDiagonal() * a * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolveError("eigendecomposition failed");
    return {es.eigenvalues()(0), es.eigenvalues()(n - 2)};
}

PiCheckReport pi_check_details(const WeightedGraph& g) {
    const std::uint32_t n = g.n();
    const std::size_t m = g.m();
    check_dense_size(n, "projection check");
    if (m > dense_vertex_limit()) {
        throw PreconditionError("projection check needs m <= " +
                                std::to_string(dense_vertex_limit()) + " (RESPARS_DENSE_LIMIT)");
    }
    if (m == 0) throw PreconditionError("projection check needs at least one edge");
    if (!is_connected(g)) throw PreconditionError("projection check needs a connected graph");

    const GroundedLaplacian grounded(laplacian(g));
    // P = W^1/2 B pinv(L) B^T W^1/2, assembled column by column.
    Eigen::MatrixXd x(n, m); // pinv(L) applied to the scaled incidence rows
    std::vector<double> y(n);
    for (std::size_t e = 0; e < m; ++e) {
        const Edge& ed = g.edge(e);
        const double s = std::sqrt(ed.w);
        std::fill(y.begin(), y.end(), 0.0);
        y[ed.u] = -s;
        y[ed.v] = s;
        const std::vector<double> sol = grounded.apply_pinv(y);
        for (std::uint32_t v = 0; v < n; ++v) x(v, e) = sol[v];
    }
    Eigen::MatrixXd p(m, m);
    for (std::size_t f = 0; f < m; ++f) {
        const Edge& ed = g.edge(f);
        const double s = std::sqrt(ed.w);
        p.row(f) = s * (x.row(ed.v) - x.row(ed.u));
    }

    PiCheckReport rep;
    rep.idempotency_error = (p * p - p).cwiseAbs().maxCoeff();
    rep.trace_error = std::abs(p.trace() - static_cast<double>(n - 1));
    const std::vector<double> r = exact_resistances(g);
    for (std::size_t e = 0; e < m; ++e) {
        rep.diag_resistance_error =
            std::max(rep.diag_resistance_error, std::abs(p(e, e) - g.edge(e).w * r[e]));
        rep.column_norm_error =
            std::max(rep.column_norm_error, std::abs(p(e, e) - p.col(e).squaredNorm()));
    }
    rep.pass = rep.idempotency_error <= 1e-8 && rep.trace_error <= 1e-8 &&
               rep.diag_resistance_error <= 1e-8 && rep.column_norm_error <= 1e-8;
    return rep;
}

bool pi_matrix_checks(const WeightedGraph& g) { return pi_check_details(g).pass; }

namespace {

double cut_value(const WeightedGraph& g, const std::vector<char>& side) {
    double acc = 0.0;
    for (const Edge& e : g.edges()) {
        if (side[e.u] != side[e.v]) acc += e.w;
    }
    return acc;
}

} // namespace

double cut_check(const WeightedGraph& g, const WeightedGraph& h, int trials,
                 std::uint64_t seed) {
    if (g.n() != h.n()) throw PreconditionError("vertex sets differ");
    if (trials < 0) throw PreconditionError("trial count must be nonnegative");
    const std::uint32_t n = g.n();
    double worst = 0.0;

    // Singleton cuts are exactly the weighted degrees.
    std::vector<double> wdeg_g(n, 0.0), wdeg_h(n, 0.0);
    for (const Edge& e : g.edges()) {
        wdeg_g[e.u] += e.w;
        wdeg_g[e.v] += e.w;
    }
    for (const Edge& e : h.edges()) {
        wdeg_h[e.u] += e.w;
        wdeg_h[e.v] += e.w;
    }
    for (std::uint32_t v = 0; v < n; ++v) {
        if (wdeg_g[v] > 0.0) {
            worst = std::max(worst, std::abs(wdeg_h[v] / wdeg_g[v] - 1.0));
        }
    }

    std::vector<char> side(n);
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng = split_stream(seed, static_cast<std::uint64_t>(t));
        for (std::uint32_t v = 0; v < n; ++v) side[v] = rng.next_sign_bit() ? 1 : 0;
        const double cg = cut_value(g, side);
        if (cg <= 0.0) continue; // cut misses g entirely; ratio undefined
        const double ch = cut_value(h, side);
        worst = std::max(worst, std::abs(ch / cg - 1.0));
    }
    return worst;
}

double degree_bound_check(const WeightedGraph& g, const WeightedGraph& h) {
    if (g.n() != h.n()) throw PreconditionError("vertex sets differ");
    const std::uint32_t n = g.n();
    std::vector<double> ratio_sum(n, 0.0);
    for (const Edge& e : h.edges()) {
        const EdgeId idx = g.find_edge(e.u, e.v);
        if (idx == g.m()) {
            throw PreconditionError("sparsifier edge (" + std::to_string(e.u) + ", " +
                                    std::to_string(e.v) + ") is absent from the base graph");
        }
        const double ratio = e.w / g.edge(idx).w;
        ratio_sum[e.u] += ratio;
        ratio_sum[e.v] += ratio;
    }
    const std::vector<std::uint32_t> deg = g.degrees();
    double worst = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (deg[v] > 0) {
            worst = std::max(worst, ratio_sum[v] / static_cast<double>(deg[v]));
        }
    }
    return worst;
}

VerificationReport verify_sparsifier(const WeightedGraph& g, const WeightedGraph& h,
                                     double epsilon, int cut_trials, int resistance_pairs,
                                     std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
    VerificationReport rep;
    rep.epsilon = epsilon;
    rep.cut_trials = cut_trials;
    rep.resistance_pairs = resistance_pairs;
    rep.seed = seed;

    const auto bounds = spectral_bounds(g, h);
    rep.rayleigh_min = bounds.first;
    rep.rayleigh_max = bounds.second;
    rep.cut_worst_ratio = cut_check(g, h, cut_trials, split_stream(seed, 101).next());
    rep.degree_bound_max = degree_bound_check(g, h);

    if (resistance_pairs > 0 && g.n() >= 2) {
        if (!is_connected(h)) {
            rep.resistance_worst_ratio = std::numeric_limits<double>::infinity();
        } else {
            const ExactResistances exact_g(g);
            const ExactResistances exact_h(h);
            SplitMix64 rng = split_stream(seed, 202);
            double worst = 0.0;
            for (int i = 0; i < resistance_pairs; ++i) {
                const auto u = static_cast<Vertex>(rng.next_below(g.n()));
                Vertex v = u;
                while (v == u) v = static_cast<Vertex>(rng.next_below(g.n()));
                worst = std::max(worst,
                                 std::abs(exact_h.query(u, v) / exact_g.query(u, v) - 1.0));
            }
            rep.resistance_worst_ratio = worst;
        }
    }

    rep.pass = rep.rayleigh_min >= 1.0 - epsilon - 1e-12 &&
               rep.rayleigh_max <= 1.0 + epsilon + 1e-12 &&
               rep.cut_worst_ratio <= epsilon + 1e-12;
    return rep;
}

std::string report_to_kv(const VerificationReport& r) {
    std::ostringstream out;
    out << "epsilon=" << fmt17(r.epsilon) << "\n";
    out << "rayleigh_min=" << fmt17(r.rayleigh_min) << "\n";
    out << "rayleigh_max=" << fmt17(r.rayleigh_max) << "\n";
    out << "cut_worst_ratio=" << fmt17(r.cut_worst_ratio) << "\n";
    out << "resistance_worst_ratio=" << fmt17(r.resistance_worst_ratio) << "\n";
    out << "degree_bound_max=" << fmt17(r.degree_bound_max) << "\n";
    out << "cut_trials=" << r.cut_trials << "\n";
    out << "resistance_pairs=" << r.resistance_pairs << "\n";
    out << "seed=" << r.seed << "\n";
    out << "pass=" << (r.pass ? "true" : "false") << "\n";
    return out.str();
}

std::string report_to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["schema"] = "respars.verify_report/1";
    auto number = [](double v) -> nlohmann::ordered_json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    j["epsilon"] = number(r.epsilon);
    j["rayleigh_min"] = number(r.rayleigh_min);
    j["rayleigh_max"] = number(r.rayleigh_max);
    j["cut_worst_ratio"] = number(r.cut_worst_ratio);
    j["resistance_worst_ratio"] = number(r.resistance_worst_ratio);
    j["degree_bound_max"] = number(r.degree_bound_max);
    j["cut_trials"] = r.cut_trials;
    j["resistance_pairs"] = r.resistance_pairs;
    j["seed"] = r.seed;
    j["pass"] = r.pass;
    return j.dump(2) + "\n";
}

} // namespace respars

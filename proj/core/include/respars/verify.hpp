#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "respars/graph.hpp"

namespace respars {

// Extremal generalized Rayleigh quotients x^T L_H x / x^T L_G x over x
// orthogonal to ones: the pencil (L_H, L_G) reduced to the complement of
// the kernel of L_G, solved densely. Requires matching vertex sets,
// connected g, and n <= dense_vertex_limit(). H == G gives (1, 1); H with
// doubled weights gives (2, 2).
std::pair<double, double> spectral_bounds(const WeightedGraph& g, const WeightedGraph& h);

// Structural checks on the projection P = W^1/2 B pinv(L) B^T W^1/2
// (each error compared against 1e-8): P is idempotent, trace n - 1, its
// diagonal equals w_e R_e, and each diagonal entry equals its squared
// column norm. Dense; gated by dense_vertex_limit().
struct PiCheckReport {
    double idempotency_error = 0.0;     // max |(P^2 - P)(e, f)|
    double trace_error = 0.0;           // |trace(P) - (n - 1)|
    double diag_resistance_error = 0.0; // max |P(e, e) - w_e R_e|
    double column_norm_error = 0.0;     // max |P(e, e) - ||P(., e)||^2|
    bool pass = false;
};
PiCheckReport pi_check_details(const WeightedGraph& g);
bool pi_matrix_checks(const WeightedGraph& g);

// Worst relative cut disagreement |cut_H(S) / cut_G(S) - 1| over random
// 0/1 cuts (one split RNG stream per trial) plus every singleton cut.
// Cuts with zero value in g are skipped.
double cut_check(const WeightedGraph& g, const WeightedGraph& h, int trials,
                 std::uint64_t seed);

// max over vertices of sum_{e: v in e, e in H} (w_H(e) / w_G(e)) divided by
// deg_G(v). Errors if h has an edge absent from g. Empty h gives 0;
// h == g gives exactly 1.
double degree_bound_check(const WeightedGraph& g, const WeightedGraph& h);

struct VerificationReport {
    double epsilon = 0.0;
    double rayleigh_min = 0.0;
    double rayleigh_max = 0.0;
    double cut_worst_ratio = 0.0;
    // Worst |R_H(u, v) / R_G(u, v) - 1| over sampled vertex pairs;
    // infinity when h is disconnected. Informational: the spectral
    // guarantee only bounds it by epsilon / (1 - epsilon).
    double resistance_worst_ratio = 0.0;
    double degree_bound_max = 0.0;
    int cut_trials = 0;
    int resistance_pairs = 0;
    std::uint64_t seed = 0;
    // rayleigh within [1 - epsilon, 1 + epsilon] and cut_worst_ratio <=
    // epsilon.
    bool pass = false;
};

VerificationReport verify_sparsifier(const WeightedGraph& g, const WeightedGraph& h,
                                     double epsilon, int cut_trials,
                                     int resistance_pairs, std::uint64_t seed);

// "key=value" lines in a fixed order.
std::string report_to_kv(const VerificationReport& r);
// JSON object with the same fields plus a schema tag; non-finite values
// serialize as null.
std::string report_to_json(const VerificationReport& r);

} // namespace respars

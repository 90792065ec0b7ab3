#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "respars/sparse.hpp"

namespace respars {

struct SolveResult {
    std::vector<double> solution; // orthogonal to the all-ones vector
    int iterations = 0;
    double residual = 0.0;        // ||L x - b||2 / ||b||2, recomputed on exit
    bool converged = false;
};

// Jacobi-preconditioned conjugate gradients for connected-graph Laplacians,
// deflated against the all-ones kernel: the right-hand side is projected
// onto ones-complement first (the reported residual is measured against
// that projected b), and the ones-component of every iterate is removed so
// rounding cannot let the kernel leak back in. Rejects matrices that are
// not symmetric with nonpositive off-diagonals. Hitting max_iter reports
// converged = false rather than throwing. max_iter <= 0 selects 4 n + 200.
//
// The stopping rule is the relative two-norm residual. Callers that need an
// energy-norm guarantee ||x - x*||_L <= delta ||x*||_L divide delta by a
// safety factor before passing it here; see OracleBuildOptions.
SolveResult solve_laplacian(const SparseMatrix& laplacian,
                            std::span<const double> rhs,
                            double tol, int max_iter = 0);

// Vertex cap for the dense exact paths (pseudoinverse application, exact
// resistances, spectral verification). RESPARS_DENSE_LIMIT in the
// environment overrides the default of 2000; read on every call.
std::uint32_t dense_vertex_limit();

// Exact Laplacian pseudoinverse via one dense factorization: the row and
// column of vertex 0 are deleted, the remaining SPD block is factored once,
// and every application solves, re-embeds, and projects onto the complement
// of ones. One step of iterative refinement keeps quadratic forms accurate
// near 1e-9 even at weight ratios around 1e6. Requires a connected graph
// with n <= dense_vertex_limit().
class GroundedLaplacian {
public:
    explicit GroundedLaplacian(const SparseMatrix& laplacian);
    ~GroundedLaplacian();
    GroundedLaplacian(GroundedLaplacian&& other) noexcept;
    GroundedLaplacian& operator=(GroundedLaplacian&& other) noexcept;

    std::uint32_t n() const;

    // x with L x = (I - ones ones^T / n) y and x orthogonal to ones.
    std::vector<double> apply_pinv(std::span<const double> y) const;

    // (chi_u - chi_v)^T pinv(L) (chi_u - chi_v), u != v.
    double pair_quadratic(std::uint32_t u, std::uint32_t v) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around GroundedLaplacian.
std::vector<double> pinv_apply_exact(const SparseMatrix& laplacian,
                                     std::span<const double> y);

namespace detail {
// Same iteration as solve_laplacian but skips matrix validation; for
// callers that validated once and then solve many right-hand sides.
SolveResult pcg_laplacian_unchecked(const SparseMatrix& laplacian,
                                    std::span<const double> rhs,
                                    double tol, int max_iter);
} // namespace detail

} // namespace respars

#include "respars/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "respars/errors.hpp"

namespace respars {

namespace {

double vec_mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Remove the all-ones component.
void deflate(std::span<double> x) {
    const double m = vec_mean(x);
    for (double& v : x) v -= m;
}

double vec_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double vec_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void validate_laplacian(const SparseMatrix& l) {
    if (l.rows() != l.cols()) throw PreconditionError("laplacian must be square");
    const auto& row_ptr = l.row_ptr();
    const auto& col_idx = l.col_idx();
    const auto& values = l.values();
    for (std::uint32_t r = 0; r < l.rows(); ++r) {
        for (std::size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) {
            const std::uint32_t c = col_idx[i];
            if (c != r && values[i] > 0.0) {
                throw PreconditionError("positive off-diagonal entry at (" + std::to_string(r) +
                                        ", " + std::to_string(c) + "); not a graph laplacian");
            }
            if (l.at(c, r) != values[i]) {
                throw PreconditionError("matrix is not symmetric at (" + std::to_string(r) +
                                        ", " + std::to_string(c) + ")");
            }
        }
    }
}

bool pattern_connected(const SparseMatrix& l) {
    const std::uint32_t n = l.rows();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> queue;
    queue.reserve(n);
    queue.push_back(0);
    seen[0] = 1;
    std::uint32_t visited = 1;
    const auto& row_ptr = l.row_ptr();
    const auto& col_idx = l.col_idx();
    const auto& values = l.values();
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t v = queue[head];
        for (std::size_t i = row_ptr[v]; i < row_ptr[v + 1]; ++i) {
            const std::uint32_t t = col_idx[i];
            if (t != v && values[i] != 0.0 && !seen[t]) {
                seen[t] = 1;
                ++visited;
                queue.push_back(t);
            }
        }
    }
    return visited == n;
}

} // namespace

namespace detail {

SolveResult pcg_laplacian_unchecked(const SparseMatrix& l, std::span<const double> rhs,
                                    double tol, int max_iter) {
    const std::uint32_t n = l.rows();
    if (rhs.size() != n) throw PreconditionError("rhs length does not match matrix");
    if (!(tol > 0.0)) throw PreconditionError("solver tolerance must be positive");
    if (max_iter <= 0) max_iter = static_cast<int>(4 * std::uint64_t(n) + 200);

    SolveResult out;
    out.solution.assign(n, 0.0);

    std::vector<double> b(rhs.begin(), rhs.end());
    deflate(b);
    const double bnorm = vec_norm(b);
    if (bnorm == 0.0 || n == 1) {
        out.converged = true;
        return out;
    }

    std::vector<double> invdiag(n);
    {
        const auto diag = l.diagonal();
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!(diag[i] > 0.0)) {
                throw PreconditionError("zero diagonal at vertex " + std::to_string(i) +
                                        "; laplacian has an isolated vertex");
            }
            invdiag[i] = 1.0 / diag[i];
        }
    }

    std::vector<double>& x = out.solution;
    std::vector<double> r = b;
    std::vector<double> z(n), p(n), ap(n);
    for (std::uint32_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
    deflate(z);
    p = z;
    double rz = vec_dot(r, z);

    for (int it = 1; it <= max_iter; ++it) {
        spmv(l, p, ap);
        const double pap = vec_dot(p, ap);
        if (!(pap > 0.0)) break; // numerical breakdown; report via residual
        const double alpha = rz / pap;
        for (std::uint32_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::uint32_t i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        deflate(x);
        deflate(r);
        out.iterations = it;
        if (vec_norm(r) <= tol * bnorm) break;
        for (std::uint32_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
        deflate(z);
        const double rz_next = vec_dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::uint32_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    // Recompute the residual from scratch; the recurrence drifts.
    spmv(l, x, ap);
    for (std::uint32_t i = 0; i < n; ++i) ap[i] = b[i] - ap[i];
    out.residual = vec_norm(ap) / bnorm;
    out.converged = out.residual <= tol;
    return out;
}

} // namespace detail

SolveResult solve_laplacian(const SparseMatrix& laplacian, std::span<const double> rhs,
                            double tol, int max_iter) {
    validate_laplacian(laplacian);
    return detail::pcg_laplacian_unchecked(laplacian, rhs, tol, max_iter);
}

std::uint32_t dense_vertex_limit() {
    if (const char* env = std::getenv("RESPARS_DENSE_LIMIT")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1 && v <= 100000) {
            return static_cast<std::uint32_t>(v);
        }
    }
    return 2000;
}

struct GroundedLaplacian::Impl {
    std::uint32_t n = 0;
    Eigen::MatrixXd grounded; // rows and columns 1..n-1
    Eigen::LDLT<Eigen::MatrixXd> factor;
};

GroundedLaplacian::GroundedLaplacian(const SparseMatrix& laplacian)
    : impl_(std::make_unique<Impl>()) {
    validate_laplacian(laplacian);
    const std::uint32_t n = laplacian.rows();
    if (n > dense_vertex_limit()) {
        throw PreconditionError("n = " + std::to_string(n) + " exceeds the dense limit of " +
                                std::to_string(dense_vertex_limit()) +
                                " (RESPARS_DENSE_LIMIT)");
    }
    if (!pattern_connected(laplacian)) {
        throw PreconditionError("grounded system is singular: graph is disconnected");
    }
    impl_->n = n;
    if (n == 1) return;

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n - 1, n - 1);
    const auto& row_ptr = laplacian.row_ptr();
    const auto& col_idx = laplacian.col_idx();
    const auto& values = laplacian.values();
    for (std::uint32_t r = 1; r < n; ++r) {
        for (std::size_t i = row_ptr[r]; i < row_ptr[r + 1]; ++i) {
            if (col_idx[i] >= 1) g(r - 1, col_idx[i] - 1) = values[i];
        }
    }
    impl_->grounded = std::move(g);
    impl_->factor.compute(impl_->grounded);
    if (impl_->factor.info() != Eigen::Success) {
        throw PreconditionError("grounded laplacian factorization failed");
    }
}

GroundedLaplacian::~GroundedLaplacian() = default;
GroundedLaplacian::GroundedLaplacian(GroundedLaplacian&& other) noexcept = default;
GroundedLaplacian& GroundedLaplacian::operator=(GroundedLaplacian&& other) noexcept = default;

std::uint32_t GroundedLaplacian::n() const { return impl_->n; }

std::vector<double> GroundedLaplacian::apply_pinv(std::span<const double> y) const {
    const std::uint32_t n = impl_->n;
    if (y.size() != n) throw PreconditionError("pinv rhs length does not match matrix");
    if (n == 1) return {0.0};

    Eigen::VectorXd b(n);
    for (std::uint32_t i = 0; i < n; ++i) b[i] = y[i];
    b.array() -= b.mean();

    const Eigen::VectorXd rhs = b.tail(n - 1);
    Eigen::VectorXd x1 = impl_->factor.solve(rhs);
    // One refinement step; keeps quadratic forms accurate at large weight
    // ratios.
    x1 += impl_->factor.solve(rhs - impl_->grounded * x1);

    Eigen::VectorXd x(n);
    x[0] = 0.0;
    x.tail(n - 1) = x1;
    x.array() -= x.mean();

    return std::vector<double>(x.data(), x.data() + n);
}

double GroundedLaplacian::pair_quadratic(std::uint32_t u, std::uint32_t v) const {
    const std::uint32_t n = impl_->n;
    if (u >= n || v >= n) throw PreconditionError("vertex out of range");
    if (u == v) return 0.0;
    std::vector<double> y(n, 0.0);
    y[u] = 1.0;
    y[v] = -1.0;
    const std::vector<double> x = apply_pinv(y);
    return x[u] - x[v];
}

std::vector<double> pinv_apply_exact(const SparseMatrix& laplacian, std::span<const double> y) {
    return GroundedLaplacian(laplacian).apply_pinv(y);
}

} // namespace respars

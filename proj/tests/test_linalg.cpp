#include <doctest.h>

#include <cstdlib>
#include <numeric>

#include "respars/errors.hpp"
#include "respars/generators.hpp"
#include "respars/graph.hpp"
#include "respars/random.hpp"
#include "respars/solver.hpp"
#include "respars/sparse.hpp"
#include "test_util.hpp"

using namespace respars;
using testutil::dense_from_csr;

namespace {

double ones_component(const std::vector<double>& x) {
    return std::abs(std::accumulate(x.begin(), x.end(), 0.0));
}

std::vector<double> random_deflated_vector(std::uint32_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> y(n);
    double mean = 0.0;
    for (double& v : y) {
        v = rng.next_double() * 2.0 - 1.0;
        mean += v;
    }
    mean /= n;
    for (double& v : y) v -= mean;
    return y;
}

} // namespace

TEST_CASE("from_triplets sums duplicates and sorts columns") {
    const SparseMatrix a = SparseMatrix::from_triplets(
        2, 3, {{1, 2, 4.0}, {0, 1, 1.0}, {0, 1, 2.0}, {1, 0, -1.0}});
    CHECK(a.nnz() == 3);
    CHECK(a.at(0, 1) == 3.0);
    CHECK(a.at(1, 0) == -1.0);
    CHECK(a.at(1, 2) == 4.0);
    CHECK(a.at(0, 0) == 0.0);
    CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), PreconditionError);
    CHECK_THROWS_AS(a.at(2, 0), PreconditionError);
}

TEST_CASE("spmv matches a dense multiply") {
    const WeightedGraph g = random_connected_graph(30, 80, 5, 0.1, 9.0);
    const SparseMatrix l = laplacian(g);
    const Eigen::MatrixXd ld = dense_from_csr(l);
    const std::vector<double> x = random_deflated_vector(g.n(), 77);
    const std::vector<double> y = spmv(l, x);
    Eigen::VectorXd xe(g.n());
    for (std::uint32_t i = 0; i < g.n(); ++i) xe[i] = x[i];
    const Eigen::VectorXd ye = ld * xe;
    for (std::uint32_t i = 0; i < g.n(); ++i) CHECK(std::abs(y[i] - ye[i]) <= 1e-12);

    std::vector<double> wrong(g.n() + 1);
    CHECK_THROWS_AS(spmv(l, wrong), PreconditionError);
}

TEST_CASE("solver nails a single edge in one iteration") {
    const SparseMatrix l = laplacian(WeightedGraph(2, {Edge{0, 1, 1.0}}));
    const std::vector<double> y{1.0, -1.0};
    const SolveResult res = solve_laplacian(l, y, 1e-12);
    CHECK(res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.residual == 0.0);
    CHECK(res.solution[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(res.solution[1] == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("zero right-hand side returns zero in zero iterations") {
    const SparseMatrix l = laplacian(path_graph(5));
    const SolveResult res = solve_laplacian(l, std::vector<double>(5, 0.0), 1e-10);
    CHECK(res.converged);
    CHECK(res.iterations == 0);
    for (double v : res.solution) CHECK(v == 0.0);
    // A constant rhs deflates to zero as well.
    const SolveResult res2 = solve_laplacian(l, std::vector<double>(5, 3.0), 1e-10);
    CHECK(res2.iterations == 0);
}

TEST_CASE("path solve matches the hand value") {
    const SparseMatrix l = laplacian(path_graph(3));
    const SolveResult res = solve_laplacian(l, std::vector<double>{1.0, 0.0, -1.0}, 1e-12);
    CHECK(res.converged);
    CHECK(res.solution[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.solution[1] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(res.solution[2] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("solver rejects non-laplacian matrices") {
    // Not symmetric.
    const SparseMatrix asym =
        SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, -1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(solve_laplacian(asym, std::vector<double>(2, 0.0), 1e-8),
                    PreconditionError);
    // Positive off-diagonal.
    const SparseMatrix pos = SparseMatrix::from_triplets(
        2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(solve_laplacian(pos, std::vector<double>(2, 0.0), 1e-8),
                    PreconditionError);
    // Not square.
    const SparseMatrix rect = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
    CHECK_THROWS_AS(solve_laplacian(rect, std::vector<double>(3, 0.0), 1e-8),
                    PreconditionError);
}

TEST_CASE("hitting max_iter reports converged = false, no throw") {
    const SparseMatrix l = laplacian(path_graph(40));
    const SolveResult res =
        solve_laplacian(l, random_deflated_vector(40, 9), 1e-13, /*max_iter=*/2);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 2);
    CHECK(res.residual > 1e-13);
}

TEST_CASE("solutions and pinv results are orthogonal to ones") {
    const WeightedGraph g = random_connected_graph(35, 90, 2, 1.0, 20.0);
    const SparseMatrix l = laplacian(g);
    const std::vector<double> y = random_deflated_vector(g.n(), 4);
    const SolveResult res = solve_laplacian(l, y, 1e-11);
    CHECK(res.converged);
    CHECK(ones_component(res.solution) <= 1e-10);
    CHECK(ones_component(pinv_apply_exact(l, y)) <= 1e-10);
}

TEST_CASE("pinv on a single edge and on constants") {
    const SparseMatrix l = laplacian(WeightedGraph(2, {Edge{0, 1, 1.0}}));
    const std::vector<double> x = pinv_apply_exact(l, std::vector<double>{1.0, -1.0});
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(-0.5).epsilon(1e-14));
    // Constants lie in the kernel direction and map to zero.
    const std::vector<double> z = pinv_apply_exact(l, std::vector<double>{4.0, 4.0});
    CHECK(std::abs(z[0]) <= 1e-14);
    CHECK(std::abs(z[1]) <= 1e-14);
}

TEST_CASE("pinv matches an independent eigendecomposition pseudoinverse") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const WeightedGraph g = random_connected_graph(20, 50, seed, 0.2, 30.0);
        const SparseMatrix l = laplacian(g);
        const Eigen::MatrixXd ld = dense_from_csr(l);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ld);
        Eigen::VectorXd inv = es.eigenvalues();
        for (std::uint32_t i = 0; i < g.n(); ++i) inv[i] = i == 0 ? 0.0 : 1.0 / inv[i];
        const Eigen::MatrixXd pinv =
            es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

        const std::vector<double> y = random_deflated_vector(g.n(), seed + 100);
        const std::vector<double> x = pinv_apply_exact(l, y);
        Eigen::VectorXd ye(g.n());
        for (std::uint32_t i = 0; i < g.n(); ++i) ye[i] = y[i];
        const Eigen::VectorXd xe = pinv * ye;
        for (std::uint32_t i = 0; i < g.n(); ++i) {
            CHECK(std::abs(x[i] - xe[i]) <= 1e-9 * std::max(1.0, xe.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("iterative and exact solves agree on deflated right-hand sides") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const WeightedGraph g = random_connected_graph(40, 120, seed + 50, 1.0, 10.0);
        const SparseMatrix l = laplacian(g);
        const std::vector<double> y = random_deflated_vector(g.n(), seed + 9);
        const SolveResult it = solve_laplacian(l, y, 1e-12);
        CHECK(it.converged);
        const std::vector<double> ex = pinv_apply_exact(l, y);
        double norm = 0.0, diff = 0.0;
        for (std::uint32_t i = 0; i < g.n(); ++i) {
            norm += ex[i] * ex[i];
            diff += (it.solution[i] - ex[i]) * (it.solution[i] - ex[i]);
        }
        CHECK(std::sqrt(diff) <= 1e-7 * std::max(1.0, std::sqrt(norm)));
        // And L x reproduces the projected rhs.
        const std::vector<double> back = spmv(l, ex);
        double err = 0.0, ynorm = 0.0;
        for (std::uint32_t i = 0; i < g.n(); ++i) {
            err += (back[i] - y[i]) * (back[i] - y[i]);
            ynorm += y[i] * y[i];
        }
        CHECK(std::sqrt(err) <= 1e-8 * std::sqrt(ynorm));
    }
}

TEST_CASE("grounded pinv refuses disconnected graphs") {
    const WeightedGraph g(4, {Edge{0, 1, 1.0}, Edge{2, 3, 1.0}});
    CHECK_THROWS_AS(pinv_apply_exact(laplacian(g), std::vector<double>(4, 0.0)),
                    PreconditionError);
}

TEST_CASE("dense limit honors RESPARS_DENSE_LIMIT") {
    const char* old = std::getenv("RESPARS_DENSE_LIMIT");
    const std::string saved = old ? old : "";

    unsetenv("RESPARS_DENSE_LIMIT");
    CHECK(dense_vertex_limit() == 2000);
    setenv("RESPARS_DENSE_LIMIT", "10", 1);
    CHECK(dense_vertex_limit() == 10);
    const WeightedGraph g = path_graph(12);
    CHECK_THROWS_AS(pinv_apply_exact(laplacian(g), std::vector<double>(12, 0.0)),
                    PreconditionError);
    setenv("RESPARS_DENSE_LIMIT", "garbage", 1);
    CHECK(dense_vertex_limit() == 2000);

    if (old) {
        setenv("RESPARS_DENSE_LIMIT", saved.c_str(), 1);
    } else {
        unsetenv("RESPARS_DENSE_LIMIT");
    }
}

TEST_CASE("pair_quadratic matches apply_pinv") {
    const WeightedGraph g = random_connected_graph(15, 40, 8, 0.5, 5.0);
    const GroundedLaplacian grounded(laplacian(g));
    std::vector<double> y(g.n(), 0.0);
    y[3] = 1.0;
    y[11] = -1.0;
    const std::vector<double> x = grounded.apply_pinv(y);
    CHECK(grounded.pair_quadratic(3, 11) == doctest::Approx(x[3] - x[11]).epsilon(1e-14));
    CHECK(grounded.pair_quadratic(5, 5) == 0.0);
    CHECK_THROWS_AS(grounded.pair_quadratic(0, 99), PreconditionError);
}

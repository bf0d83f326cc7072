#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "twsgd/convergence.hpp"
#include "twsgd/diffusion.hpp"
#include "twsgd/mms.hpp"

using namespace twsgd;

namespace {

// independent dense direct solve: textbook Gaussian elimination with
// partial pivoting, no shared code with the stepper's factorization
Eigen::VectorXd gauss_solve(Eigen::MatrixXd A, Eigen::VectorXd b) {
    const Eigen::Index n = A.rows();
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index piv = col;
        for (Eigen::Index r = col + 1; r < n; ++r)
            if (std::abs(A(r, col)) > std::abs(A(piv, col)))
                piv = r;
        A.row(col).swap(A.row(piv));
        std::swap(b(col), b(piv));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double m = A(r, col) / A(col, col);
            A.row(r).tail(n - col) -= m * A.row(col).tail(n - col);
            b(r) -= m * b(col);
        }
    }
    Eigen::VectorXd x(n);
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        double s = b(r);
        for (Eigen::Index c = r + 1; c < n; ++c)
            s -= A(r, c) * x(c);
        x(r) = s / A(r, r);
    }
    return x;
}

ConvergenceReport table_sweep(const char* case_name, int order, double free_param,
                              std::vector<std::size_t> grids, bool tau_h, double tau) {
    SweepSpec spec;
    spec.command = "diffusion";
    spec.case_name = case_name;
    spec.order = order;
    spec.free_param = free_param;
    spec.grids = std::move(grids);
    spec.tau_equals_h = tau_h;
    spec.tau = tau;
    spec.jobs = 4;
    return run_sweep(spec);
}

}  // namespace

TEST_CASE("scheme matrix has the documented stencil layout") {
    const auto w = build_weights(2, 1.5, 1.0, 0.25, 0.01, 6);
    const auto B = assemble_scheme_matrix(w, 4);
    REQUIRE(B.size == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(B.dense(i, i) == Catch::Approx(w.g[1] - w.phi).margin(1e-15));
    CHECK(B.dense(0, 1) == w.g[0]);
    CHECK(B.dense(1, 2) == w.g[0]);
    CHECK(B.dense(0, 2) == 0.0);  // zero above the superdiagonal
    CHECK(B.dense(1, 0) == w.g[2]);
    CHECK(B.dense(2, 0) == w.g[3]);
    // Toeplitz: constant along diagonals
    CHECK(B.dense(1, 1) == B.dense(0, 0));
    CHECK(B.dense(2, 1) == B.dense(1, 0));
}

TEST_CASE("row sums at lambda = 0 are partial weight sums") {
    const std::size_t M = 10;
    const auto w = build_weights(2, 1.5, 0.0, 1.0 / M, 0.01, M + 1);
    const auto B = assemble_scheme_matrix(w, M);
    const auto fam = gamma_order2(1.5, 0.01);
    const auto om = gruenwald_weights(1.5, M + 3).omega;
    for (std::size_t r = 0; r + 2 < B.size; ++r) {
        // partial sum of the omega-combinations up to k = r+1
        double expect = 0.0;
        for (std::size_t k = 0; k <= r + 1; ++k)
            for (std::size_t j = 0; j < fam.gammas.size(); ++j) {
                const long idx = static_cast<long>(k) - 1 + static_cast<long>(fam.shifts[j]);
                if (idx >= 0)
                    expect += fam.gammas[j] * om[static_cast<std::size_t>(idx)];
            }
        CHECK(B.dense.row(static_cast<Eigen::Index>(r)).sum()
              == Catch::Approx(expect).margin(1e-14));
    }
}

TEST_CASE("one CN step reproduces an independent dense solve") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ua(1.05, 1.95), ul(0.0, 3.0), uv(-1.0, 1.0);
    std::uniform_int_distribution<int> um(4, 16);
    for (int t = 0; t < 5; ++t) {
        const std::size_t M = static_cast<std::size_t>(um(rng));
        DiffusionProblem prob;
        prob.alpha = ua(rng);
        prob.lambda_l = prob.lambda_r = ul(rng);
        prob.c_l = 0.7;
        prob.c_r = 0.3;
        const auto ops = assemble(3, prob, M, -0.02);
        const double h = 1.0 / static_cast<double>(M), tau = 0.01;
        const Eigen::MatrixXd Mm =
            tau / (2.0 * std::pow(h, prob.alpha))
            * (prob.c_l * ops.B_left.dense + prob.c_r * ops.B_right.dense.transpose());
        const Eigen::Index n = Mm.rows();
        Eigen::VectorXd u(n), extra(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u(i) = uv(rng);
            extra(i) = uv(rng);
        }
        const CrankNicolsonStepper stepper(Mm);
        const Eigen::VectorXd mine = stepper.step(u, extra);
        const Eigen::VectorXd oracle =
            gauss_solve(Eigen::MatrixXd::Identity(n, n) - Mm,
                        (Eigen::MatrixXd::Identity(n, n) + Mm) * u + extra);
        CHECK((mine - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("CN steps with M and -M undo each other") {
    DiffusionProblem prob;
    prob.alpha = 1.5;
    prob.lambda_l = prob.lambda_r = 0.5;
    prob.c_l = prob.c_r = 0.5;
    const std::size_t M = 24;
    const auto ops = assemble(3, prob, M, -0.03);
    const double h = 1.0 / M, tau = h;
    const Eigen::MatrixXd Mm =
        tau / (2.0 * std::pow(h, prob.alpha))
        * (prob.c_l * ops.B_left.dense + prob.c_r * ops.B_right.dense.transpose());
    const CrankNicolsonStepper fwd(Mm);
    const CrankNicolsonStepper bwd(-Mm);
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    Eigen::VectorXd u(Mm.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i)
        u(i) = uv(rng);
    const Eigen::VectorXd back = bwd.step(fwd.step(u));
    CHECK((back - u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("zero data marches to zero") {
    DiffusionProblem prob;
    prob.alpha = 1.4;
    prob.lambda_l = prob.lambda_r = 1.0;
    prob.c_l = 1.0;
    prob.initial = [](double) { return 0.0; };
    prob.source = [](double, double) { return 0.0; };
    const auto res = solve(prob, 3, 16, 10, -0.03);
    for (const double v : res.grid.values)
        CHECK(v == 0.0);
    CHECK(res.steps == 10);
}

TEST_CASE("left-sided benchmark reproduces its reference column") {
    // second order, gamma3 = 0, tau = h
    const auto rep = table_sweep("diff-left", 2, 0.0, {10, 20, 40, 80, 160}, true, 0.0);
    const double expect[] = {2.30e-4, 5.73e-5, 1.40e-5, 3.45e-6, 8.56e-7};
    for (std::size_t i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(rep.rows[i].l2_error == Catch::Approx(expect[i]).epsilon(0.10));
    }
    CHECK(rep.rows[4].l2_order == Catch::Approx(2.01).margin(0.05));
}

TEST_CASE("left-sided third-order benchmark reproduces its reference column") {
    const auto rep = table_sweep("diff-left", 3, -0.1, {10, 20, 40, 80, 160}, true, 0.0);
    const double expect[] = {7.55e-5, 9.44e-6, 1.13e-6, 1.37e-7, 1.77e-8};
    for (std::size_t i = 0; i < 5; ++i) {
        CAPTURE(i);
        CHECK(rep.rows[i].l2_error == Catch::Approx(expect[i]).epsilon(0.10));
    }
    CHECK(rep.rows[4].l2_order == Catch::Approx(2.96).margin(0.07));
}

TEST_CASE("two-sided third-order benchmark spot cell") {
    const auto rep = table_sweep("diff-two-sided", 3, -0.02, {64, 128}, false, 1e-3);
    CHECK(rep.rows[0].l2_error == Catch::Approx(1.02e-6).epsilon(0.10));
    CHECK(rep.rows[1].l2_error == Catch::Approx(1.35e-7).epsilon(0.10));
}

TEST_CASE("solution stays bounded when the scan certifies negativity") {
    DiffusionProblem prob;
    prob.alpha = 1.5;
    prob.lambda_l = prob.lambda_r = 0.5;
    prob.c_l = prob.c_r = 0.5;
    prob.T = 0.5;
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    prob.initial = [&rng, &uv](double) { return uv(rng); };
    prob.source = [](double, double) { return 0.0; };
    const std::size_t M = 32, N = 50;
    const double tau = prob.T / N;
    const auto res = solve(prob, 3, M, N, -0.03, /*keep_history=*/true);
    REQUIRE(res.stability_certified);
    REQUIRE(res.history.size() == N + 1);
    for (std::size_t j = 1; j <= N; ++j) {
        double prev = 0.0, cur = 0.0;
        for (std::size_t i = 0; i < M - 1; ++i) {
            prev = std::max(prev, std::abs(res.history[j - 1][i]));
            cur = std::max(cur, std::abs(res.history[j][i]));
        }
        CHECK(cur <= (1.0 + 10.0 * tau) * prev);
    }
}

TEST_CASE("boundary compatibility is enforced exactly") {
    DiffusionProblem prob;
    prob.alpha = 1.5;
    prob.c_l = 1.0;
    prob.initial = [](double x) { return x; };
    prob.source = [](double, double) { return 0.0; };
    prob.phi_l = [](double) { return 0.25; };  // nonzero with c_l != 0
    CHECK_THROWS_AS(solve(prob, 2, 8, 4, 0.0), std::invalid_argument);
}

TEST_CASE("assemble validates inputs") {
    DiffusionProblem prob;
    prob.alpha = 1.5;
    prob.c_l = 0.5;
    prob.c_r = -0.5;  // sums to zero
    CHECK_THROWS_AS(assemble(2, prob, 8, 0.0), std::invalid_argument);
    prob.c_r = 0.5;
    CHECK_THROWS_AS(assemble(2, prob, 3, 0.0), std::invalid_argument);
    prob.alpha = 0.9;
    CHECK_THROWS_AS(assemble(2, prob, 8, 0.0), std::domain_error);
}

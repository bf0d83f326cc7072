#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

#include "twsgd/diffusion.hpp"
#include "twsgd/operators.hpp"
#include "twsgd/scheme_matrix.hpp"
#include "twsgd/stability.hpp"

namespace twsgd {

/**
 * Tempered fractional Black-Scholes-type terminal value problem on
 * (B_d, B_u) x (0, T),
 *
 *   u_t + a u_x + b D_left^{alpha,lambda1} u + d D_right^{alpha,lambda2} u
 *     = p u + f,
 *
 * with homogeneous Dirichlet boundaries and payoff u(x, T) = S(x). The
 * fractional operators are the lambda^alpha-subtracted variants; b, d,
 * p and both tempering rates must be non-negative.
 */
struct BSProblem {
    double B_d = 0.0, B_u = 1.0;
    double T = 1.0;
    double a = 0.0;        // convection coefficient
    double b = 0.0;        // left tempered-derivative coefficient
    double d = 0.0;        // right tempered-derivative coefficient
    double p = 0.0;        // reaction coefficient
    double lambda1 = 0.0, lambda2 = 0.0;
    double alpha = 1.5;
    std::function<double(double)> terminal;        // payoff S(x)
    std::function<double(double, double)> source;  // f(x, t)
};

/**
 * Fourth-order central approximation of u_x at node i,
 *   (8(u_{i+1} - u_{i-1}) - (u_{i+2} - u_{i-2})) / (12 h),
 * with out-of-domain samples taken as zero. Exact on polynomials of
 * degree <= 4 at nodes 2 <= i <= M-2.
 */
inline double convection_stencil(const GridFn& u, std::size_t i) {
    const std::size_t M = u.intervals();
    if (i < 1 || i > M - 1)
        throw std::out_of_range("convection_stencil: node index out of range");
    const auto v = [&](long j) -> double {
        return (j < 0 || j > static_cast<long>(M)) ? 0.0 : u.values[static_cast<std::size_t>(j)];
    };
    const long li = static_cast<long>(i);
    return (8.0 * (v(li + 1) - v(li - 1)) - (v(li + 2) - v(li - 2))) / (12.0 * u.h);
}

/**
 * Third-order scheme for the terminal value problem: tempered-WSGD
 * operators in space on the integer shift set, the fourth-order central
 * stencil for the convection term, Crank-Nicolson in time marching
 * backward from the payoff (t_j = T - j tau). The two rows next to the
 * boundaries use the plain second-order central difference for u_x; the
 * wide stencil there would need samples outside the domain, and the
 * reduced rows keep the scheme's observed third-order accuracy.
 */
inline SolveResult solve_bs(const BSProblem& prob, std::size_t M, std::size_t N,
                            double free_param, bool keep_history = false) {
    if (M < 4)
        throw std::invalid_argument("solve_bs: M must be >= 4");
    if (prob.b < 0.0 || prob.d < 0.0 || prob.p < 0.0 || prob.lambda1 < 0.0 ||
        prob.lambda2 < 0.0)
        throw std::invalid_argument("solve_bs: b, d, p and tempering rates must be >= 0");
    if (!(prob.alpha > 1.0 && prob.alpha < 2.0))
        throw std::domain_error("solve_bs: alpha must be in (1, 2)");

    const double h = (prob.B_u - prob.B_d) / static_cast<double>(M);
    const double tau = prob.T / static_cast<double>(N);
    const double ha = std::pow(h, prob.alpha);
    const std::size_t n = M - 1;
    const Eigen::Index ni = static_cast<Eigen::Index>(n);

    const OperatorWeights wl = build_weights(3, prob.alpha, prob.lambda1, h, free_param, M + 1);
    const OperatorWeights wr = build_weights(3, prob.alpha, prob.lambda2, h, free_param, M + 1);
    const SchemeMatrix BL = assemble_scheme_matrix(wl, M);
    const SchemeMatrix BR = assemble_scheme_matrix(wr, M);

    Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(ni, ni);
    for (std::size_t i = 0; i < n; ++i) {
        const auto set = [&](long j, double w) {
            if (j >= 0 && j < static_cast<long>(n))
                conv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        };
        const long li = static_cast<long>(i);
        if (i == 0 || i == n - 1) {
            set(li + 1, 0.5 / h);
            set(li - 1, -0.5 / h);
        } else {
            set(li + 1, 8.0 / (12.0 * h));
            set(li - 1, -8.0 / (12.0 * h));
            set(li + 2, -1.0 / (12.0 * h));
            set(li - 2, 1.0 / (12.0 * h));
        }
    }

    const Eigen::MatrixXd k_mat = prob.a * conv + (prob.b / ha) * BL.dense
                                + (prob.d / ha) * BR.dense.transpose();
    const Eigen::MatrixXd a_solve =
        (1.0 + 0.5 * tau * prob.p) * Eigen::MatrixXd::Identity(ni, ni) - 0.5 * tau * k_mat;
    const Eigen::MatrixXd a_apply =
        (1.0 - 0.5 * tau * prob.p) * Eigen::MatrixXd::Identity(ni, ni) + 0.5 * tau * k_mat;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a_solve);
    if (lu.rcond() < 1e-14)
        throw std::runtime_error("solve_bs: singular system");

    Eigen::VectorXd u(ni);
    for (std::size_t i = 1; i <= n; ++i)
        u(static_cast<Eigen::Index>(i - 1)) =
            prob.terminal(prob.B_d + static_cast<double>(i) * h);

    SolveResult res;
    res.steps = N;
    res.h = h;
    res.tau = tau;
    {
        const std::size_t scan_terms = std::max<std::size_t>(M + 1, 250);
        const bool neg_l = prob.b == 0.0
            || scan_generating_function(3, prob.alpha, prob.lambda1, h, free_param,
                                        scan_terms, 512).negative;
        const bool neg_r = prob.d == 0.0
            || scan_generating_function(3, prob.alpha, prob.lambda2, h, free_param,
                                        scan_terms, 512).negative;
        res.stability_certified = neg_l && neg_r;  // advisory only
    }
    if (keep_history) {
        res.history.reserve(N + 1);
        res.history.emplace_back(u.data(), u.data() + n);
    }

    Eigen::VectorXd f_avg(ni);
    for (std::size_t j = 0; j < N; ++j) {
        const double t0 = prob.T - static_cast<double>(j) * tau;
        const double t1 = prob.T - static_cast<double>(j + 1) * tau;
        for (std::size_t i = 1; i <= n; ++i) {
            const double x = prob.B_d + static_cast<double>(i) * h;
            f_avg(static_cast<Eigen::Index>(i - 1)) =
                0.5 * (prob.source(x, t0) + prob.source(x, t1));
        }
        u = lu.solve(a_apply * u - tau * f_avg);
        if (keep_history)
            res.history.emplace_back(u.data(), u.data() + n);
    }

    res.grid.a = prob.B_d;
    res.grid.b = prob.B_u;
    res.grid.h = h;
    res.grid.values.assign(M + 1, 0.0);
    for (std::size_t i = 1; i <= n; ++i)
        res.grid.values[i] = u(static_cast<Eigen::Index>(i - 1));
    return res;
}

}  // namespace twsgd

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "twsgd/operators.hpp"
#include "twsgd/scheme_matrix.hpp"
#include "twsgd/stability.hpp"

namespace twsgd {

/**
 * Two-sided tempered fractional diffusion problem on (a, b) x (0, T],
 *
 *   u_t = c_l D_left^{alpha,lambda_l} u + c_r D_right^{alpha,lambda_r} u + f,
 *
 * with the lambda^alpha-subtracted operators, Dirichlet data phi_l/phi_r
 * and initial value u(x, 0). Whenever c_l != 0 the left boundary value
 * must be identically zero (and mirrored on the right); this is checked
 * exactly at every time level the solver touches.
 */
struct DiffusionProblem {
    double a = 0.0, b = 1.0;
    double T = 1.0;
    double c_l = 1.0, c_r = 0.0;
    double lambda_l = 0.0, lambda_r = 0.0;
    double alpha = 1.5;
    std::function<double(double)> initial;
    std::function<double(double)> phi_l;   // u(a, t)
    std::function<double(double)> phi_r;   // u(b, t)
    std::function<double(double, double)> source;  // f(x, t)
};

/// One Crank-Nicolson step operator: given M, solves
/// (I - M) x = (I + M) u + r with the factorization reused across steps.
class CrankNicolsonStepper {
public:
    explicit CrankNicolsonStepper(const Eigen::MatrixXd& m)
        : i_plus_m_(Eigen::MatrixXd::Identity(m.rows(), m.cols()) + m),
          lu_(Eigen::MatrixXd::Identity(m.rows(), m.cols()) - m) {
        if (lu_.rcond() < 1e-14)
            throw std::runtime_error("CrankNicolsonStepper: singular system (I - M)");
    }

    Eigen::VectorXd step(const Eigen::VectorXd& u, const Eigen::VectorXd& extra) const {
        return lu_.solve(i_plus_m_ * u + extra);
    }

    Eigen::VectorXd step(const Eigen::VectorXd& u) const {
        return lu_.solve(i_plus_m_ * u);
    }

private:
    Eigen::MatrixXd i_plus_m_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/**
 * Assembled spatial operators for one problem and grid: the left and
 * right scheme matrices (the right one acts through its transpose) and
 * the advisory generating-function verdicts for the chosen free
 * parameter. A non-negative scan does not abort anything; it is
 * surfaced so callers can flag uncertified runs.
 */
struct AssembledOperators {
    OperatorWeights left, right;
    SchemeMatrix B_left, B_right;
    bool scan_negative_left = false;
    bool scan_negative_right = false;

    bool stability_certified() const { return scan_negative_left && scan_negative_right; }
};

inline AssembledOperators assemble(int order, const DiffusionProblem& prob, std::size_t M,
                                   double free_param) {
    if (M < 4)
        throw std::invalid_argument("assemble: M must be >= 4");
    if (prob.c_l + prob.c_r == 0.0)
        throw std::invalid_argument("assemble: c_l + c_r must be nonzero");
    if (!(prob.alpha > 1.0 && prob.alpha < 2.0))
        throw std::domain_error("assemble: alpha must be in (1, 2) for the diffusion scheme");
    const double h = (prob.b - prob.a) / static_cast<double>(M);

    AssembledOperators ops;
    ops.left = build_weights(order, prob.alpha, prob.lambda_l, h, free_param, M + 1);
    ops.right = build_weights(order, prob.alpha, prob.lambda_r, h, free_param, M + 1);
    ops.B_left = assemble_scheme_matrix(ops.left, M);
    ops.B_right = assemble_scheme_matrix(ops.right, M);

    const std::size_t scan_terms = std::max<std::size_t>(M + 1, 250);
    ops.scan_negative_left =
        scan_generating_function(order, prob.alpha, prob.lambda_l, h, free_param,
                                 scan_terms, 512).negative;
    ops.scan_negative_right =
        (prob.lambda_r == prob.lambda_l)
            ? ops.scan_negative_left
            : scan_generating_function(order, prob.alpha, prob.lambda_r, h, free_param,
                                       scan_terms, 512).negative;
    return ops;
}

struct SolveResult {
    GridFn grid;                                // solution at t = T, all nodes
    std::vector<std::vector<double>> history;   // interior snapshots, when kept
    std::size_t steps = 0;
    double h = 0.0, tau = 0.0;
    bool stability_certified = false;
};

/**
 * March the Crank-Nicolson scheme N steps of size T/N from the initial
 * value. The boundary data enters through the lift columns of the
 * stencil (the weights leaking onto u_0 and u_M), averaged over the two
 * time levels exactly like the interior unknowns.
 */
inline SolveResult solve(const DiffusionProblem& prob, int order, std::size_t M,
                         std::size_t N, double free_param, bool keep_history = false) {
    const AssembledOperators ops = assemble(order, prob, M, free_param);
    const double h = (prob.b - prob.a) / static_cast<double>(M);
    const double tau = prob.T / static_cast<double>(N);
    const double ha = std::pow(h, prob.alpha);
    const std::size_t n = M - 1;
    const Eigen::Index ni = static_cast<Eigen::Index>(n);

    const Eigen::MatrixXd m_mat =
        tau / (2.0 * ha)
        * (prob.c_l * ops.B_left.dense + prob.c_r * ops.B_right.dense.transpose());
    const CrankNicolsonStepper stepper(m_mat);

    // boundary lift columns: coefficients of u_0 and u_M in the stencil rows
    Eigen::VectorXd col_left(ni), col_right(ni);
    for (std::size_t i = 1; i <= n; ++i) {
        col_left(static_cast<Eigen::Index>(i - 1)) = prob.c_l * ops.left.g[i + 1];
        col_right(static_cast<Eigen::Index>(i - 1)) = prob.c_r * ops.right.g[M - i + 1];
    }
    col_left(0) += prob.c_r * ops.right.g[0];
    col_right(ni - 1) += prob.c_l * ops.left.g[0];

    const auto boundary = [&](double t) -> std::pair<double, double> {
        const double bl = prob.phi_l ? prob.phi_l(t) : 0.0;
        const double br = prob.phi_r ? prob.phi_r(t) : 0.0;
        if (prob.c_l != 0.0 && bl != 0.0)
            throw std::invalid_argument("solve: c_l != 0 requires phi_l == 0");
        if (prob.c_r != 0.0 && br != 0.0)
            throw std::invalid_argument("solve: c_r != 0 requires phi_r == 0");
        return {bl, br};
    };

    Eigen::VectorXd u(ni);
    for (std::size_t i = 1; i <= n; ++i)
        u(static_cast<Eigen::Index>(i - 1)) =
            prob.initial(prob.a + static_cast<double>(i) * h);

    SolveResult res;
    res.steps = N;
    res.h = h;
    res.tau = tau;
    res.stability_certified = ops.stability_certified();
    if (keep_history) {
        res.history.reserve(N + 1);
        res.history.emplace_back(u.data(), u.data() + n);
    }

    Eigen::VectorXd extra(ni);
    for (std::size_t j = 0; j < N; ++j) {
        const double t0 = static_cast<double>(j) * tau;
        const double t1 = static_cast<double>(j + 1) * tau;
        const auto [bl0, br0] = boundary(t0);
        const auto [bl1, br1] = boundary(t1);
        for (std::size_t i = 1; i <= n; ++i) {
            const double x = prob.a + static_cast<double>(i) * h;
            extra(static_cast<Eigen::Index>(i - 1)) =
                0.5 * (prob.source(x, t0) + prob.source(x, t1));
        }
        extra += (col_left * (bl0 + bl1) + col_right * (br0 + br1)) / (2.0 * ha);
        u = stepper.step(u, tau * extra);
        if (keep_history)
            res.history.emplace_back(u.data(), u.data() + n);
    }

    res.grid.a = prob.a;
    res.grid.b = prob.b;
    res.grid.h = h;
    res.grid.values.resize(M + 1);
    const auto [blT, brT] = boundary(prob.T);
    res.grid.values.front() = blT;
    res.grid.values.back() = brT;
    for (std::size_t i = 1; i <= n; ++i)
        res.grid.values[i] = u(static_cast<Eigen::Index>(i - 1));
    return res;
}

}  // namespace twsgd

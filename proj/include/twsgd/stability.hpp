#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "twsgd/operators.hpp"
#include "twsgd/scheme_matrix.hpp"

namespace twsgd {

/**
 * Admissibility intervals for the free parameters: (a1, a2) for the
 * second-order gamma_3, (a3, a4) for the third-order gamma_4. The
 * third-order interval is nonempty only on a window of alpha values
 * around (1.26, 1.71).
 */
struct StabilityBounds {
    double alpha = 0.0;
    double a1 = 0.0, a2 = 0.0;  // second-order gamma_3 bounds
    double a3 = 0.0, a4 = 0.0;  // third-order gamma_4 bounds
    bool third_order_nonempty = false;
};

inline StabilityBounds bounds(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::domain_error("bounds: alpha must be in (1, 2)");
    const double a = alpha;
    StabilityBounds s;
    s.alpha = a;
    s.a1 = std::max((2.0 - a) * (a * a + a - 8.0) / (2.0 * (a * a + 3.0 * a + 2.0)),
                    (1.0 - a) * (a * a + 2.0 * a) / (2.0 * (a * a + 3.0 * a + 4.0)));
    s.a2 = (2.0 - a) * (a * a + 2.0 * a - 3.0) / (2.0 * (a * a + 3.0 * a + 2.0));
    const double d3 = a * a * a + 6.0 * a * a + 11.0 * a + 6.0;
    const double a5 = std::pow(a, 5), a4p = std::pow(a, 4), a3p = a * a * a;
    s.a3 = std::max((a5 / 8.0 + 7.0 * a4p / 12.0 - 5.0 * a3p / 8.0 - 49.0 * a * a / 12.0
                     + 3.0 * a) / d3,
                    (a5 / 8.0 + a4p / 3.0 - 67.0 * a3p / 24.0 - 23.0 * a * a / 6.0
                     + 175.0 * a / 6.0 - 30.0) / d3);
    s.a4 = std::min((a4p / 8.0 + 7.0 * a3p / 12.0 + a * a / 8.0 - 13.0 * a / 6.0)
                        / (a * a + 5.0 * a + 8.0),
                    (a5 / 8.0 + 11.0 * a4p / 24.0 - 41.0 * a3p / 24.0
                     - 107.0 * a * a / 24.0 + 163.0 * a / 12.0 - 8.0) / d3);
    s.third_order_nonempty = s.a3 < s.a4;
    return s;
}

/// Endpoints of the alpha-window on which (a3, a4) is nonempty,
/// located by bisection on a4 - a3 to the given tolerance.
struct WindowEndpoints {
    double lower = 0.0;
    double upper = 0.0;
};

inline WindowEndpoints third_order_window(double tol = 1e-6) {
    const auto gap = [](double a) { return bounds(a).a4 - bounds(a).a3; };
    WindowEndpoints w;
    double lo = 1.0 + 1e-9, hi = 1.5;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? hi : lo) = mid;
    }
    w.lower = 0.5 * (lo + hi);
    lo = 1.5;
    hi = 2.0 - 1e-9;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    w.upper = 0.5 * (lo + hi);
    return w;
}

/**
 * Extrema of the generating function
 *   f(alpha, lambda; x) = sum_{k=0}^{N-1} g_k cos((k-1) x) - phi
 * sampled uniformly on [-pi, pi] (endpoints and x = 0 always included).
 * The truncated series bounds the spectrum of the symmetric part of the
 * scheme matrix; `negative` certifies f_max < -1e-12, a strict margin
 * so rounding noise never certifies.
 */
struct GeneratingFunctionScan {
    double alpha = 0.0, lambda = 0.0, h = 0.0;
    std::size_t n_terms = 0;
    std::size_t samples = 0;
    double f_min = 0.0, f_max = 0.0;
    bool negative = false;
};

inline double generating_function_value(const OperatorWeights& w, std::size_t n_terms,
                                        double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_terms; ++k)
        s += w.g[k] * std::cos((static_cast<double>(k) - 1.0) * x);
    return s - w.phi;
}

inline GeneratingFunctionScan scan_generating_function(int order, double alpha,
                                                       double lambda, double h,
                                                       double free_param,
                                                       std::size_t n_terms,
                                                       std::size_t samples) {
    if (n_terms < 3)
        throw std::domain_error("scan_generating_function: n_terms must be >= 3");
    if (samples < 64)
        throw std::domain_error("scan_generating_function: samples must be >= 64");
    const OperatorWeights w = build_weights(order, alpha, lambda, h, free_param, n_terms);
    static constexpr double pi = 3.141592653589793238462643383279502884;

    GeneratingFunctionScan scan;
    scan.alpha = alpha;
    scan.lambda = lambda;
    scan.h = h;
    scan.n_terms = n_terms;
    scan.samples = samples;
    scan.f_min = std::numeric_limits<double>::infinity();
    scan.f_max = -std::numeric_limits<double>::infinity();
    const auto eval = [&](double x) {
        const double v = generating_function_value(w, n_terms, x);
        scan.f_min = std::min(scan.f_min, v);
        scan.f_max = std::max(scan.f_max, v);
    };
    for (std::size_t s = 0; s < samples; ++s)
        eval(-pi + 2.0 * pi * static_cast<double>(s) / static_cast<double>(samples - 1));
    eval(0.0);
    scan.negative = scan.f_max < -1e-12;
    return scan;
}

/// Sign pattern of a built weight sequence: g_1 <= 0, g_0 + g_2 >= 0,
/// and g_k >= 0 for k >= 3 over the built range.
struct WeightSignReport {
    bool g1_nonpos = false;
    bool g0_plus_g2_nonneg = false;
    bool tail_nonneg = false;
};

inline WeightSignReport weight_sign_report(const OperatorWeights& w) {
    if (w.g.size() < 6)
        throw std::invalid_argument("weight_sign_report: need weights built with n >= 5");
    WeightSignReport r;
    r.g1_nonpos = w.g[1] <= 0.0;
    r.g0_plus_g2_nonneg = w.g[0] + w.g[2] >= 0.0;
    r.tail_nonneg = true;
    for (std::size_t k = 3; k < w.g.size(); ++k)
        if (w.g[k] < 0.0) {
            r.tail_nonneg = false;
            break;
        }
    return r;
}

/// Largest eigenvalue of (B + B^T)/2 by a dense symmetric eigensolve.
inline double symmetric_part_max_eigenvalue(const SchemeMatrix& B) {
    if (B.size == 0)
        throw std::invalid_argument("symmetric_part_max_eigenvalue: empty matrix");
    const Eigen::MatrixXd H = 0.5 * (B.dense + B.dense.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("symmetric_part_max_eigenvalue: eigensolver failed");
    return es.eigenvalues().maxCoeff();
}

}  // namespace twsgd

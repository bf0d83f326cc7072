#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "twsgd/special.hpp"

namespace twsgd {

/**
 * Left Riemann-Liouville derivative of e^{lambda x} x^m by its power
 * series,
 *   sum_n lambda^n Gamma(n+m+1) / (n! Gamma(n+m-alpha+1)) x^{n+m-alpha},
 * summed until |term| < tol * |partial sum| (hard cap 200 terms). The
 * exponent m may be any real > -1; the benchmark sources use integers.
 */
inline double series_left_derivative(double lambda, double m, double alpha, double x,
                                     double tol = 1e-14,
                                     std::size_t* terms_used = nullptr) {
    if (!(x > 0.0 && x <= 1.0))
        throw std::domain_error("series_left_derivative: x must be in (0, 1]");
    if (!(tol > 0.0))
        throw std::domain_error("series_left_derivative: tol must be > 0");
    double sum = 0.0;
    double lam_pow_over_fact = 1.0;  // lambda^n / n!
    for (int n = 0; n < 200; ++n) {
        const double term = lam_pow_over_fact * gamma_fn(n + m + 1.0)
                          / gamma_fn(n + m - alpha + 1.0)
                          * std::pow(x, n + m - alpha);
        sum += term;
        if (n > 0 && std::abs(term) < tol * std::abs(sum)) {
            if (terms_used)
                *terms_used = static_cast<std::size_t>(n + 1);
            return sum;
        }
        lam_pow_over_fact *= lambda / (n + 1.0);
    }
    throw std::runtime_error("series_left_derivative: series did not converge in 200 terms");
}

/**
 * Right-sided mirror: the right Riemann-Liouville derivative on [x, 1]
 * of e^{-lambda x} (1-x)^m, i.e. e^{-lambda} times the left series
 * evaluated in the reflected variable 1-x.
 */
inline double series_right_derivative(double lambda, double m, double alpha, double x,
                                      double tol = 1e-14,
                                      std::size_t* terms_used = nullptr) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::domain_error("series_right_derivative: x must be in [0, 1)");
    return std::exp(-lambda)
         * series_left_derivative(lambda, m, alpha, 1.0 - x, tol, terms_used);
}

/// Closed form for the tempered left derivative of e^{-lambda x} x^{3+alpha}:
/// e^{-lambda x} x^3 (Gamma(4+alpha)/6 - lambda^alpha x^alpha).
inline double exact_left_derivative_power(double alpha, double lambda, double x) {
    const double lam_a = (lambda == 0.0) ? 0.0 : std::pow(lambda, alpha);
    return std::exp(-lambda * x) * x * x * x
         * (gamma_fn(4.0 + alpha) / 6.0 - lam_a * std::pow(x, alpha));
}

/// Mirror closed form: tempered right derivative of e^{lambda x} (1-x)^{3+alpha}.
inline double exact_right_derivative_power(double alpha, double lambda, double x) {
    const double y = 1.0 - x;
    const double lam_a = (lambda == 0.0) ? 0.0 : std::pow(lambda, alpha);
    return std::exp(lambda * x) * y * y * y
         * (gamma_fn(4.0 + alpha) / 6.0 - lam_a * std::pow(y, alpha));
}

/**
 * A manufactured benchmark case: exact solution, source term and
 * problem coefficients wired so the PDE residual vanishes.
 *
 * All PDE sources are stated for the lambda^alpha-subtracted operator
 * form that the solvers discretize. Derivative-only cases provide the
 * test function and its exact tempered derivative instead.
 */
struct ManufacturedCase {
    std::string name;
    std::string reference_table;

    double alpha = 1.5;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double T = 1.0;

    // diffusion coefficients (c_l, c_r) or Black-Scholes (a, b, d, p)
    double c_l = 0.0, c_r = 0.0;
    double conv_a = 0.0, bs_b = 0.0, bs_d = 0.0, reaction_p = 0.0;

    std::function<double(double, double)> exact;    // u(x, t)
    std::function<double(double, double)> source;   // f(x, t)
    std::function<double(double)> boundary_left;    // value at x = a, vs t
    std::function<double(double)> boundary_right;

    // every benchmark source separates as f(x, t) = source_time(t) *
    // source_profile(x); solvers precompute the profile on the grid once
    // so the series formulas are not re-evaluated at every time step
    std::function<double(double)> source_profile;
    std::function<double(double)> source_time;

    // derivative-only cases
    std::function<double(double)> u;                // test function
    std::function<double(double)> exact_derivative;
};

struct CaseParams {
    double alpha = std::nan("");
    double lambda1 = std::nan("");
    double lambda2 = std::nan("");
    double T = 1.0;
};

namespace detail {

inline double pick(double requested, double fallback) {
    return std::isnan(requested) ? fallback : requested;
}

// 0Dx^alpha [ e^{lambda x} x^3 (1-x)^3 ] via the series, monomial by monomial.
inline double series_left_poly33(double lambda, double alpha, double x) {
    return series_left_derivative(lambda, 3, alpha, x)
         - 3.0 * series_left_derivative(lambda, 4, alpha, x)
         + 3.0 * series_left_derivative(lambda, 5, alpha, x)
         - series_left_derivative(lambda, 6, alpha, x);
}

// xD1^alpha [ e^{-lambda x} x^3 (1-x)^3 ] via the reflected series.
inline double series_right_poly33(double lambda, double alpha, double x) {
    return series_right_derivative(lambda, 3, alpha, x)
         - 3.0 * series_right_derivative(lambda, 4, alpha, x)
         + 3.0 * series_right_derivative(lambda, 5, alpha, x)
         - series_right_derivative(lambda, 6, alpha, x);
}

}  // namespace detail

/**
 * Build a named manufactured case. Known names:
 *   deriv-left, deriv-right          (operator accuracy tests)
 *   diff-left, diff-right, diff-two-sided   (diffusion benchmarks)
 *   bs-left, bs-two-sided            (Black-Scholes benchmarks)
 * Parameters left NaN take the case's reference defaults.
 */
inline ManufacturedCase make_case(const std::string& name, const CaseParams& params = {}) {
    using detail::pick;
    ManufacturedCase c;
    c.name = name;
    c.T = params.T;

    if (name == "deriv-left") {
        const double alpha = pick(params.alpha, 0.6);
        const double lam = pick(params.lambda1, 1.0);
        c.alpha = alpha;
        c.lambda1 = lam;
        c.reference_table = "table1";
        c.u = [alpha, lam](double x) { return std::exp(-lam * x) * std::pow(x, 3.0 + alpha); };
        c.exact_derivative = [alpha, lam](double x) {
            return exact_left_derivative_power(alpha, lam, x);
        };
        return c;
    }
    if (name == "deriv-right") {
        const double alpha = pick(params.alpha, 0.6);
        const double lam = pick(params.lambda1, 1.0);
        c.alpha = alpha;
        c.lambda1 = lam;
        c.reference_table = "table3";
        c.u = [alpha, lam](double x) {
            return std::exp(lam * x) * std::pow(1.0 - x, 3.0 + alpha);
        };
        c.exact_derivative = [alpha, lam](double x) {
            return exact_right_derivative_power(alpha, lam, x);
        };
        return c;
    }
    if (name == "diff-left") {
        const double alpha = pick(params.alpha, 1.2);
        const double lam = pick(params.lambda1, 4.0);
        c.alpha = alpha;
        c.lambda1 = c.lambda2 = lam;
        c.c_l = 1.0;
        c.c_r = 0.0;
        c.reference_table = "table5";
        c.exact = [alpha, lam](double x, double t) {
            return std::exp(-lam * x - t) * std::pow(x, 3.0 + alpha);
        };
        const double g4a = gamma_fn(4.0 + alpha) / 6.0;
        const double lam_a = (lam == 0.0) ? 0.0 : std::pow(lam, alpha);
        c.source_profile = [alpha, lam, g4a, lam_a](double x) {
            return std::exp(-lam * x)
                 * ((lam_a - 1.0) * std::pow(x, 3.0 + alpha) - g4a * x * x * x);
        };
        c.source_time = [](double t) { return std::exp(-t); };
        c.source = [p = c.source_profile, ft = c.source_time](double x, double t) {
            return ft(t) * p(x);
        };
        c.boundary_left = [](double) { return 0.0; };
        c.boundary_right = [lam](double t) { return std::exp(-lam - t); };
        return c;
    }
    if (name == "diff-right") {
        const double alpha = pick(params.alpha, 1.8);
        const double lam = pick(params.lambda1, 4.0);
        c.alpha = alpha;
        c.lambda1 = c.lambda2 = lam;
        c.c_l = 0.0;
        c.c_r = 1.0;
        c.reference_table = "table7";
        c.exact = [alpha, lam](double x, double t) {
            return std::exp(lam * x - t) * std::pow(1.0 - x, 3.0 + alpha);
        };
        const double g4a = gamma_fn(4.0 + alpha) / 6.0;
        const double lam_a = (lam == 0.0) ? 0.0 : std::pow(lam, alpha);
        c.source_profile = [alpha, lam, g4a, lam_a](double x) {
            const double y = 1.0 - x;
            return std::exp(lam * x)
                 * ((lam_a - 1.0) * std::pow(y, 3.0 + alpha) - g4a * y * y * y);
        };
        c.source_time = [](double t) { return std::exp(-t); };
        c.source = [p = c.source_profile, ft = c.source_time](double x, double t) {
            return ft(t) * p(x);
        };
        c.boundary_left = [](double t) { return std::exp(-t); };
        c.boundary_right = [](double) { return 0.0; };
        return c;
    }
    if (name == "diff-two-sided") {
        const double alpha = pick(params.alpha, 1.5);
        const double lam = pick(params.lambda1, 0.5);
        c.alpha = alpha;
        c.lambda1 = c.lambda2 = lam;
        c.c_l = 0.5;
        c.c_r = 0.5;
        c.reference_table = "table10";
        c.exact = [](double x, double t) {
            const double y = 1.0 - x;
            return std::exp(-t) * x * x * x * y * y * y;
        };
        const double lam_a = (lam == 0.0) ? 0.0 : std::pow(lam, alpha);
        const double cl = c.c_l, cr = c.c_r;
        c.source_profile = [alpha, lam, lam_a, cl, cr](double x) {
            const double w = x * x * x * (1.0 - x) * (1.0 - x) * (1.0 - x);
            return ((cl + cr) * lam_a - 1.0) * w
                 - cl * std::exp(-lam * x) * detail::series_left_poly33(lam, alpha, x)
                 - cr * std::exp(lam * x) * detail::series_right_poly33(lam, alpha, x);
        };
        c.source_time = [](double t) { return std::exp(-t); };
        c.source = [p = c.source_profile, ft = c.source_time](double x, double t) {
            return ft(t) * p(x);
        };
        c.boundary_left = [](double) { return 0.0; };
        c.boundary_right = [](double) { return 0.0; };
        return c;
    }
    if (name == "bs-left") {
        // fractional Black-Scholes benchmark: sigma = 0.25, r = 0.05,
        // b = -sigma^alpha sec(alpha pi / 2) / 2, a = r - b, reaction p = r
        const double alpha = pick(params.alpha, 1.6);
        const double lam = pick(params.lambda1, 1.0);
        const double sigma = 0.25, r = 0.05;
        const double pi = 3.141592653589793238462643383279502884;
        const double b = -0.5 * std::pow(sigma, alpha) / std::cos(alpha * pi / 2.0);
        c.alpha = alpha;
        c.lambda1 = lam;
        c.lambda2 = 0.0;
        c.conv_a = r - b;
        c.bs_b = b;
        c.bs_d = 0.0;
        c.reaction_p = r;
        c.reference_table = "table11";
        const double T = c.T;
        c.exact = [lam, T](double x, double t) {
            return std::exp(-lam * x + (T - t)) * x * x * x * (1.0 - x);
        };
        const double a = c.conv_a, p = c.reaction_p;
        const double lam_a = std::pow(lam, alpha);
        const double k3 = gamma_fn(4.0) / gamma_fn(4.0 - alpha);
        const double k4 = gamma_fn(5.0) / gamma_fn(5.0 - alpha);
        c.source_profile = [alpha, lam, a, b, p, lam_a, k3, k4](double x) {
            return std::exp(-lam * x)
                 * (x * x * x * (1.0 - x) * (-1.0 - a * lam - b * lam_a - p)
                    + a * (3.0 * x * x - 4.0 * x * x * x)
                    + b * (k3 * std::pow(x, 3.0 - alpha) - k4 * std::pow(x, 4.0 - alpha)));
        };
        c.source_time = [T](double t) { return std::exp(T - t); };
        c.source = [pr = c.source_profile, ft = c.source_time](double x, double t) {
            return ft(t) * pr(x);
        };
        c.boundary_left = [](double) { return 0.0; };
        c.boundary_right = [](double) { return 0.0; };
        return c;
    }
    if (name == "bs-two-sided") {
        const double alpha = pick(params.alpha, 1.8);
        const double lam1 = pick(params.lambda1, 0.5);
        const double lam2 = pick(params.lambda2, 1.0);
        c.alpha = alpha;
        c.lambda1 = lam1;
        c.lambda2 = lam2;
        c.conv_a = -0.5;
        c.bs_b = 1.0;
        c.bs_d = 1.0;
        c.reaction_p = 1.0;
        c.reference_table = "table12";
        const double T = c.T;
        c.exact = [T](double x, double t) {
            const double y = 1.0 - x;
            return std::exp(T - t) * x * x * x * y * y * y;
        };
        const double a = c.conv_a, b = c.bs_b, d = c.bs_d, p = c.reaction_p;
        const double l1a = std::pow(lam1, alpha), l2a = std::pow(lam2, alpha);
        c.source_profile = [alpha, lam1, lam2, a, b, d, p, l1a, l2a](double x) {
            const double y = 1.0 - x;
            return -(1.0 + b * l1a + d * l2a + p) * x * x * x * y * y * y
                 + 3.0 * a * x * x * y * y * (1.0 - 2.0 * x)
                 + b * std::exp(-lam1 * x) * detail::series_left_poly33(lam1, alpha, x)
                 + d * std::exp(lam2 * x) * detail::series_right_poly33(lam2, alpha, x);
        };
        c.source_time = [T](double t) { return std::exp(T - t); };
        c.source = [pr = c.source_profile, ft = c.source_time](double x, double t) {
            return ft(t) * pr(x);
        };
        c.boundary_left = [](double) { return 0.0; };
        c.boundary_right = [](double) { return 0.0; };
        return c;
    }
    throw std::invalid_argument("make_case: unknown case name '" + name + "'");
}

}  // namespace twsgd

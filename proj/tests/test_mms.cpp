#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "twsgd/mms.hpp"

using namespace twsgd;

namespace {

// five-point central differences, independent of any closed-form calculus
double fd_dt(const std::function<double(double, double)>& f, double x, double t,
             double h = 1e-3) {
    return (-f(x, t + 2 * h) + 8 * f(x, t + h) - 8 * f(x, t - h) + f(x, t - 2 * h))
         / (12 * h);
}

double fd_dx(const std::function<double(double, double)>& f, double x, double t,
             double h = 1e-4) {
    return (-f(x + 2 * h, t) + 8 * f(x + h, t) - 8 * f(x - h, t) + f(x - 2 * h, t))
         / (12 * h);
}

double series_poly33_left(double lambda, double alpha, double x) {
    return series_left_derivative(lambda, 3, alpha, x)
         - 3 * series_left_derivative(lambda, 4, alpha, x)
         + 3 * series_left_derivative(lambda, 5, alpha, x)
         - series_left_derivative(lambda, 6, alpha, x);
}

double series_poly33_right(double lambda, double alpha, double x) {
    return series_right_derivative(lambda, 3, alpha, x)
         - 3 * series_right_derivative(lambda, 4, alpha, x)
         + 3 * series_right_derivative(lambda, 5, alpha, x)
         - series_right_derivative(lambda, 6, alpha, x);
}

}  // namespace

TEST_CASE("series collapses to one term at lambda = 0") {
    const double alpha = 1.5, x = 0.7;
    const double expect = gamma_fn(4.0) / gamma_fn(4.0 - alpha) * std::pow(x, 3.0 - alpha);
    CHECK(series_left_derivative(0.0, 3, alpha, x) == Catch::Approx(expect).epsilon(1e-14));
}

TEST_CASE("series matches the classical derivative as alpha -> 1") {
    const double lambda = 0.5;
    for (const double x : {0.2, 0.5, 0.9}) {
        const double classical = std::exp(lambda * x) * (lambda * x * x * x + 3 * x * x);
        CHECK(series_left_derivative(lambda, 3, 1.0, x)
              == Catch::Approx(classical).epsilon(1e-8));
    }
}

TEST_CASE("series converges quickly for moderate lambda") {
    std::size_t terms = 0;
    series_left_derivative(0.5, 3, 1.5, 0.5, 1e-14, &terms);
    CHECK(terms <= 40);
    // cannot fail to converge for |lambda| <= 5, x <= 1
    for (const double lambda : {1.0, 3.0, 5.0})
        CHECK_NOTHROW(series_left_derivative(lambda, 6, 1.9, 1.0));
}

TEST_CASE("series input validation") {
    CHECK_THROWS_AS(series_left_derivative(1.0, 3, 1.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(series_left_derivative(1.0, 3, 1.5, 0.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(series_right_derivative(1.0, 3, 1.5, 1.0), std::domain_error);
}

TEST_CASE("closed-form tempered derivative of the power test function") {
    CHECK(exact_left_derivative_power(0.6, 3.0, 0.0) == 0.0);
    CHECK(exact_left_derivative_power(0.6, 0.0, 1.0)
          == Catch::Approx(gamma_fn(4.6) / 6.0).epsilon(1e-14));

    // cross-check against the series route with real exponent 3 + alpha
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ua(0.1, 1.9), ul(0.0, 5.0), ux(0.05, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double alpha = ua(rng), lambda = ul(rng), x = ux(rng);
        const double u = std::exp(-lambda * x) * std::pow(x, 3.0 + alpha);
        const double lam_a = (lambda == 0.0) ? 0.0 : std::pow(lambda, alpha);
        const double oracle = std::exp(-lambda * x)
                                * series_left_derivative(0.0, 3.0 + alpha, alpha, x)
                            - lam_a * u;
        CHECK(exact_left_derivative_power(alpha, lambda, x)
              == Catch::Approx(oracle).margin(1e-9).epsilon(1e-9));
    }
}

TEST_CASE("named cases exist and unknown names are rejected") {
    for (const char* name : {"deriv-left", "deriv-right", "diff-left", "diff-right",
                             "diff-two-sided", "bs-left", "bs-two-sided"})
        CHECK_NOTHROW(make_case(name));
    CHECK_THROWS_AS(make_case("no-such-case"), std::invalid_argument);
}

TEST_CASE("diff-left boundary value matches the exact solution") {
    CaseParams p;
    p.lambda1 = 4.0;
    const auto c = make_case("diff-left", p);
    CHECK(c.exact(1.0, 0.0) == Catch::Approx(std::exp(-4.0)).epsilon(1e-14));
    CHECK(c.boundary_right(0.0) == Catch::Approx(std::exp(-4.0)).epsilon(1e-14));
    CHECK(c.boundary_left(0.5) == 0.0);
}

TEST_CASE("bs payoffs evaluate the exact solution at expiry") {
    const auto c3 = make_case("bs-left");
    CHECK(c3.exact(0.5, c3.T)
          == Catch::Approx(std::exp(-0.5) * 0.125 * 0.5).epsilon(1e-14));
    const auto c4 = make_case("bs-two-sided");
    CHECK(c4.exact(0.5, c4.T) == Catch::Approx(std::pow(0.5, 6.0)).epsilon(1e-14));
}

TEST_CASE("pde residual vanishes for every manufactured diffusion case") {
    // residual assembled from finite-difference time derivatives and the
    // series form of the fractional operators
    for (const std::string name : {"diff-left", "diff-right", "diff-two-sided"}) {
        const auto c = make_case(name);
        const double alpha = c.alpha, lam = c.lambda1;
        const double lam_a = (lam == 0.0) ? 0.0 : std::pow(lam, alpha);
        for (int ix = 1; ix <= 17; ++ix) {
            const double x = ix / 18.0;
            for (const double t : {0.1, 0.5, 0.9}) {
                double dl = 0.0, dr = 0.0;
                if (name == "diff-left") {
                    dl = std::exp(-lam * x - t)
                             * series_left_derivative(0.0, 3.0 + alpha, alpha, x)
                       - lam_a * c.exact(x, t);
                } else if (name == "diff-right") {
                    dr = std::exp(lam * x - t)
                             * series_right_derivative(0.0, 3.0 + alpha, alpha, x)
                       - lam_a * c.exact(x, t);
                } else {
                    dl = std::exp(-lam * x - t) * series_poly33_left(lam, alpha, x)
                       - lam_a * c.exact(x, t);
                    dr = std::exp(lam * x - t) * series_poly33_right(lam, alpha, x)
                       - lam_a * c.exact(x, t);
                }
                const double residual = fd_dt(c.exact, x, t) - c.c_l * dl - c.c_r * dr
                                      - c.source(x, t);
                CAPTURE(name, x, t);
                CHECK(std::abs(residual) < 1e-8);
            }
        }
    }
}

TEST_CASE("pde residual vanishes for both Black-Scholes cases") {
    for (const std::string name : {"bs-left", "bs-two-sided"}) {
        const auto c = make_case(name);
        const double alpha = c.alpha;
        for (int ix = 1; ix <= 17; ++ix) {
            const double x = ix / 18.0;
            for (const double t : {0.1, 0.5, 0.9}) {
                double dl = 0.0, dr = 0.0;
                if (name == "bs-left") {
                    const double lam = c.lambda1;
                    dl = std::exp(-lam * x + (c.T - t))
                             * (series_left_derivative(0.0, 3, alpha, x)
                                - series_left_derivative(0.0, 4, alpha, x))
                       - std::pow(lam, alpha) * c.exact(x, t);
                } else {
                    dl = std::exp(-c.lambda1 * x + (c.T - t))
                             * series_poly33_left(c.lambda1, alpha, x)
                       - std::pow(c.lambda1, alpha) * c.exact(x, t);
                    dr = std::exp(c.lambda2 * x + (c.T - t))
                             * series_poly33_right(c.lambda2, alpha, x)
                       - std::pow(c.lambda2, alpha) * c.exact(x, t);
                }
                const double residual = fd_dt(c.exact, x, t)
                                      + c.conv_a * fd_dx(c.exact, x, t)
                                      + c.bs_b * dl + c.bs_d * dr
                                      - c.reaction_p * c.exact(x, t) - c.source(x, t);
                CAPTURE(name, x, t);
                CHECK(std::abs(residual) < 1e-8);
            }
        }
    }
}

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "twsgd/special.hpp"
#include "twsgd/wsgd.hpp"

namespace twsgd {

/// A function sampled on the uniform grid x_i = a + i*h, i = 0..M.
struct GridFn {
    double a = 0.0;
    double b = 1.0;
    double h = 0.0;
    std::vector<double> values;

    std::size_t intervals() const { return values.empty() ? 0 : values.size() - 1; }
    double x(std::size_t i) const { return a + static_cast<double>(i) * h; }

    static GridFn sample(double a, double b, std::size_t M,
                         const std::function<double(double)>& f) {
        if (M == 0 || !(b > a))
            throw std::invalid_argument("GridFn::sample: need M >= 1 and b > a");
        GridFn u;
        u.a = a;
        u.b = b;
        u.h = (b - a) / static_cast<double>(M);
        u.values.resize(M + 1);
        for (std::size_t i = 0; i <= M; ++i)
            u.values[i] = f(u.x(i));
        return u;
    }
};

/**
 * Tempered-WSGD weight sequence g_k and drift correction phi for one
 * (order, alpha, lambda, h, free parameter) choice.
 *
 * g_k combines the Gruenwald weights over the family shifts,
 *   g_k = (sum_j gamma_j w_{k-1+p_j}) * exp(-(k-1) h lambda),
 * with w at negative index zero, so g_0 = gamma_1 e^{h lambda}. The
 * drift correction is phi = sum_j gamma_j e^{p_j h lambda} (1-e^{-h lambda})^alpha.
 * At lambda = 0 the weights reduce to the untempered combinations and
 * phi vanishes identically.
 */
struct OperatorWeights {
    int order = 2;
    double alpha = 0.0;
    double lambda = 0.0;
    double h = 0.0;
    std::vector<double> g;
    double phi = 0.0;
    GammaFamily family;
};

inline OperatorWeights build_weights(int order, double alpha, double lambda, double h,
                                     double free_param, std::size_t n) {
    if (order != 2 && order != 3)
        throw std::domain_error("build_weights: order must be 2 or 3");
    if (!(lambda >= 0.0))
        throw std::domain_error("build_weights: lambda must be >= 0");
    if (!(h > 0.0))
        throw std::domain_error("build_weights: h must be > 0");

    OperatorWeights w;
    w.order = order;
    w.alpha = alpha;
    w.lambda = lambda;
    w.h = h;
    w.family = (order == 2) ? gamma_order2(alpha, free_param)
                            : gamma_order3(alpha, free_param);

    const GruenwaldWeights gw = gruenwald_weights(alpha, n + 1);
    const auto& gam = w.family.gammas;
    const auto& p = w.family.shifts;

    w.g.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < gam.size(); ++j) {
            const long idx = static_cast<long>(k) - 1 + static_cast<long>(p[j]);
            if (idx >= 0)
                s += gam[j] * gw.omega[static_cast<std::size_t>(idx)];
        }
        w.g[k] = s * std::exp(-(static_cast<double>(k) - 1.0) * h * lambda);
    }

    const double base = std::pow(1.0 - std::exp(-h * lambda), alpha);
    double phi = 0.0;
    for (std::size_t j = 0; j < gam.size(); ++j)
        phi += gam[j] * std::exp(p[j] * h * lambda);
    w.phi = phi * base;  // exactly 0 for lambda == 0
    return w;
}

/**
 * Left tempered fractional derivative of a grid function at node i,
 *   h^{-alpha} ( sum_{k=0}^{i+1} g_k u_{i-k+1}  -  phi u_i ),
 * approximating the lambda^alpha-subtracted operator to O(h^order).
 * Only grid-supported samples enter the sum; valid for 1 <= i <= M,
 * where the i = M row needs no sample beyond the grid's last node.
 */
inline double apply_left(const OperatorWeights& w, const GridFn& u, std::size_t i) {
    const std::size_t M = u.intervals();
    if (i < 1 || i > M)
        throw std::out_of_range("apply_left: node index out of range");
    if (w.g.size() < i + 2)
        throw std::invalid_argument("apply_left: weight sequence too short");
    double s = 0.0;
    for (std::size_t k = 0; k <= i + 1; ++k)
        s += w.g[k] * u.values[i - k + 1];
    return (s - w.phi * u.values[i]) / std::pow(w.h, w.alpha);
}

/// Mirror of apply_left: h^{-alpha} ( sum_{k=0}^{M-i+1} g_k u_{i+k-1} - phi u_i ).
inline double apply_right(const OperatorWeights& w, const GridFn& u, std::size_t i) {
    const std::size_t M = u.intervals();
    if (i < 1 || i > M)
        throw std::out_of_range("apply_right: node index out of range");
    if (w.g.size() < M - i + 2)
        throw std::invalid_argument("apply_right: weight sequence too short");
    double s = 0.0;
    for (std::size_t k = 0; k <= M - i + 1; ++k)
        s += w.g[k] * u.values[i + k - 1];
    return (s - w.phi * u.values[i]) / std::pow(w.h, w.alpha);
}

}  // namespace twsgd

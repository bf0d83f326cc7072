#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace twsgd {

/**
 * A shift/weight family (p_j, gamma_j) for a weighted-shifted Gruenwald
 * operator of nominal accuracy `order`. The gammas solve the moment
 * (order) conditions up to level `order`; one coefficient stays free.
 *
 * Shifts are kept as doubles so non-integer shift sets type-check; the
 * residual evaluator below is shift-value agnostic.
 */
struct GammaFamily {
    int order = 2;                // 2 or 3
    std::vector<double> shifts;   // p_j
    std::vector<double> gammas;   // gamma_j, same length
    double free_param = 0.0;      // gamma_3 for order 2, gamma_4 for order 3
    double alpha = 0.0;
};

/// Second-order family on shifts (1, 0, -1): gamma_1 = alpha/2 + gamma_3,
/// gamma_2 = (2 - alpha)/2 - 2 gamma_3.
inline GammaFamily gamma_order2(double alpha, double gamma3) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::domain_error("gamma_order2: alpha must be in (0, 2]");
    GammaFamily f;
    f.order = 2;
    f.alpha = alpha;
    f.free_param = gamma3;
    f.shifts = {1.0, 0.0, -1.0};
    f.gammas = {alpha / 2.0 + gamma3, (2.0 - alpha) / 2.0 - 2.0 * gamma3, gamma3};
    return f;
}

/// Third-order family on shifts (1, 0, -1, -2).
inline GammaFamily gamma_order3(double alpha, double gamma4) {
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw std::domain_error("gamma_order3: alpha must be in (0, 2]");
    GammaFamily f;
    f.order = 3;
    f.alpha = alpha;
    f.free_param = gamma4;
    f.shifts = {1.0, 0.0, -1.0, -2.0};
    const double a = alpha;
    f.gammas = {a * a / 8.0 + 5.0 * a / 24.0 - gamma4,
                -a * a / 4.0 + a / 12.0 + 1.0 + 3.0 * gamma4,
                a * a / 8.0 - 7.0 * a / 24.0 - 3.0 * gamma4,
                gamma4};
    return f;
}

/**
 * Left-hand sides of the moment conditions of the level-`level` system
 * (level in 2..5), evaluated for an arbitrary shift/weight family.
 * A family of nominal order l makes the first l residuals vanish.
 */
inline std::vector<double> order_condition_residuals(const GammaFamily& f, int level) {
    if (level < 2 || level > 5)
        throw std::domain_error("order_condition_residuals: level must be in 2..5");
    if (f.shifts.size() != f.gammas.size())
        throw std::invalid_argument("order_condition_residuals: shifts/gammas size mismatch");

    const double a = f.alpha;
    const double c2 = a / 6.0 + a * (a - 1.0) / 8.0;
    const double c3 = a / 24.0 + a * (a - 1.0) / 12.0 + a * (a - 1.0) * (a - 2.0) / 48.0;
    // coefficient of p_j in the level-5 condition, as printed
    const double c4p = a / 24.0 - a * (a - 1.0) / 12.0 - a * (a - 1.0) * (a - 2.0) / 48.0;
    const double c4 = a / 120.0 + 5.0 * a * (a - 1.0) / 144.0
                    + a * (a - 1.0) * (a - 2.0) / 48.0
                    + a * (a - 1.0) * (a - 2.0) * (a - 3.0) / 384.0;

    std::vector<double> r(static_cast<std::size_t>(level), 0.0);
    r[0] = -1.0;  // sum gamma_j - 1
    for (std::size_t j = 0; j < f.gammas.size(); ++j) {
        const double g = f.gammas[j];
        const double p = f.shifts[j];
        r[0] += g;
        r[1] += g * (p - a / 2.0);
        if (level >= 3)
            r[2] += g * (p * p / 2.0 - a * p / 2.0 + c2);
        if (level >= 4)
            r[3] += g * (p * p * p / 6.0 - a * p * p / 4.0 + c2 * p - c3);
        if (level >= 5)
            r[4] += g * (p * p * p * p / 24.0 - a * p * p * p / 4.0 + 0.5 * c2 * p * p
                         - c4p * p + c4);
    }
    return r;
}

}  // namespace twsgd

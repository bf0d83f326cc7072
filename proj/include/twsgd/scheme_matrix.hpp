#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "twsgd/operators.hpp"

namespace twsgd {

/**
 * Lower-Hessenberg Toeplitz matrix of a tempered-WSGD operator on the
 * interior nodes: diagonal g_1 - phi, superdiagonal g_0, and g_{i-j+1}
 * below the diagonal. The right-sided operator contributes through the
 * transpose of a matrix with this same layout.
 */
struct SchemeMatrix {
    std::size_t size = 0;       // M - 1
    std::vector<double> g;      // weight sequence used
    double phi = 0.0;
    Eigen::MatrixXd dense;
};

inline SchemeMatrix assemble_scheme_matrix(const OperatorWeights& w, std::size_t M) {
    if (M < 2)
        throw std::invalid_argument("assemble_scheme_matrix: M must be >= 2");
    if (w.g.size() < M)
        throw std::invalid_argument("assemble_scheme_matrix: weight sequence too short");
    const std::size_t n = M - 1;
    SchemeMatrix B;
    B.size = n;
    B.g = w.g;
    B.phi = w.phi;
    B.dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const long k = static_cast<long>(i) - static_cast<long>(j) + 1;
            if (k >= 0)
                B.dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    w.g[static_cast<std::size_t>(k)];
        }
        B.dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= w.phi;
    }
    return B;
}

}  // namespace twsgd

// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suites: seeded random matrices and slow
// reference implementations that are algorithmically independent of the
// library code they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <numbers>
#include <vector>

#include <armadillo>

#include "dmasim/array.hpp"
#include "dmasim/element.hpp"
#include "dmasim/rate.hpp"
#include "dmasim/rng.hpp"

namespace testutil {

// Bitwise matrix equality, for determinism checks where "close" is not
// good enough.
inline bool bit_equal(const arma::cx_mat& a, const arma::cx_mat& b) {
    if (a.n_rows != b.n_rows || a.n_cols != b.n_cols) {
        return false;
    }
    return std::memcmp(a.memptr(), b.memptr(), a.n_elem * sizeof(arma::cx_double)) == 0;
}

inline arma::cx_mat random_matrix(dmasim::RngStream& rng, arma::uword rows, arma::uword cols) {
    arma::cx_mat X(rows, cols);
    for (arma::uword j = 0; j < cols; ++j) {
        for (arma::uword i = 0; i < rows; ++i) {
            X(i, j) = rng.complex_normal();
        }
    }
    return X;
}

// Reference rate evaluated purely through Hermitian eigendecompositions of
// the log-det form: no Cholesky factor, no singular values, so it shares no
// numerical path with the library implementation.
inline double eig_rate_oracle(const arma::cx_mat& A, const arma::cx_mat& H, double snr) {
    const arma::cx_mat gram = A * A.t();
    arma::vec eigenvalues;
    arma::cx_mat basis;
    arma::eig_sym(eigenvalues, basis, gram);
    arma::cx_vec inv_sqrt(eigenvalues.n_elem);
    for (arma::uword i = 0; i < eigenvalues.n_elem; ++i) {
        inv_sqrt(i) = std::complex<double>{1.0 / std::sqrt(eigenvalues(i)), 0.0};
    }
    const arma::cx_mat whitener = basis * arma::diagmat(inv_sqrt) * basis.t();
    const arma::cx_mat effective = whitener * A * H;
    arma::vec lambdas;
    arma::eig_sym(lambdas, effective * effective.t());
    double bits = 0.0;
    for (arma::uword i = 0; i < lambdas.n_elem; ++i) {
        bits += std::log2(1.0 + snr * std::max(lambdas(i), 0.0));
    }
    return bits;
}

// Nearest distance from z to the Lorentzian circle found by a dense sweep
// of the generating phase.
inline double circle_sweep_distance(std::complex<double> z, int points) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < points; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / points;
        const std::complex<double> q{0.5 * std::cos(phi),
                                     0.5 + 0.5 * std::sin(phi)};
        best = std::min(best, std::abs(z - q));
    }
    return best;
}

// Best achievable binary-weight rate for a 2x2-element array by trying all
// 16 on/off patterns, skipping those that silence a whole microstrip.
inline double exhaustive_binary_optimum(const arma::cx_mat& H, const dmasim::ArrayGeometry& geo,
                                        double snr) {
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < 16; ++mask) {
        if ((mask & 0b0011u) == 0 || (mask & 0b1100u) == 0) {
            continue; // a silent strip makes the noise covariance singular
        }
        dmasim::WeightTable table(2, std::vector<dmasim::ElementWeight>(2));
        for (arma::uword m = 0; m < 2; ++m) {
            for (arma::uword l = 0; l < 2; ++l) {
                const bool on = (mask >> (2 * m + l)) & 1u;
                table[m][l] = dmasim::project_weight(on ? 1.0 : 0.0,
                                                     dmasim::FeasibleSet::BinaryAmplitude);
            }
        }
        const auto combiner = dmasim::assemble_combiner(geo, table);
        best = std::max(best, dmasim::uplink_sum_rate(combiner, H, snr));
    }
    return best;
}

// Width of the band where the curve stays above 10^(-3/20) of its peak,
// found by linear interpolation around the maximum. Returns 0 when either
// crossing falls outside the grid.
inline double half_power_width(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double threshold = std::pow(10.0, -3.0 / 20.0) * y[peak];
    double left = 0.0;
    double right = 0.0;
    bool found_left = false;
    bool found_right = false;
    for (std::size_t i = peak; i > 0; --i) {
        if (y[i - 1] < threshold) {
            const double t = (threshold - y[i - 1]) / (y[i] - y[i - 1]);
            left = x[i - 1] + t * (x[i] - x[i - 1]);
            found_left = true;
            break;
        }
    }
    for (std::size_t i = peak + 1; i < y.size(); ++i) {
        if (y[i] < threshold) {
            const double t = (threshold - y[i - 1]) / (y[i] - y[i - 1]);
            right = x[i - 1] + t * (x[i] - x[i - 1]);
            found_right = true;
            break;
        }
    }
    return (found_left && found_right) ? right - left : 0.0;
}

} // namespace testutil

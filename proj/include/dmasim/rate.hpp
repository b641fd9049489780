// SPDX-License-Identifier: Apache-2.0
//
// Achievable uplink sum-rates through an analog front end.
//
// K users transmit with equal power over a narrowband multiple access
// channel H. The base station observes y = A (H x + n) where n is white
// unit-variance noise entering at the N elements, so the noise after the
// front end has covariance A A^H and must be whitened before the familiar
// log-det expression applies:
//
//   R(A) = log2 det(I_M + snr (A A^H)^{-1} A H H^H A^H)
//
// Evaluation factors A A^H = C C^H (Cholesky), forms B = C^{-1} A H by a
// triangular solve, and sums log2(1 + snr s_i^2) over singular values of B.
// This is algebraically identical to the log-det form and keeps precision
// when the front end is poorly scaled. A direct consequence of whitening is
// left-invariance: any invertible M x M transform of A leaves the rate
// unchanged, so only the row space of the front end matters.

#pragma once

#include <armadillo>
#include <string>
#include <vector>

#include "dmasim/array.hpp"

namespace dmasim {

// Refuse to whiten once cond(A A^H) reaches this value. The error reports
// which microstrip rows carry negligible power when that is the cause.
inline constexpr double kFrontEndConditionLimit = 1e12;

// Monte Carlo summary for one architecture at one SNR point.
struct RateResult {
    std::string architecture;
    double snr_db = 0.0;
    std::vector<double> per_trial_rates; // bps/Hz
    double mean_rate = 0.0;              // bps/Hz
    double ci95_halfwidth = 0.0;         // bps/Hz, normal approximation
};

RateResult summarize_rates(std::string architecture, double snr_db,
                           std::vector<double> per_trial_rates);

// Sum rate in bps/Hz. A is M x N with full row rank, H is N x K, snr is
// linear and nonnegative. Throws SingularFrontEndError when A A^H is
// numerically singular and std::invalid_argument on dimension mismatch or
// negative snr.
double uplink_sum_rate(const arma::cx_mat& A, const arma::cx_mat& H, double snr);
double uplink_sum_rate(const AnalogCombiner& combiner, const arma::cx_mat& H, double snr);

// log2 det(I_N + snr H H^H): capacity with one receive chain per element.
double fully_digital_sum_capacity(const arma::cx_mat& H, double snr);

// Capacity of a conventional array with num_antennas antennas, taken as the
// first num_antennas rows of H (same fading law, smaller aperture).
double digital_subarray_capacity(const arma::cx_mat& H, arma::uword num_antennas, double snr);

} // namespace dmasim

// SPDX-License-Identifier: Apache-2.0

#include "dmasim/rate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "dmasim/errors.hpp"

namespace dmasim {

namespace {

double sum_log2_one_plus(const arma::vec& singular_values, double snr) {
    double nats = 0.0;
    for (arma::uword i = 0; i < singular_values.n_elem; ++i) {
        nats += std::log1p(snr * singular_values(i) * singular_values(i));
    }
    return nats / std::numbers::ln2;
}

// Rows whose power is negligible next to the strongest row. Used only to
// annotate the singularity error; linear dependence between healthy rows
// leaves the list empty.
std::vector<std::size_t> weak_rows(const arma::cx_mat& A) {
    arma::vec row_power(A.n_rows);
    for (arma::uword m = 0; m < A.n_rows; ++m) {
        row_power(m) = std::pow(arma::norm(A.row(m)), 2);
    }
    const double strongest = row_power.max();
    std::vector<std::size_t> rows;
    for (arma::uword m = 0; m < A.n_rows; ++m) {
        if (row_power(m) <= 1e-12 * strongest) {
            rows.push_back(static_cast<std::size_t>(m));
        }
    }
    return rows;
}

[[noreturn]] void throw_singular(const arma::cx_mat& A, double condition) {
    auto rows = weak_rows(A);
    std::ostringstream msg;
    msg << "analog front end is numerically singular (noise covariance condition ";
    msg << condition << ")";
    if (!rows.empty()) {
        msg << "; microstrip rows with negligible power:";
        for (std::size_t r : rows) {
            msg << ' ' << r;
        }
    } else {
        msg << "; rows are linearly dependent";
    }
    throw SingularFrontEndError(msg.str(), std::move(rows));
}

} // namespace

RateResult summarize_rates(std::string architecture, double snr_db,
                           std::vector<double> per_trial_rates) {
    if (per_trial_rates.empty()) {
        throw std::invalid_argument("per-trial rate list is empty");
    }
    RateResult result;
    result.architecture = std::move(architecture);
    result.snr_db = snr_db;
    double sum = 0.0;
    for (double r : per_trial_rates) {
        sum += r;
    }
    const double n = static_cast<double>(per_trial_rates.size());
    result.mean_rate = sum / n;
    if (per_trial_rates.size() > 1) {
        double ss = 0.0;
        for (double r : per_trial_rates) {
            const double d = r - result.mean_rate;
            ss += d * d;
        }
        const double sample_var = ss / (n - 1.0);
        result.ci95_halfwidth = 1.96 * std::sqrt(sample_var / n);
    }
    result.per_trial_rates = std::move(per_trial_rates);
    return result;
}

double uplink_sum_rate(const arma::cx_mat& A, const arma::cx_mat& H, double snr) {
    if (A.n_elem == 0 || H.n_elem == 0) {
        throw std::invalid_argument("empty matrix");
    }
    if (A.n_cols != H.n_rows) {
        throw std::invalid_argument("front-end columns must equal channel rows");
    }
    if (!(snr >= 0.0)) {
        throw std::invalid_argument("snr must be nonnegative");
    }
    const arma::cx_mat noise_cov = A * A.t();
    if (!noise_cov.is_finite()) {
        throw_singular(A, arma::datum::inf);
    }
    const double condition = arma::cond(noise_cov);
    if (!(condition < kFrontEndConditionLimit)) {
        throw_singular(A, condition);
    }
    arma::cx_mat chol_factor;
    if (!arma::chol(chol_factor, noise_cov, "lower")) {
        throw_singular(A, condition);
    }
    // whitened effective channel C^{-1} A H by forward substitution
    const arma::cx_mat whitened = arma::solve(arma::trimatl(chol_factor), A * H);
    arma::vec singular_values;
    if (!arma::svd(singular_values, whitened)) {
        throw std::runtime_error("svd of whitened channel failed to converge");
    }
    return sum_log2_one_plus(singular_values, snr);
}

double uplink_sum_rate(const AnalogCombiner& combiner, const arma::cx_mat& H, double snr) {
    return uplink_sum_rate(combiner.matrix, H, snr);
}

double fully_digital_sum_capacity(const arma::cx_mat& H, double snr) {
    if (H.n_elem == 0) {
        throw std::invalid_argument("empty channel matrix");
    }
    if (!(snr >= 0.0)) {
        throw std::invalid_argument("snr must be nonnegative");
    }
    arma::vec singular_values;
    if (!arma::svd(singular_values, H)) {
        throw std::runtime_error("svd of channel failed to converge");
    }
    return sum_log2_one_plus(singular_values, snr);
}

double digital_subarray_capacity(const arma::cx_mat& H, arma::uword num_antennas, double snr) {
    if (H.n_elem == 0) {
        throw std::invalid_argument("empty channel matrix");
    }
    if (num_antennas == 0 || num_antennas > H.n_rows) {
        throw std::invalid_argument("antenna count out of range");
    }
    return fully_digital_sum_capacity(H.rows(0, num_antennas - 1), snr);
}

} // namespace dmasim

// SPDX-License-Identifier: Apache-2.0

#include "dmasim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmasim {

void validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.num_users == 0) {
        throw std::invalid_argument("num_users must be positive");
    }
    if (cfg.num_trials == 0) {
        throw std::invalid_argument("num_trials must be positive");
    }
    if (!(cfg.cell_radius > 0.0)) {
        throw std::invalid_argument("cell_radius must be positive");
    }
    if (!(cfg.min_distance > 0.0) || !(cfg.min_distance < cfg.cell_radius)) {
        throw std::invalid_argument("min_distance must lie in (0, cell_radius)");
    }
    if (!(cfg.pathloss_exponent >= 2.0)) {
        throw std::invalid_argument("pathloss_exponent must be at least 2");
    }
    if (!(cfg.reference_distance > 0.0)) {
        throw std::invalid_argument("reference_distance must be positive");
    }
    if (!(cfg.carrier_frequency > 0.0)) {
        throw std::invalid_argument("carrier_frequency must be positive");
    }
    if (cfg.snr_grid_db.empty()) {
        throw std::invalid_argument("snr_grid_db must not be empty");
    }
    for (double snr_db : cfg.snr_grid_db) {
        if (!std::isfinite(snr_db)) {
            throw std::invalid_argument("snr_grid_db values must be finite");
        }
    }
}

std::vector<UserPosition> drop_users(const ScenarioConfig& cfg, RngStream& rng) {
    validate_scenario(cfg);
    const double r2_min = cfg.min_distance * cfg.min_distance;
    const double r2_max = cfg.cell_radius * cfg.cell_radius;
    std::vector<UserPosition> positions;
    positions.reserve(cfg.num_users);
    for (arma::uword k = 0; k < cfg.num_users; ++k) {
        // inverse-CDF sample of the area-uniform radius law
        const double r = std::sqrt(r2_min + rng.uniform() * (r2_max - r2_min));
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        positions.push_back(UserPosition{r, angle});
    }
    return positions;
}

double pathloss_gain(const ScenarioConfig& cfg, double distance_m) {
    validate_scenario(cfg);
    if (!(distance_m >= cfg.min_distance)) {
        throw std::invalid_argument("distance below min_distance");
    }
    return std::pow(cfg.cell_radius / distance_m, cfg.pathloss_exponent);
}

ChannelRealization generate_channel(const ScenarioConfig& cfg,
                                    const ArrayGeometry& geo,
                                    std::uint64_t trial) {
    validate_scenario(cfg);
    validate_geometry(geo);

    RngStream drop_rng(derive_stream_seed(cfg.rng_seed, trial, StreamPurpose::UserDrop));
    RngStream fading_rng(derive_stream_seed(cfg.rng_seed, trial, StreamPurpose::Fading));

    const auto positions = drop_users(cfg, drop_rng);
    const arma::uword N = geo.num_elements();
    const arma::uword K = cfg.num_users;

    ChannelRealization ch;
    ch.matrix.set_size(N, K);
    ch.user_distances.reserve(K);
    ch.pathloss_gains.reserve(K);
    for (arma::uword k = 0; k < K; ++k) {
        const double gain = pathloss_gain(cfg, positions[k].distance);
        ch.user_distances.push_back(positions[k].distance);
        ch.pathloss_gains.push_back(gain);
        const double scale = std::sqrt(gain);
        for (arma::uword n = 0; n < N; ++n) {
            ch.matrix(n, k) = scale * fading_rng.complex_normal();
        }
    }
    return ch;
}

} // namespace dmasim

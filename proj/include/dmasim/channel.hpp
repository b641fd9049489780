// SPDX-License-Identifier: Apache-2.0
//
// Multi-user uplink channel generation.
//
// K single-antenna users are dropped uniformly by area in an annulus around
// the base station. Large-scale gain follows a log-distance law normalized
// to the cell edge, so the SNR parameter elsewhere is the per-user SNR of a
// cell-edge user. Small-scale fading is i.i.d. Rayleigh across elements.

#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "dmasim/array.hpp"
#include "dmasim/rng.hpp"

namespace dmasim {

struct ScenarioConfig {
    arma::uword num_users = 8;            // K
    double cell_radius = 400.0;           // meters
    double min_distance = 10.0;           // meters, keeps the far-field law valid
    double pathloss_exponent = 3.0;       // >= 2
    double reference_distance = 1.0;      // meters, scenario metadata
    double carrier_frequency = 3.5e9;     // Hz, scenario metadata
    std::vector<double> snr_grid_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0};
    arma::uword num_trials = 200;
    std::uint64_t rng_seed = 42;
};

// Throws std::invalid_argument on empty grids, nonpositive counts, radii
// out of order, or a pathloss exponent below 2.
void validate_scenario(const ScenarioConfig& cfg);

struct UserPosition {
    double distance;  // meters from the array
    double angle;     // radians, uniform on [0, 2 pi); metadata only
};

struct ChannelRealization {
    arma::cx_mat matrix;                // N x K, element n to user k
    std::vector<double> user_distances; // meters, one per user
    std::vector<double> pathloss_gains; // linear, 1 at the cell edge
};

// Draws K positions with radius CDF proportional to r^2 on
// [min_distance, cell_radius], i.e. uniform by area over the annulus.
std::vector<UserPosition> drop_users(const ScenarioConfig& cfg, RngStream& rng);

// (cell_radius / distance)^pathloss_exponent. Equals 1 at the cell edge and
// grows toward the center; distances below min_distance are rejected.
double pathloss_gain(const ScenarioConfig& cfg, double distance_m);

// Channel for one Monte Carlo trial. Column k is sqrt(gain_k) times an
// i.i.d. CN(0, 1) vector. The user drop and the fading use substreams
// derived from (cfg.rng_seed, trial), so the realization depends only on
// those two numbers, never on evaluation order.
ChannelRealization generate_channel(const ScenarioConfig& cfg,
                                    const ArrayGeometry& geo,
                                    std::uint64_t trial);

} // namespace dmasim

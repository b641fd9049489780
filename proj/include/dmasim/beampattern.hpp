// SPDX-License-Identifier: Apache-2.0
//
// Far-field pattern evaluation and holographic beam steering for a single
// microstrip. The pattern is the scalar array factor of the L weighted
// radiators at positions l d along the strip; element patterns and mutual
// coupling are out of scope. Steering exploits the guided-mode phase
// accumulation: the ideal weight conjugates both the guide phase and the
// free-space steering phase, and is then projected onto the feasible set.

#pragma once

#include <vector>

#include "dmasim/array.hpp"

namespace dmasim {

struct PatternResult {
    std::vector<double> angles_deg;     // strictly increasing, within [-90, 90]
    std::vector<double> magnitudes_db;  // normalized, maximum exactly 0
    double peak_angle_deg = 0.0;
    double half_power_beamwidth_deg = 0.0; // 0 when the -3 dB points fall off grid
};

// Uniform grid over [start, stop] inclusive. Default 0.1 degree steps.
std::vector<double> angle_grid(double start_deg = -90.0, double stop_deg = 90.0,
                               double step_deg = 0.1);

// Array factor AF(theta) = |sum_l q_l g_l exp(j k0 l d sin theta)| of one
// microstrip, normalized to its peak and converted to dB. Throws
// std::invalid_argument on length or grid violations and std::domain_error
// when all weights are zero (pattern undefined).
PatternResult array_factor(const ArrayGeometry& geo,
                           const std::vector<ElementWeight>& weights,
                           const std::vector<double>& angles_deg);

// Weights steering the strip toward theta_target: ideal value
// q_l = exp(-j k0 l d sin theta_target) / g_l, projected per element onto
// the requested set. For a lossy guide the ideal magnitude grows along the
// strip and the projection absorbs it; no error is raised.
std::vector<ElementWeight> holographic_tuning(const ArrayGeometry& geo,
                                              double theta_target_deg,
                                              FeasibleSet set);

} // namespace dmasim

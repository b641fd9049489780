// SPDX-License-Identifier: Apache-2.0

#include "dmasim/beampattern.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace dmasim {

namespace {

// amplitude ratio 1/sqrt(2) relative to the peak
const double kHalfPowerDb = 10.0 * std::log10(0.5);

// dB floor keeping exact pattern nulls finite in output files
constexpr double kMinRatio = 1e-20;

double deg2rad(double deg) {
    return deg * std::numbers::pi / 180.0;
}

// linear interpolation of the angle where the dB curve crosses the half
// power threshold between adjacent samples
double crossing(double a0, double db0, double a1, double db1) {
    const double t = (kHalfPowerDb - db0) / (db1 - db0);
    return a0 + t * (a1 - a0);
}

} // namespace

std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0)) {
        throw std::invalid_argument("angle step must be positive");
    }
    if (!(start_deg < stop_deg)) {
        throw std::invalid_argument("angle range is empty");
    }
    if (start_deg < -90.0 || stop_deg > 90.0) {
        throw std::invalid_argument("angles must lie within [-90, 90] degrees");
    }
    const auto count =
        static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 0.5)) + 1;
    std::vector<double> angles;
    angles.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double a = start_deg + static_cast<double>(i) * step_deg;
        if (a > stop_deg) {
            a = stop_deg; // guards the rounded endpoint against drift past stop
        }
        angles.push_back(a);
    }
    return angles;
}

PatternResult array_factor(const ArrayGeometry& geo,
                           const std::vector<ElementWeight>& weights,
                           const std::vector<double>& angles_deg) {
    validate_geometry(geo);
    const arma::uword L = geo.elements_per_microstrip;
    if (weights.size() != L) {
        throw std::invalid_argument("expected one weight per microstrip element");
    }
    if (angles_deg.empty()) {
        throw std::invalid_argument("angle grid is empty");
    }
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        if (!(angles_deg[i] >= -90.0 && angles_deg[i] <= 90.0)) {
            throw std::invalid_argument("angles must lie within [-90, 90] degrees");
        }
        if (i > 0 && !(angles_deg[i] > angles_deg[i - 1])) {
            throw std::invalid_argument("angle grid must be strictly increasing");
        }
    }

    std::vector<std::complex<double>> coefficients(L);
    bool any_nonzero = false;
    for (arma::uword l = 0; l < L; ++l) {
        coefficients[l] = weights[l].value * propagation_gain(geo, l);
        if (std::abs(weights[l].value) > 0.0) {
            any_nonzero = true;
        }
    }
    if (!any_nonzero) {
        throw std::domain_error("all element weights are zero; pattern is undefined");
    }

    const double k0 = 2.0 * std::numbers::pi * geo.carrier_frequency / kSpeedOfLight;
    std::vector<double> magnitudes(angles_deg.size());
    double peak = 0.0;
    std::size_t peak_index = 0;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double spatial = k0 * geo.element_spacing * std::sin(deg2rad(angles_deg[i]));
        std::complex<double> field{0.0, 0.0};
        for (arma::uword l = 0; l < L; ++l) {
            field += coefficients[l] *
                     std::polar(1.0, spatial * static_cast<double>(l));
        }
        magnitudes[i] = std::abs(field);
        if (magnitudes[i] > peak) {
            peak = magnitudes[i];
            peak_index = i;
        }
    }
    if (!(peak > 0.0)) {
        throw std::domain_error("pattern vanished on the whole angle grid");
    }

    PatternResult result;
    result.angles_deg = angles_deg;
    result.magnitudes_db.resize(magnitudes.size());
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        const double ratio = magnitudes[i] / peak; // exactly 1 at the peak
        result.magnitudes_db[i] = 20.0 * std::log10(std::max(ratio, kMinRatio));
    }
    result.peak_angle_deg = angles_deg[peak_index];

    const auto& db = result.magnitudes_db;
    double left = 0.0;
    double right = 0.0;
    bool found_left = false;
    bool found_right = false;
    for (std::size_t i = peak_index; i > 0; --i) {
        if (db[i - 1] < kHalfPowerDb) {
            left = crossing(angles_deg[i - 1], db[i - 1], angles_deg[i], db[i]);
            found_left = true;
            break;
        }
    }
    for (std::size_t i = peak_index + 1; i < db.size(); ++i) {
        if (db[i] < kHalfPowerDb) {
            right = crossing(angles_deg[i - 1], db[i - 1], angles_deg[i], db[i]);
            found_right = true;
            break;
        }
    }
    if (found_left && found_right) {
        result.half_power_beamwidth_deg = right - left;
    }
    return result;
}

std::vector<ElementWeight> holographic_tuning(const ArrayGeometry& geo,
                                              double theta_target_deg,
                                              FeasibleSet set) {
    validate_geometry(geo);
    if (!(theta_target_deg >= -90.0 && theta_target_deg <= 90.0)) {
        throw std::invalid_argument("steering target must lie within [-90, 90] degrees");
    }
    const double k0 = 2.0 * std::numbers::pi * geo.carrier_frequency / kSpeedOfLight;
    const double sin_target = std::sin(deg2rad(theta_target_deg));
    std::vector<ElementWeight> weights;
    weights.reserve(geo.elements_per_microstrip);
    for (arma::uword l = 0; l < geo.elements_per_microstrip; ++l) {
        const double steering_phase =
            -k0 * static_cast<double>(l) * geo.element_spacing * sin_target;
        // conjugate both the steering phase and the guided-mode gain so
        // that q g aligns across elements at the target angle
        const std::complex<double> ideal =
            std::polar(1.0, steering_phase) / propagation_gain(geo, l);
        weights.push_back(project_weight(ideal, set));
    }
    return weights;
}

} // namespace dmasim

// SPDX-License-Identifier: Apache-2.0

#include "dmasim/array.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dmasim {

ArrayGeometry default_geometry(arma::uword num_microstrips,
                               arma::uword elements_per_microstrip,
                               double carrier_frequency_hz) {
    ArrayGeometry geo;
    geo.num_microstrips = num_microstrips;
    geo.elements_per_microstrip = elements_per_microstrip;
    geo.carrier_frequency = carrier_frequency_hz;
    const double lambda = kSpeedOfLight / carrier_frequency_hz;
    geo.element_spacing = lambda / 5.0;
    geo.guide_wavenumber = 1.4 * 2.0 * arma::datum::pi / lambda;
    geo.waveguide_attenuation = 0.0;
    validate_geometry(geo);
    return geo;
}

void validate_geometry(const ArrayGeometry& geo) {
    if (geo.num_microstrips == 0) {
        throw std::invalid_argument("num_microstrips must be positive");
    }
    if (geo.elements_per_microstrip == 0) {
        throw std::invalid_argument("elements_per_microstrip must be positive");
    }
    if (!(geo.element_spacing > 0.0)) {
        throw std::invalid_argument("element_spacing must be positive");
    }
    if (!(geo.guide_wavenumber >= 0.0)) {
        throw std::invalid_argument("guide_wavenumber must be nonnegative");
    }
    if (!(geo.waveguide_attenuation >= 0.0)) {
        throw std::invalid_argument("waveguide_attenuation must be nonnegative");
    }
    if (!(geo.carrier_frequency > 0.0)) {
        throw std::invalid_argument("carrier_frequency must be positive");
    }
}

bool subwavelength_spacing(const ArrayGeometry& geo) {
    return geo.element_spacing < geo.wavelength();
}

std::complex<double> propagation_gain(const ArrayGeometry& geo, arma::uword element_index) {
    validate_geometry(geo);
    if (element_index >= geo.elements_per_microstrip) {
        throw std::invalid_argument("element index " + std::to_string(element_index) +
                                    " out of range for " +
                                    std::to_string(geo.elements_per_microstrip) +
                                    " elements per microstrip");
    }
    const double travel = static_cast<double>(element_index) * geo.element_spacing;
    return std::exp(std::complex<double>(-geo.waveguide_attenuation * travel,
                                         -geo.guide_wavenumber * travel));
}

AnalogCombiner assemble_combiner(const ArrayGeometry& geo, const WeightTable& weights) {
    validate_geometry(geo);
    const arma::uword M = geo.num_microstrips;
    const arma::uword L = geo.elements_per_microstrip;
    if (weights.size() != M) {
        throw std::invalid_argument("weight table has " + std::to_string(weights.size()) +
                                    " rows, geometry expects " + std::to_string(M));
    }
    for (const auto& row : weights) {
        if (row.size() != L) {
            throw std::invalid_argument("weight table row has " + std::to_string(row.size()) +
                                        " entries, geometry expects " + std::to_string(L));
        }
    }
    const FeasibleSet set = weights[0][0].set;
    for (const auto& row : weights) {
        for (const auto& w : row) {
            if (w.set != set) {
                throw std::invalid_argument("weight table mixes feasible sets");
            }
            if (!is_member(w.value, set)) {
                throw std::invalid_argument("weight is not a member of its feasible set");
            }
        }
    }

    arma::cx_vec gains(L);
    for (arma::uword l = 0; l < L; ++l) {
        gains(l) = propagation_gain(geo, l);
    }
    arma::cx_mat matrix(M, M * L, arma::fill::zeros);
    for (arma::uword m = 0; m < M; ++m) {
        for (arma::uword l = 0; l < L; ++l) {
            matrix(m, m * L + l) = weights[m][l].value * gains(l);
        }
    }
    return AnalogCombiner{std::move(matrix), geo, set};
}

} // namespace dmasim

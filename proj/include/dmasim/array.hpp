// SPDX-License-Identifier: Apache-2.0
//
// Physical array layout and assembly of the analog combining matrix.
//
// The front end is a stack of M parallel microstrips, each feeding L
// metamaterial elements. A signal captured by element l of a strip travels
// back to the strip output through a lossy guided mode, accumulating
// attenuation and phase exp(-(alpha + j beta_g) * l * d). Every strip drives
// one receive chain, so the analog stage is an M x N matrix (N = M L) whose
// row supports are disjoint blocks of L consecutive columns.

#pragma once

#include <armadillo>
#include <vector>

#include "dmasim/element.hpp"

namespace dmasim {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

struct ArrayGeometry {
    arma::uword num_microstrips = 8;         // M
    arma::uword elements_per_microstrip = 4; // L
    double element_spacing = 0.2 * kSpeedOfLight / 3.5e9; // d, meters
    double guide_wavenumber = 1.4 * 2.0 * arma::datum::pi * 3.5e9 / kSpeedOfLight; // beta_g, rad/m
    double waveguide_attenuation = 0.0;      // alpha, nepers/m
    double carrier_frequency = 3.5e9;        // Hz

    arma::uword num_elements() const { return num_microstrips * elements_per_microstrip; }
    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
};

// Geometry with element spacing lambda/5 and a lossless guide whose
// wavenumber is 1.4x the free-space wavenumber at the carrier.
ArrayGeometry default_geometry(arma::uword num_microstrips,
                               arma::uword elements_per_microstrip,
                               double carrier_frequency_hz = 3.5e9);

// Throws std::invalid_argument unless counts are nonzero, spacing and
// carrier frequency are positive, and attenuation and guide wavenumber are
// nonnegative. beta_g = 0 is allowed: it models a cut where guide phase is
// ignored, which several pattern studies use.
void validate_geometry(const ArrayGeometry& geo);

// True when the element spacing is below one wavelength. Spacings at or
// above a wavelength alias the pattern; callers should warn but proceed.
bool subwavelength_spacing(const ArrayGeometry& geo);

// weights[m][l] addresses element l on microstrip m.
using WeightTable = std::vector<std::vector<ElementWeight>>;

// Block-sparse analog combining matrix realized by a weight table. Entry
// (m, mL + l) equals q_{m,l} * g_l and everything else is exactly zero.
struct AnalogCombiner {
    arma::cx_mat matrix;
    ArrayGeometry geometry;
    FeasibleSet set = FeasibleSet::Unconstrained;
};

// Guided-mode gain g_l = exp(-(alpha + j beta_g) l d) accumulated between
// element l and the strip output. l = 0 sits at the output, so g_0 = 1.
std::complex<double> propagation_gain(const ArrayGeometry& geo, arma::uword element_index);

// Validates the table against the geometry (dimensions, one feasible set
// throughout, every weight a member of that set) and builds the matrix.
AnalogCombiner assemble_combiner(const ArrayGeometry& geo, const WeightTable& weights);

} // namespace dmasim

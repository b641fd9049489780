// SPDX-License-Identifier: Apache-2.0
//
// Radiating element model for waveguide-fed metasurface arrays.
//
// Each element behaves as a damped resonator whose complex polarizability
// follows a Lorentzian profile in frequency. Tuning an element shifts its
// resonance, which moves the operating-point weight along a circle in the
// complex plane: amplitude and phase cannot be set independently. The
// feasible weight sets below capture that coupling together with the
// simpler binary and phase-shifter element models used for comparison.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace dmasim {

// Resonator parameters of a single element.
//   oscillator_strength  dimensionless coupling factor, > 0
//   damping_factor       loss rate in Hz, >= 0
//   resonance_frequency  natural frequency in Hz, > 0
struct LorentzianTuning {
    double oscillator_strength = 1.0;
    double damping_factor = 3.5e8;
    double resonance_frequency = 3.5e9;
};

// Families of complex element weights the tuning optimizer may choose from.
enum class FeasibleSet {
    // q = (j + e^{j phi}) / 2, the circle |q - j/2| = 1/2. This is the set
    // reachable by shifting the resonance of a lossy element at a fixed
    // operating frequency. Amplitude and phase are coupled.
    LorentzianPhase,
    // q in {0, 1}: element either detuned (off) or radiating at full
    // strength with no phase control.
    BinaryAmplitude,
    // |q| = 1: ideal phase shifter, no amplitude control.
    UnitModulus,
    // Any complex value. Upper bound used for benchmarking.
    Unconstrained,
};

std::string to_string(FeasibleSet set);
FeasibleSet parse_feasible_set(const std::string& name);

// One element's weight together with the set it was drawn from. For
// LorentzianPhase weights the generating phase phi is retained so that
// configurations round-trip exactly.
struct ElementWeight {
    std::complex<double> value{0.0, 0.0};
    FeasibleSet set = FeasibleSet::Unconstrained;
    std::optional<double> phase;
};

inline constexpr double kMembershipTol = 1e-12;

bool is_member(std::complex<double> q, FeasibleSet set, double tol = kMembershipTol);

// Complex frequency response a(f) = F f^2 / (f0^2 - f^2 + j chi f).
// Throws std::invalid_argument for nonpositive f or invalid tuning, and
// std::domain_error at the undamped pole (chi = 0, f = f0).
std::complex<double> frequency_response(const LorentzianTuning& tuning, double f_hz);

// |a(f)| on a grid, scaled so the maximum is exactly 1. The grid must be
// nonempty, positive, and strictly increasing.
std::vector<double> normalized_response_curve(const LorentzianTuning& tuning,
                                              const std::vector<double>& f_grid_hz);

// Weight on the Lorentzian circle generated by phase phi (radians). The
// stored phase is reduced to (-pi, pi].
ElementWeight lorentzian_phase_weight(double phi);

// Euclidean projection of z onto the given feasible set. Closed form for
// every set. Ties are resolved toward the strongest radiating state:
// the circle center projects to j, zero projects to 1 for UnitModulus, and
// the binary midpoint line goes to 1.
ElementWeight project_weight(std::complex<double> z, FeasibleSet set);

} // namespace dmasim

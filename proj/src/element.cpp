// SPDX-License-Identifier: Apache-2.0

#include "dmasim/element.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmasim {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};
constexpr std::complex<double> kCircleCenter{0.0, 0.5};
constexpr double kCircleRadius = 0.5;

void check_tuning(const LorentzianTuning& t) {
    if (!(t.oscillator_strength > 0.0)) {
        throw std::invalid_argument("oscillator_strength must be positive");
    }
    if (!(t.resonance_frequency > 0.0)) {
        throw std::invalid_argument("resonance_frequency must be positive");
    }
    if (!(t.damping_factor >= 0.0)) {
        throw std::invalid_argument("damping_factor must be nonnegative");
    }
}

} // namespace

std::string to_string(FeasibleSet set) {
    switch (set) {
        case FeasibleSet::LorentzianPhase: return "lorentzian";
        case FeasibleSet::BinaryAmplitude: return "binary";
        case FeasibleSet::UnitModulus: return "unit-modulus";
        case FeasibleSet::Unconstrained: return "unconstrained";
    }
    throw std::invalid_argument("unhandled feasible set");
}

FeasibleSet parse_feasible_set(const std::string& name) {
    if (name == "lorentzian") return FeasibleSet::LorentzianPhase;
    if (name == "binary") return FeasibleSet::BinaryAmplitude;
    if (name == "unit-modulus") return FeasibleSet::UnitModulus;
    if (name == "unconstrained") return FeasibleSet::Unconstrained;
    throw std::invalid_argument("unknown feasible set: " + name);
}

bool is_member(std::complex<double> q, FeasibleSet set, double tol) {
    switch (set) {
        case FeasibleSet::LorentzianPhase:
            return std::abs(std::abs(q - kCircleCenter) - kCircleRadius) <= tol;
        case FeasibleSet::BinaryAmplitude:
            return std::abs(q) <= tol || std::abs(q - 1.0) <= tol;
        case FeasibleSet::UnitModulus:
            return std::abs(std::abs(q) - 1.0) <= tol;
        case FeasibleSet::Unconstrained:
            return true;
    }
    return false;
}

std::complex<double> frequency_response(const LorentzianTuning& tuning, double f_hz) {
    check_tuning(tuning);
    if (!(f_hz > 0.0)) {
        throw std::invalid_argument("evaluation frequency must be positive");
    }
    const double f0 = tuning.resonance_frequency;
    if (tuning.damping_factor == 0.0 && f_hz == f0) {
        throw std::domain_error("undamped resonator evaluated at its pole frequency");
    }
    const std::complex<double> denominator{f0 * f0 - f_hz * f_hz,
                                           tuning.damping_factor * f_hz};
    return tuning.oscillator_strength * f_hz * f_hz / denominator;
}

std::vector<double> normalized_response_curve(const LorentzianTuning& tuning,
                                              const std::vector<double>& f_grid_hz) {
    if (f_grid_hz.empty()) {
        throw std::invalid_argument("frequency grid is empty");
    }
    for (std::size_t i = 0; i < f_grid_hz.size(); ++i) {
        if (!(f_grid_hz[i] > 0.0)) {
            throw std::invalid_argument("frequency grid values must be positive");
        }
        if (i > 0 && !(f_grid_hz[i] > f_grid_hz[i - 1])) {
            throw std::invalid_argument("frequency grid must be strictly increasing");
        }
    }
    std::vector<double> magnitudes(f_grid_hz.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < f_grid_hz.size(); ++i) {
        magnitudes[i] = std::abs(frequency_response(tuning, f_grid_hz[i]));
        peak = std::max(peak, magnitudes[i]);
    }
    // peak > 0 always: |a(f)| > 0 for every positive off-pole frequency.
    for (double& m : magnitudes) {
        m /= peak; // the maximizer divides by itself, giving exactly 1
    }
    return magnitudes;
}

ElementWeight lorentzian_phase_weight(double phi) {
    if (!std::isfinite(phi)) {
        throw std::invalid_argument("phase must be finite");
    }
    const double reduced = std::remainder(phi, 2.0 * std::numbers::pi);
    ElementWeight w;
    w.value = 0.5 * (kImag + std::polar(1.0, reduced));
    w.set = FeasibleSet::LorentzianPhase;
    w.phase = reduced;
    return w;
}

ElementWeight project_weight(std::complex<double> z, FeasibleSet set) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw std::invalid_argument("projection input must be finite");
    }
    ElementWeight w;
    w.set = set;
    switch (set) {
        case FeasibleSet::LorentzianPhase: {
            const std::complex<double> offset = z - kCircleCenter;
            const double dist = std::abs(offset);
            if (dist == 0.0) {
                // center of the circle: every point is equidistant, prefer
                // the strongest radiating state
                w.value = kImag;
                w.phase = std::numbers::pi / 2.0;
            } else {
                w.value = kCircleCenter + (kCircleRadius / dist) * offset;
                w.phase = std::arg(offset);
            }
            break;
        }
        case FeasibleSet::BinaryAmplitude:
            // tie between on and off goes to the radiating state
            w.value = (std::abs(z - 1.0) <= std::abs(z)) ? 1.0 : 0.0;
            break;
        case FeasibleSet::UnitModulus: {
            const double mag = std::abs(z);
            w.value = (mag == 0.0) ? 1.0 : z / mag;
            break;
        }
        case FeasibleSet::Unconstrained:
            w.value = z;
            break;
    }
    return w;
}

} // namespace dmasim

// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo rate experiments across front-end architectures.
//
// Every trial draws one channel realization that is shared by all
// architectures and all SNR points (common random numbers), which makes
// ordering comparisons cheap at small trial counts. Trials are distributed
// over a worker pool; reproducibility is anchored in per-trial RNG
// substreams and a deterministic trial-indexed reduction, so the output is
// byte-identical for a fixed seed regardless of the worker count.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmasim/channel.hpp"
#include "dmasim/optimizer.hpp"
#include "dmasim/rate.hpp"

namespace dmasim {

enum class Architecture {
    DmaLorentzian,    // block-sparse front end, LorentzianPhase weights
    DmaBinary,        // block-sparse front end, BinaryAmplitude weights
    DmaUnconstrained, // block-sparse front end, Unconstrained weights
    HybridFull,       // fully connected phase-shifter network
    DigitalN,         // one receive chain per element (sum capacity)
    DigitalM,         // conventional M-antenna array
};

// Labels used in CSV output and on the command line: "dma-lorentzian",
// "dma-binary", "dma-unconstrained", "hybrid-full", "digital-N", "digital-M".
std::string to_string(Architecture arch);
Architecture parse_architecture(const std::string& label);

struct ExperimentSpec {
    ScenarioConfig scenario;
    ArrayGeometry geometry;
    std::vector<Architecture> architectures = {
        Architecture::DigitalN, Architecture::DmaLorentzian,
        Architecture::HybridFull, Architecture::DigitalM};
    OptimizerOptions optimizer;
    std::string output_path = "rates.csv"; // empty string keeps results in memory
};

// Desk-scale default: M=8, L=4 (N=32), K=8, 200 trials, SNR -10:5:15 dB,
// seed 42. Runs in seconds.
ExperimentSpec desk_preset();

// Full-scale configuration: M=16, L=10 (N=160), K=64, 400 m cell, 3.5 GHz,
// 20 trials, SNR {0, 10} dB.
ExperimentSpec paper_preset();

// Throws ConfigError on an invalid specification (no architectures,
// duplicate architectures, inconsistent scenario or geometry).
void validate_spec(const ExperimentSpec& spec);

// JSON loading. The schema is documented in the README; unknown keys are
// rejected so typos cannot silently fall back to defaults. Both throw
// ConfigError with the offending key or parse position in the message.
ExperimentSpec load_spec(const std::string& json_path);
ExperimentSpec parse_spec_json(const std::string& json_text);

struct ExperimentResult {
    std::vector<RateResult> table;        // architecture-major, SNR-minor
    std::string csv;                      // rendered result table
    std::vector<std::string> diagnostics; // per-trial optimizer reports, trial order
};

// Runs the experiment on `workers` threads (0 picks the hardware
// concurrency). Writes the CSV to spec.output_path unless it is empty; an
// unwritable path raises IoError before any trial is computed. Every
// trial's rates are checked against the fully digital capacity of the same
// realization; a violation raises std::logic_error since it indicates a
// defect, not bad input.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers = 0);

// CSV rendering: header architecture,snr_db,mean_rate_bpshz,ci95,trials,seed
// and one row per architecture x SNR point, in table order.
std::string rates_csv(const std::vector<RateResult>& table, std::uint64_t seed);

} // namespace dmasim

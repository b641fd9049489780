// SPDX-License-Identifier: Apache-2.0
//
// dmasim: command line front end for the metasurface array simulator.
//
// Subcommands:
//   rates             Monte Carlo uplink sum-rate experiment (CSV output)
//   pattern           far-field cut of one holographically steered microstrip
//   element-response  normalized element response curves over frequency
//   validate          self-check battery of the library's core invariants
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 output I/O error.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmasim/beampattern.hpp"
#include "dmasim/channel.hpp"
#include "dmasim/element.hpp"
#include "dmasim/errors.hpp"
#include "dmasim/experiment.hpp"
#include "dmasim/optimizer.hpp"
#include "dmasim/rate.hpp"
#include "dmasim/rng.hpp"

namespace {

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw dmasim::IoError("cannot open output path: " + path);
    }
    out << content;
    out.flush();
    if (!out) {
        throw dmasim::IoError("failed to write output file: " + path);
    }
}

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

struct RatesArgs {
    std::string config_path;
    std::string preset = "desk";
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::string arch_list;
    std::string out_path;
    unsigned workers = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* arch_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* config_opt = nullptr;
};

int run_rates(const RatesArgs& args) {
    dmasim::ExperimentSpec spec;
    if (args.config_opt->count() > 0) {
        spec = dmasim::load_spec(args.config_path);
    } else if (args.preset == "paper") {
        spec = dmasim::paper_preset();
    } else {
        spec = dmasim::desk_preset();
    }
    if (args.seed_opt->count() > 0) {
        spec.scenario.rng_seed = args.seed;
    }
    if (args.trials_opt->count() > 0) {
        spec.scenario.num_trials = args.trials;
    }
    if (args.arch_opt->count() > 0) {
        spec.architectures.clear();
        for (const auto& label : split_csv_list(args.arch_list)) {
            spec.architectures.push_back(dmasim::parse_architecture(label));
        }
    }
    if (args.out_opt->count() > 0) {
        spec.output_path = args.out_path;
    }
    if (!dmasim::subwavelength_spacing(spec.geometry)) {
        std::fprintf(stderr,
                     "warning: element spacing %g m is not sub-wavelength at %g Hz; "
                     "the pattern aliases\n",
                     spec.geometry.element_spacing, spec.geometry.carrier_frequency);
    }

    const dmasim::ExperimentResult result = dmasim::run_experiment(spec, args.workers);

    std::printf("%-18s %8s %14s %10s\n", "architecture", "snr_db", "mean_bpshz", "ci95");
    for (const auto& row : result.table) {
        std::printf("%-18s %8s %14s %10s\n", row.architecture.c_str(),
                    format_number(row.snr_db).c_str(), format_number(row.mean_rate).c_str(),
                    format_number(row.ci95_halfwidth).c_str());
    }
    for (const auto& note : result.diagnostics) {
        std::fprintf(stderr, "note: %s\n", note.c_str());
    }
    if (!spec.output_path.empty()) {
        std::printf("wrote %s (%zu rows)\n", spec.output_path.c_str(), result.table.size());
    }
    return 0;
}

struct PatternArgs {
    double target_deg = 0.0;
    std::string set_name = "lorentzian";
    std::uint64_t elements = 32;
    double carrier_hz = 3.5e9;
    std::string out_path = "pattern.csv";
};

int run_pattern(const PatternArgs& args) {
    const dmasim::ArrayGeometry geo =
        dmasim::default_geometry(1, args.elements, args.carrier_hz);
    const dmasim::FeasibleSet set = dmasim::parse_feasible_set(args.set_name);
    const auto weights = dmasim::holographic_tuning(geo, args.target_deg, set);
    const dmasim::PatternResult pattern =
        dmasim::array_factor(geo, weights, dmasim::angle_grid());

    std::string csv = "angle_deg,magnitude_db\n";
    for (std::size_t i = 0; i < pattern.angles_deg.size(); ++i) {
        csv += format_number(pattern.angles_deg[i]);
        csv += ',';
        csv += format_number(pattern.magnitudes_db[i]);
        csv += '\n';
    }
    write_text_file(args.out_path, csv);

    std::printf("target %g deg, %s weights: peak at %g deg", args.target_deg,
                args.set_name.c_str(), pattern.peak_angle_deg);
    if (pattern.half_power_beamwidth_deg > 0.0) {
        std::printf(", -3 dB width %.2f deg", pattern.half_power_beamwidth_deg);
    }
    std::printf("\nwrote %s (%zu angles)\n", args.out_path.c_str(), pattern.angles_deg.size());
    return 0;
}

struct ElementArgs {
    std::vector<double> resonances = {3.2e9, 3.5e9, 3.8e9};
    double damping = 3.5e8;
    double strength = 1.0;
    double f_start = 2.0e9;
    double f_stop = 5.0e9;
    std::uint64_t points = 601;
    std::string out_path = "element_response.csv";
};

int run_element_response(const ElementArgs& args) {
    if (!(args.f_start > 0.0) || !(args.f_stop > args.f_start)) {
        throw dmasim::ConfigError("frequency sweep requires 0 < f-start < f-stop");
    }
    if (args.points < 2) {
        throw dmasim::ConfigError("frequency sweep needs at least 2 points");
    }
    if (args.resonances.empty()) {
        throw dmasim::ConfigError("at least one resonance frequency is required");
    }
    std::vector<double> grid(args.points);
    const double step =
        (args.f_stop - args.f_start) / static_cast<double>(args.points - 1);
    for (std::uint64_t i = 0; i < args.points; ++i) {
        grid[i] = args.f_start + static_cast<double>(i) * step;
    }

    std::string csv = "curve,frequency_hz,normalized_magnitude\n";
    for (double f0 : args.resonances) {
        dmasim::LorentzianTuning tuning;
        tuning.oscillator_strength = args.strength;
        tuning.damping_factor = args.damping;
        tuning.resonance_frequency = f0;
        const auto curve = dmasim::normalized_response_curve(tuning, grid);
        const std::string label = "f0=" + format_number(f0);
        std::size_t peak_index = 0;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i] > curve[peak_index]) {
                peak_index = i;
            }
            csv += label;
            csv += ',';
            csv += format_number(grid[i]);
            csv += ',';
            csv += format_number(curve[i]);
            csv += '\n';
        }
        std::printf("%s: peak at %s Hz\n", label.c_str(),
                    format_number(grid[peak_index]).c_str());
    }
    write_text_file(args.out_path, csv);
    std::printf("wrote %s (%zu curves x %llu points)\n", args.out_path.c_str(),
                args.resonances.size(), static_cast<unsigned long long>(args.points));
    return 0;
}

// Battery of the library's cross-module invariants on freshly drawn random
// instances. Complements the unit tests with a user-runnable smoke check.
int run_validate(std::uint64_t seed) {
    dmasim::RngStream rng(seed);
    auto random_matrix = [&rng](arma::uword rows, arma::uword cols) {
        arma::cx_mat X(rows, cols);
        for (arma::uword j = 0; j < cols; ++j) {
            for (arma::uword i = 0; i < rows; ++i) {
                X(i, j) = rng.complex_normal();
            }
        }
        return X;
    };

    int failures = 0;
    auto report = [&failures](const char* name, bool pass, const std::string& detail) {
        std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name,
                    detail.empty() ? "" : ": ", detail.c_str());
        if (!pass) {
            ++failures;
        }
    };

    // closed-form projection at least as close as a dense circle sweep
    {
        bool ok = true;
        double worst = 0.0;
        const int grid_points = 20001;
        for (int n = 0; n < 500 && ok; ++n) {
            const std::complex<double> z{4.0 * (rng.uniform() - 0.5),
                                         4.0 * (rng.uniform() - 0.5)};
            const auto projected =
                dmasim::project_weight(z, dmasim::FeasibleSet::LorentzianPhase);
            const double closed = std::abs(z - projected.value);
            double grid_best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < grid_points; ++k) {
                const double phi =
                    2.0 * std::numbers::pi * static_cast<double>(k) / grid_points;
                const auto q = dmasim::lorentzian_phase_weight(phi).value;
                grid_best = std::min(grid_best, std::abs(z - q));
            }
            worst = std::max(worst, closed - grid_best);
            ok = closed <= grid_best + 1e-9;
        }
        report("projection optimality (500 points vs dense sweep)", ok,
               "max excess " + format_number(worst));
    }

    // invertible transforms ahead of the front end leave the rate unchanged
    {
        bool ok = true;
        double worst = 0.0;
        for (int n = 0; n < 200 && ok; ++n) {
            const arma::cx_mat A = random_matrix(3, 9);
            const arma::cx_mat H = random_matrix(9, 4);
            arma::cx_mat T = random_matrix(3, 3);
            if (arma::cond(T) > 1e6) {
                continue; // ill-conditioned transforms amplify roundoff, redraw
            }
            const double base = dmasim::uplink_sum_rate(A, H, 5.0);
            const double transformed = dmasim::uplink_sum_rate(T * A, H, 5.0);
            const double rel = std::abs(base - transformed) / std::max(base, 1e-12);
            worst = std::max(worst, rel);
            ok = rel < 1e-9;
        }
        report("rate left-invariance (200 random transforms)", ok,
               "max relative difference " + format_number(worst));
    }

    // no analog front end beats one chain per element
    {
        bool ok = true;
        for (int n = 0; n < 2000 && ok; ++n) {
            const arma::uword M = 1 + (rng.bits() % 4);
            const arma::uword N = M + (rng.bits() % 8);
            const arma::uword K = 1 + (rng.bits() % 5);
            const arma::cx_mat A = random_matrix(M, N);
            const arma::cx_mat H = random_matrix(N, K);
            const double snr = 20.0 * rng.uniform();
            ok = dmasim::uplink_sum_rate(A, H, snr) <=
                 dmasim::fully_digital_sum_capacity(H, snr) + 1e-9;
        }
        report("front-end rate bounded by digital capacity (2000 instances)", ok, "");
    }

    // alternating design keeps its objective non-increasing
    {
        bool ok = true;
        const dmasim::ArrayGeometry geo = dmasim::default_geometry(8, 4);
        for (int n = 0; n < 20 && ok; ++n) {
            const arma::cx_mat H = random_matrix(32, 8);
            const auto design = dmasim::optimize_dma(
                H, geo, dmasim::FeasibleSet::LorentzianPhase, {});
            for (std::size_t i = 1; i < design.objective_trace.size() && ok; ++i) {
                ok = design.objective_trace[i] <= design.objective_trace[i - 1] + 1e-10;
            }
        }
        report("alternating objective monotone (20 instances)", ok, "");
    }

    // unconstrained steering puts the peak on the target
    {
        bool ok = true;
        const dmasim::ArrayGeometry geo = dmasim::default_geometry(1, 32);
        const auto grid = dmasim::angle_grid();
        for (double target : {-45.0, 0.0, 30.0}) {
            const auto weights =
                dmasim::holographic_tuning(geo, target, dmasim::FeasibleSet::Unconstrained);
            const auto pattern = dmasim::array_factor(geo, weights, grid);
            ok = ok && std::abs(pattern.peak_angle_deg - target) <= 0.2;
        }
        report("unconstrained steering hits targets -45/0/30 deg", ok, "");
    }

    // block-sparse assembly gives an exactly diagonal noise covariance
    {
        const dmasim::ArrayGeometry geo = dmasim::default_geometry(4, 3);
        dmasim::WeightTable table(4, std::vector<dmasim::ElementWeight>(3));
        for (auto& row : table) {
            for (auto& w : row) {
                w = dmasim::lorentzian_phase_weight(2.0 * std::numbers::pi * rng.uniform());
            }
        }
        const auto combiner = dmasim::assemble_combiner(geo, table);
        const arma::cx_mat product = combiner.matrix * combiner.matrix.t();
        bool ok = true;
        for (arma::uword i = 0; i < product.n_rows && ok; ++i) {
            for (arma::uword j = 0; j < product.n_cols && ok; ++j) {
                if (i != j) {
                    ok = product(i, j) == std::complex<double>{0.0, 0.0};
                }
            }
        }
        report("noise covariance exactly diagonal for block-sparse front end", ok, "");
    }

    // worker count must not leak into results
    {
        dmasim::ExperimentSpec spec = dmasim::desk_preset();
        spec.scenario.num_trials = 10;
        spec.output_path.clear();
        const auto serial = dmasim::run_experiment(spec, 1);
        const auto parallel = dmasim::run_experiment(spec, 4);
        report("experiment output identical for 1 and 4 workers",
               serial.csv == parallel.csv, "");
    }

    std::printf("%s\n", failures == 0 ? "all checks passed" : "checks FAILED");
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"link-level simulator for waveguide-fed metasurface antenna arrays"};
    app.require_subcommand(1);

    RatesArgs rates_args;
    CLI::App* rates = app.add_subcommand("rates", "run a Monte Carlo sum-rate experiment");
    rates_args.config_opt =
        rates->add_option("--config", rates_args.config_path, "experiment description (JSON)");
    CLI::Option* preset_opt =
        rates->add_option("--preset", rates_args.preset, "built-in experiment")
            ->check(CLI::IsMember({"desk", "paper"}));
    rates_args.config_opt->excludes(preset_opt);
    rates_args.seed_opt = rates->add_option("--seed", rates_args.seed, "master RNG seed");
    rates_args.trials_opt =
        rates->add_option("--trials", rates_args.trials, "Monte Carlo trial count");
    rates_args.arch_opt = rates->add_option(
        "--arch", rates_args.arch_list,
        "comma-separated subset of dma-lorentzian,dma-binary,dma-unconstrained,"
        "hybrid-full,digital-N,digital-M");
    rates_args.out_opt = rates->add_option("--out", rates_args.out_path, "output CSV path");
    rates->add_option("--workers", rates_args.workers,
                      "worker threads (0 = hardware concurrency)");

    PatternArgs pattern_args;
    CLI::App* pattern =
        app.add_subcommand("pattern", "far-field cut of one steered microstrip");
    pattern->add_option("--target", pattern_args.target_deg, "steering angle in degrees")
        ->check(CLI::Range(-90.0, 90.0));
    pattern->add_option("--set", pattern_args.set_name, "element weight family")
        ->check(CLI::IsMember({"lorentzian", "binary", "unit-modulus", "unconstrained"}));
    pattern->add_option("--elements", pattern_args.elements, "elements on the microstrip")
        ->check(CLI::PositiveNumber);
    pattern->add_option("--carrier", pattern_args.carrier_hz, "carrier frequency in Hz")
        ->check(CLI::PositiveNumber);
    pattern->add_option("--out", pattern_args.out_path, "output CSV path");

    ElementArgs element_args;
    CLI::App* element =
        app.add_subcommand("element-response", "normalized element response curves");
    element->add_option("--resonance", element_args.resonances,
                        "resonance frequencies in Hz (repeatable)");
    element->add_option("--damping", element_args.damping, "damping factor in Hz");
    element->add_option("--strength", element_args.strength, "oscillator strength");
    element->add_option("--f-start", element_args.f_start, "sweep start in Hz");
    element->add_option("--f-stop", element_args.f_stop, "sweep stop in Hz");
    element->add_option("--points", element_args.points, "sweep point count");
    element->add_option("--out", element_args.out_path, "output CSV path");

    std::uint64_t validate_seed = 7;
    CLI::App* validate =
        app.add_subcommand("validate", "run the library's invariant self-checks");
    validate->add_option("--seed", validate_seed, "seed for the random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // --help is a success, anything else is a config error
    }

    try {
        if (rates->parsed()) {
            return run_rates(rates_args);
        }
        if (pattern->parsed()) {
            return run_pattern(pattern_args);
        }
        if (element->parsed()) {
            return run_element_response(element_args);
        }
        if (validate->parsed()) {
            return run_validate(validate_seed);
        }
    } catch (const dmasim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const dmasim::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const dmasim::SingularFrontEndError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}

// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance gate. Each numbered check prints one [PASS]/[FAIL]
// line; the process exit code is the number of failed checks. Checks are
// independent: a failure in one never hides results from the others.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dmasim/beampattern.hpp"
#include "dmasim/element.hpp"
#include "dmasim/errors.hpp"
#include "dmasim/experiment.hpp"
#include "dmasim/optimizer.hpp"
#include "dmasim/rate.hpp"
#include "dmasim/rng.hpp"
#include "oracles.hpp"

using namespace dmasim;
using cx = std::complex<double>;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << name;
    if (!detail.empty()) {
        std::cout << " (" << detail << ")";
    }
    std::cout << "\n";
    if (!pass) {
        ++failures;
    }
}

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const RateResult& find_row(const ExperimentResult& result, const std::string& arch,
                           double snr_db) {
    for (const auto& row : result.table) {
        if (row.architecture == arch && row.snr_db == snr_db) {
            return row;
        }
    }
    throw std::runtime_error("missing result row: " + arch);
}

// Mean paired gap minus its 95% CI halfwidth; positive means "a beats b
// significantly" under common random numbers.
double significant_margin(const RateResult& a, const RateResult& b) {
    const std::size_t n = a.per_trial_rates.size();
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i) {
        gaps[i] = a.per_trial_rates[i] - b.per_trial_rates[i];
    }
    const auto summary = summarize_rates("gap", 0.0, gaps);
    return summary.mean_rate - summary.ci95_halfwidth;
}

// Checks the expected mean-rate ordering at one SNR point. Appends a note to
// `detail` for the first violated comparison and returns false on violation.
bool check_ordering(const ExperimentResult& result, double snr, bool with_significance,
                    std::string& detail) {
    const struct {
        const char* better;
        const char* worse;
    } pairs[] = {{"digital-N", "dma-lorentzian"},
                 {"dma-lorentzian", "hybrid-full"},
                 {"dma-lorentzian", "digital-M"}};
    for (const auto& pair : pairs) {
        const auto& a = find_row(result, pair.better, snr);
        const auto& b = find_row(result, pair.worse, snr);
        const bool ordered = a.mean_rate > b.mean_rate;
        const double margin = significant_margin(a, b);
        const bool ok = with_significance ? (ordered && margin > 0.0) : ordered;
        if (!ok) {
            detail += std::string(pair.better) + " vs " + pair.worse + " at " + fmt(snr) +
                      " dB: means " + fmt(a.mean_rate) + " vs " + fmt(b.mean_rate) +
                      "; paired margin " + fmt(margin) + " bps/Hz. ";
            return false;
        }
    }
    return true;
}

void criterion_1_desk_ordering() {
    const auto start = std::chrono::steady_clock::now();
    auto spec = desk_preset();
    spec.output_path.clear();
    const auto result = run_experiment(spec, 4);
    const double elapsed = seconds_since(start);

    std::string detail;
    bool pass = true;
    for (double snr : spec.scenario.snr_grid_db) {
        if (!check_ordering(result, snr, true, detail)) {
            pass = false;
            break;
        }
    }
    // Means must also grow with SNR for every architecture.
    for (Architecture arch : spec.architectures) {
        double previous = -1.0;
        for (double snr : spec.scenario.snr_grid_db) {
            const double mean = find_row(result, to_string(arch), snr).mean_rate;
            if (mean <= previous) {
                pass = false;
                detail += to_string(arch) + " not increasing in SNR. ";
            }
            previous = mean;
        }
    }
    if (elapsed > 300.0) {
        pass = false;
        detail += "runtime " + fmt(elapsed) + " s exceeds 300 s. ";
    }
    report(1, "desk-scale mean-rate ordering with significant paired gaps", pass,
           detail.empty() ? fmt(elapsed) + " s" : detail);
}

void criterion_2_full_scale_smoke() {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
        auto spec = paper_preset();
        spec.output_path.clear();
        const auto result = run_experiment(spec, 4);
        for (double snr : {0.0, 10.0}) {
            if (!check_ordering(result, snr, false, detail)) {
                pass = false;
                break;
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail += std::string("numerical failure: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (elapsed > 1800.0) {
        pass = false;
        detail += "runtime " + fmt(elapsed) + " s exceeds 1800 s. ";
    }
    report(2, "full-scale run completes and keeps the ordering", pass,
           detail.empty() ? fmt(elapsed) + " s" : detail);
}

void criterion_3_compression_bound() {
    RngStream rng(derive_stream_seed(1001, 0, StreamPurpose::Fading));
    const int instances = 10000;
    int violations = 0;
    int evaluated = 0;
    double worst = 0.0;
    while (evaluated < instances) {
        const arma::uword m = 1 + rng.bits() % 4;
        const arma::uword n = m + rng.bits() % 9;
        const arma::uword k = 1 + rng.bits() % 5;
        const auto A = testutil::random_matrix(rng, m, n);
        const auto H = testutil::random_matrix(rng, n, k);
        const double snr = 20.0 * rng.uniform();
        double compressed;
        try {
            compressed = uplink_sum_rate(A, H, snr);
        } catch (const SingularFrontEndError&) {
            continue; // the guard refused the draw; it carries no rate to compare
        }
        ++evaluated;
        const double excess = compressed - fully_digital_sum_capacity(H, snr);
        worst = std::max(worst, excess);
        if (excess > 1e-9) {
            ++violations;
        }
    }
    report(3, "analog compression never beats full digital capacity", violations == 0,
           std::to_string(evaluated) + " instances, worst excess " + fmt(worst));
}

void criterion_4_left_invariance() {
    RngStream rng(derive_stream_seed(1002, 0, StreamPurpose::Fading));
    const auto A = testutil::random_matrix(rng, 3, 9);
    const auto H = testutil::random_matrix(rng, 9, 4);
    const double base = uplink_sum_rate(A, H, 5.0);
    int checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
        const auto T = testutil::random_matrix(rng, 3, 3);
        if (arma::cond(T) > 1e6) {
            continue;
        }
        ++checked;
        const double transformed = uplink_sum_rate(arma::cx_mat(T * A), H, 5.0);
        worst = std::max(worst, std::abs(transformed - base) / base);
    }
    report(4, "rate is invariant under invertible chain transforms", worst < 1e-9,
           "worst relative difference " + fmt(worst));
}

void criterion_5_projection_optimality() {
    RngStream rng(derive_stream_seed(1003, 0, StreamPurpose::Fading));
    const int grid_points = 100000;
    bool pass = true;
    double worst_gap = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const cx z{4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
        const double closed = std::abs(z - project_weight(z, FeasibleSet::LorentzianPhase).value);
        const double swept = testutil::circle_sweep_distance(z, grid_points);
        if (closed > swept + 1e-12 || swept - closed > 1e-8) {
            pass = false;
        }
        worst_gap = std::max(worst_gap, swept - closed);
    }
    report(5, "closed-form circle projection beats a dense sweep", pass,
           "largest sweep excess " + fmt(worst_gap));
}

void criterion_6_optimizer_quality() {
    // Part one: the alternating objective never increases on desk-scale
    // instances.
    const auto geo = default_geometry(8, 4);
    int trace_violations = 0;
    for (int t = 0; t < 100; ++t) {
        RngStream rng(derive_stream_seed(1004, static_cast<std::uint64_t>(t),
                                         StreamPurpose::Fading));
        const auto H = testutil::random_matrix(rng, 32, 8);
        const auto design = optimize_dma(H, geo, FeasibleSet::LorentzianPhase);
        for (std::size_t i = 1; i < design.objective_trace.size(); ++i) {
            if (design.objective_trace[i] > design.objective_trace[i - 1] + 1e-10) {
                ++trace_violations;
            }
        }
    }

    // Part two: on tiny binary instances the achieved rate lands within 5%
    // of the exhaustive optimum on at least 80 of 100 draws. The comparison
    // runs at the same SNR the refinement pass climbs.
    const auto small_geo = default_geometry(2, 2);
    const double snr = 10.0;
    OptimizerOptions opts;
    opts.refine_grid = 2;
    opts.refine_snr = snr;
    int good = 0;
    for (int t = 0; t < 100; ++t) {
        RngStream rng(derive_stream_seed(1005, static_cast<std::uint64_t>(t),
                                         StreamPurpose::Fading));
        const auto H = testutil::random_matrix(rng, 4, 2);
        const auto design = optimize_dma(H, small_geo, FeasibleSet::BinaryAmplitude, opts);
        const double achieved = uplink_sum_rate(design.combiner, H, snr);
        if (achieved >= 0.95 * testutil::exhaustive_binary_optimum(H, small_geo, snr)) {
            ++good;
        }
    }

    report(6, "alternating optimizer is monotone and near-exhaustive on binary instances",
           trace_violations == 0 && good >= 80,
           std::to_string(trace_violations) + " trace increases; " + std::to_string(good) +
               "/100 binary draws within 5% of optimum");
}

void criterion_7_resonance_curves() {
    // Common grid for all settings: 2 to 5.6 GHz in 2 MHz steps. The top end
    // leaves room for the upper half-power crossing of the heaviest damping
    // setting below, which sits near 4.6 GHz.
    std::vector<double> grid;
    for (double f = 2.0e9; f <= 5.6e9 + 1.0; f += 2e6) {
        grid.push_back(f);
    }
    const double step = grid[1] - grid[0];

    bool peaks_ok = true;
    std::string detail;
    for (double f0 : {3.2e9, 3.5e9, 3.8e9}) {
        LorentzianTuning tuning;
        tuning.resonance_frequency = f0;
        const auto curve = normalized_response_curve(tuning, grid);
        const std::size_t arg = static_cast<std::size_t>(
            std::max_element(curve.begin(), curve.end()) - curve.begin());
        // Analytic argmax of |a|: f* = sqrt(2 f0^4 / (2 f0^2 - chi^2)),
        // from d/du of u^2 / ((f0^2 - u)^2 + chi^2 u) at u = f^2.
        const double chi = tuning.damping_factor;
        const double analytic =
            std::sqrt(2.0 * std::pow(f0, 4) / (2.0 * f0 * f0 - chi * chi));
        if (std::abs(grid[arg] - analytic) > step + 1e-3) {
            peaks_ok = false;
            detail += "peak for f0=" + fmt(f0) + " off by " +
                      fmt(std::abs(grid[arg] - analytic)) + " Hz. ";
        }
    }

    std::vector<double> widths;
    for (double chi : {2e8, 5e8, 1.2e9}) {
        LorentzianTuning tuning;
        tuning.damping_factor = chi;
        widths.push_back(testutil::half_power_width(grid, normalized_response_curve(tuning, grid)));
    }
    const bool widths_ok = widths[0] > 0.0 && widths[0] < widths[1] && widths[1] < widths[2];
    if (!widths_ok) {
        detail += "half-power widths " + fmt(widths[0]) + ", " + fmt(widths[1]) + ", " +
                  fmt(widths[2]) + " Hz not strictly increasing. ";
    }
    report(7, "resonance curves peak at the analytic argmax and widen with damping",
           peaks_ok && widths_ok, detail);
}

void criterion_8_beam_steering() {
    const auto grid = angle_grid();
    std::string detail;
    bool pass = true;

    const double targets[] = {-45.0, 0.0, 30.0};
    const auto worst_error = [&](arma::uword elements, FeasibleSet set) {
        const auto geo = default_geometry(1, elements);
        double worst = 0.0;
        for (double target : targets) {
            const auto weights = holographic_tuning(geo, target, set);
            const auto pattern = array_factor(geo, weights, grid);
            worst = std::max(worst, std::abs(pattern.peak_angle_deg - target));
        }
        return worst;
    };

    const double unconstrained = worst_error(32, FeasibleSet::Unconstrained);
    if (unconstrained > 0.2) {
        pass = false;
        detail += "unconstrained peak error " + fmt(unconstrained) + " deg. ";
    }
    const double constrained = worst_error(32, FeasibleSet::LorentzianPhase);
    if (constrained > 3.0) {
        pass = false;
        detail += "constrained peak error " + fmt(constrained) + " deg at L=32. ";
    }
    double previous = worst_error(8, FeasibleSet::LorentzianPhase);
    for (arma::uword elements : {16, 32, 64}) {
        const double error = worst_error(elements, FeasibleSet::LorentzianPhase);
        if (error > previous + 1e-9) {
            pass = false;
            detail += "error grew from L=" + std::to_string(elements / 2) + " to L=" +
                      std::to_string(elements) + ". ";
        }
        previous = error;
    }
    report(8, "holographic steering hits its targets and improves with aperture", pass,
           detail.empty()
               ? "worst errors: unconstrained " + fmt(unconstrained) + " deg, constrained " +
                     fmt(constrained) + " deg"
               : detail);
}

void criterion_9_determinism() {
    const std::string path_a = "acceptance_rates_w1.csv";
    const std::string path_b = "acceptance_rates_w4.csv";
    auto spec = desk_preset();
    spec.output_path = path_a;
    run_experiment(spec, 1);
    spec.output_path = path_b;
    run_experiment(spec, 4);

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    const std::string a = slurp(path_a);
    const std::string b = slurp(path_b);
    const bool pass = !a.empty() && a == b;
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
    report(9, "worker count does not change the output bytes", pass,
           pass ? std::to_string(a.size()) + " bytes identical" : "outputs differ");
}

void guard(int number, void (*check)()) {
    try {
        check();
    } catch (const std::exception& e) {
        report(number, "aborted by unexpected exception", false, e.what());
    }
}

} // namespace

int main() {
    std::cout << "acceptance checks\n=================\n";
    guard(1, criterion_1_desk_ordering);
    guard(2, criterion_2_full_scale_smoke);
    guard(3, criterion_3_compression_bound);
    guard(4, criterion_4_left_invariance);
    guard(5, criterion_5_projection_optimality);
    guard(6, criterion_6_optimizer_quality);
    guard(7, criterion_7_resonance_curves);
    guard(8, criterion_8_beam_steering);
    guard(9, criterion_9_determinism);
    std::cout << "=================\n"
              << (9 - failures) << " of 9 criteria passed\n";
    return failures;
}

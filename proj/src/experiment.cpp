// SPDX-License-Identifier: Apache-2.0

#include "dmasim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>

#include <json.hpp>

#include "dmasim/errors.hpp"

namespace dmasim {

namespace {

using nlohmann::json;

double db_to_linear(double db) {
    return std::pow(10.0, db / 10.0);
}

FeasibleSet set_for(Architecture arch) {
    switch (arch) {
        case Architecture::DmaLorentzian: return FeasibleSet::LorentzianPhase;
        case Architecture::DmaBinary: return FeasibleSet::BinaryAmplitude;
        case Architecture::DmaUnconstrained: return FeasibleSet::Unconstrained;
        default:
            throw std::logic_error("architecture has no element feasible set");
    }
}

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

void expect_object(const json& node, const std::string& where) {
    if (!node.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
}

void reject_unknown(const json& node, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = node.begin(); it != node.end(); ++it) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) {
                return it.key() == k;
            }) == known.end()) {
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

template <typename T>
void assign_if_present(const json& node, const char* key, T& target, const std::string& where) {
    if (!node.contains(key)) {
        return;
    }
    const json& value = node.at(key);
    // get<unsigned>() would wrap negative integers around instead of failing
    if (std::is_unsigned_v<T> && value.is_number_integer() && !value.is_number_unsigned()) {
        throw ConfigError("key '" + std::string(key) + "' in " + where + " must be nonnegative");
    }
    try {
        target = value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + std::string(key) + "' in " + where + " has the wrong type");
    }
}

// Rates of every architecture at every SNR point for a single trial, with
// the channel realization shared across all of them.
arma::mat evaluate_trial(const ExperimentSpec& spec, std::uint64_t trial,
                         std::string& diagnostic) {
    const ChannelRealization channel = generate_channel(spec.scenario, spec.geometry, trial);
    const arma::cx_mat& H = channel.matrix;
    const auto& snr_grid = spec.scenario.snr_grid_db;
    const arma::uword num_snr = snr_grid.size();
    const arma::uword M = spec.geometry.num_microstrips;

    arma::vec digital_full(num_snr);
    for (arma::uword s = 0; s < num_snr; ++s) {
        digital_full(s) = fully_digital_sum_capacity(H, db_to_linear(snr_grid[s]));
    }

    std::ostringstream diag;
    arma::mat rates(spec.architectures.size(), num_snr);
    for (std::size_t a = 0; a < spec.architectures.size(); ++a) {
        const Architecture arch = spec.architectures[a];
        switch (arch) {
            case Architecture::DigitalN:
                for (arma::uword s = 0; s < num_snr; ++s) {
                    rates(a, s) = digital_full(s);
                }
                break;
            case Architecture::DigitalM:
                for (arma::uword s = 0; s < num_snr; ++s) {
                    rates(a, s) = digital_subarray_capacity(H, M, db_to_linear(snr_grid[s]));
                }
                break;
            case Architecture::HybridFull: {
                const arma::cx_mat A = optimize_phase_shifter_hybrid(H, M, spec.optimizer);
                for (arma::uword s = 0; s < num_snr; ++s) {
                    rates(a, s) = uplink_sum_rate(A, H, db_to_linear(snr_grid[s]));
                }
                break;
            }
            case Architecture::DmaLorentzian:
            case Architecture::DmaBinary:
            case Architecture::DmaUnconstrained: {
                const DmaDesign design =
                    optimize_dma(H, spec.geometry, set_for(arch), spec.optimizer);
                if (!design.revived_microstrips.empty()) {
                    if (diag.tellp() > 0) {
                        diag << "; ";
                    }
                    diag << "trial " << trial << ' ' << to_string(arch) << ": revived "
                         << design.revived_microstrips.size() << " silent microstrip row(s)";
                }
                for (arma::uword s = 0; s < num_snr; ++s) {
                    rates(a, s) = uplink_sum_rate(design.combiner, H, db_to_linear(snr_grid[s]));
                }
                break;
            }
        }
        // analog processing can never beat one chain per element
        for (arma::uword s = 0; s < num_snr; ++s) {
            if (rates(a, s) > digital_full(s) + 1e-9) {
                throw std::logic_error("rate of " + to_string(arch) +
                                       " exceeds the fully digital capacity");
            }
        }
    }
    diagnostic = diag.str();
    return rates;
}

} // namespace

std::string to_string(Architecture arch) {
    switch (arch) {
        case Architecture::DmaLorentzian: return "dma-lorentzian";
        case Architecture::DmaBinary: return "dma-binary";
        case Architecture::DmaUnconstrained: return "dma-unconstrained";
        case Architecture::HybridFull: return "hybrid-full";
        case Architecture::DigitalN: return "digital-N";
        case Architecture::DigitalM: return "digital-M";
    }
    throw std::invalid_argument("unhandled architecture");
}

Architecture parse_architecture(const std::string& label) {
    if (label == "dma-lorentzian") return Architecture::DmaLorentzian;
    if (label == "dma-binary") return Architecture::DmaBinary;
    if (label == "dma-unconstrained") return Architecture::DmaUnconstrained;
    if (label == "hybrid-full") return Architecture::HybridFull;
    if (label == "digital-N") return Architecture::DigitalN;
    if (label == "digital-M") return Architecture::DigitalM;
    throw ConfigError("unknown architecture: " + label);
}

ExperimentSpec desk_preset() {
    ExperimentSpec spec;
    spec.scenario.num_users = 8;
    spec.scenario.num_trials = 200;
    spec.scenario.rng_seed = 42;
    spec.scenario.snr_grid_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0};
    spec.geometry = default_geometry(8, 4);
    spec.output_path = "rates.csv";
    return spec;
}

ExperimentSpec paper_preset() {
    ExperimentSpec spec = desk_preset();
    spec.scenario.num_users = 64;
    spec.scenario.num_trials = 20;
    spec.scenario.snr_grid_db = {0.0, 10.0};
    spec.geometry = default_geometry(16, 10);
    spec.output_path = "rates_paper.csv";
    return spec;
}

void validate_spec(const ExperimentSpec& spec) {
    try {
        validate_scenario(spec.scenario);
        validate_geometry(spec.geometry);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (spec.architectures.empty()) {
        throw ConfigError("at least one architecture is required");
    }
    for (std::size_t i = 0; i < spec.architectures.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.architectures.size(); ++j) {
            if (spec.architectures[i] == spec.architectures[j]) {
                throw ConfigError("architecture listed twice: " +
                                  to_string(spec.architectures[i]));
            }
        }
    }
    if (spec.optimizer.max_iters == 0) {
        throw ConfigError("optimizer.max_iters must be positive");
    }
    if (!(spec.optimizer.rel_tol > 0.0)) {
        throw ConfigError("optimizer.rel_tol must be positive");
    }
    if (!(spec.optimizer.refine_snr >= 0.0)) {
        throw ConfigError("optimizer.refine_snr must be nonnegative");
    }
}

ExperimentSpec parse_spec_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    expect_object(root, "config");
    reject_unknown(root, {"scenario", "geometry", "architectures", "optimizer", "output_path"},
                   "config");

    ExperimentSpec spec = desk_preset();
    if (root.contains("scenario")) {
        const json& s = root.at("scenario");
        expect_object(s, "scenario");
        reject_unknown(s,
                       {"num_users", "cell_radius", "min_distance", "pathloss_exponent",
                        "reference_distance", "carrier_frequency", "snr_grid_db", "num_trials",
                        "rng_seed"},
                       "scenario");
        assign_if_present(s, "num_users", spec.scenario.num_users, "scenario");
        assign_if_present(s, "cell_radius", spec.scenario.cell_radius, "scenario");
        assign_if_present(s, "min_distance", spec.scenario.min_distance, "scenario");
        assign_if_present(s, "pathloss_exponent", spec.scenario.pathloss_exponent, "scenario");
        assign_if_present(s, "reference_distance", spec.scenario.reference_distance, "scenario");
        assign_if_present(s, "carrier_frequency", spec.scenario.carrier_frequency, "scenario");
        assign_if_present(s, "snr_grid_db", spec.scenario.snr_grid_db, "scenario");
        assign_if_present(s, "num_trials", spec.scenario.num_trials, "scenario");
        assign_if_present(s, "rng_seed", spec.scenario.rng_seed, "scenario");
    }
    if (root.contains("geometry")) {
        const json& g = root.at("geometry");
        expect_object(g, "geometry");
        reject_unknown(g,
                       {"num_microstrips", "elements_per_microstrip", "element_spacing",
                        "guide_wavenumber", "waveguide_attenuation", "carrier_frequency"},
                       "geometry");
        assign_if_present(g, "num_microstrips", spec.geometry.num_microstrips, "geometry");
        assign_if_present(g, "elements_per_microstrip", spec.geometry.elements_per_microstrip,
                          "geometry");
        assign_if_present(g, "element_spacing", spec.geometry.element_spacing, "geometry");
        assign_if_present(g, "guide_wavenumber", spec.geometry.guide_wavenumber, "geometry");
        assign_if_present(g, "waveguide_attenuation", spec.geometry.waveguide_attenuation,
                          "geometry");
        assign_if_present(g, "carrier_frequency", spec.geometry.carrier_frequency, "geometry");
    }
    if (root.contains("architectures")) {
        std::vector<std::string> labels;
        try {
            labels = root.at("architectures").get<std::vector<std::string>>();
        } catch (const json::exception&) {
            throw ConfigError("'architectures' must be an array of strings");
        }
        spec.architectures.clear();
        for (const auto& label : labels) {
            spec.architectures.push_back(parse_architecture(label));
        }
    }
    if (root.contains("optimizer")) {
        const json& o = root.at("optimizer");
        expect_object(o, "optimizer");
        reject_unknown(o, {"max_iters", "rel_tol", "refine_grid", "refine_snr"}, "optimizer");
        assign_if_present(o, "max_iters", spec.optimizer.max_iters, "optimizer");
        assign_if_present(o, "rel_tol", spec.optimizer.rel_tol, "optimizer");
        assign_if_present(o, "refine_grid", spec.optimizer.refine_grid, "optimizer");
        assign_if_present(o, "refine_snr", spec.optimizer.refine_snr, "optimizer");
    }
    assign_if_present(root, "output_path", spec.output_path, "config");
    validate_spec(spec);
    return spec;
}

ExperimentSpec load_spec(const std::string& json_path) {
    std::ifstream in(json_path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read config file: " + json_path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_spec_json(buffer.str());
}

std::string rates_csv(const std::vector<RateResult>& table, std::uint64_t seed) {
    std::string csv = "architecture,snr_db,mean_rate_bpshz,ci95,trials,seed\n";
    for (const RateResult& row : table) {
        csv += row.architecture;
        csv += ',';
        csv += format_number(row.snr_db);
        csv += ',';
        csv += format_number(row.mean_rate);
        csv += ',';
        csv += format_number(row.ci95_halfwidth);
        csv += ',';
        csv += std::to_string(row.per_trial_rates.size());
        csv += ',';
        csv += std::to_string(seed);
        csv += '\n';
    }
    return csv;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned workers) {
    validate_spec(spec);

    // claim the output file up front so a bad path costs no compute
    std::ofstream out;
    if (!spec.output_path.empty()) {
        out.open(spec.output_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open output path: " + spec.output_path);
        }
    }

    const std::uint64_t num_trials = spec.scenario.num_trials;
    std::vector<arma::mat> trial_rates(num_trials);
    std::vector<std::string> trial_diagnostics(num_trials);

    unsigned pool_size = workers != 0 ? workers : std::thread::hardware_concurrency();
    if (pool_size == 0) {
        pool_size = 1;
    }
    pool_size = static_cast<unsigned>(
        std::min<std::uint64_t>(pool_size, num_trials));

    std::atomic<std::uint64_t> next_trial{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker_body = [&]() {
        for (;;) {
            const std::uint64_t trial = next_trial.fetch_add(1);
            if (trial >= num_trials) {
                return;
            }
            try {
                trial_rates[trial] = evaluate_trial(spec, trial, trial_diagnostics[trial]);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                next_trial.store(num_trials); // stop the other workers
                return;
            }
        }
    };

    if (pool_size == 1) {
        worker_body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(pool_size);
        for (unsigned w = 0; w < pool_size; ++w) {
            pool.emplace_back(worker_body);
        }
        for (auto& thread : pool) {
            thread.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    ExperimentResult result;
    for (std::uint64_t trial = 0; trial < num_trials; ++trial) {
        if (!trial_diagnostics[trial].empty()) {
            result.diagnostics.push_back(std::move(trial_diagnostics[trial]));
        }
    }
    const auto& snr_grid = spec.scenario.snr_grid_db;
    result.table.reserve(spec.architectures.size() * snr_grid.size());
    for (std::size_t a = 0; a < spec.architectures.size(); ++a) {
        for (std::size_t s = 0; s < snr_grid.size(); ++s) {
            std::vector<double> samples(num_trials);
            for (std::uint64_t trial = 0; trial < num_trials; ++trial) {
                samples[trial] = trial_rates[trial](a, s);
            }
            result.table.push_back(summarize_rates(to_string(spec.architectures[a]),
                                                   snr_grid[s], std::move(samples)));
        }
    }
    result.csv = rates_csv(result.table, spec.scenario.rng_seed);

    if (out.is_open()) {
        out << result.csv;
        out.flush();
        if (!out) {
            throw IoError("failed to write output file: " + spec.output_path);
        }
    }
    return result;
}

} // namespace dmasim

// SPDX-License-Identifier: Apache-2.0

#include "dmasim/optimizer.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmasim/errors.hpp"
#include "dmasim/rate.hpp"

namespace dmasim {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

// Strongest feasible weight, used for initialization and row revival.
// q = j is the maximum-magnitude point of the Lorentzian circle and also
// unit modulus; BinaryAmplitude has only one nonzero state.
std::complex<double> radiating_state(FeasibleSet set) {
    return set == FeasibleSet::BinaryAmplitude ? std::complex<double>{1.0, 0.0} : kImag;
}

void write_block_entries(arma::cx_mat& A, const arma::cx_mat& Q, const arma::cx_vec& gains) {
    const arma::uword M = Q.n_rows;
    const arma::uword L = Q.n_cols;
    for (arma::uword m = 0; m < M; ++m) {
        for (arma::uword l = 0; l < L; ++l) {
            A(m, m * L + l) = Q(m, l) * gains(l);
        }
    }
}

std::vector<std::complex<double>> candidate_weights(FeasibleSet set, arma::uword grid) {
    std::vector<std::complex<double>> candidates;
    if (set == FeasibleSet::BinaryAmplitude) {
        candidates = {{0.0, 0.0}, {1.0, 0.0}};
        return candidates;
    }
    candidates.reserve(grid);
    for (arma::uword k = 0; k < grid; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
        if (set == FeasibleSet::LorentzianPhase) {
            candidates.push_back(lorentzian_phase_weight(phi).value);
        } else {
            candidates.push_back(std::polar(1.0, phi));
        }
    }
    return candidates;
}

// Greedy coordinate ascent on the actual sum rate over a finite candidate
// set per element. Accepts strict improvements only, so the achieved rate
// at refine_snr is nondecreasing and the sweep terminates.
void refine_by_rate(arma::cx_mat& Q, arma::cx_mat& A, const arma::cx_mat& H,
                    const arma::cx_vec& gains, FeasibleSet set,
                    const OptimizerOptions& opts) {
    const auto candidates = candidate_weights(set, opts.refine_grid);
    if (candidates.empty()) {
        return;
    }
    const arma::uword M = Q.n_rows;
    const arma::uword L = Q.n_cols;
    double best_rate = uplink_sum_rate(A, H, opts.refine_snr);
    constexpr int kMaxSweeps = 8;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool improved = false;
        for (arma::uword m = 0; m < M; ++m) {
            for (arma::uword l = 0; l < L; ++l) {
                const arma::uword col = m * L + l;
                std::complex<double> chosen = Q(m, l);
                double chosen_rate = best_rate;
                for (const auto& candidate : candidates) {
                    if (candidate == Q(m, l)) {
                        continue;
                    }
                    A(m, col) = candidate * gains(l);
                    if (arma::norm(A.row(m)) == 0.0) {
                        continue; // candidate would silence the whole microstrip
                    }
                    double rate;
                    try {
                        rate = uplink_sum_rate(A, H, opts.refine_snr);
                    } catch (const SingularFrontEndError&) {
                        continue;
                    }
                    if (rate > chosen_rate) {
                        chosen_rate = rate;
                        chosen = candidate;
                    }
                }
                A(m, col) = chosen * gains(l);
                if (chosen != Q(m, l)) {
                    Q(m, l) = chosen;
                    best_rate = chosen_rate;
                    improved = true;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
}

} // namespace

arma::cx_mat unconstrained_combiner(const arma::cx_mat& H, arma::uword num_chains) {
    if (H.n_elem == 0) {
        throw std::invalid_argument("empty channel matrix");
    }
    if (num_chains == 0 || num_chains > H.n_rows) {
        throw std::invalid_argument("chain count out of range");
    }
    arma::cx_mat U;
    arma::vec s;
    arma::cx_mat V;
    if (!arma::svd_econ(U, s, V, H, "left")) {
        throw std::runtime_error("singular value decomposition failed");
    }
    if (U.n_cols < num_chains) {
        // more chains than channel rank: extend with a full orthonormal
        // basis; the extra rows carry noise only and do not change the rate
        if (!arma::svd(U, s, V, H)) {
            throw std::runtime_error("singular value decomposition failed");
        }
    }
    return U.cols(0, num_chains - 1).t();
}

DmaDesign optimize_dma(const arma::cx_mat& H, const ArrayGeometry& geo,
                       FeasibleSet set, const OptimizerOptions& opts) {
    validate_geometry(geo);
    const arma::uword M = geo.num_microstrips;
    const arma::uword L = geo.elements_per_microstrip;
    const arma::uword N = M * L;
    if (H.n_rows != N) {
        throw std::invalid_argument("channel has " + std::to_string(H.n_rows) +
                                    " rows, geometry implies " + std::to_string(N));
    }
    if (opts.max_iters == 0) {
        throw std::invalid_argument("max_iters must be positive");
    }
    if (!(opts.rel_tol > 0.0)) {
        throw std::invalid_argument("rel_tol must be positive");
    }

    const arma::cx_mat B = unconstrained_combiner(H, M);
    arma::cx_vec gains(L);
    for (arma::uword l = 0; l < L; ++l) {
        gains(l) = propagation_gain(geo, l);
    }

    arma::cx_mat Q(M, L);
    Q.fill(radiating_state(set));
    arma::cx_mat A(M, N, arma::fill::zeros);
    write_block_entries(A, Q, gains);

    DmaDesign design;
    design.objective_trace.reserve(2 * opts.max_iters);
    arma::cx_mat T(M, M);
    double previous = std::numeric_limits<double>::infinity();

    for (arma::uword iter = 0; iter < opts.max_iters; ++iter) {
        // half step 1: least-squares T for fixed A. A A^H is diagonal with
        // positive entries (rows share no columns, no row is silent), so
        // the normal equations reduce to a per-column scaling.
        T = B * A.t();
        for (arma::uword m = 0; m < M; ++m) {
            double row_power = 0.0;
            for (arma::uword l = 0; l < L; ++l) {
                row_power += std::norm(A(m, m * L + l));
            }
            T.col(m) /= row_power;
        }
        design.objective_trace.push_back(arma::norm(B - T * A, "fro"));

        // half step 2: each column of A has one nonzero q g_l, so the
        // Frobenius objective separates per element. Minimize, project.
        const arma::cx_mat correlation = T.t() * B;
        bool revived = false;
        for (arma::uword m = 0; m < M; ++m) {
            const double t_norm = arma::norm(T.col(m));
            const double t_power = t_norm * t_norm;
            if (!(t_power > 0.0)) {
                continue; // transform ignores this strip; keep its weights
            }
            arma::uword strongest_l = 0;
            double strongest_mag = -1.0;
            bool all_off = true;
            for (arma::uword l = 0; l < L; ++l) {
                const std::complex<double> unconstrained =
                    correlation(m, m * L + l) / (t_power * gains(l));
                if (std::abs(unconstrained) > strongest_mag) {
                    strongest_mag = std::abs(unconstrained);
                    strongest_l = l;
                }
                Q(m, l) = project_weight(unconstrained, set).value;
                if (std::abs(Q(m, l)) != 0.0) {
                    all_off = false;
                }
            }
            if (all_off) {
                // a silent strip would make A rank deficient; turn the
                // element with the largest unconstrained weight back on
                Q(m, strongest_l) = radiating_state(set);
                design.revived_microstrips.push_back(m);
                revived = true;
            }
        }
        write_block_entries(A, Q, gains);
        const double objective = arma::norm(B - T * A, "fro");
        design.objective_trace.push_back(objective);
        design.iterations = iter + 1;

        if (objective == 0.0) {
            design.converged = true;
            break;
        }
        if (std::isfinite(previous) && !revived) {
            const double relative_decrease = (previous - objective) / previous;
            if (relative_decrease >= 0.0 && relative_decrease < opts.rel_tol) {
                design.converged = true;
                break;
            }
        }
        previous = objective;
    }

    if (opts.refine_grid > 0 && set != FeasibleSet::Unconstrained) {
        refine_by_rate(Q, A, H, gains, set, opts);
    }

    WeightTable table(M, std::vector<ElementWeight>(L));
    for (arma::uword m = 0; m < M; ++m) {
        for (arma::uword l = 0; l < L; ++l) {
            table[m][l] = project_weight(Q(m, l), set);
        }
    }
    design.weights = std::move(table);
    design.combiner = assemble_combiner(geo, design.weights);
    return design;
}

arma::cx_mat optimize_phase_shifter_hybrid(const arma::cx_mat& H, arma::uword num_chains,
                                           const OptimizerOptions& opts) {
    const arma::cx_mat B = unconstrained_combiner(H, num_chains);
    arma::cx_mat A(arma::size(B));
    for (arma::uword i = 0; i < B.n_rows; ++i) {
        for (arma::uword j = 0; j < B.n_cols; ++j) {
            // std::arg(0) = 0, so zero entries take phase 0
            A(i, j) = std::polar(1.0, std::arg(B(i, j)));
        }
    }
    if (opts.refine_grid > 0) {
        double best_rate = uplink_sum_rate(A, H, opts.refine_snr);
        constexpr int kMaxSweeps = 8;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool improved = false;
            for (arma::uword i = 0; i < A.n_rows; ++i) {
                for (arma::uword j = 0; j < A.n_cols; ++j) {
                    std::complex<double> chosen = A(i, j);
                    double chosen_rate = best_rate;
                    for (arma::uword k = 0; k < opts.refine_grid; ++k) {
                        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                                           static_cast<double>(opts.refine_grid);
                        const std::complex<double> candidate = std::polar(1.0, phi);
                        if (candidate == A(i, j)) {
                            continue;
                        }
                        A(i, j) = candidate;
                        double rate;
                        try {
                            rate = uplink_sum_rate(A, H, opts.refine_snr);
                        } catch (const SingularFrontEndError&) {
                            continue;
                        }
                        if (rate > chosen_rate) {
                            chosen_rate = rate;
                            chosen = candidate;
                        }
                    }
                    A(i, j) = chosen;
                    if (chosen_rate > best_rate) {
                        best_rate = chosen_rate;
                        improved = true;
                    }
                }
            }
            if (!improved) {
                break;
            }
        }
    }
    return A;
}

} // namespace dmasim

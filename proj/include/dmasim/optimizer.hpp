// SPDX-License-Identifier: Apache-2.0
//
// Front-end design: configures element weights to maximize uplink sum rate.
//
// Because the rate is left-invariant, the rank-M row space of the front end
// is all that matters, and the best possible row space is spanned by the
// top-M left singular vectors of H. The structured design problem is posed
// as Frobenius approximation of that target modulo an invertible transform,
//
//   min_{T invertible, A structured} ||B - T A||_F,
//
// solved by alternating two closed-form half steps: a least-squares update
// of T, and an independent per-element update of each weight followed by
// projection onto the feasible set. An optional coordinate-ascent pass then
// climbs the actual rate over a discrete phase grid.

#pragma once

#include <armadillo>
#include <vector>

#include "dmasim/array.hpp"

namespace dmasim {

struct OptimizerOptions {
    arma::uword max_iters = 100;
    double rel_tol = 1e-6;      // relative objective decrease treated as converged
    arma::uword refine_grid = 0; // phase candidates per element; 0 disables refinement
    double refine_snr = 1.0;    // linear SNR the refinement pass maximizes at
};

// Rows are the conjugate-transposed top num_chains left singular vectors of
// H. Maximizes uplink_sum_rate over all rank-num_chains front ends.
arma::cx_mat unconstrained_combiner(const arma::cx_mat& H, arma::uword num_chains);

struct DmaDesign {
    AnalogCombiner combiner;
    WeightTable weights;
    // ||B - T A||_F recorded after every half step (T update, then weight
    // update), two entries per iteration. Non-increasing except at
    // iterations where a dead microstrip was revived.
    std::vector<double> objective_trace;
    arma::uword iterations = 0;
    bool converged = false;
    // Microstrips whose elements all projected to zero at some iteration
    // and were forced back on. Duplicates possible across iterations.
    std::vector<arma::uword> revived_microstrips;
};

// Alternating design of the element weights for the given feasible set.
// Weights start from the strongest radiating state (q = j on the Lorentzian
// circle, q = 1 for BinaryAmplitude). When a weight-update half step turns
// every element of a microstrip off, the element with the largest
// unconstrained magnitude is revived to the radiating state so that A keeps
// full row rank; the event is recorded in revived_microstrips.
DmaDesign optimize_dma(const arma::cx_mat& H, const ArrayGeometry& geo,
                       FeasibleSet set, const OptimizerOptions& opts = {});

// Fully connected phase-shifter baseline: A_{m,n} = exp(j angle(B_{m,n}))
// with B the unconstrained combiner, zero entries mapped to phase 0. With
// refine_grid > 0 a coordinate-ascent pass sweeps each entry over the phase
// grid accepting strict rate improvements.
arma::cx_mat optimize_phase_shifter_hybrid(const arma::cx_mat& H, arma::uword num_chains,
                                           const OptimizerOptions& opts = {});

} // namespace dmasim

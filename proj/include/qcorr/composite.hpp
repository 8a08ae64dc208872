// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <string>

#include "qcorr/causal.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Normalizable two-particle state phi1(q1 - q2) phit2(p1 + p2) with
// Gaussian factors centred at q0 and P0.
struct EPRParams {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    double q0 = 0.0;
    double P0 = 0.0;
};

struct EprFactors {
    WaveFunction phi1;        // position rep in u = q1 - q2
    WaveFunction phi2_tilde;  // momentum rep in v = p1 + p2
};

EprFactors build_epr_state(const EPRParams& params, int n_points = kDefaultGridPoints);

// One causal-combo factor living on a collective conjugate pair; the
// coefficient vectors give its position coordinate a.q = a1 q1 + a2 q2 and
// momentum coordinate b.p = b1 p1 + b2 p2 (unit Poisson bracket a.b = 1).
struct CollectiveFactor {
    CausalCombo combo;
    std::array<double, 2> pos_coeff{};
    std::array<double, 2> mom_coeff{};
    std::string label;
};

struct TwoModeProductDensity {
    CollectiveFactor factor_a;
    CollectiveFactor factor_b;
    std::string kind;
};

// Factors fitted per the convex-combination rule on the conjugate pairs
// (q1 - q2, (p1 - p2)/2) and ((q1 + q2)/2, p1 + p2).
TwoModeProductDensity build_epr_density(const EPRParams& params,
                                        int n_points = kDefaultGridPoints);

// Factors are arithmetic means (lambda = 1/2) for the displaced Fock
// states phi_{m,alpha}((q1+q2)/sqrt 2) and phi_{n,beta}((q1-q2)/sqrt 2).
TwoModeProductDensity build_entangled_coherent_density(int m, int n, cplx alpha, cplx beta,
                                                       double omega = 1.0, double t0 = 0.0,
                                                       int n_points = kDefaultGridPoints);

// The four commuting pairs whose joint densities the product density
// reproduces. Anything else (e.g. (q1, p1)) is rejected.
enum class PairId {
    qdiff_qmean,        // (q1 - q2, (q1 + q2)/2)
    qdiff_ptotal,       // (q1 - q2, p1 + p2)
    qmean_pdiff,        // ((q1 + q2)/2, p1 - p2)
    ptotal_pdiffhalf,   // (p1 + p2, (p1 - p2)/2)
};
const char* pair_name(PairId pair);
PairId parse_pair(const std::string& name);

struct PairMarginal {
    GridSpec grid1;
    GridSpec grid2;
    std::vector<double> values;  // row-major over (coord1, coord2)
    std::string coord1;
    std::string coord2;
};

// Marginal of the product density for one commuting pair, computed by
// pushing the transport-curve factors through the pair's coordinates.
PairMarginal pair_marginal(const TwoModeProductDensity& density, PairId pair, int n_axis = 129);

// Same grids, quantum side: 1D densities of the factor wavefunctions
// (|phi|^2 or |phit|^2) scaled into the pair coordinates.
struct PairCheck {
    PairMarginal causal;
    PairMarginal quantum;
    double sup_residual = 0.0;
};
PairCheck verify_pair_marginal(const TwoModeProductDensity& density, PairId pair,
                               int n_axis = 129);

// Pushforward density of a combo's q marginal through its curves,
// evaluated at momentum value p (5-point derivative of the pushforward
// CDF).
double pushforward_density(const CausalCombo& combo, double p);

inline constexpr std::array<PairId, 4> kCommutingPairs = {
    PairId::qdiff_qmean, PairId::qdiff_ptotal, PairId::qmean_pdiff, PairId::ptotal_pdiffhalf};

}  // namespace qcorr

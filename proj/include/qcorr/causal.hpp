// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qcorr/monotone.hpp"
#include "qcorr/quantum.hpp"
#include "qcorr/wavefunction.hpp"

namespace qcorr {

enum class Epsilon : int { plus = +1, minus = -1 };

// Delta-supported coupling of the q and p marginals realized as a monotone
// curve: Pi_+(q) = F_p^{-1}(F_q(q)), Pi_-(q) = F_p^{-1}(1 - F_q(q)). The
// singular density is represented exactly as (marginal, curve); it is
// never rasterized onto a 2D grid.
struct TransportCurve {
    Epsilon epsilon = Epsilon::plus;
    MonotoneMap q_to_p;
    MonotoneMap p_to_q;
    MonotoneMap source_cdf;  // F_q over the trimmed support
    Density1D source;        // |phi(q)|^2
    Density1D target;        // |phit(p)|^2
    double mean_q = 0.0;
    double mean_p = 0.0;
};

// Convex mixture of the two orientations; weights sum to one.
struct CausalCombo {
    TransportCurve plus;
    TransportCurve minus;
    double lambda_plus = 0.5;
    double lambda_minus = 0.5;
    double quantum_global = 0.0;  // fit target
};

// Sampled correlation summary for one method (quantum, causal, combo, ...).
struct LocalCurveSamples {
    std::vector<double> at;
    std::vector<double> mean;
};
struct CorrelationReport {
    std::string method;
    LocalCurveSamples p_given_q;
    LocalCurveSamples q_given_p;
    double global = 0.0;
    MomentReport moments;
};

TransportCurve build_transport_curve(const WaveFunction& wf, Epsilon epsilon);

// given_q -> Pi(q); given_p -> Pi^{-1}(p). The conditional of a
// deterministic coupling is the curve itself. Throws OutOfSupportError
// outside the trimmed support.
double causal_conditional(const TransportCurve& curve, Axis axis, double value);

// 2 int q Pi(q) |phi(q)|^2 dq - 2 <q><p>.
double causal_global(const TransportCurve& curve);

// Product density |phi(q)|^2 |phit(p)|^2: constant local curves, zero
// global correlation.
CorrelationReport correlationless_reference(const WaveFunction& wf);

// Weights solving lambda_+ - lambda_- = (quantum global)/(causal global of
// the + curve); both-zero degenerates to 1/2. Throws
// InfeasibleCombinationError when |ratio| > 1 (reported, not clamped).
CausalCombo fit_convex_combination(const WaveFunction& wf);

// lambda = 1/2 exactly (arithmetic mean of the two orientations).
CausalCombo arithmetic_mean_combo(const WaveFunction& wf);

double combo_conditional(const CausalCombo& combo, Axis axis, double value);
double combo_global(const CausalCombo& combo);
CorrelationReport combo_correlations(const CausalCombo& combo);

// sup_u |Pi(F_q^{-1}(u or 1-u)) - F_p^{-1}(u)| in units of the target grid
// step: how far the pushforward of the q marginal sits from |phit(p)|^2.
double pushforward_quantile_distance(const TransportCurve& curve, int n_probe = 2001);

}  // namespace qcorr

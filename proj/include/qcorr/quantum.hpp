// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qcorr/wavefunction.hpp"

namespace qcorr {

// Conditioning axis for local correlation curves.
enum class Axis { given_q, given_p };

// Conditional means are defined only where the marginal density clears
// this threshold (relative to its peak); below it the 0/0 ratio at nodes
// is masked, not extrapolated.
inline constexpr double kSupportThreshold = 1e-8;

struct LocalCorrelationCurve {
    Axis axis = Axis::given_q;
    std::vector<double> at;    // masked support points
    std::vector<double> mean;  // conditional mean of the conjugate variable
};

// <p>(q) = Re(phi*(q) (-i) phi'(q)) / |phi(q)|^2, derivative synthesized
// spectrally from the momentum representation. Throws
// UnsupportedPointError below the support threshold.
double local_p_given_q(const WaveFunction& wf, double q);

// <q>(p) = Re(phit*(p) (+i) phit'(p)) / |phit(p)|^2, mirror of the above.
double local_q_given_p(const WaveFunction& wf, double p);

// <qp + pq> - 2<q><p>.
double global_correlation(const WaveFunction& wf);

LocalCorrelationCurve local_curve(const WaveFunction& wf, Axis axis);

// J(q) = Re(phi*(q) (-i) phi'(q)) on the position grid; integrates to <p>.
SampledFunction position_current(const WaveFunction& wf);

// Momentum-side analog Re(phit*(p) (+i) phit'(p)) on the momentum grid;
// integrates to <q>.
SampledFunction momentum_current(const WaveFunction& wf);

}  // namespace qcorr

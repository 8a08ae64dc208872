// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

double max_value(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

SampledFunction position_current(const WaveFunction& wf) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const GridSynthesis syn = synthesize_conjugate_grid(mom, pos.grid);
    SampledFunction out{pos.grid, std::vector<double>(pos.amp.size())};
    for (std::size_t k = 0; k < pos.amp.size(); ++k)
        // Re(phi* (-i) phi') = Im(phi* phi')
        out.values[k] = std::imag(std::conj(pos.amp[k]) * syn.derivs[k]);
    return out;
}

SampledFunction momentum_current(const WaveFunction& wf) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const GridSynthesis syn = synthesize_conjugate_grid(pos, mom.grid);
    SampledFunction out{mom.grid, std::vector<double>(mom.amp.size())};
    for (std::size_t k = 0; k < mom.amp.size(); ++k)
        // Re(phit* (+i) phit') = -Im(phit* phit')
        out.values[k] = -std::imag(std::conj(mom.amp[k]) * syn.derivs[k]);
    return out;
}

double local_p_given_q(const WaveFunction& wf, double q) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const ValueDeriv vd = synthesize_conjugate(mom, q);
    const double density = std::norm(vd.value);
    const double peak = max_value(probability_density(pos));
    if (density < kSupportThreshold * peak)
        throw UnsupportedPointError("local_p_given_q: density below support threshold at q = " +
                                    std::to_string(q));
    return std::imag(std::conj(vd.value) * vd.deriv) / density;
}

double local_q_given_p(const WaveFunction& wf, double p) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const ValueDeriv vd = synthesize_conjugate(pos, p);
    const double density = std::norm(vd.value);
    const double peak = max_value(probability_density(mom));
    if (density < kSupportThreshold * peak)
        throw UnsupportedPointError("local_q_given_p: density below support threshold at p = " +
                                    std::to_string(p));
    return -std::imag(std::conj(vd.value) * vd.deriv) / density;
}

double global_correlation(const WaveFunction& wf) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const SampledFunction j = position_current(pos);
    const std::vector<double> dens = probability_density(pos);
    std::vector<double> qj(j.values.size()), qd(j.values.size());
    for (std::size_t k = 0; k < j.values.size(); ++k) {
        const double q = pos.grid.point(static_cast<int>(k));
        qj[k] = q * j.values[k];
        qd[k] = q * dens[k];
    }
    const double mean_p = integrate(j.values, pos.grid);  // int J dq = <p>
    const double mean_q = integrate(qd, pos.grid) / integrate(dens, pos.grid);
    return 2.0 * integrate(qj, pos.grid) - 2.0 * mean_q * mean_p;
}

LocalCorrelationCurve local_curve(const WaveFunction& wf, Axis axis) {
    LocalCorrelationCurve curve;
    curve.axis = axis;
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const WaveFunction& host = axis == Axis::given_q ? pos : mom;
    const WaveFunction& conj = axis == Axis::given_q ? mom : pos;
    const GridSynthesis syn = synthesize_conjugate_grid(conj, host.grid);
    const std::vector<double> dens = probability_density(host);
    const double peak = max_value(dens);
    const double sign = axis == Axis::given_q ? 1.0 : -1.0;
    for (std::size_t k = 0; k < dens.size(); ++k) {
        if (dens[k] < kSupportThreshold * peak) continue;
        curve.at.push_back(host.grid.point(static_cast<int>(k)));
        curve.mean.push_back(sign * std::imag(std::conj(host.amp[k]) * syn.derivs[k]) / dens[k]);
    }
    return curve;
}

}  // namespace qcorr

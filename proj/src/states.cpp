// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcorr/errors.hpp"
#include "qcorr/hermite.hpp"

namespace qcorr {

namespace {

void check_span(const GridSpec& grid, double center, double width, const char* who) {
    const double need = 8.0 * width;
    if (grid.x_min > center - need || grid.x_max < center + need)
        throw GridSpanError(std::string(who) + ": grid [" + std::to_string(grid.x_min) + ", " +
                            std::to_string(grid.x_max) + "] does not span mean +- 8 widths");
}

WaveFunction finalize(WaveFunction wf, const char* who) {
    const double n2 = norm_squared(wf);
    if (!(n2 > 0.0)) throw ZeroStateError(std::string(who) + ": zero norm");
    const double scale = 1.0 / std::sqrt(n2);
    for (cplx& a : wf.amp) a *= scale;
    return wf;
}

}  // namespace

GaussianPacketMoments gaussian_packet_moments(const GaussianPacketParams& p) {
    const double dp2 = p.alpha / 2.0;
    const double s = p.alpha * p.t0_over_m;
    const double dq2 = (1.0 + s * s) / (2.0 * p.alpha);
    return {p.beta * p.t0_over_m, p.beta, std::sqrt(dq2), std::sqrt(dp2)};
}

CoherentCenter coherent_center(const GeneralizedCoherentParams& p) {
    const cplx alpha_c = p.A * std::polar(1.0, -(p.omega * p.t0 + p.theta));
    return {alpha_c.real(), alpha_c.imag()};
}

GridSpec auto_gaussian_p_grid(const GaussianPacketParams& p, int n_points) {
    const auto m = gaussian_packet_moments(p);
    const double half = 8.0 * (m.delta_p + 1.0);
    return make_grid(m.mean_p - half, m.mean_p + half, n_points);
}

GridSpec auto_gaussian_q_grid(const GaussianPacketParams& p, int n_points) {
    const auto m = gaussian_packet_moments(p);
    const double half = 8.0 * (m.delta_q + std::abs(p.beta) * std::abs(p.t0_over_m) + 1.0);
    return make_grid(m.mean_q - half, m.mean_q + half, n_points);
}

GridSpec auto_coherent_q_grid(const GeneralizedCoherentParams& p, int n_points) {
    const auto c = coherent_center(p);
    const double width = std::sqrt(p.n + 0.5);
    const double half = 8.0 * (width + 1.0);
    return make_grid(c.qbar - half, c.qbar + half, n_points);
}

WaveFunction build_gaussian_packet(const GaussianPacketParams& params,
                                   std::optional<GridSpec> p_grid, int n_points) {
    if (!(params.alpha > 0.0))
        throw InvalidRangeError("build_gaussian_packet: alpha must be positive");
    const GridSpec grid = p_grid ? *p_grid : auto_gaussian_p_grid(params, n_points);
    const auto m = gaussian_packet_moments(params);
    check_span(grid, m.mean_p, m.delta_p, "build_gaussian_packet");
    if (grid.n_points < 16)
        throw InvalidRangeError("build_gaussian_packet: need at least 16 grid points");

    const double pref = std::pow(std::numbers::pi * params.alpha, -0.25);
    WaveFunction wf{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points)),
                    Representation::momentum};
    for (int k = 0; k < grid.n_points; ++k) {
        const double p = grid.point(k);
        const double gauss = std::exp(-(p - params.beta) * (p - params.beta) / (2.0 * params.alpha));
        const double phase = -params.t0_over_m * p * p / 2.0;
        wf.amp[static_cast<std::size_t>(k)] = pref * gauss * std::polar(1.0, phase);
    }
    return finalize(std::move(wf), "build_gaussian_packet");
}

WaveFunction build_generalized_coherent(const GeneralizedCoherentParams& params,
                                        std::optional<GridSpec> q_grid, int n_points) {
    if (params.n < 0 || params.n > kMaxHermiteOrder)
        throw OverflowGuardError("build_generalized_coherent: n outside [0, " +
                                 std::to_string(kMaxHermiteOrder) + "]");
    if (params.A < 0.0) throw InvalidRangeError("build_generalized_coherent: A must be >= 0");
    if (!(params.omega > 0.0))
        throw InvalidRangeError("build_generalized_coherent: omega must be positive");
    const GridSpec grid = q_grid ? *q_grid : auto_coherent_q_grid(params, n_points);
    const auto c = coherent_center(params);
    const double width = std::sqrt(params.n + 0.5);
    check_span(grid, c.qbar, width, "build_generalized_coherent");
    if (grid.n_points < 16)
        throw InvalidRangeError("build_generalized_coherent: need at least 16 grid points");

    const double global = -params.omega * params.t0 * (params.n + 0.5);
    WaveFunction wf{grid, std::vector<cplx>(static_cast<std::size_t>(grid.n_points)),
                    Representation::position};
    for (int k = 0; k < grid.n_points; ++k) {
        const double q = grid.point(k);
        const double env = hermite_function(params.n, q - c.qbar);
        const double phase = global + c.pbar * (q - 0.5 * c.qbar);
        wf.amp[static_cast<std::size_t>(k)] = env * std::polar(1.0, phase);
    }
    return finalize(std::move(wf), "build_generalized_coherent");
}

}  // namespace qcorr

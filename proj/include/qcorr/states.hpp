// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>

#include "qcorr/wavefunction.hpp"

namespace qcorr {

inline constexpr int kDefaultGridPoints = 1024;

// Free-particle Gaussian packet, momentum representation
//   phi_tilde(p) = (pi alpha)^{-1/4} exp(-(p-beta)^2/(2 alpha) - i (t0/m) p^2 / 2),
// so (dp)^2 = alpha/2 and (dq)^2 = (1 + (alpha t0/m)^2) / (2 alpha).
struct GaussianPacketParams {
    double alpha = 1.0;      // momentum-variance scale
    double beta = 0.0;       // mean momentum
    double t0_over_m = 0.0;  // spreading parameter
};

// Displaced n-th oscillator eigenstate at time t0: amplitude
// alpha_c = A exp(-i (omega t0 + theta)), qbar = Re alpha_c, pbar = Im alpha_c,
//   phi(q) = h_n(q - qbar) exp(i (-omega t0 (n + 1/2) + pbar (q - qbar/2))).
struct GeneralizedCoherentParams {
    int n = 0;
    double A = 0.0;
    double theta = 0.0;
    double omega = 1.0;
    double t0 = 0.0;
};

struct GaussianPacketMoments {
    double mean_q, mean_p, delta_q, delta_p;
};
GaussianPacketMoments gaussian_packet_moments(const GaussianPacketParams& params);

struct CoherentCenter {
    double qbar, pbar;
};
CoherentCenter coherent_center(const GeneralizedCoherentParams& params);

// Builders return the representation in which the state is defined in
// closed form (momentum for packets, position for coherent states). The
// grid argument, when given, must span the state per the 8-width policy.
WaveFunction build_gaussian_packet(const GaussianPacketParams& params,
                                   std::optional<GridSpec> p_grid = std::nullopt,
                                   int n_points = kDefaultGridPoints);
WaveFunction build_generalized_coherent(const GeneralizedCoherentParams& params,
                                        std::optional<GridSpec> q_grid = std::nullopt,
                                        int n_points = kDefaultGridPoints);

// Auto-sizing policy: mean +- 8 (width + |beta| t0/m + 1).
GridSpec auto_gaussian_p_grid(const GaussianPacketParams& params, int n_points);
GridSpec auto_gaussian_q_grid(const GaussianPacketParams& params, int n_points);
GridSpec auto_coherent_q_grid(const GeneralizedCoherentParams& params, int n_points);

}  // namespace qcorr

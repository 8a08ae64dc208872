// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

constexpr double kEdgeTolerance = 1e-12;  // relative to the peak amplitude

double max_abs(std::span<const cplx> amp) {
    double m = 0.0;
    for (const cplx& a : amp) m = std::max(m, std::abs(a));
    return m;
}

double kernel_sign(Representation source_rep) {
    // position -> momentum uses e^{-ipq}; the inverse uses e^{+ipq}.
    return source_rep == Representation::position ? -1.0 : 1.0;
}

Representation conjugate_of(Representation rep) {
    return rep == Representation::position ? Representation::momentum : Representation::position;
}

}  // namespace

double norm_squared(const WaveFunction& wf) {
    std::vector<double> dens(wf.amp.size());
    for (std::size_t k = 0; k < wf.amp.size(); ++k) dens[k] = std::norm(wf.amp[k]);
    return integrate(dens, wf.grid);
}

std::vector<double> probability_density(const WaveFunction& wf) {
    std::vector<double> dens(wf.amp.size());
    for (std::size_t k = 0; k < wf.amp.size(); ++k) dens[k] = std::norm(wf.amp[k]);
    return dens;
}

WaveFunction build_custom(std::vector<cplx> amplitudes, const GridSpec& grid,
                          Representation rep) {
    if (static_cast<int>(amplitudes.size()) != grid.n_points)
        throw LengthMismatchError("build_custom: amplitude count != grid points");
    WaveFunction wf{grid, std::move(amplitudes), rep};
    const double n2 = norm_squared(wf);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw ZeroStateError("build_custom: state has no norm");
    const double scale = 1.0 / std::sqrt(n2);
    for (cplx& a : wf.amp) a *= scale;
    const double peak = max_abs(wf.amp);
    if (std::abs(wf.amp.front()) > kEdgeTolerance * peak ||
        std::abs(wf.amp.back()) > kEdgeTolerance * peak)
        throw EdgeLeakageError("build_custom: state does not decay at the grid edges");
    return wf;
}

std::vector<cplx> oscillatory_sum(std::span<const cplx> coeff, const GridSpec& source,
                                  const GridSpec& target, double sign) {
    if (static_cast<int>(coeff.size()) != source.n_points)
        throw LengthMismatchError("oscillatory_sum: coefficient count != source points");
    const std::size_t n = coeff.size();
    const std::size_t m = static_cast<std::size_t>(target.n_points);
    std::vector<cplx> cur(n), step(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = source.point(static_cast<int>(k));
        cur[k] = coeff[k] * std::polar(1.0, sign * target.x_min * s);
        step[k] = std::polar(1.0, sign * target.step() * s);
    }
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) acc += cur[k];
        out[j] = acc;
        if (j + 1 < m)
            for (std::size_t k = 0; k < n; ++k) cur[k] *= step[k];
    }
    return out;
}

namespace {

// Rough conjugate-variable moments from central differences; only used to
// size transform grids, so second-order accuracy is plenty.
struct RoughMoments {
    double center;
    double width;
};

RoughMoments conjugate_moments_fd(const WaveFunction& wf) {
    const double h = wf.grid.step();
    const std::size_t n = wf.amp.size();
    std::vector<cplx> d(n, cplx{0.0, 0.0});
    for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (wf.amp[k + 1] - wf.amp[k - 1]) / (2.0 * h);
    // conjugate operator is -i d/dx in position rep, +i d/dx in momentum rep
    const double s = wf.rep == Representation::position ? -1.0 : 1.0;
    std::vector<double> mean_int(n), sq_int(n);
    for (std::size_t k = 0; k < n; ++k) {
        mean_int[k] = (std::conj(wf.amp[k]) * (cplx{0.0, s} * d[k])).real();
        sq_int[k] = std::norm(d[k]);
    }
    const double mean = integrate(mean_int, wf.grid);
    const double var = std::max(integrate(sq_int, wf.grid) - mean * mean, 0.0);
    return {mean, std::sqrt(var)};
}

}  // namespace

WaveFunction fourier_transform(const WaveFunction& wf, const GridSpec& target) {
    const std::vector<double> w = quadrature_weights(wf.grid);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    std::vector<cplx> coeff(wf.amp.size());
    for (std::size_t k = 0; k < wf.amp.size(); ++k) coeff[k] = pref * w[k] * wf.amp[k];
    WaveFunction out{target, oscillatory_sum(coeff, wf.grid, target, kernel_sign(wf.rep)),
                     conjugate_of(wf.rep)};
    const double n2 = norm_squared(out);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw GridTooCoarseError("fourier_transform: norm drifted to " + std::to_string(n2) +
                                 "; grid too coarse or too narrow");
    return out;
}

WaveFunction fourier_transform(const WaveFunction& wf) {
    const RoughMoments cm = conjugate_moments_fd(wf);
    const double half = 8.0 * (cm.width + 1.0);
    return fourier_transform(wf, make_grid(cm.center - half, cm.center + half, wf.grid.n_points));
}

WaveFunction to_representation(const WaveFunction& wf, Representation rep) {
    if (wf.rep == rep) return wf;
    return fourier_transform(wf);
}

MomentReport moments(const WaveFunction& wf) {
    auto grid_moments = [](const WaveFunction& w) {
        std::vector<double> dens = probability_density(w);
        const double mass = integrate(dens, w.grid);
        std::vector<double> xd(dens.size());
        for (std::size_t k = 0; k < dens.size(); ++k) xd[k] = w.grid.point(static_cast<int>(k)) * dens[k];
        const double mean = integrate(xd, w.grid) / mass;
        for (std::size_t k = 0; k < dens.size(); ++k) {
            const double d = w.grid.point(static_cast<int>(k)) - mean;
            xd[k] = d * d * dens[k];
        }
        const double var = integrate(xd, w.grid) / mass;
        return std::pair<double, double>{mean, std::sqrt(std::max(var, 0.0))};
    };
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const auto [mq, dq] = grid_moments(pos);
    const auto [mp, dp] = grid_moments(mom);
    return MomentReport{mq, mp, dq, dp};
}

ValueDeriv synthesize_conjugate(const WaveFunction& wf, double x) {
    const std::vector<double> w = quadrature_weights(wf.grid);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double sign = kernel_sign(wf.rep);
    cplx val{0.0, 0.0}, der{0.0, 0.0};
    for (std::size_t k = 0; k < wf.amp.size(); ++k) {
        const double s = wf.grid.point(static_cast<int>(k));
        const cplx term = pref * w[k] * wf.amp[k] * std::polar(1.0, sign * x * s);
        val += term;
        der += cplx{0.0, sign * s} * term;
    }
    return {val, der};
}

GridSynthesis synthesize_conjugate_grid(const WaveFunction& wf, const GridSpec& target) {
    const std::vector<double> w = quadrature_weights(wf.grid);
    const double pref = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double sign = kernel_sign(wf.rep);
    std::vector<cplx> coeff(wf.amp.size()), dcoeff(wf.amp.size());
    for (std::size_t k = 0; k < wf.amp.size(); ++k) {
        const double s = wf.grid.point(static_cast<int>(k));
        coeff[k] = pref * w[k] * wf.amp[k];
        dcoeff[k] = cplx{0.0, sign * s} * coeff[k];
    }
    GridSynthesis out;
    out.values = oscillatory_sum(coeff, wf.grid, target, sign);
    out.derivs = oscillatory_sum(dcoeff, wf.grid, target, sign);
    return out;
}

}  // namespace qcorr

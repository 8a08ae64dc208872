// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/hermite.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/states.hpp"
#include "qcorr/wavefunction.hpp"

using namespace qcorr;

namespace {

WaveFunction ground_state(int n = 1024, double half = 9.0) {
    const GridSpec g = make_grid(-half, half, n);
    std::vector<cplx> amp(static_cast<std::size_t>(n));
    const double pref = std::pow(std::numbers::pi, -0.25);
    for (int k = 0; k < n; ++k)
        amp[static_cast<std::size_t>(k)] = pref * std::exp(-0.5 * g.point(k) * g.point(k));
    return build_custom(std::move(amp), g, Representation::position);
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    REQUIRE(a.grid.n_points == b.grid.n_points);
    std::vector<double> d(a.amp.size());
    for (std::size_t k = 0; k < a.amp.size(); ++k) d[k] = std::norm(a.amp[k] - b.amp[k]);
    return std::sqrt(integrate(d, a.grid));
}

}  // namespace

TEST_CASE("ground Gaussian is self-reciprocal under the transform") {
    const WaveFunction pos = ground_state();
    const WaveFunction mom = fourier_transform(pos);
    const double pref = std::pow(std::numbers::pi, -0.25);
    for (int k = 0; k < mom.grid.n_points; k += 37) {
        const double p = mom.grid.point(k);
        const cplx expect = pref * std::exp(-0.5 * p * p);
        CHECK(std::abs(mom.amp[static_cast<std::size_t>(k)] - expect) < 1e-10);
    }
}

TEST_CASE("shift theorem: phi e^{i beta q} maps to phi_tilde(p - beta)") {
    const double beta = 1.7;
    WaveFunction pos = ground_state();
    WaveFunction shifted = pos;
    for (int k = 0; k < pos.grid.n_points; ++k)
        shifted.amp[static_cast<std::size_t>(k)] *= std::polar(1.0, beta * pos.grid.point(k));
    const WaveFunction mom = fourier_transform(shifted, make_grid(-9.0 + beta, 9.0 + beta, 1024));
    const WaveFunction mom0 = fourier_transform(pos, make_grid(-9.0, 9.0, 1024));
    // grids are offset by beta, so equal indices compare phit(p) with
    // phit0(p - beta)
    for (int k = 0; k < 1024; k += 41)
        CHECK(std::abs(mom.amp[static_cast<std::size_t>(k)] -
                       mom0.amp[static_cast<std::size_t>(k)]) < 1e-10);
}

TEST_CASE("transform of the minimum-uncertainty packet matches direct quadrature") {
    const WaveFunction mom = build_gaussian_packet({1.0, 0.0, 0.0});
    const WaveFunction pos = fourier_transform(mom);
    for (double q : {-1.3, 0.0, 0.6, 2.1}) {
        const cplx expect = oracle::integrate_cplx(
                                [&](double p) {
                                    const cplx phit =
                                        std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * p * p);
                                    return phit * std::polar(1.0, p * q);
                                },
                                -12.0, 12.0) /
                            std::sqrt(2.0 * std::numbers::pi);
        const ValueDeriv vd = synthesize_conjugate(mom, q);
        CHECK(std::abs(vd.value - expect) < 1e-9);
        CHECK(std::abs(expect.imag()) < 1e-12);  // real Gaussian in both representations
    }
    for (std::size_t k = 0; k < pos.amp.size(); k += 97)
        CHECK(std::abs(pos.amp[k].imag()) < 1e-10);
}

TEST_CASE("round trip and Parseval across a state family") {
    std::vector<WaveFunction> states;
    states.push_back(ground_state());
    states.push_back(build_gaussian_packet({1.0, 0.0, 1.0}));
    states.push_back(build_gaussian_packet({2.0, 3.0, 0.4}));
    states.push_back(build_generalized_coherent({2, 1.0, 0.0, 1.0, 0.0}));
    {
        SeededStream s(991);
        const GridSpec g = make_grid(-16.0, 16.0, 1024);
        std::vector<cplx> amp(1024, cplx{0.0, 0.0});
        for (int n = 0; n <= 5; ++n) {
            const cplx c{s.next_uniform() - 0.5, s.next_uniform() - 0.5};
            for (int k = 0; k < 1024; ++k)
                amp[static_cast<std::size_t>(k)] += c * hermite_function(n, g.point(k));
        }
        states.push_back(build_custom(std::move(amp), g, Representation::position));
    }

    for (const WaveFunction& wf : states) {
        const WaveFunction there = fourier_transform(wf);
        CHECK(std::abs(norm_squared(there) - norm_squared(wf)) < 1e-8);  // Parseval
        const WaveFunction back = fourier_transform(there, wf.grid);
        CHECK(l2_distance(wf, back) < 1e-8);
    }
}

TEST_CASE("transform flags a grid that cannot hold the state") {
    const WaveFunction pos = ground_state();
    CHECK_THROWS_AS(fourier_transform(pos, make_grid(-0.5, 0.5, 64)), GridTooCoarseError);
}

TEST_CASE("build_custom normalizes, rejects zero states and clipped grids") {
    const GridSpec g = make_grid(-9.0, 9.0, 512);
    std::vector<cplx> amp(512);
    for (int k = 0; k < 512; ++k)
        amp[static_cast<std::size_t>(k)] = 3.7 * std::exp(-0.5 * g.point(k) * g.point(k));
    const WaveFunction wf = build_custom(amp, g, Representation::position);
    CHECK(norm_squared(wf) == doctest::Approx(1.0).epsilon(1e-12));

    const WaveFunction again = build_custom(wf.amp, g, Representation::position);
    CHECK(l2_distance(wf, again) < 1e-12);

    CHECK_THROWS_AS(
        build_custom(std::vector<cplx>(512, cplx{0.0, 0.0}), g, Representation::position),
        ZeroStateError);

    const GridSpec tight = make_grid(-2.0, 2.0, 128);
    std::vector<cplx> clipped(128);
    for (int k = 0; k < 128; ++k)
        clipped[static_cast<std::size_t>(k)] = std::exp(-0.5 * tight.point(k) * tight.point(k));
    CHECK_THROWS_AS(build_custom(std::move(clipped), tight, Representation::position),
                    EdgeLeakageError);
}

TEST_CASE("h0 + h1 superposition: normalized mean position") {
    const GridSpec g = make_grid(-12.0, 12.0, 1024);
    std::vector<cplx> amp(1024);
    for (int k = 0; k < 1024; ++k)
        amp[static_cast<std::size_t>(k)] =
            hermite_function(0, g.point(k)) + hermite_function(1, g.point(k));
    const WaveFunction wf = build_custom(std::move(amp), g, Representation::position);
    // oracle: <q> of (h0 + h1)/sqrt 2 by independent quadrature
    const double expect = oracle::integrate(
        [](double x) {
            const double h0 = 0.75112554446494248 * std::exp(-0.5 * x * x);
            const double h1 = std::sqrt(2.0) * x * h0;
            return x * 0.5 * (h0 + h1) * (h0 + h1);
        },
        -12.0, 12.0);
    CHECK(expect == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(moments(wf).mean_q == doctest::Approx(expect).epsilon(1e-10));
}

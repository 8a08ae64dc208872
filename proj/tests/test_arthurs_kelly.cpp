// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qcorr/arthurs_kelly.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/hermite.hpp"
#include "qcorr/quantum.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;

namespace {

WaveFunction h0_plus_h1() {
    const GridSpec g = make_grid(-14.0, 14.0, 1024);
    std::vector<cplx> amp(1024);
    for (int k = 0; k < 1024; ++k)
        amp[static_cast<std::size_t>(k)] =
            hermite_function(0, g.point(k)) + hermite_function(1, g.point(k));
    return build_custom(std::move(amp), g, Representation::position);
}

double sup_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double sup = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) sup = std::max(sup, std::abs(a[k] - b[k]));
    return sup;
}

}  // namespace

TEST_CASE("balanced apparatus on the ground state: isotropic unit-product joint") {
    const WaveFunction wf = build_generalized_coherent({0, 0.0, 0.0, 1.0, 0.0});
    const ApparatusParams app{1.0 / std::sqrt(2.0)};
    const JointDistributionGrid joint = joint_distribution(wf, app, 193);
    CHECK(std::abs(joint.mass - 1.0) < 1e-6);
    const Dispersions d = apparatus_dispersions(joint);
    CHECK(d.dx1 == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(d.dx2 == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(d.dx1 * d.dx2 == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("joint of a displaced Fock state matches the closed-form overlap") {
    // matched projector width: P = exp(-r^2/2) (r^2/2)^n / (2 pi n!)
    const GeneralizedCoherentParams params{1, 2.0, 0.7, 1.0, 0.0};
    const auto c = coherent_center(params);
    const WaveFunction wf = build_generalized_coherent(params);
    const JointDistributionGrid joint =
        joint_distribution(wf, ApparatusParams{1.0 / std::sqrt(2.0)}, 161);
    CHECK(std::abs(joint.mass - 1.0) < 1e-6);
    for (int i = 0; i < joint.x1_grid.n_points; i += 7) {
        for (int j = 0; j < joint.x2_grid.n_points; j += 7) {
            const double r2 = std::pow(joint.x1_grid.point(i) - c.qbar, 2) +
                              std::pow(joint.x2_grid.point(j) - c.pbar, 2);
            const double expect = std::exp(-r2 / 2.0) * (r2 / 2.0) / (2.0 * std::numbers::pi);
            CHECK(std::abs(joint.at(i, j) - expect) < 1e-8);
        }
    }
    // ring around the displacement: annulus far outweighs the center
    double peak_ring = 0.0, center_val = 1.0;
    for (int i = 0; i < joint.x1_grid.n_points; ++i) {
        for (int j = 0; j < joint.x2_grid.n_points; ++j) {
            const double r2 = std::pow(joint.x1_grid.point(i) - c.qbar, 2) +
                              std::pow(joint.x2_grid.point(j) - c.pbar, 2);
            if (std::abs(r2 - 2.0) < 0.3) peak_ring = std::max(peak_ring, joint.at(i, j));
            if (r2 < 0.05) center_val = std::min(center_val, joint.at(i, j));
        }
    }
    CHECK(peak_ring > 10.0 * center_val);
}

TEST_CASE("marginals agree with the direct convolutions") {
    const WaveFunction fock1 = build_generalized_coherent({1, 0.0, 0.0, 1.0, 0.0});
    const ApparatusParams app{0.1};
    const JointDistributionGrid joint = joint_distribution(fock1, app, 193);
    const auto [p1, p2] = marginals(joint);
    CHECK(std::abs(integrate(p1.values, p1.grid) - 1.0) < 1e-6);
    CHECK(std::abs(integrate(p2.values, p2.grid) - 1.0) < 1e-6);
    const Density1D s1 = smeared_marginal(fock1, app, PointerAxis::given_x1, p1.grid);
    const Density1D s2 = smeared_marginal(fock1, app, PointerAxis::given_x2, p2.grid);
    CHECK(sup_norm_diff(p1.values, s1.values) < 1e-6);
    CHECK(sup_norm_diff(p2.values, s2.values) < 1e-6);
}

TEST_CASE("small and large b recover the bare densities") {
    // dense grids so the narrow kernels stay resolved
    const GridSpec qg = make_grid(-9.0, 9.0, 8192);
    std::vector<cplx> amp(8192);
    const double pref = std::pow(std::numbers::pi, -0.25);
    for (int k = 0; k < 8192; ++k)
        amp[static_cast<std::size_t>(k)] = pref * std::exp(-0.5 * qg.point(k) * qg.point(k));
    const WaveFunction wf = build_custom(std::move(amp), qg, Representation::position);
    const MomentReport m = moments(wf);
    {
        const ApparatusParams app{0.01 * m.delta_q};
        const GridSpec eval = make_grid(-4.0, 4.0, 257);
        const Density1D p1 = smeared_marginal(wf, app, PointerAxis::given_x1, eval);
        double sup = 0.0;
        for (int i = 0; i < eval.n_points; ++i) {
            const double f = std::norm(pref * std::exp(-0.5 * eval.point(i) * eval.point(i)));
            sup = std::max(sup, std::abs(p1.values[static_cast<std::size_t>(i)] - f));
        }
        CHECK(sup < 1e-3);
    }
    {
        const ApparatusParams app{100.0 / m.delta_p};
        const GridSpec eval = make_grid(-4.0, 4.0, 257);
        const Density1D p2 = smeared_marginal(wf, app, PointerAxis::given_x2, eval);
        double sup = 0.0;
        for (int i = 0; i < eval.n_points; ++i) {
            const double f = std::norm(pref * std::exp(-0.5 * eval.point(i) * eval.point(i)));
            sup = std::max(sup, std::abs(p2.values[static_cast<std::size_t>(i)] - f));
        }
        CHECK(sup < 1e-3);
    }
}

TEST_CASE("smeared width follows the apparatus law") {
    const WaveFunction wf = build_gaussian_packet({1.0, 0.0, 1.0});  // dq^2 = 1
    const ApparatusParams app{0.5};
    const Density1D p1 = smeared_marginal(wf, app, PointerAxis::given_x1);
    std::vector<double> x2f(p1.values.size());
    for (std::size_t k = 0; k < p1.values.size(); ++k) {
        const double x = p1.grid.point(static_cast<int>(k));
        x2f[k] = x * x * p1.values[k];
    }
    const double var = integrate(x2f, p1.grid) / integrate(p1.values, p1.grid);
    CHECK(var == doctest::Approx(1.25).epsilon(1e-7));
}

TEST_CASE("conditional means of the spreading packet at b = 1") {
    const WaveFunction wf = build_gaussian_packet({1.0, 0.0, 1.0});
    const ApparatusParams app{1.0};
    CHECK(conditional_mean(wf, app, PointerAxis::given_x1, 1.0) ==
          doctest::Approx(0.25).epsilon(1e-7));
    CHECK(conditional_mean(wf, app, PointerAxis::given_x2, 1.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-7));
    // cross-check the reduced formula against direct row averaging of the joint
    const JointDistributionGrid joint = joint_distribution(wf, app, 257);
    const std::vector<double> w2 = quadrature_weights(joint.x2_grid);
    const int row =
        static_cast<int>(std::llround((1.0 - joint.x1_grid.x_min) / joint.x1_grid.step()));
    double num = 0.0, den = 0.0;
    for (int j = 0; j < joint.x2_grid.n_points; ++j) {
        num += w2[static_cast<std::size_t>(j)] * joint.x2_grid.point(j) * joint.at(row, j);
        den += w2[static_cast<std::size_t>(j)] * joint.at(row, j);
    }
    const double x1_at_row = joint.x1_grid.point(row);
    const double reduced = conditional_mean(wf, app, PointerAxis::given_x1, x1_at_row);
    CHECK(num / den == doctest::Approx(reduced).epsilon(1e-6));

    CHECK_THROWS_AS(conditional_mean(wf, app, PointerAxis::given_x1, 60.0),
                    UnsupportedPointError);
}

TEST_CASE("coherent states: flat conditionals for any apparatus") {
    const GeneralizedCoherentParams params{1, 1.1, -0.4, 1.0, 0.0};
    const auto c = coherent_center(params);
    const WaveFunction wf = build_generalized_coherent(params);
    for (double b : {0.4, 1.0, 2.5}) {
        CHECK(conditional_mean(wf, ApparatusParams{b}, PointerAxis::given_x1, c.qbar + 0.8) ==
              doctest::Approx(c.pbar).epsilon(1e-7));
        CHECK(conditional_mean(wf, ApparatusParams{b}, PointerAxis::given_x2, c.pbar - 0.5) ==
              doctest::Approx(c.qbar).epsilon(1e-7));
    }
}

TEST_CASE("global pointer moment equals the quantum correlation for every b") {
    const WaveFunction spread = build_gaussian_packet({1.0, 0.0, 1.0});
    for (double b : {0.2, 1.0, 5.0})
        CHECK(global_moment(spread, ApparatusParams{b}) == doctest::Approx(1.0).epsilon(2e-6));

    const WaveFunction coh = build_generalized_coherent({2, 1.3, 0.4, 1.0, 0.0});
    for (double b : {0.5, 2.0})
        CHECK(std::abs(global_moment(coh, ApparatusParams{b})) < 1e-6);

    const WaveFunction sup = h0_plus_h1();
    const double exact = global_correlation(sup);
    for (double b : {0.3, 1.0, 3.0})
        CHECK(global_moment(sup, ApparatusParams{b}) == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("mean transfer: pointer means equal the state means for every b") {
    const WaveFunction wf = build_generalized_coherent({1, 1.5, 0.9, 1.0, 0.3});
    const MomentReport m = moments(wf);
    for (double b : {0.3, 1.0, 4.0}) {
        const auto [p1, p2] = marginals(joint_distribution(wf, ApparatusParams{b}, 257));
        std::vector<double> t(p1.values.size());
        for (std::size_t k = 0; k < t.size(); ++k)
            t[k] = p1.grid.point(static_cast<int>(k)) * p1.values[k];
        CHECK(integrate(t, p1.grid) == doctest::Approx(m.mean_q).epsilon(1e-8));
        std::vector<double> t2(p2.values.size());
        for (std::size_t k = 0; k < t2.size(); ++k)
            t2[k] = p2.grid.point(static_cast<int>(k)) * p2.values[k];
        CHECK(integrate(t2, p2.grid) == doctest::Approx(m.mean_p).epsilon(1e-8));
    }
}

TEST_CASE("noise bound and the dispersion law across states and settings") {
    const std::vector<WaveFunction> states = {build_gaussian_packet({1.0, 0.0, 0.0}),
                                              build_gaussian_packet({2.0, 1.0, 0.8}),
                                              build_generalized_coherent({1, 0.7, 0.2, 1.0, 0.0})};
    for (const WaveFunction& wf : states) {
        const MomentReport m = moments(wf);
        for (double b : {0.3, 1.0 / std::sqrt(2.0), 2.0}) {
            const Dispersions d = apparatus_dispersions(wf, ApparatusParams{b}, 161);
            CHECK(d.dx1 * d.dx2 >= 1.0 - 1e-9);
            CHECK(std::abs(d.dx1 * d.dx1 - m.delta_q * m.delta_q - b * b) < 1e-6);
            CHECK(std::abs(d.dx2 * d.dx2 - m.delta_p * m.delta_p - 1.0 / (4.0 * b * b)) < 1e-6);
        }
    }
}

TEST_CASE("limit study converges quadratically toward the exact local correlation") {
    const WaveFunction wf = build_gaussian_packet({1.0, 0.0, 1.0});  // dq = 1
    {
        const LimitStudy study =
            limit_study(wf, PointerAxis::given_x1, 1.0, {1.0, 0.5, 0.25, 0.125});
        CHECK(study.exact == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(study.deviations_monotone);
        // deviation ratio per halving approaches 1/4
        const double r_last = study.rows[3].deviation / study.rows[2].deviation;
        CHECK(r_last > 0.24);
        CHECK(r_last < 0.30);
        CHECK(study.extrapolated_deviation < 0.3 * study.rows.back().deviation);
    }
    {
        const LimitStudy study = limit_study(wf, PointerAxis::given_x2, 1.0,
                                             {std::sqrt(2.0), 2.0 * std::sqrt(2.0),
                                              4.0 * std::sqrt(2.0), 8.0 * std::sqrt(2.0)});
        CHECK(study.exact == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(study.deviations_monotone);
        CHECK(study.rows.back().deviation < study.rows.front().deviation / 10.0);
    }
    {
        const WaveFunction coh = build_generalized_coherent({1, 1.0, 0.0, 1.0, 0.0});
        const LimitStudy study = limit_study(coh, PointerAxis::given_x1, 1.4, {1.0, 0.5, 0.25});
        for (const LimitStudyRow& row : study.rows) CHECK(row.deviation < 1e-7);
        CHECK(study.deviations_monotone);
    }
    CHECK_THROWS_AS(limit_study(wf, PointerAxis::given_x1, 1.0, {0.25, 0.5}),
                    ScheduleDirectionError);
    CHECK_THROWS_AS(limit_study(wf, PointerAxis::given_x2, 1.0, {2.0, 1.0}),
                    ScheduleDirectionError);
}

TEST_CASE("heterodyne sampling: determinism, bounds, covariance") {
    const WaveFunction wf = build_generalized_coherent({0, 0.0, 0.0, 1.0, 0.0});
    const JointDistributionGrid joint =
        joint_distribution(wf, ApparatusParams{1.0 / std::sqrt(2.0)}, 193);
    const long n = 200000;
    const std::vector<HeterodyneSample> a = sample_heterodyne(joint, n, 42);
    const std::vector<HeterodyneSample> b = sample_heterodyne(joint, n, 42);
    REQUIRE(a.size() == static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < a.size(); k += 999) {
        CHECK(a[k].x1 == b[k].x1);
        CHECK(a[k].x2 == b[k].x2);
        CHECK(joint.x1_grid.contains(a[k].x1));
        CHECK(joint.x2_grid.contains(a[k].x2));
    }
    double mean = 0.0, var = 0.0;
    for (const HeterodyneSample& s : a) mean += s.x1;
    mean /= static_cast<double>(n);
    for (const HeterodyneSample& s : a) var += (s.x1 - mean) * (s.x1 - mean);
    var /= static_cast<double>(n - 1);
    // Var(x1) = 1 for the balanced apparatus; 5 standard errors of the
    // variance estimator
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / (n - 1.0)));

    CHECK_THROWS_AS(sample_heterodyne(joint, 0, 1), InvalidRangeError);
}

TEST_CASE("sample estimates: bins, errors, convergence") {
    const WaveFunction wf = build_gaussian_packet({1.0, 0.0, 1.0});
    const JointDistributionGrid joint = joint_distribution(wf, ApparatusParams{1.0}, 193);
    const double exact = global_moment(joint);

    const std::vector<HeterodyneSample> samples = sample_heterodyne(joint, 100000, 7);
    const CorrelationEstimate est = estimate_from_samples(samples, bins_for(joint), 7);
    CHECK(est.n == 100000);
    CHECK(est.seed == 7);
    CHECK(est.global_se > 0.0);
    CHECK(std::abs(est.global - exact) < 5.0 * est.global_se);
    for (const BinStat& bin : est.x2_given_x1) {
        if (bin.count == 0) CHECK(bin.flagged);
        if (!bin.flagged) CHECK(bin.std_error > 0.0);
    }

    // standard error shrinks like 1/sqrt(n)
    const CorrelationEstimate half =
        estimate_from_samples(sample_heterodyne(joint, 50000, 11), bins_for(joint), 11);
    const double shrink = est.global_se / half.global_se;
    CHECK(shrink > 0.8 / std::sqrt(2.0));
    CHECK(shrink < 1.2 / std::sqrt(2.0));

    CHECK_THROWS_AS(estimate_from_samples(sample_heterodyne(joint, 99, 1), bins_for(joint), 1),
                    InsufficientSamplesError);
}

TEST_CASE("apparatus validation") {
    CHECK_THROWS_AS(validate_apparatus(ApparatusParams{0.0}), InvalidRangeError);
    CHECK_THROWS_AS(validate_apparatus(ApparatusParams{-1.0}), InvalidRangeError);
}

TEST_CASE("pointer grids that miss the state raise a coverage error") {
    const WaveFunction wf = build_gaussian_packet({1.0, 0.0, 0.0});
    const GridSpec tiny1 = make_grid(-0.3, 0.3, 33);
    const GridSpec tiny2 = make_grid(-0.3, 0.3, 33);
    CHECK_THROWS_AS(joint_distribution(wf, ApparatusParams{1.0}, tiny1, tiny2), CoverageError);
}

// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

double density_mean(const Density1D& d) {
    std::vector<double> tmp(d.values.size());
    for (std::size_t k = 0; k < d.values.size(); ++k)
        tmp[k] = d.grid.point(static_cast<int>(k)) * d.values[k];
    return integrate(tmp, d.grid) / integrate(d.values, d.grid);
}

double density_sd(const Density1D& d, double mean) {
    std::vector<double> tmp(d.values.size());
    for (std::size_t k = 0; k < d.values.size(); ++k) {
        const double x = d.grid.point(static_cast<int>(k)) - mean;
        tmp[k] = x * x * d.values[k];
    }
    return std::sqrt(std::max(integrate(tmp, d.grid) / integrate(d.values, d.grid), 0.0));
}

// Quantile-match one marginal against the other: for each kept node of the
// from-side CDF, root-solve the to-side CDF interpolant. Inverting the
// forward interpolant keeps the curve accurate through density nodes.
MonotoneMap couple(const MonotoneMap& from_cdf, const MonotoneMap& to_cdf,
                   const Density1D& from_density, const Density1D& to_density, bool flip) {
    std::vector<double> xs, ys, slopes;
    const auto in = from_cdf.inputs();
    const auto uu = from_cdf.outputs();
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t k = 0; k < in.size(); ++k) {
        const double u = flip ? 1.0 - uu[k] : uu[k];
        if (u <= to_cdf.output_at_min() || u >= to_cdf.output_at_max()) continue;
        const double y = solve_quantile(to_cdf, u);
        if (have_prev) {
            const bool fwd = flip ? y < prev : y > prev;
            if (!fwd) continue;
        }
        const double fq = interp_density(from_density, in[k]);
        const double fp = interp_density(to_density, y);
        xs.push_back(in[k]);
        ys.push_back(y);
        slopes.push_back(fp > 1e-30 ? (flip ? -1.0 : 1.0) * fq / fp
                                    : std::numeric_limits<double>::quiet_NaN());
        prev = y;
        have_prev = true;
    }
    if (xs.size() < 2) throw DegenerateDensityError("transport: coupled support too narrow");
    return MonotoneMap(std::move(xs), std::move(ys), std::move(slopes), {},
                       /*cap_provided_slopes=*/false);
}

}  // namespace

TransportCurve build_transport_curve(const WaveFunction& wf, Epsilon epsilon) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    Density1D fq{pos.grid, probability_density(pos)};
    Density1D fp{mom.grid, probability_density(mom)};
    if (!(integrate(fq.values, fq.grid) > 0.0) || !(integrate(fp.values, fp.grid) > 0.0))
        throw DegenerateDensityError("build_transport_curve: marginal without mass");

    MonotoneMap cdf_q = cdf_map(fq.values, fq.grid);
    MonotoneMap cdf_p = cdf_map(fp.values, fp.grid);

    const bool flip = epsilon == Epsilon::minus;
    TransportCurve curve{epsilon,
                         couple(cdf_q, cdf_p, fq, fp, flip),
                         couple(cdf_p, cdf_q, fp, fq, flip),
                         std::move(cdf_q),
                         std::move(fq),
                         std::move(fp),
                         0.0,
                         0.0};
    curve.mean_q = density_mean(curve.source);
    curve.mean_p = density_mean(curve.target);
    return curve;
}

double causal_conditional(const TransportCurve& curve, Axis axis, double value) {
    const MonotoneMap& map = axis == Axis::given_q ? curve.q_to_p : curve.p_to_q;
    if (value < map.input_min() || value > map.input_max())
        throw OutOfSupportError("causal_conditional: " + std::to_string(value) +
                                " outside the curve support");
    return map.eval(value);
}

double causal_global(const TransportCurve& curve) {
    std::vector<double> integrand(curve.source.values.size());
    for (std::size_t k = 0; k < integrand.size(); ++k) {
        const double q = curve.source.grid.point(static_cast<int>(k));
        integrand[k] = q * curve.q_to_p.eval(q) * curve.source.values[k];
    }
    return 2.0 * integrate(integrand, curve.source.grid) - 2.0 * curve.mean_q * curve.mean_p;
}

CorrelationReport correlationless_reference(const WaveFunction& wf) {
    const WaveFunction pos = to_representation(wf, Representation::position);
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const Density1D fq{pos.grid, probability_density(pos)};
    const Density1D fp{mom.grid, probability_density(mom)};
    const double mean_q = density_mean(fq);
    const double mean_p = density_mean(fp);

    CorrelationReport rep;
    rep.method = "correlationless";
    rep.moments = MomentReport{mean_q, mean_p, density_sd(fq, mean_q), density_sd(fp, mean_p)};
    rep.global = 2.0 * mean_q * mean_p - 2.0 * mean_q * mean_p;  // product density
    auto fill = [](const Density1D& d, double constant, LocalCurveSamples& out) {
        double peak = 0.0;
        for (double v : d.values) peak = std::max(peak, v);
        for (std::size_t k = 0; k < d.values.size(); ++k) {
            if (d.values[k] < kSupportThreshold * peak) continue;
            out.at.push_back(d.grid.point(static_cast<int>(k)));
            out.mean.push_back(constant);
        }
    };
    fill(fq, mean_p, rep.p_given_q);
    fill(fp, mean_q, rep.q_given_p);
    return rep;
}

CausalCombo fit_convex_combination(const WaveFunction& wf) {
    CausalCombo combo{build_transport_curve(wf, Epsilon::plus),
                      build_transport_curve(wf, Epsilon::minus), 0.5, 0.5, 0.0};
    combo.quantum_global = global_correlation(wf);
    const double g_plus = causal_global(combo.plus);
    const double g_minus = causal_global(combo.minus);

    // lambda_+ g_+ + lambda_- g_- = quantum global. For marginals symmetric
    // about their means g_- = -g_+ and this reduces to
    // lambda_+ - lambda_- = quantum / g_+.
    const double den = g_plus - g_minus;
    if (std::abs(den) < 1e-10) {
        if (std::abs(combo.quantum_global - g_plus) < 1e-10) return combo;  // 0/0: lambda = 1/2
        throw InfeasibleCombinationError(
            "fit_convex_combination: both orientations give the same global correlation "
            "but the quantum value differs",
            std::numeric_limits<double>::infinity());
    }
    double lambda_plus = (combo.quantum_global - g_minus) / den;
    if (lambda_plus < -1e-12 || lambda_plus > 1.0 + 1e-12)
        throw InfeasibleCombinationError(
            "fit_convex_combination: quantum global correlation " +
                std::to_string(combo.quantum_global) + " lies outside the causal range [" +
                std::to_string(g_minus) + ", " + std::to_string(g_plus) + "]",
            2.0 * lambda_plus - 1.0);
    lambda_plus = std::clamp(lambda_plus, 0.0, 1.0);
    combo.lambda_plus = lambda_plus;
    combo.lambda_minus = 1.0 - lambda_plus;
    return combo;
}

CausalCombo arithmetic_mean_combo(const WaveFunction& wf) {
    CausalCombo combo{build_transport_curve(wf, Epsilon::plus),
                      build_transport_curve(wf, Epsilon::minus), 0.5, 0.5, 0.0};
    combo.quantum_global = global_correlation(wf);
    return combo;
}

double combo_conditional(const CausalCombo& combo, Axis axis, double value) {
    return combo.lambda_plus * causal_conditional(combo.plus, axis, value) +
           combo.lambda_minus * causal_conditional(combo.minus, axis, value);
}

double combo_global(const CausalCombo& combo) {
    return combo.lambda_plus * causal_global(combo.plus) +
           combo.lambda_minus * causal_global(combo.minus);
}

CorrelationReport combo_correlations(const CausalCombo& combo) {
    CorrelationReport rep;
    rep.method = "causal_combo";
    const Density1D& fq = combo.plus.source;
    const Density1D& fp = combo.plus.target;
    const double mean_q = combo.plus.mean_q;
    const double mean_p = combo.plus.mean_p;
    rep.moments = MomentReport{mean_q, mean_p, density_sd(fq, mean_q), density_sd(fp, mean_p)};
    rep.global = combo_global(combo);

    auto fill = [&](const Density1D& d, Axis axis, LocalCurveSamples& out) {
        double peak = 0.0;
        for (double v : d.values) peak = std::max(peak, v);
        const MonotoneMap& mp = axis == Axis::given_q ? combo.plus.q_to_p : combo.plus.p_to_q;
        const MonotoneMap& mm = axis == Axis::given_q ? combo.minus.q_to_p : combo.minus.p_to_q;
        for (std::size_t k = 0; k < d.values.size(); ++k) {
            if (d.values[k] < kSupportThreshold * peak) continue;
            const double x = d.grid.point(static_cast<int>(k));
            if (x < mp.input_min() || x > mp.input_max()) continue;
            if (x < mm.input_min() || x > mm.input_max()) continue;
            out.at.push_back(x);
            out.mean.push_back(combo.lambda_plus * mp.eval(x) + combo.lambda_minus * mm.eval(x));
        }
    };
    fill(fq, Axis::given_q, rep.p_given_q);
    fill(fp, Axis::given_p, rep.q_given_p);
    return rep;
}

double pushforward_quantile_distance(const TransportCurve& curve, int n_probe) {
    const MonotoneMap quant_q = inverse_cdf(curve.source.values, curve.source.grid);
    const MonotoneMap quant_p = inverse_cdf(curve.target.values, curve.target.grid);
    const bool flip = curve.epsilon == Epsilon::minus;
    double sup = 0.0;
    for (int i = 0; i < n_probe; ++i) {
        const double u = (i + 0.5) / n_probe;
        const double uq = flip ? 1.0 - u : u;
        if (uq <= quant_q.input_min() || uq >= quant_q.input_max()) continue;
        if (u <= quant_p.input_min() || u >= quant_p.input_max()) continue;
        const double q = quant_q.eval(uq);
        if (q < curve.q_to_p.input_min() || q > curve.q_to_p.input_max()) continue;
        sup = std::max(sup, std::abs(curve.q_to_p.eval(q) - quant_p.eval(u)));
    }
    return sup / curve.target.grid.step();
}

}  // namespace qcorr

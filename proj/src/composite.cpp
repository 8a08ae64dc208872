// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/composite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcorr/errors.hpp"
#include "qcorr/hermite.hpp"

namespace qcorr {

namespace {

WaveFunction gaussian_position_state(double alpha, double center, int n_points,
                                     const char* who) {
    if (!(alpha > 0.0)) throw InvalidRangeError(std::string(who) + ": alpha must be positive");
    const double width = std::sqrt(alpha / 2.0);
    const GridSpec grid =
        make_grid(center - 8.0 * (width + 1.0), center + 8.0 * (width + 1.0), n_points);
    const double pref = std::pow(std::numbers::pi * alpha, -0.25);
    std::vector<cplx> amp(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double x = grid.point(k);
        amp[static_cast<std::size_t>(k)] = pref * std::exp(-(x - center) * (x - center) / (2.0 * alpha));
    }
    return build_custom(std::move(amp), grid, Representation::position);
}

}  // namespace

EprFactors build_epr_state(const EPRParams& params, int n_points) {
    WaveFunction phi1 = gaussian_position_state(params.alpha1, params.q0, n_points, "build_epr_state");
    WaveFunction phi2t = gaussian_position_state(params.alpha2, params.P0, n_points, "build_epr_state");
    phi2t.rep = Representation::momentum;  // same Gaussian profile, momentum variable
    return {std::move(phi1), std::move(phi2t)};
}

TwoModeProductDensity build_epr_density(const EPRParams& params, int n_points) {
    EprFactors f = build_epr_state(params, n_points);
    CollectiveFactor a{fit_convex_combination(f.phi1), {1.0, -1.0}, {0.5, -0.5},
                       "q1-q2 | (p1-p2)/2"};
    CollectiveFactor b{fit_convex_combination(f.phi2_tilde), {0.5, 0.5}, {1.0, 1.0},
                       "(q1+q2)/2 | p1+p2"};
    return TwoModeProductDensity{std::move(a), std::move(b), "epr"};
}

TwoModeProductDensity build_entangled_coherent_density(int m, int n, cplx alpha, cplx beta,
                                                       double omega, double t0, int n_points) {
    if (m < 0 || m > kMaxHermiteOrder || n < 0 || n > kMaxHermiteOrder)
        throw OverflowGuardError("build_entangled_coherent_density: Fock index outside range");
    auto factor_state = [&](int order, cplx displacement) {
        GeneralizedCoherentParams p;
        p.n = order;
        p.A = std::abs(displacement);
        p.omega = omega;
        p.t0 = t0;
        // alpha_c = A exp(-i(omega t0 + theta)) must reproduce `displacement`.
        p.theta = p.A > 0.0 ? -std::arg(displacement) - omega * t0 : 0.0;
        return build_generalized_coherent(p, std::nullopt, n_points);
    };
    const double r = 1.0 / std::sqrt(2.0);
    CollectiveFactor a{arithmetic_mean_combo(factor_state(m, alpha)), {r, r}, {r, r},
                       "(q1+q2)/sqrt2 | (p1+p2)/sqrt2"};
    CollectiveFactor b{arithmetic_mean_combo(factor_state(n, beta)), {r, -r}, {r, -r},
                       "(q1-q2)/sqrt2 | (p1-p2)/sqrt2"};
    return TwoModeProductDensity{std::move(a), std::move(b), "entangled-coherent"};
}

const char* pair_name(PairId pair) {
    switch (pair) {
        case PairId::qdiff_qmean: return "qdiff-qmean";
        case PairId::qdiff_ptotal: return "qdiff-ptotal";
        case PairId::qmean_pdiff: return "qmean-pdiff";
        case PairId::ptotal_pdiffhalf: return "ptotal-pdiffhalf";
    }
    return "?";
}

PairId parse_pair(const std::string& name) {
    for (PairId p : kCommutingPairs)
        if (name == pair_name(p)) return p;
    throw UnsupportedPairError("unknown pair '" + name + "'; supported: qdiff-qmean, qdiff-ptotal, "
                               "qmean-pdiff, ptotal-pdiffhalf");
}

namespace {

struct PairCoordinate {
    bool is_position;
    std::array<double, 2> coeff;
    const char* name;
};

std::array<PairCoordinate, 2> pair_coordinates(PairId pair) {
    switch (pair) {
        case PairId::qdiff_qmean:
            return {PairCoordinate{true, {1.0, -1.0}, "q1-q2"},
                    PairCoordinate{true, {0.5, 0.5}, "(q1+q2)/2"}};
        case PairId::qdiff_ptotal:
            return {PairCoordinate{true, {1.0, -1.0}, "q1-q2"},
                    PairCoordinate{false, {1.0, 1.0}, "p1+p2"}};
        case PairId::qmean_pdiff:
            return {PairCoordinate{true, {0.5, 0.5}, "(q1+q2)/2"},
                    PairCoordinate{false, {1.0, -1.0}, "p1-p2"}};
        case PairId::ptotal_pdiffhalf:
            return {PairCoordinate{false, {1.0, 1.0}, "p1+p2"},
                    PairCoordinate{false, {0.5, -0.5}, "(p1-p2)/2"}};
    }
    throw UnsupportedPairError("pair_coordinates: bad pair id");
}

// Which factor carries this coordinate, and with what scale. The
// coordinate must be parallel to the factor's own axis of the same kind.
struct MatchedAxis {
    const CollectiveFactor* factor;
    bool is_position;
    double scale;
    const char* name;
};

MatchedAxis match_axis(const TwoModeProductDensity& density, const PairCoordinate& coord) {
    for (const CollectiveFactor* f : {&density.factor_a, &density.factor_b}) {
        const std::array<double, 2>& axis = coord.is_position ? f->pos_coeff : f->mom_coeff;
        const double cross = coord.coeff[0] * axis[1] - coord.coeff[1] * axis[0];
        const double dot = coord.coeff[0] * axis[0] + coord.coeff[1] * axis[1];
        const double n2 = axis[0] * axis[0] + axis[1] * axis[1];
        if (std::abs(cross) < 1e-12 && std::abs(dot) > 1e-12)
            return {f, coord.is_position, dot / n2, coord.name};
    }
    throw UnsupportedPairError(std::string("pair coordinate ") + coord.name +
                               " is not carried by a single factor of this density");
}

struct Marginal1D {
    GridSpec grid;
    std::vector<double> causal;
    std::vector<double> quantum;
};

// 1D density of scale * (factor axis variable), causal side via the
// transport curves, quantum side from the factor marginal densities.
Marginal1D axis_marginal(const MatchedAxis& m, int n_axis) {
    const CausalCombo& combo = m.factor->combo;
    const Density1D& base = m.is_position ? combo.plus.source : combo.plus.target;
    const double mean = m.is_position ? combo.plus.mean_q : combo.plus.mean_p;
    double peak_sd = 0.0;
    {
        std::vector<double> tmp(base.values.size());
        for (std::size_t k = 0; k < base.values.size(); ++k) {
            const double x = base.grid.point(static_cast<int>(k)) - mean;
            tmp[k] = x * x * base.values[k];
        }
        peak_sd = std::sqrt(std::max(integrate(tmp, base.grid), 0.0));
    }
    const double c = m.scale;
    const double half = 8.0 * std::abs(c) * (peak_sd + 0.25);
    Marginal1D out;
    out.grid = make_grid(c * mean - half, c * mean + half, n_axis);
    out.causal.resize(static_cast<std::size_t>(n_axis));
    out.quantum.resize(static_cast<std::size_t>(n_axis));
    for (int i = 0; i < n_axis; ++i) {
        const double z = out.grid.point(i);
        const double x = z / c;
        const double quantum = interp_density(base, x) / std::abs(c);
        double causal;
        if (m.is_position) {
            // The q marginal of every combo is the source density itself.
            causal = quantum;
        } else {
            causal = pushforward_density(combo, x) / std::abs(c);
        }
        out.causal[static_cast<std::size_t>(i)] = causal;
        out.quantum[static_cast<std::size_t>(i)] = quantum;
    }
    return out;
}

}  // namespace

double pushforward_density(const CausalCombo& combo, double p) {
    auto push_cdf = [&](double pp) {
        auto one = [&](const TransportCurve& c) {
            const MonotoneMap& inv = c.p_to_q;
            double q;
            if (pp < inv.input_min())
                q = inv.output_at_min();
            else if (pp > inv.input_max())
                q = inv.output_at_max();
            else
                q = inv.eval(pp);
            double u;
            if (q <= c.source_cdf.input_min())
                u = 0.0;
            else if (q >= c.source_cdf.input_max())
                u = 1.0;
            else
                u = c.source_cdf.eval(q);
            // P(Pi(X) <= p) is F_q at the preimage for the increasing curve
            // and 1 - F_q for the decreasing one.
            return c.epsilon == Epsilon::plus ? u : 1.0 - u;
        };
        double cp = one(combo.plus);
        double cm = one(combo.minus);
        if (pp < combo.plus.p_to_q.input_min()) cp = 0.0;
        if (pp > combo.plus.p_to_q.input_max()) cp = 1.0;
        if (pp < combo.minus.p_to_q.input_min()) cm = 0.0;
        if (pp > combo.minus.p_to_q.input_max()) cm = 1.0;
        return combo.lambda_plus * cp + combo.lambda_minus * cm;
    };
    const double delta = combo.plus.target.grid.step() / 2.0;
    const double d = (-push_cdf(p + 2.0 * delta) + 8.0 * push_cdf(p + delta) -
                      8.0 * push_cdf(p - delta) + push_cdf(p - 2.0 * delta)) /
                     (12.0 * delta);
    return d > 0.0 ? d : 0.0;
}

PairMarginal pair_marginal(const TwoModeProductDensity& density, PairId pair, int n_axis) {
    const auto coords = pair_coordinates(pair);
    const MatchedAxis m1 = match_axis(density, coords[0]);
    const MatchedAxis m2 = match_axis(density, coords[1]);
    if (m1.factor == m2.factor)
        throw UnsupportedPairError("pair marginal needs one coordinate from each factor");
    const Marginal1D a = axis_marginal(m1, n_axis);
    const Marginal1D b = axis_marginal(m2, n_axis);
    PairMarginal out;
    out.grid1 = a.grid;
    out.grid2 = b.grid;
    out.coord1 = coords[0].name;
    out.coord2 = coords[1].name;
    out.values.resize(static_cast<std::size_t>(n_axis) * static_cast<std::size_t>(n_axis));
    for (int i = 0; i < n_axis; ++i)
        for (int j = 0; j < n_axis; ++j)
            out.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_axis) +
                       static_cast<std::size_t>(j)] =
                a.causal[static_cast<std::size_t>(i)] * b.causal[static_cast<std::size_t>(j)];
    return out;
}

PairCheck verify_pair_marginal(const TwoModeProductDensity& density, PairId pair, int n_axis) {
    const auto coords = pair_coordinates(pair);
    const MatchedAxis m1 = match_axis(density, coords[0]);
    const MatchedAxis m2 = match_axis(density, coords[1]);
    if (m1.factor == m2.factor)
        throw UnsupportedPairError("pair marginal needs one coordinate from each factor");
    const Marginal1D a = axis_marginal(m1, n_axis);
    const Marginal1D b = axis_marginal(m2, n_axis);

    PairCheck check;
    check.causal.grid1 = check.quantum.grid1 = a.grid;
    check.causal.grid2 = check.quantum.grid2 = b.grid;
    check.causal.coord1 = check.quantum.coord1 = coords[0].name;
    check.causal.coord2 = check.quantum.coord2 = coords[1].name;
    const std::size_t n = static_cast<std::size_t>(n_axis);
    check.causal.values.resize(n * n);
    check.quantum.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double vc = a.causal[i] * b.causal[j];
            const double vq = a.quantum[i] * b.quantum[j];
            check.causal.values[i * n + j] = vc;
            check.quantum.values[i * n + j] = vq;
            check.sup_residual = std::max(check.sup_residual, std::abs(vc - vq));
        }
    }
    return check;
}

}  // namespace qcorr

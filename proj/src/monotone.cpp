// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

// Shape-preserving slope estimates (Fritsch-Carlson style PCHIP).
std::vector<double> default_slopes(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<double> m(n, 0.0);
    if (n == 2) {
        const double d = (ys[1] - ys[0]) / (xs[1] - xs[0]);
        m[0] = m[1] = d;
        return m;
    }
    auto h = [&](std::size_t k) { return xs[k + 1] - xs[k]; };
    auto d = [&](std::size_t k) { return (ys[k + 1] - ys[k]) / h(k); };
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dl = d(k - 1), dr = d(k);
        if (dl * dr <= 0.0) {
            m[k] = 0.0;
        } else {
            const double w1 = 2.0 * h(k) + h(k - 1);
            const double w2 = h(k) + 2.0 * h(k - 1);
            m[k] = (w1 + w2) / (w1 / dl + w2 / dr);
        }
    }
    auto end_slope = [&](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    m[0] = end_slope(h(0), h(1), d(0), d(1));
    m[n - 1] = end_slope(h(n - 2), h(n - 3), d(n - 2), d(n - 3));
    return m;
}

}  // namespace

MonotoneMap::MonotoneMap(std::vector<double> xs, std::vector<double> ys,
                         std::vector<double> slopes, std::vector<std::uint8_t> linear_intervals,
                         bool cap_provided_slopes)
    : xs_(std::move(xs)), ys_(std::move(ys)), lin_(std::move(linear_intervals)) {
    const std::size_t n = xs_.size();
    if (n < 2 || ys_.size() != n)
        throw InvalidRangeError("MonotoneMap: need >= 2 nodes with matching values");
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (!(xs_[k + 1] > xs_[k]))
            throw InvalidRangeError("MonotoneMap: inputs must be strictly increasing");
    const bool inc = ys_[1] > ys_[0];
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const bool step_inc = ys_[k + 1] > ys_[k];
        if (ys_[k + 1] == ys_[k] || step_inc != inc)
            throw InvalidRangeError("MonotoneMap: outputs must be strictly monotone");
    }
    orient_ = inc ? Orientation::increasing : Orientation::decreasing;
    if (lin_.empty()) lin_.assign(n - 1, 0);
    if (lin_.size() != n - 1) throw LengthMismatchError("MonotoneMap: linear-interval flags");

    std::vector<double> est;  // computed lazily if any slope is NaN
    ms_.assign(n, 0.0);
    if (slopes.empty()) slopes.assign(n, std::numeric_limits<double>::quiet_NaN());
    if (slopes.size() != n) throw LengthMismatchError("MonotoneMap: slope vector");
    for (std::size_t k = 0; k < n; ++k) {
        double m = slopes[k];
        bool cap_this = cap_provided_slopes;
        if (std::isnan(m)) {
            if (est.empty()) est = default_slopes(xs_, ys_);
            m = est[k];
            cap_this = true;
        }
        // Fritsch-Carlson cap: |m| <= 3 * min adjacent secant magnitude.
        double cap = std::numeric_limits<double>::infinity();
        if (cap_this) {
            if (k > 0)
                cap = std::min(cap, 3.0 * std::abs((ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1])));
            if (k + 1 < n)
                cap = std::min(cap, 3.0 * std::abs((ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k])));
        }
        const double sign = inc ? 1.0 : -1.0;
        m *= sign;  // work in the increasing frame
        if (m < 0.0) m = 0.0;
        if (m > cap) m = cap;
        ms_[k] = sign * m;
    }
}

double MonotoneMap::eval(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double h = xs_[k + 1] - xs_[k];
    const double t = (x - xs_[k]) / h;
    if (lin_[k]) return ys_[k] + t * (ys_[k + 1] - ys_[k]);
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * ys_[k] + (t3 - 2.0 * t2 + t) * h * ms_[k] +
           (-2.0 * t3 + 3.0 * t2) * ys_[k + 1] + (t3 - t2) * h * ms_[k + 1];
}

double MonotoneMap::derivative(double x) const {
    if (x <= xs_.front()) x = xs_.front();
    if (x >= xs_.back()) x = xs_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (k + 1 >= xs_.size()) k = xs_.size() - 2;
    const double h = xs_[k + 1] - xs_[k];
    const double t = (x - xs_[k]) / h;
    if (lin_[k]) return (ys_[k + 1] - ys_[k]) / h;
    const double t2 = t * t;
    return ((6.0 * t2 - 6.0 * t) * ys_[k] + (3.0 * t2 - 4.0 * t + 1.0) * h * ms_[k] +
            (-6.0 * t2 + 6.0 * t) * ys_[k + 1] + (3.0 * t2 - 2.0 * t) * h * ms_[k + 1]) /
           h;
}

namespace {

struct CdfData {
    std::vector<double> u;       // normalized CDF at kept grid nodes
    std::vector<double> x;       // kept grid nodes
    std::vector<double> f;       // density at kept nodes (normalized)
    std::vector<std::uint8_t> lin;  // interval had dropped (tied) nodes
};

CdfData build_cdf(std::span<const double> density, const GridSpec& grid) {
    if (static_cast<int>(density.size()) != grid.n_points)
        throw LengthMismatchError("cdf: density length mismatch");
    double max_f = 0.0;
    for (double v : density) max_f = std::max(max_f, v);
    if (max_f <= 0.0) throw DegenerateDensityError("cdf: density has no mass");
    std::vector<double> f(density.begin(), density.end());
    for (double& v : f) {
        if (v < 0.0) {
            if (v < -1e-12 * max_f)
                throw NonNormalizedDensityError("cdf: density has negative values");
            v = 0.0;
        }
    }
    const double total = integrate(f, grid);
    if (std::abs(total - 1.0) > 1e-6)
        throw NonNormalizedDensityError("cdf: density integrates to " + std::to_string(total));

    std::vector<double> cum = cumulative_integral(f, grid);
    for (std::size_t k = 1; k < cum.size(); ++k) cum[k] = std::max(cum[k], cum[k - 1]);
    const double norm = cum.back();
    if (norm <= 0.0) throw DegenerateDensityError("cdf: zero cumulative mass");

    CdfData out;
    double last_u = -1.0;
    bool dropped_since_last = false;
    for (int k = 0; k < grid.n_points; ++k) {
        const double u = cum[static_cast<std::size_t>(k)] / norm;
        if (u < kCdfTrim || u > 1.0 - kCdfTrim) continue;
        if (u <= last_u + 1e-15) {
            dropped_since_last = true;
            continue;
        }
        if (!out.u.empty()) out.lin.push_back(dropped_since_last ? 1 : 0);
        dropped_since_last = false;
        out.u.push_back(u);
        out.x.push_back(grid.point(k));
        out.f.push_back(f[static_cast<std::size_t>(k)] / norm);
        last_u = u;
    }
    if (out.u.size() < 2)
        throw DegenerateDensityError("cdf: support too narrow for this grid");
    return out;
}

}  // namespace

MonotoneMap inverse_cdf(std::span<const double> density, const GridSpec& grid) {
    CdfData c = build_cdf(density, grid);
    std::vector<double> slopes(c.u.size());
    for (std::size_t k = 0; k < c.u.size(); ++k)
        slopes[k] = c.f[k] > 1e-30 ? 1.0 / c.f[k] : std::numeric_limits<double>::quiet_NaN();
    return MonotoneMap(std::move(c.u), std::move(c.x), std::move(slopes), std::move(c.lin));
}

MonotoneMap cdf_map(std::span<const double> density, const GridSpec& grid) {
    CdfData c = build_cdf(density, grid);
    return MonotoneMap(std::move(c.x), std::move(c.u), std::move(c.f), std::move(c.lin),
                       /*cap_provided_slopes=*/false);
}

double solve_quantile(const MonotoneMap& cdf, double u) {
    if (!cdf.increasing()) throw InvalidRangeError("solve_quantile: cdf must be increasing");
    if (u <= cdf.output_at_min()) return cdf.input_min();
    if (u >= cdf.output_at_max()) return cdf.input_max();
    double lo = cdf.input_min(), hi = cdf.input_max();
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = cdf.eval(x) - u;
        if (fx > 0.0)
            hi = x;
        else
            lo = x;
        if (hi - lo < 1e-15 * (std::abs(hi) + std::abs(lo) + 1.0)) break;
        const double d = cdf.derivative(x);
        double next = d > 0.0 ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-16 * (std::abs(x) + 1.0)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

}  // namespace qcorr

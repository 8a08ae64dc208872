// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qcorr/grid.hpp"

namespace qcorr {

// Strictly monotone piecewise-cubic Hermite interpolant. Node slopes are
// Fritsch-Carlson limited so the interpolant never over/undershoots;
// intervals flagged `linear` (tie regions of a CDF) interpolate linearly.
// Evaluation clamps to the end values outside the input range.
class MonotoneMap {
  public:
    enum class Orientation { increasing, decreasing };

    // slopes: dy/dx at nodes; NaN entries request a shape-preserving
    // finite-difference estimate. Estimated slopes are always
    // Fritsch-Carlson capped; provided ones are capped too unless
    // cap_provided_slopes is false (exact derivatives of a smooth monotone
    // function, e.g. a CDF's density values, interpolate better uncapped).
    MonotoneMap(std::vector<double> xs, std::vector<double> ys, std::vector<double> slopes = {},
                std::vector<std::uint8_t> linear_intervals = {},
                bool cap_provided_slopes = true);

    double eval(double x) const;
    double derivative(double x) const;

    Orientation orientation() const { return orient_; }
    bool increasing() const { return orient_ == Orientation::increasing; }
    double input_min() const { return xs_.front(); }
    double input_max() const { return xs_.back(); }
    double output_at_min() const { return ys_.front(); }
    double output_at_max() const { return ys_.back(); }
    std::size_t size() const { return xs_.size(); }
    std::span<const double> inputs() const { return xs_; }
    std::span<const double> outputs() const { return ys_; }

  private:
    std::vector<double> xs_, ys_, ms_;
    std::vector<std::uint8_t> lin_;
    Orientation orient_;
};

// Quantile map u in (0,1) -> x of a normalized density sampled on a grid.
// Cumulative quadrature, trimmed to [kCdfTrim, 1 - kCdfTrim], with analytic
// node slopes 1/f where the density allows.
MonotoneMap inverse_cdf(std::span<const double> density, const GridSpec& grid);

// Forward CDF x -> u over the same trimmed window, analytic slopes f(x).
MonotoneMap cdf_map(std::span<const double> density, const GridSpec& grid);

// x with cdf(x) = u by bisection + Newton on the interpolant. Inverting
// the forward interpolant stays accurate through density nodes, where a
// tabulated quantile has a cube-root singularity.
double solve_quantile(const MonotoneMap& cdf, double u);

inline constexpr double kCdfTrim = 1e-12;

}  // namespace qcorr

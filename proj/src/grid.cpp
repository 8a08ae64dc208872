// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

GridSpec make_grid(double x_min, double x_max, int n_points) {
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw InvalidRangeError("make_grid: need finite x_max > x_min");
    // Physics-facing constructors enforce >= 16 points; three is the bare
    // minimum any quadrature rule here can handle.
    if (n_points < 3)
        throw InvalidRangeError("make_grid: n_points must be at least 3, got " +
                                std::to_string(n_points));
    return GridSpec{x_min, x_max, n_points};
}

std::vector<double> quadrature_weights(const GridSpec& grid) {
    const int n = grid.n_points;
    const double h = grid.step();
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);

    auto add_simpson = [&](int lo, int hi, double scale) {
        // [lo, hi] must hold an even number of panels.
        w[static_cast<std::size_t>(lo)] += scale * h / 3.0;
        w[static_cast<std::size_t>(hi)] += scale * h / 3.0;
        for (int k = lo + 1; k < hi; ++k)
            w[static_cast<std::size_t>(k)] += scale * h / 3.0 * ((k - lo) % 2 == 1 ? 4.0 : 2.0);
    };
    auto add_three_eighths = [&](int lo, double scale) {
        static const double c[4] = {1.0, 3.0, 3.0, 1.0};
        for (int k = 0; k < 4; ++k)
            w[static_cast<std::size_t>(lo + k)] += scale * 3.0 * h / 8.0 * c[k];
    };

    if (n % 2 == 1) {
        add_simpson(0, n - 1, 1.0);
    } else {
        // Average of the left- and right-anchored Simpson+3/8 variants;
        // keeps the weight vector symmetric.
        add_simpson(0, n - 4, 0.5);
        add_three_eighths(n - 4, 0.5);
        add_three_eighths(0, 0.5);
        add_simpson(3, n - 1, 0.5);
    }
    return w;
}

double integrate(std::span<const double> values, const GridSpec& grid) {
    if (static_cast<int>(values.size()) != grid.n_points)
        throw LengthMismatchError("integrate: " + std::to_string(values.size()) +
                                  " values on a " + std::to_string(grid.n_points) +
                                  "-point grid");
    const std::vector<double> w = quadrature_weights(grid);
    double acc = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) acc += w[k] * values[k];
    return acc;
}

double interp_density(std::span<const double> values, const GridSpec& grid, double x) {
    if (static_cast<int>(values.size()) != grid.n_points)
        throw LengthMismatchError("interp_density: length mismatch");
    if (x < grid.x_min || x > grid.x_max) return 0.0;
    const int n = grid.n_points;
    const double h = grid.step();
    int k = static_cast<int>(std::floor((x - grid.x_min) / h));
    k = std::max(1, std::min(k, n - 3));  // stencil k-1 .. k+2
    const double t = (x - grid.point(k)) / h;
    auto f = [&](int i) { return values[static_cast<std::size_t>(i)]; };
    // Lagrange cubic through the four surrounding nodes.
    const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    const double v = c0 * f(k - 1) + c1 * f(k) + c2 * f(k + 1) + c3 * f(k + 2);
    return v > 0.0 ? v : 0.0;
}

std::vector<double> cumulative_integral(std::span<const double> values, const GridSpec& grid) {
    const int n = grid.n_points;
    if (static_cast<int>(values.size()) != n)
        throw LengthMismatchError("cumulative_integral: length mismatch");
    if (n < 4) throw InvalidRangeError("cumulative_integral: need at least 4 points");
    const double h = grid.step();
    auto f = [&](int k) { return values[static_cast<std::size_t>(k)]; };

    std::vector<double> cum(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k + 1 < n; ++k) {
        double inc;
        if (k == 0)
            inc = h / 24.0 * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
        else if (k == n - 2)
            inc = h / 24.0 * (f(n - 4) - 5.0 * f(n - 3) + 19.0 * f(n - 2) + 9.0 * f(n - 1));
        else
            inc = h / 24.0 * (-f(k - 1) + 13.0 * f(k) + 13.0 * f(k + 1) - f(k + 2));
        cum[static_cast<std::size_t>(k + 1)] = cum[static_cast<std::size_t>(k)] + inc;
    }
    return cum;
}

}  // namespace qcorr

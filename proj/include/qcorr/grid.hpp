// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcorr {

// Uniform 1D grid, natural units (hbar = 1). Points are x_min + k*step.
struct GridSpec {
    double x_min = 0.0;
    double x_max = 0.0;
    int n_points = 0;

    double step() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
    double point(int k) const { return x_min + static_cast<double>(k) * step(); }
    bool contains(double x) const { return x >= x_min && x <= x_max; }
};

GridSpec make_grid(double x_min, double x_max, int n_points);

// Quadrature weights for the composite 4th-order rule on a uniform grid.
// Odd point counts use plain Simpson; even counts use the symmetrized
// Simpson + 3/8 blend so that symmetric integrands cancel exactly.
std::vector<double> quadrature_weights(const GridSpec& grid);

// Composite 4th-order quadrature of samples on the grid.
double integrate(std::span<const double> values, const GridSpec& grid);

// Running integral C(x_k) = int_{x_0}^{x_k} f, 4th order (sliding cubic
// panels). C.front() == 0.
std::vector<double> cumulative_integral(std::span<const double> values, const GridSpec& grid);

// Real-valued samples on a grid (densities, currents, marginals).
struct SampledFunction {
    GridSpec grid;
    std::vector<double> values;
};
using Density1D = SampledFunction;

// Cubic (4-point Lagrange) interpolation of nonnegative samples; zero
// outside the grid, clamped at zero.
double interp_density(std::span<const double> values, const GridSpec& grid, double x);
inline double interp_density(const Density1D& d, double x) {
    return interp_density(d.values, d.grid, x);
}

}  // namespace qcorr

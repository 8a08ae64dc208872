// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qcorr/grid.hpp"

namespace qcorr {

using cplx = std::complex<double>;

enum class Representation { position, momentum };

// Normalized pure state sampled on a uniform grid, in either the position
// or the momentum representation. Amplitudes must be negligible at the
// grid edges; constructors enforce this.
struct WaveFunction {
    GridSpec grid;
    std::vector<cplx> amp;
    Representation rep = Representation::position;
};

struct MomentReport {
    double mean_q = 0.0;
    double mean_p = 0.0;
    double delta_q = 0.0;
    double delta_p = 0.0;
};

// Normalizes a caller-supplied amplitude vector into a WaveFunction.
// Throws ZeroStateError for an all-zero input and EdgeLeakageError when
// the grid clips the state.
WaveFunction build_custom(std::vector<cplx> amplitudes, const GridSpec& grid, Representation rep);

// phi_tilde(p) = (2 pi)^{-1/2} int dq e^{-ipq} phi(q) and its inverse,
// evaluated by grid quadrature (exact to quadrature accuracy for states
// that decay inside their grids). Toggles the representation. The
// one-argument form picks a conjugate grid from finite-difference moment
// estimates; throws GridTooCoarseError if the result loses normalization
// by more than 1e-6.
WaveFunction fourier_transform(const WaveFunction& wf);
WaveFunction fourier_transform(const WaveFunction& wf, const GridSpec& target);

// Pass-through or transform so the result is in the requested representation.
WaveFunction to_representation(const WaveFunction& wf, Representation rep);

std::vector<double> probability_density(const WaveFunction& wf);
double norm_squared(const WaveFunction& wf);

// <q>, <p> and both dispersions; conjugate-side moments go through the
// transform.
MomentReport moments(const WaveFunction& wf);

// S_j = sum_k coeff_k exp(i * sign * t_j * s_k) for every target node t_j,
// with fixed summation order (phasor recurrences over the target index).
std::vector<cplx> oscillatory_sum(std::span<const cplx> coeff, const GridSpec& source,
                                  const GridSpec& target, double sign);

// Value and first derivative of the *other* representation at x, from the
// transform integral of wf's samples.
struct ValueDeriv {
    cplx value;
    cplx deriv;
};
ValueDeriv synthesize_conjugate(const WaveFunction& wf, double x);

// Same synthesis over a whole grid (two oscillatory sums).
struct GridSynthesis {
    std::vector<cplx> values;
    std::vector<cplx> derivs;
};
GridSynthesis synthesize_conjugate_grid(const WaveFunction& wf, const GridSpec& target);

}  // namespace qcorr

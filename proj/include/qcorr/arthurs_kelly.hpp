// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qcorr/quantum.hpp"
#include "qcorr/wavefunction.hpp"

namespace qcorr {

// Balance parameter of the joint measurement; b/sqrt(2) is the initial
// pointer-1 uncertainty. Small b favours position accuracy, large b
// momentum accuracy.
struct ApparatusParams {
    double b = 1.0;
};

enum class PointerAxis { given_x1, given_x2 };

// P(x1, x2) = |<phi_{b,x1,x2} | phi>|^2 / (2 pi) tabulated on a product
// grid, values row-major over (x1, x2). `mass` is the raw double integral;
// drift from 1 is reported, never renormalized away.
struct JointDistributionGrid {
    GridSpec x1_grid;
    GridSpec x2_grid;
    std::vector<double> values;
    double b = 0.0;
    double mass = 0.0;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(x2_grid.n_points) +
                      static_cast<std::size_t>(j)];
    }
};

struct HeterodyneSample {
    double x1;
    double x2;
};

struct Dispersions {
    double dx1;
    double dx2;
};

inline constexpr int kDefaultJointPoints = 257;

void validate_apparatus(const ApparatusParams& app);

// Pointer grids spanning mean +- 8 smeared widths.
GridSpec auto_x1_grid(const WaveFunction& wf, const ApparatusParams& app,
                      int n_points = kDefaultJointPoints);
GridSpec auto_x2_grid(const WaveFunction& wf, const ApparatusParams& app,
                      int n_points = kDefaultJointPoints);

// Overlap quadrature of the projector state against phi(q), row by row.
// Throws CoverageError if the grids trap less than 1 - 1e-4 of the mass.
JointDistributionGrid joint_distribution(const WaveFunction& wf, const ApparatusParams& app,
                                         const GridSpec& x1_grid, const GridSpec& x2_grid);
JointDistributionGrid joint_distribution(const WaveFunction& wf, const ApparatusParams& app,
                                         int n_points = kDefaultJointPoints);

// Numerically integrated pointer marginals of a tabulated joint.
std::pair<Density1D, Density1D> marginals(const JointDistributionGrid& joint);

// Direct 1D convolution: Gaussian kernel of width b against |phi(q)|^2 on
// the x1 axis, width 1/(2b) against |phit(p)|^2 on the x2 axis.
Density1D smeared_marginal(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis);
Density1D smeared_marginal(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                           const GridSpec& eval_grid);

// Conditional pointer mean through the reduced 1D formulas (smoothed
// current over smoothed density). Throws UnsupportedPointError below the
// support threshold.
double conditional_mean(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                        double value);

// Same ratio evaluated for every masked point of eval_grid.
LocalCorrelationCurve ak_local_curve(const WaveFunction& wf, const ApparatusParams& app,
                                     PointerAxis axis, const GridSpec& eval_grid);

// <2 x1 x2> - 2 <x1> <x2> by 2D quadrature over the joint.
double global_moment(const JointDistributionGrid& joint);
double global_moment(const WaveFunction& wf, const ApparatusParams& app,
                     int n_points = kDefaultJointPoints);

// Pointer dispersions from the joint's marginals.
Dispersions apparatus_dispersions(const JointDistributionGrid& joint);
Dispersions apparatus_dispersions(const WaveFunction& wf, const ApparatusParams& app,
                                  int n_points = kDefaultJointPoints);

// Convergence study of the conditional mean toward the exact local
// correlation as b runs through a schedule (decreasing for given_x1,
// increasing for given_x2). Reports a Richardson extrapolation from the
// last two entries assuming the leading quadratic error term.
struct LimitStudyRow {
    double b;
    double conditional;
    double deviation;
};
struct LimitStudy {
    PointerAxis axis;
    double value = 0.0;
    double exact = 0.0;
    std::vector<LimitStudyRow> rows;
    double extrapolated = 0.0;
    double extrapolated_deviation = 0.0;
    bool deviations_monotone = false;
};
LimitStudy limit_study(const WaveFunction& wf, PointerAxis axis, double value,
                       const std::vector<double>& b_schedule);

// Inverse-CDF sampling from the tabulated joint: x1 rows are drawn with
// their quadrature masses, x2 continuously from the row's inverse CDF.
// Deterministic for a given seed.
std::vector<HeterodyneSample> sample_heterodyne(const JointDistributionGrid& joint, long n,
                                                std::uint64_t seed);

struct BinSpec {
    double x1_min, x1_max;
    int n1;
    double x2_min, x2_max;
    int n2;
};
BinSpec bins_for(const JointDistributionGrid& joint, int n1 = 32, int n2 = 32);

struct BinStat {
    double center = 0.0;
    long count = 0;
    double mean = 0.0;
    double std_error = 0.0;
    bool flagged = false;  // too few samples; excluded from the curve
};
struct CorrelationEstimate {
    std::vector<BinStat> x2_given_x1;
    std::vector<BinStat> x1_given_x2;
    double mean_x1 = 0.0;
    double mean_x2 = 0.0;
    double mean_x1_se = 0.0;
    double mean_x2_se = 0.0;
    double global = 0.0;  // 2<x1 x2> - 2<x1><x2>
    double global_se = 0.0;
    long n = 0;
    std::uint64_t seed = 0;
};
CorrelationEstimate estimate_from_samples(const std::vector<HeterodyneSample>& samples,
                                          const BinSpec& bins, std::uint64_t seed = 0);

}  // namespace qcorr

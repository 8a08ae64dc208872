// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/arthurs_kelly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <thread>

#include "qcorr/errors.hpp"
#include "qcorr/monotone.hpp"
#include "qcorr/rng.hpp"

namespace qcorr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Static row partition over worker threads; each row writes a disjoint
// slice, so results are independent of the thread count.
template <typename Fn>
void parallel_rows(int n_rows, const Fn& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw < 2 || n_rows < 8) {
        for (int i = 0; i < n_rows; ++i) fn(i);
        return;
    }
    const unsigned n_threads = std::min<unsigned>(hw, 16);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([=]() {
            for (int i = static_cast<int>(t); i < n_rows; i += static_cast<int>(n_threads)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct MarginalMoments {
    double mean;
    double sd;
};

MarginalMoments density_moments(std::span<const double> dens, const GridSpec& grid) {
    const double mass = integrate(dens, grid);
    std::vector<double> tmp(dens.size());
    for (std::size_t k = 0; k < dens.size(); ++k) tmp[k] = grid.point(static_cast<int>(k)) * dens[k];
    const double mean = integrate(tmp, grid) / mass;
    for (std::size_t k = 0; k < dens.size(); ++k) {
        const double d = grid.point(static_cast<int>(k)) - mean;
        tmp[k] = d * d * dens[k];
    }
    const double var = integrate(tmp, grid) / mass;
    return {mean, std::sqrt(std::max(var, 0.0))};
}

}  // namespace

void validate_apparatus(const ApparatusParams& app) {
    if (!(app.b > 0.0) || !std::isfinite(app.b))
        throw InvalidRangeError("apparatus: balance parameter b must be positive and finite");
}

GridSpec auto_x1_grid(const WaveFunction& wf, const ApparatusParams& app, int n_points) {
    validate_apparatus(app);
    const MomentReport m = moments(wf);
    const double width = std::sqrt(m.delta_q * m.delta_q + app.b * app.b);
    return make_grid(m.mean_q - 8.0 * width, m.mean_q + 8.0 * width, n_points);
}

GridSpec auto_x2_grid(const WaveFunction& wf, const ApparatusParams& app, int n_points) {
    validate_apparatus(app);
    const MomentReport m = moments(wf);
    const double width = std::sqrt(m.delta_p * m.delta_p + 1.0 / (4.0 * app.b * app.b));
    return make_grid(m.mean_p - 8.0 * width, m.mean_p + 8.0 * width, n_points);
}

JointDistributionGrid joint_distribution(const WaveFunction& wf, const ApparatusParams& app,
                                         const GridSpec& x1_grid, const GridSpec& x2_grid) {
    validate_apparatus(app);
    const WaveFunction pos = to_representation(wf, Representation::position);
    const std::vector<double> w = quadrature_weights(pos.grid);
    const double b = app.b;
    const double pref = std::pow(kTwoPi * b * b, -0.25);

    JointDistributionGrid joint;
    joint.x1_grid = x1_grid;
    joint.x2_grid = x2_grid;
    joint.b = b;
    const std::size_t n2 = static_cast<std::size_t>(x2_grid.n_points);
    joint.values.assign(static_cast<std::size_t>(x1_grid.n_points) * n2, 0.0);

    parallel_rows(x1_grid.n_points, [&](int i) {
        const double x1 = x1_grid.point(i);
        std::vector<cplx> coeff(pos.amp.size());
        for (std::size_t k = 0; k < pos.amp.size(); ++k) {
            const double q = pos.grid.point(static_cast<int>(k));
            const double window = std::exp(-(x1 - q) * (x1 - q) / (4.0 * b * b));
            coeff[k] = pref * w[k] * window * pos.amp[k];
        }
        const std::vector<cplx> overlap = oscillatory_sum(coeff, pos.grid, x2_grid, -1.0);
        double* row = joint.values.data() + static_cast<std::size_t>(i) * n2;
        for (std::size_t j = 0; j < n2; ++j) row[j] = std::norm(overlap[j]) / kTwoPi;
    });

    const auto [p1, p2] = marginals(joint);
    joint.mass = integrate(p1.values, p1.grid);
    if (std::abs(joint.mass - 1.0) > 1e-4)
        throw CoverageError("joint_distribution: mass " + std::to_string(joint.mass) +
                            "; pointer grids do not cover the smeared state");
    return joint;
}

JointDistributionGrid joint_distribution(const WaveFunction& wf, const ApparatusParams& app,
                                         int n_points) {
    return joint_distribution(wf, app, auto_x1_grid(wf, app, n_points),
                              auto_x2_grid(wf, app, n_points));
}

std::pair<Density1D, Density1D> marginals(const JointDistributionGrid& joint) {
    const int n1 = joint.x1_grid.n_points;
    const int n2 = joint.x2_grid.n_points;
    const std::vector<double> w1 = quadrature_weights(joint.x1_grid);
    const std::vector<double> w2 = quadrature_weights(joint.x2_grid);
    Density1D p1{joint.x1_grid, std::vector<double>(static_cast<std::size_t>(n1), 0.0)};
    Density1D p2{joint.x2_grid, std::vector<double>(static_cast<std::size_t>(n2), 0.0)};
    for (int i = 0; i < n1; ++i) {
        const double* row = joint.values.data() + static_cast<std::size_t>(i) * n2;
        double acc = 0.0;
        for (int j = 0; j < n2; ++j) {
            acc += w2[static_cast<std::size_t>(j)] * row[j];
            p2.values[static_cast<std::size_t>(j)] += w1[static_cast<std::size_t>(i)] * row[j];
        }
        p1.values[static_cast<std::size_t>(i)] = acc;
    }
    return {std::move(p1), std::move(p2)};
}

namespace {

// Kernel widths from the apparatus: b on the position pointer, 1/(2b) on
// the momentum pointer.
double kernel_width(const ApparatusParams& app, PointerAxis axis) {
    return axis == PointerAxis::given_x1 ? app.b : 1.0 / (2.0 * app.b);
}

Density1D convolve_gaussian(std::span<const double> values, const GridSpec& source,
                            double sigma, const GridSpec& eval_grid) {
    const std::vector<double> w = quadrature_weights(source);
    const double pref = 1.0 / (sigma * std::sqrt(kTwoPi));
    Density1D out{eval_grid, std::vector<double>(static_cast<std::size_t>(eval_grid.n_points), 0.0)};
    for (int i = 0; i < eval_grid.n_points; ++i) {
        const double x = eval_grid.point(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k) {
            const double d = x - source.point(static_cast<int>(k));
            acc += w[k] * values[k] * std::exp(-d * d / (2.0 * sigma * sigma));
        }
        out.values[static_cast<std::size_t>(i)] = pref * acc;
    }
    return out;
}

struct SmearedRatio {
    Density1D numerator;    // smoothed current
    Density1D denominator;  // smoothed density (the smeared marginal)
};

SmearedRatio smeared_ratio(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                           const GridSpec& eval_grid) {
    validate_apparatus(app);
    const double sigma = kernel_width(app, axis);
    if (axis == PointerAxis::given_x1) {
        const WaveFunction pos = to_representation(wf, Representation::position);
        const SampledFunction j = position_current(pos);
        return {convolve_gaussian(j.values, pos.grid, sigma, eval_grid),
                convolve_gaussian(probability_density(pos), pos.grid, sigma, eval_grid)};
    }
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    const SampledFunction j = momentum_current(mom);
    return {convolve_gaussian(j.values, mom.grid, sigma, eval_grid),
            convolve_gaussian(probability_density(mom), mom.grid, sigma, eval_grid)};
}

GridSpec default_eval_grid(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                           int n_points) {
    return axis == PointerAxis::given_x1 ? auto_x1_grid(wf, app, n_points)
                                         : auto_x2_grid(wf, app, n_points);
}

}  // namespace

Density1D smeared_marginal(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                           const GridSpec& eval_grid) {
    validate_apparatus(app);
    const double sigma = kernel_width(app, axis);
    if (axis == PointerAxis::given_x1) {
        const WaveFunction pos = to_representation(wf, Representation::position);
        return convolve_gaussian(probability_density(pos), pos.grid, sigma, eval_grid);
    }
    const WaveFunction mom = to_representation(wf, Representation::momentum);
    return convolve_gaussian(probability_density(mom), mom.grid, sigma, eval_grid);
}

Density1D smeared_marginal(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis) {
    return smeared_marginal(wf, app, axis, default_eval_grid(wf, app, axis, 513));
}

double conditional_mean(const WaveFunction& wf, const ApparatusParams& app, PointerAxis axis,
                        double value) {
    validate_apparatus(app);
    const double sigma = kernel_width(app, axis);
    const bool x1_axis = axis == PointerAxis::given_x1;
    const WaveFunction host =
        to_representation(wf, x1_axis ? Representation::position : Representation::momentum);
    const SampledFunction cur = x1_axis ? position_current(host) : momentum_current(host);
    const std::vector<double> dens = probability_density(host);
    const std::vector<double> w = quadrature_weights(host.grid);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < dens.size(); ++k) {
        const double d = value - host.grid.point(static_cast<int>(k));
        const double kern = w[k] * std::exp(-d * d / (2.0 * sigma * sigma));
        num += kern * cur.values[k];
        den += kern * dens[k];
    }
    const Density1D full = smeared_marginal(wf, app, axis);
    double peak = 0.0;
    for (double v : full.values) peak = std::max(peak, v);
    const double pref = 1.0 / (sigma * std::sqrt(kTwoPi));
    if (pref * den < kSupportThreshold * peak)
        throw UnsupportedPointError("conditional_mean: marginal below threshold at " +
                                    std::to_string(value));
    return num / den;
}

LocalCorrelationCurve ak_local_curve(const WaveFunction& wf, const ApparatusParams& app,
                                     PointerAxis axis, const GridSpec& eval_grid) {
    const SmearedRatio r = smeared_ratio(wf, app, axis, eval_grid);
    double peak = 0.0;
    for (double v : r.denominator.values) peak = std::max(peak, v);
    LocalCorrelationCurve curve;
    curve.axis = axis == PointerAxis::given_x1 ? Axis::given_q : Axis::given_p;
    for (int i = 0; i < eval_grid.n_points; ++i) {
        const double den = r.denominator.values[static_cast<std::size_t>(i)];
        if (den < kSupportThreshold * peak) continue;
        curve.at.push_back(eval_grid.point(i));
        curve.mean.push_back(r.numerator.values[static_cast<std::size_t>(i)] / den);
    }
    return curve;
}

double global_moment(const JointDistributionGrid& joint) {
    const auto [p1, p2] = marginals(joint);
    const MarginalMoments m1 = density_moments(p1.values, p1.grid);
    const MarginalMoments m2 = density_moments(p2.values, p2.grid);
    const std::vector<double> w1 = quadrature_weights(joint.x1_grid);
    const std::vector<double> w2 = quadrature_weights(joint.x2_grid);
    const int n1 = joint.x1_grid.n_points;
    const int n2 = joint.x2_grid.n_points;
    double acc = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double x1 = joint.x1_grid.point(i);
        const double* row = joint.values.data() + static_cast<std::size_t>(i) * n2;
        double row_acc = 0.0;
        for (int j = 0; j < n2; ++j)
            row_acc += w2[static_cast<std::size_t>(j)] * joint.x2_grid.point(j) * row[j];
        acc += w1[static_cast<std::size_t>(i)] * x1 * row_acc;
    }
    acc /= joint.mass;
    return 2.0 * acc - 2.0 * m1.mean * m2.mean;
}

double global_moment(const WaveFunction& wf, const ApparatusParams& app, int n_points) {
    return global_moment(joint_distribution(wf, app, n_points));
}

Dispersions apparatus_dispersions(const JointDistributionGrid& joint) {
    const auto [p1, p2] = marginals(joint);
    const MarginalMoments m1 = density_moments(p1.values, p1.grid);
    const MarginalMoments m2 = density_moments(p2.values, p2.grid);
    return {m1.sd, m2.sd};
}

Dispersions apparatus_dispersions(const WaveFunction& wf, const ApparatusParams& app,
                                  int n_points) {
    return apparatus_dispersions(joint_distribution(wf, app, n_points));
}

LimitStudy limit_study(const WaveFunction& wf, PointerAxis axis, double value,
                       const std::vector<double>& b_schedule) {
    if (b_schedule.size() < 2)
        throw ScheduleDirectionError("limit_study: need at least two b values");
    const bool toward_zero = axis == PointerAxis::given_x1;
    for (std::size_t k = 0; k + 1 < b_schedule.size(); ++k) {
        const bool ok = toward_zero ? b_schedule[k + 1] < b_schedule[k]
                                    : b_schedule[k + 1] > b_schedule[k];
        if (!ok)
            throw ScheduleDirectionError(
                toward_zero ? "limit_study: given_x1 needs a decreasing schedule"
                            : "limit_study: given_x2 needs an increasing schedule");
        if (!(b_schedule[k] > 0.0)) throw ScheduleDirectionError("limit_study: b must be positive");
    }
    if (!(b_schedule.back() > 0.0))
        throw ScheduleDirectionError("limit_study: b must be positive");

    LimitStudy study;
    study.axis = axis;
    study.value = value;
    study.exact = toward_zero ? local_p_given_q(wf, value) : local_q_given_p(wf, value);
    for (double b : b_schedule) {
        const double cond = conditional_mean(wf, ApparatusParams{b}, axis, value);
        study.rows.push_back({b, cond, std::abs(cond - study.exact)});
    }
    study.deviations_monotone = true;
    for (std::size_t k = 0; k + 1 < study.rows.size(); ++k)
        if (study.rows[k + 1].deviation > study.rows[k].deviation + 1e-12)
            study.deviations_monotone = false;

    // Richardson step assuming the leading error term is quadratic in b
    // (toward 0) or in 1/b (toward infinity).
    const LimitStudyRow& last = study.rows.back();
    const LimitStudyRow& prev = study.rows[study.rows.size() - 2];
    const double r = toward_zero ? prev.b / last.b : last.b / prev.b;
    study.extrapolated = (r * r * last.conditional - prev.conditional) / (r * r - 1.0);
    study.extrapolated_deviation = std::abs(study.extrapolated - study.exact);
    return study;
}

std::vector<HeterodyneSample> sample_heterodyne(const JointDistributionGrid& joint, long n,
                                                std::uint64_t seed) {
    if (n < 1) throw InvalidRangeError("sample_heterodyne: need n >= 1 samples");
    const int n1 = joint.x1_grid.n_points;
    const int n2 = joint.x2_grid.n_points;
    const std::vector<double> w2 = quadrature_weights(joint.x2_grid);

    // Discrete row distribution from the quadrature masses.
    std::vector<double> row_cum(static_cast<std::size_t>(n1), 0.0);
    double total = 0.0;
    for (int i = 0; i < n1; ++i) {
        const double* row = joint.values.data() + static_cast<std::size_t>(i) * n2;
        double mass = 0.0;
        for (int j = 0; j < n2; ++j) mass += w2[static_cast<std::size_t>(j)] * row[j];
        total += std::max(mass, 0.0);
        row_cum[static_cast<std::size_t>(i)] = total;
    }
    if (!(total > 0.0)) throw DegenerateDensityError("sample_heterodyne: empty joint");

    std::vector<std::optional<MonotoneMap>> row_maps(static_cast<std::size_t>(n1));
    auto row_map = [&](int i) -> const MonotoneMap* {
        auto& slot = row_maps[static_cast<std::size_t>(i)];
        if (!slot) {
            std::vector<double> dens(static_cast<std::size_t>(n2));
            const double* row = joint.values.data() + static_cast<std::size_t>(i) * n2;
            for (int j = 0; j < n2; ++j) dens[static_cast<std::size_t>(j)] = row[j];
            const double mass = integrate(dens, joint.x2_grid);
            if (!(mass > 1e-280)) return nullptr;
            for (double& v : dens) v /= mass;
            try {
                slot.emplace(inverse_cdf(dens, joint.x2_grid));
            } catch (const DegenerateDensityError&) {
                return nullptr;
            }
        }
        return &*slot;
    };

    SeededStream stream(seed);
    std::vector<HeterodyneSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long s = 0; s < n; ++s) {
        const double u1 = stream.next_uniform() * total;
        int i = static_cast<int>(std::upper_bound(row_cum.begin(), row_cum.end(), u1) -
                                 row_cum.begin());
        i = std::min(i, n1 - 1);
        const MonotoneMap* m = row_map(i);
        // Walk inward from a (measure-zero) degenerate tail row.
        while (m == nullptr && i > 0 && i < n1 - 1) {
            i += (i < n1 / 2) ? 1 : -1;
            m = row_map(i);
        }
        if (m == nullptr) throw DegenerateDensityError("sample_heterodyne: no usable rows");
        const double u2 = stream.next_uniform();
        out.push_back({joint.x1_grid.point(i), m->eval(u2)});
    }
    return out;
}

BinSpec bins_for(const JointDistributionGrid& joint, int n1, int n2) {
    return BinSpec{joint.x1_grid.x_min, joint.x1_grid.x_max, n1,
                   joint.x2_grid.x_min, joint.x2_grid.x_max, n2};
}

namespace {

std::vector<BinStat> binned_means(const std::vector<HeterodyneSample>& samples, bool bin_x1,
                                  double lo, double hi, int n_bins) {
    const double w = (hi - lo) / n_bins;
    std::vector<long> count(static_cast<std::size_t>(n_bins), 0);
    std::vector<double> sum(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<double> sum2(static_cast<std::size_t>(n_bins), 0.0);
    for (const HeterodyneSample& s : samples) {
        const double key = bin_x1 ? s.x1 : s.x2;
        const double val = bin_x1 ? s.x2 : s.x1;
        if (key < lo || key >= hi) continue;
        const std::size_t k = static_cast<std::size_t>((key - lo) / w);
        if (k >= static_cast<std::size_t>(n_bins)) continue;
        count[k] += 1;
        sum[k] += val;
        sum2[k] += val * val;
    }
    std::vector<BinStat> out(static_cast<std::size_t>(n_bins));
    for (int k = 0; k < n_bins; ++k) {
        BinStat& b = out[static_cast<std::size_t>(k)];
        b.center = lo + (k + 0.5) * w;
        b.count = count[static_cast<std::size_t>(k)];
        b.flagged = b.count < 10;
        if (b.count > 0) b.mean = sum[static_cast<std::size_t>(k)] / b.count;
        if (b.count > 1) {
            const double var =
                (sum2[static_cast<std::size_t>(k)] - b.count * b.mean * b.mean) / (b.count - 1);
            b.std_error = std::sqrt(std::max(var, 0.0) / b.count);
        }
    }
    return out;
}

}  // namespace

CorrelationEstimate estimate_from_samples(const std::vector<HeterodyneSample>& samples,
                                          const BinSpec& bins, std::uint64_t seed) {
    const long n = static_cast<long>(samples.size());
    if (n < 100) throw InsufficientSamplesError("estimate_from_samples: need >= 100 samples, got " +
                                                std::to_string(n));
    CorrelationEstimate est;
    est.n = n;
    est.seed = seed;
    double m1 = 0.0, m2 = 0.0, m12 = 0.0;
    for (const HeterodyneSample& s : samples) {
        m1 += s.x1;
        m2 += s.x2;
        m12 += s.x1 * s.x2;
    }
    m1 /= n;
    m2 /= n;
    m12 /= n;
    // Covariance matrix of (x1 x2, x1, x2) for the delta-method error of
    // g = 2 m12 - 2 m1 m2.
    double c[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (const HeterodyneSample& s : samples) {
        const double v[3] = {s.x1 * s.x2 - m12, s.x1 - m1, s.x2 - m2};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) c[a][b] += v[a] * v[b];
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) c[a][b] /= (n - 1);
    const double grad[3] = {2.0, -2.0 * m2, -2.0 * m1};
    double var_g = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) var_g += grad[a] * c[a][b] * grad[b];
    est.mean_x1 = m1;
    est.mean_x2 = m2;
    est.mean_x1_se = std::sqrt(c[1][1] / n);
    est.mean_x2_se = std::sqrt(c[2][2] / n);
    est.global = 2.0 * m12 - 2.0 * m1 * m2;
    est.global_se = std::sqrt(std::max(var_g, 0.0) / n);
    est.x2_given_x1 = binned_means(samples, true, bins.x1_min, bins.x1_max, bins.n1);
    est.x1_given_x2 = binned_means(samples, false, bins.x2_min, bins.x2_max, bins.n2);
    return est;
}

}  // namespace qcorr

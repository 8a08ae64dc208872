// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

// qcorr: joint quadrature measurement simulation and phase-space density
// tests from the command line. Subcommands:
//   report     full correlation report for one state (quantum, pointer
//              measurement, causal curves, convex combination)
//   figure     ratio of the measured local correlation to the epsilon=+1
//              causal one over a (b/dq, dq dp) grid
//   sample     reproducible heterodyne samples plus a moment estimate
//   composite  two-mode product densities verified pair by pair
//
// Exit codes: 0 success, 2 configuration error, 3 numeric-tolerance
// failure, 4 infeasibility-only outcome (report still written).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/arthurs_kelly.hpp"
#include "qcorr/causal.hpp"
#include "qcorr/composite.hpp"
#include "qcorr/report.hpp"
#include "qcorr/state_spec.hpp"

namespace {

using namespace qcorr;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;

struct CommonOpts {
    std::string state_path;
    std::optional<int> grid_n;
    std::optional<double> grid_span;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 1;
};

// Curves are decimated to at most this many samples in reports.
constexpr std::size_t kMaxCurveSamples = 201;

LocalCurveSamples decimate(const LocalCurveSamples& c) {
    if (c.at.size() <= kMaxCurveSamples) return c;
    const std::size_t stride = (c.at.size() + kMaxCurveSamples - 1) / kMaxCurveSamples;
    LocalCurveSamples out;
    for (std::size_t k = 0; k < c.at.size(); k += stride) {
        out.at.push_back(c.at[k]);
        out.mean.push_back(c.mean[k]);
    }
    return out;
}

LocalCurveSamples to_samples(const LocalCorrelationCurve& c) {
    return LocalCurveSamples{c.at, c.mean};
}

// Sup of |a - b| over shared sample points (both curves are masked subsets
// of the same grid).
double sup_curve_residual(const LocalCurveSamples& a, const LocalCorrelationCurve& b) {
    double sup = 0.0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < a.at.size(); ++k) {
        while (j < b.at.size() && b.at[j] < a.at[k] - 1e-12) ++j;
        if (j >= b.at.size()) break;
        if (std::abs(b.at[j] - a.at[k]) <= 1e-12)
            sup = std::max(sup, std::abs(a.mean[k] - b.mean[j]));
    }
    return sup;
}

int cmd_report(const CommonOpts& opts, std::vector<double> b_values) {
    const StateSpec spec = load_state_spec(opts.state_path);
    const WaveFunction wf = build_state(spec, opts.grid_n, opts.grid_span);
    if (b_values.empty()) b_values.push_back(1.0);
    for (double b : b_values)
        if (!(b > 0.0)) throw ConfigError("report: b values must be positive");

    const MomentReport m = moments(wf);
    const double quantum_global = global_correlation(wf);
    const LocalCorrelationCurve quantum_pq = local_curve(wf, Axis::given_q);
    const LocalCorrelationCurve quantum_qp = local_curve(wf, Axis::given_p);

    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["units"] = "natural units, hbar = 1";
    doc["state"] = state_spec_to_json(spec);
    doc["state"]["moments"] = moments_to_json(m);

    ordered_json quantum;
    quantum["global"] = quantum_global;
    quantum["p_given_q"] = curve_to_json(decimate(to_samples(quantum_pq)));
    quantum["q_given_p"] = curve_to_json(decimate(to_samples(quantum_qp)));
    doc["quantum"] = quantum;

    double ak_residual_max = 0.0;
    ordered_json ak_blocks = ordered_json::array();
    for (double b : b_values) {
        const ApparatusParams app{b};
        const JointDistributionGrid joint = joint_distribution(wf, app);
        const double gm = global_moment(joint);
        const Dispersions disp = apparatus_dispersions(joint);
        ordered_json block;
        block["b"] = b;
        block["global_moment"] = gm;
        block["residual_global_vs_quantum"] = std::abs(gm - quantum_global);
        block["dispersions"] = {{"dx1", disp.dx1},
                                {"dx2", disp.dx2},
                                {"product", disp.dx1 * disp.dx2}};
        block["joint_mass"] = joint.mass;
        block["x2_given_x1"] =
            curve_to_json(decimate(to_samples(ak_local_curve(wf, app, PointerAxis::given_x1,
                                                             joint.x1_grid))));
        block["x1_given_x2"] =
            curve_to_json(decimate(to_samples(ak_local_curve(wf, app, PointerAxis::given_x2,
                                                             joint.x2_grid))));
        ak_blocks.push_back(std::move(block));
        ak_residual_max = std::max(ak_residual_max, std::abs(gm - quantum_global));
    }
    doc["arthurs_kelly"] = std::move(ak_blocks);

    const TransportCurve plus = build_transport_curve(wf, Epsilon::plus);
    const TransportCurve minus = build_transport_curve(wf, Epsilon::minus);
    auto causal_block = [&](const TransportCurve& curve) {
        ordered_json j;
        j["global"] = causal_global(curve);
        LocalCurveSamples pq, qp;
        for (std::size_t k = 0; k < quantum_pq.at.size(); ++k) {
            const double q = quantum_pq.at[k];
            if (q < curve.q_to_p.input_min() || q > curve.q_to_p.input_max()) continue;
            pq.at.push_back(q);
            pq.mean.push_back(curve.q_to_p.eval(q));
        }
        for (std::size_t k = 0; k < quantum_qp.at.size(); ++k) {
            const double p = quantum_qp.at[k];
            if (p < curve.p_to_q.input_min() || p > curve.p_to_q.input_max()) continue;
            qp.at.push_back(p);
            qp.mean.push_back(curve.p_to_q.eval(p));
        }
        j["p_given_q"] = curve_to_json(decimate(pq));
        j["q_given_p"] = curve_to_json(decimate(qp));
        return j;
    };
    ordered_json causal;
    causal["epsilon_plus"] = causal_block(plus);
    causal["epsilon_minus"] = causal_block(minus);
    causal["correlationless"] = correlation_report_to_json(correlationless_reference(wf));

    bool infeasible = false;
    double combo_local_pq_sup = 0.0, combo_local_qp_sup = 0.0, combo_global_resid = 0.0;
    try {
        const CausalCombo combo = fit_convex_combination(wf);
        const CorrelationReport rep = combo_correlations(combo);
        ordered_json jc;
        jc["feasible"] = true;
        jc["lambda_plus"] = combo.lambda_plus;
        jc["lambda_minus"] = combo.lambda_minus;
        jc["global"] = rep.global;
        jc["p_given_q"] = curve_to_json(decimate(rep.p_given_q));
        jc["q_given_p"] = curve_to_json(decimate(rep.q_given_p));
        causal["combo"] = std::move(jc);
        combo_global_resid = std::abs(rep.global - quantum_global);
        combo_local_pq_sup = sup_curve_residual(rep.p_given_q, quantum_pq);
        combo_local_qp_sup = sup_curve_residual(rep.q_given_p, quantum_qp);
    } catch (const InfeasibleCombinationError& e) {
        infeasible = true;
        ordered_json jc;
        jc["feasible"] = false;
        jc["reason"] = e.what();
        jc["ratio"] = e.ratio;
        causal["combo"] = std::move(jc);
    }
    doc["causal"] = std::move(causal);

    ordered_json residuals;
    residuals["ak_global_vs_quantum_max"] = ak_residual_max;
    residuals["causal_plus_global_vs_quantum"] =
        std::abs(causal_global(plus) - quantum_global);
    residuals["correlationless_global_vs_quantum"] = std::abs(quantum_global);
    if (!infeasible) {
        residuals["combo_global_vs_quantum"] = combo_global_resid;
        residuals["combo_local_p_given_q_sup"] = combo_local_pq_sup;
        residuals["combo_local_q_given_p_sup"] = combo_local_qp_sup;
    }
    doc["residuals"] = std::move(residuals);

    if (opts.format == "json") {
        write_json_file(opts.out_path, doc);
    } else {
        std::vector<std::vector<double>> rows;
        for (const auto& block : doc["arthurs_kelly"])
            rows.push_back({block["b"].get<double>(), block["global_moment"].get<double>(),
                            quantum_global, block["residual_global_vs_quantum"].get<double>(),
                            block["dispersions"]["dx1"].get<double>(),
                            block["dispersions"]["dx2"].get<double>()});
        write_csv_file(opts.out_path,
                       {"b", "global_moment", "quantum_global", "residual", "dx1", "dx2"}, rows);
    }
    return infeasible ? kExitInfeasible : kExitOk;
}

int cmd_figure(const std::vector<double>& b_over_dq, const std::vector<double>& dqdp,
               std::optional<int> grid_n, const std::string& out_path) {
    if (b_over_dq.empty() || dqdp.empty())
        throw ConfigError("figure: both schedules must be nonempty");
    for (double b : b_over_dq)
        if (!(b > 0.0)) throw ConfigError("figure: b/dq values must be positive");
    for (double s : dqdp)
        if (!(s >= 0.5)) throw ConfigError("figure: dq dp must be >= 1/2");

    std::vector<std::vector<double>> rows;
    for (double bq : b_over_dq) {
        for (double s : dqdp) {
            // alpha = 1 fixes dp = 1/sqrt 2; the spreading time sets dq dp = s
            const double t0m = std::sqrt(4.0 * s * s - 1.0);
            const GaussianPacketParams params{1.0, 0.0, t0m};
            const WaveFunction wf =
                build_gaussian_packet(params, std::nullopt, grid_n.value_or(kDefaultGridPoints));
            const auto gm = gaussian_packet_moments(params);
            const double b = bq * gm.delta_q;
            const double probe_q = gm.delta_q;  // one width off-center
            const double ak = conditional_mean(wf, ApparatusParams{b},
                                               PointerAxis::given_x1, probe_q);
            const TransportCurve plus = build_transport_curve(wf, Epsilon::plus);
            const double causal = causal_conditional(plus, Axis::given_q, probe_q);
            const double ratio_numeric = ak / causal;
            const double ratio_closed =
                std::sqrt(1.0 - std::pow(2.0 * s, -2.0)) / (1.0 + bq * bq);
            rows.push_back({bq, s, ratio_numeric, ratio_closed,
                            std::abs(ratio_numeric - ratio_closed)});
        }
    }
    write_csv_file(out_path,
                   {"b_over_dq", "dqdp", "ratio_numeric", "ratio_closed_form", "abs_error"},
                   rows);
    return kExitOk;
}

std::string summary_path_for(const std::string& out_path) {
    const std::size_t dot = out_path.find_last_of('.');
    const std::string stem = dot == std::string::npos ? out_path : out_path.substr(0, dot);
    return stem + ".summary.json";
}

int cmd_sample(const CommonOpts& opts, double b, long n_samples) {
    if (n_samples < 100) throw ConfigError("sample: need at least 100 samples");
    if (!(b > 0.0)) throw ConfigError("sample: b must be positive");
    const StateSpec spec = load_state_spec(opts.state_path);
    const WaveFunction wf = build_state(spec, opts.grid_n, opts.grid_span);
    const JointDistributionGrid joint = joint_distribution(wf, ApparatusParams{b});
    const std::vector<HeterodyneSample> samples = sample_heterodyne(joint, n_samples, opts.seed);
    const CorrelationEstimate est = estimate_from_samples(samples, bins_for(joint), opts.seed);

    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const HeterodyneSample& s : samples) rows.push_back({s.x1, s.x2});
    write_csv_file(opts.out_path, {"x1", "x2"}, rows);

    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["units"] = "natural units, hbar = 1";
    doc["state"] = state_spec_to_json(spec);
    doc["b"] = b;
    doc["n"] = est.n;
    doc["seed"] = est.seed;
    doc["estimate"] = {{"mean_x1", est.mean_x1},
                       {"mean_x1_se", est.mean_x1_se},
                       {"mean_x2", est.mean_x2},
                       {"mean_x2_se", est.mean_x2_se},
                       {"global", est.global},
                       {"global_se", est.global_se}};
    doc["grid_reference"] = {{"global_moment", global_moment(joint)},
                             {"quantum_global", global_correlation(wf)}};
    auto curve_json = [](const std::vector<BinStat>& bins) {
        ordered_json arr = ordered_json::array();
        for (const BinStat& b2 : bins) {
            ordered_json jb;
            jb["center"] = b2.center;
            jb["count"] = b2.count;
            jb["flagged"] = b2.flagged;
            if (!b2.flagged) {
                jb["mean"] = b2.mean;
                jb["std_error"] = b2.std_error;
            }
            arr.push_back(std::move(jb));
        }
        return arr;
    };
    doc["x2_given_x1"] = curve_json(est.x2_given_x1);
    doc["x1_given_x2"] = curve_json(est.x1_given_x2);
    write_json_file(summary_path_for(opts.out_path), doc);
    return kExitOk;
}

int cmd_composite(const std::string& kind, const EPRParams& epr, int m, int n, cplx alpha,
                  cplx beta, double omega, double t0, std::optional<int> grid_n,
                  const std::string& out_path) {
    TwoModeProductDensity density =
        kind == "epr"
            ? build_epr_density(epr, grid_n.value_or(kDefaultGridPoints))
            : build_entangled_coherent_density(m, n, alpha, beta, omega, t0,
                                               grid_n.value_or(kDefaultGridPoints));

    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["units"] = "natural units, hbar = 1";
    doc["kind"] = density.kind;
    auto factor_json = [](const CollectiveFactor& f) {
        ordered_json j;
        j["coordinates"] = f.label;
        j["lambda_plus"] = f.combo.lambda_plus;
        j["lambda_minus"] = f.combo.lambda_minus;
        j["quantum_global"] = f.combo.quantum_global;
        j["causal_global_plus"] = causal_global(f.combo.plus);
        j["causal_global_minus"] = causal_global(f.combo.minus);
        j["combo_global"] = combo_global(f.combo);
        return j;
    };
    doc["factor_a"] = factor_json(density.factor_a);
    doc["factor_b"] = factor_json(density.factor_b);

    ordered_json pairs = ordered_json::array();
    double worst = 0.0;
    for (PairId pair : kCommutingPairs) {
        const PairCheck check = verify_pair_marginal(density, pair);
        ordered_json jp;
        jp["pair"] = pair_name(pair);
        jp["coord1"] = check.causal.coord1;
        jp["coord2"] = check.causal.coord2;
        jp["sup_residual"] = check.sup_residual;
        pairs.push_back(std::move(jp));
        worst = std::max(worst, check.sup_residual);
    }
    doc["pair_marginals"] = std::move(pairs);
    doc["sup_residual_max"] = worst;
    write_json_file(out_path, doc);
    return kExitOk;
}

std::vector<double> parse_schedule(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string tok = csv.substr(pos, comma - pos);
        if (!tok.empty()) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError(std::string(what) + ": cannot parse '" + tok + "' as a number");
            }
        }
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint quadrature measurement simulation and phase-space density tests"};
    app.require_subcommand(1);

    CommonOpts opts;
    int grid_n_flag = 0;
    double grid_span_flag = 0.0;

    auto add_common = [&](CLI::App* sub, bool needs_state) {
        if (needs_state)
            sub->add_option("--state", opts.state_path, "state specification file (JSON)")
                ->required();
        sub->add_option("--grid-n", grid_n_flag, "grid points override (>= 16)");
        sub->add_option("--grid-span", grid_span_flag,
                        "half-span override around the state's natural center");
        sub->add_option("--out", opts.out_path, "output path")->required();
        sub->add_option("--seed", opts.seed, "random seed");
        sub->add_option("--format", opts.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* report = app.add_subcommand("report", "full correlation report for one state");
    double b_flag = 0.0;
    std::string b_schedule;
    report->add_option("--b", b_flag, "balance parameter");
    report->add_option("--b-schedule", b_schedule, "comma-separated balance parameters");
    add_common(report, true);

    auto* figure = app.add_subcommand("figure", "measured/causal correlation ratio sweep");
    std::string fig_b = "0.1,0.5,1,2";
    std::string fig_s = "0.5,0.75,1,2,5";
    figure->add_option("--b-over-dq", fig_b, "b/dq schedule (comma-separated)");
    figure->add_option("--dqdp", fig_s, "dq dp schedule (comma-separated)");
    figure->add_option("--grid-n", grid_n_flag, "grid points override");
    figure->add_option("--out", opts.out_path, "output CSV path")->required();

    auto* sample = app.add_subcommand("sample", "reproducible heterodyne samples");
    double sample_b = 1.0;
    long n_samples = 0;
    sample->add_option("--b", sample_b, "balance parameter");
    sample->add_option("--samples", n_samples, "number of samples (>= 100)")->required();
    add_common(sample, true);

    auto* composite = app.add_subcommand("composite", "two-mode product density verification");
    std::string kind;
    EPRParams epr;
    int cm = 0, cn = 0;
    double alpha_re = 0.0, alpha_im = 0.0, beta_re = 0.0, beta_im = 0.0;
    double omega = 1.0, t0 = 0.0;
    composite->add_option("--kind", kind, "epr or entangled-coherent")->required();
    composite->add_option("--alpha1", epr.alpha1, "EPR width of the q1-q2 factor");
    composite->add_option("--alpha2", epr.alpha2, "EPR width of the p1+p2 factor");
    composite->add_option("--q0", epr.q0, "EPR q1-q2 center");
    composite->add_option("--P0", epr.P0, "EPR p1+p2 center");
    composite->add_option("--m", cm, "Fock index of the (q1+q2)/sqrt2 factor");
    composite->add_option("--n", cn, "Fock index of the (q1-q2)/sqrt2 factor");
    composite->add_option("--alpha-re", alpha_re, "Re displacement of the m factor");
    composite->add_option("--alpha-im", alpha_im, "Im displacement of the m factor");
    composite->add_option("--beta-re", beta_re, "Re displacement of the n factor");
    composite->add_option("--beta-im", beta_im, "Im displacement of the n factor");
    composite->add_option("--omega", omega, "oscillator frequency");
    composite->add_option("--t0", t0, "evaluation time");
    composite->add_option("--grid-n", grid_n_flag, "grid points override");
    composite->add_option("--out", opts.out_path, "output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (grid_n_flag > 0) opts.grid_n = grid_n_flag;
        if (grid_span_flag > 0.0) opts.grid_span = grid_span_flag;

        if (report->parsed()) {
            std::vector<double> b_values;
            if (!b_schedule.empty()) b_values = parse_schedule(b_schedule, "b-schedule");
            if (b_flag > 0.0) b_values.insert(b_values.begin(), b_flag);
            return cmd_report(opts, std::move(b_values));
        }
        if (figure->parsed()) {
            return cmd_figure(parse_schedule(fig_b, "b-over-dq"), parse_schedule(fig_s, "dqdp"),
                              opts.grid_n, opts.out_path);
        }
        if (sample->parsed()) {
            return cmd_sample(opts, sample_b, n_samples);
        }
        if (composite->parsed()) {
            if (kind != "epr" && kind != "entangled-coherent")
                throw ConfigError("composite: kind must be 'epr' or 'entangled-coherent'");
            return cmd_composite(kind, epr, cm, cn, cplx{alpha_re, alpha_im},
                                 cplx{beta_re, beta_im}, omega, t0, opts.grid_n, opts.out_path);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const InvalidRangeError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}

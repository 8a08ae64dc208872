// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

// End-to-end checks of the command-line surface: schemas, exit codes,
// determinism, and the machine-readable output contracts.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "qcorr/report.hpp"

#ifndef QCORR_CLI_BIN
#error "QCORR_CLI_BIN must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("qcorr_cli_test_" + std::to_string(static_cast<long>(::getpid())));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(QCORR_CLI_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

fs::path spread_state() {
    const fs::path p = work_dir() / "spread.json";
    write_file(p, R"({"kind":"gaussian","alpha":1.0,"beta":0.0,"t0_over_m":1.0})");
    return p;
}

}  // namespace

TEST_CASE("report: schema, reference values, exit 0") {
    const fs::path out = work_dir() / "report.json";
    const int code = run("report --state " + spread_state().string() + " --b 1 --out " +
                         out.string());
    CHECK(code == 0);
    const json doc = json::parse(slurp(out));
    CHECK(doc.at("schema_version").get<int>() == 1);
    CHECK(std::abs(doc.at("quantum").at("global").get<double>() - 1.0) < 1e-6);
    CHECK(doc.at("causal").at("combo").at("feasible").get<bool>());
    CHECK(std::abs(doc.at("causal").at("combo").at("lambda_plus").get<double>() -
                   0.85355339059327373) < 1e-7);
    CHECK(doc.at("residuals").at("ak_global_vs_quantum_max").get<double>() < 1e-6);
    for (const auto& block : doc.at("arthurs_kelly"))
        CHECK(block.at("dispersions").at("product").get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("report: coherent state causal global hits the odd-integer value") {
    const fs::path state = work_dir() / "coh2.json";
    write_file(state, R"({"kind":"coherent","n":2,"A":1.3,"theta":0.4,"omega":1.0,"t0":0.0})");
    const fs::path out = work_dir() / "coh2_report.json";
    CHECK(run("report --state " + state.string() + " --b 1 --out " + out.string()) == 0);
    const json doc = json::parse(slurp(out));
    CHECK(std::abs(doc.at("causal").at("epsilon_plus").at("global").get<double>() - 5.0) < 1e-5);
    CHECK(std::abs(doc.at("quantum").at("global").get<double>()) < 1e-6);
    CHECK(std::abs(doc.at("causal").at("combo").at("lambda_plus").get<double>() - 0.5) < 1e-8);
}

TEST_CASE("report reruns are byte-identical") {
    const fs::path out1 = work_dir() / "rep_a.json";
    const fs::path out2 = work_dir() / "rep_b.json";
    const std::string common =
        "report --state " + spread_state().string() + " --b-schedule 0.5,2 ";
    CHECK(run(common + "--out " + out1.string()) == 0);
    CHECK(run(common + "--out " + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(!slurp(out1).empty());
}

TEST_CASE("report: CSV summary format") {
    const fs::path out = work_dir() / "rep.csv";
    CHECK(run("report --state " + spread_state().string() +
              " --b-schedule 0.5,1 --format csv --out " + out.string()) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "b,global_moment,quantum_global,residual,dx1,dx2");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("malformed configs exit 2 and write nothing") {
    const fs::path bad = work_dir() / "bad.json";
    write_file(bad, R"({"kind":"gaussian","alpha":1.0,"surprise":1})");
    const fs::path out = work_dir() / "never.json";
    CHECK(run("report --state " + bad.string() + " --b 1 --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));

    write_file(bad, R"({"kind":"gaussian")");  // truncated JSON
    CHECK(run("report --state " + bad.string() + " --b 1 --out " + out.string()) == 2);
    CHECK(run("report --state " + std::string("/no/such/file.json") + " --b 1 --out " +
              out.string()) == 2);
    CHECK(run("composite --kind nonsense --out " + out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("numeric-tolerance failures exit 3") {
    // a half-span of 3 cannot hold the packet per the span policy
    const fs::path out = work_dir() / "never3.json";
    CHECK(run("report --state " + spread_state().string() + " --b 1 --grid-span 3 --out " +
              out.string()) == 3);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("figure: closed-form columns and lossless CSV round-trip") {
    const fs::path out = work_dir() / "figure.csv";
    CHECK(run("figure --b-over-dq 1 --dqdp 0.70710678118654752,5 --out " + out.string()) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "b_over_dq,dqdp,ratio_numeric,ratio_closed_form,abs_error");
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) {
            // full 17-significant-digit precision: re-printing the parsed
            // value must reproduce the token exactly
            const double v = std::stod(tok);
            CHECK(qcorr::format_double(v) == tok);
            vals.push_back(v);
        }
        REQUIRE(vals.size() == 5);
        CHECK(std::abs(vals[2] - vals[3]) < 1e-3);
        if (rows == 1) CHECK(vals[3] == doctest::Approx(0.35355339059327373).epsilon(1e-10));
    }
    CHECK(rows == 2);
}

TEST_CASE("sample: reproducible bytes and a complete summary") {
    const fs::path out1 = work_dir() / "s1.csv";
    const fs::path out2 = work_dir() / "s2.csv";
    const std::string common = "sample --state " + spread_state().string() +
                               " --b 1 --samples 2000 --seed 7 --grid-n 512 --out ";
    CHECK(run(common + out1.string()) == 0);
    CHECK(run(common + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));

    const json summary = json::parse(slurp(work_dir() / "s1.summary.json"));
    CHECK(summary.at("n").get<long>() == 2000);
    CHECK(summary.at("seed").get<long>() == 7);
    CHECK(summary.at("estimate").at("global_se").get<double>() > 0.0);
    CHECK(summary.at("estimate").at("mean_x1_se").get<double>() > 0.0);
    CHECK(summary.at("estimate").at("mean_x2_se").get<double>() > 0.0);

    // header + LF endings
    const std::string csv = slurp(out1);
    CHECK(csv.rfind("x1,x2\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("custom states flow through the full report pipeline") {
    // equal h0 + h1 superposition on its own grid
    const int n = 768;
    json amps = json::array();
    const double lo = -12.0, hi = 12.0;
    for (int k = 0; k < n; ++k) {
        const double x = lo + k * (hi - lo) / (n - 1);
        const double h0 = 0.75112554446494248 * std::exp(-0.5 * x * x);
        const double h1 = std::sqrt(2.0) * x * h0;
        amps.push_back({h0 + h1, 0.0});
    }
    json doc;
    doc["kind"] = "custom";
    doc["representation"] = "position";
    doc["grid"] = {{"x_min", lo}, {"x_max", hi}, {"n_points", n}};
    doc["amplitudes"] = amps;
    const fs::path state = work_dir() / "custom.json";
    write_file(state, doc.dump());

    const fs::path out = work_dir() / "custom_report.json";
    CHECK(run("report --state " + state.string() + " --b 1 --out " + out.string()) == 0);
    const json rep = json::parse(slurp(out));
    // a real wavefunction carries no current: zero global correlation
    CHECK(std::abs(rep.at("quantum").at("global").get<double>()) < 1e-8);
    CHECK(std::abs(rep.at("state").at("moments").at("mean_q").get<double>() -
                   1.0 / std::sqrt(2.0)) < 1e-8);
    CHECK(rep.at("causal").at("combo").at("feasible").get<bool>());
}

TEST_CASE("composite: pair residuals and the arithmetic-mean weights") {
    const fs::path out = work_dir() / "epr.json";
    CHECK(run("composite --kind epr --alpha1 1 --alpha2 1 --q0 1 --P0 0 --out " + out.string()) ==
          0);
    const json epr = json::parse(slurp(out));
    CHECK(epr.at("pair_marginals").size() == 4);
    for (const auto& p : epr.at("pair_marginals"))
        CHECK(p.at("sup_residual").get<double>() < 1e-5);

    const fs::path out2 = work_dir() / "ent.json";
    CHECK(run("composite --kind entangled-coherent --m 2 --n 1 --alpha-re 0.7 --alpha-im -0.3 "
              "--beta-re -0.4 --beta-im 0.5 --out " +
              out2.string()) == 0);
    const json ent = json::parse(slurp(out2));
    CHECK(ent.at("factor_a").at("lambda_plus").get<double>() == 0.5);
    CHECK(ent.at("factor_b").at("lambda_plus").get<double>() == 0.5);
    CHECK(std::abs(ent.at("factor_a").at("causal_global_plus").get<double>() - 5.0) < 1e-5);
    CHECK(ent.at("sup_residual_max").get<double>() < 1e-5);
}

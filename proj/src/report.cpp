// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#include "qcorr/report.hpp"

#include <cstdio>
#include <fstream>

#include "qcorr/errors.hpp"

namespace qcorr {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json curve_to_json(const LocalCurveSamples& curve) {
    ordered_json j;
    j["at"] = curve.at;
    j["mean"] = curve.mean;
    return j;
}

ordered_json moments_to_json(const MomentReport& m) {
    ordered_json j;
    j["mean_q"] = m.mean_q;
    j["mean_p"] = m.mean_p;
    j["delta_q"] = m.delta_q;
    j["delta_p"] = m.delta_p;
    return j;
}

ordered_json correlation_report_to_json(const CorrelationReport& rep) {
    ordered_json j;
    j["method"] = rep.method;
    j["global"] = rep.global;
    j["moments"] = moments_to_json(rep.moments);
    j["p_given_q"] = curve_to_json(rep.p_given_q);
    j["q_given_p"] = curve_to_json(rep.q_given_p);
    return j;
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw Error("cannot open '" + path + "' for writing");
    for (std::size_t k = 0; k < header.size(); ++k)
        out << header[k] << (k + 1 < header.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k)
            out << format_double(row[k]) << (k + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_json_file(const std::string& path, const ordered_json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace qcorr

// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcorr/causal.hpp"

namespace qcorr {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// Doubles are printed with 17 significant digits so CSV and JSON round-trip
// losslessly.
std::string format_double(double v);

ordered_json curve_to_json(const LocalCurveSamples& curve);
ordered_json moments_to_json(const MomentReport& m);
ordered_json correlation_report_to_json(const CorrelationReport& rep);

// Comma-separated, header row, LF line endings, full precision.
void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows);

void write_json_file(const std::string& path, const ordered_json& doc);

}  // namespace qcorr

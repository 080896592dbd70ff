#pragma once

#include <string>
#include <vector>

#include "fairwork/audit.hpp"
#include "fairwork/leximin.hpp"
#include "fairwork/market.hpp"
#include "fairwork/report.hpp"
#include "fairwork/scenario.hpp"

namespace fairwork::io {

// Canonical JSON: sorted keys, two-space indent, shortest round-trip numbers,
// trailing newline. Parsers throw Error(parse) naming the offending field.

MarketInstance parse_instance(const std::string& text);
std::string instance_to_json(const MarketInstance& inst);

SolveReport parse_report(const std::string& text);
std::string report_to_json(const SolveReport& report);

std::string audit_to_json(const std::vector<CheckRecord>& records);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// One row per (realization, buyer); coverage is 1 when fully served.
std::string robustness_to_csv(const MarketInstance& inst, const RobustnessMetrics& metrics);
std::string robustness_summary_json(const RobustnessMetrics& metrics);

/// Shortest decimal that reads back to the same double; "nan"/"inf" otherwise.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fairwork::io

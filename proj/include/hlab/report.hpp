#pragma once
// JSON form of AnalysisReport. Serialization is deterministic (no clocks,
// insertion-ordered keys) and from_json inverts to_json exactly.

#include <string>

#include "hlab/analysis.hpp"
#include "hlab/config.hpp"

namespace hlab {

ordered_json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const ordered_json& j);
std::string dump_report(const AnalysisReport& r);

// Re-runs the witness or certificate check from the report's own marginals.
bool reverify(const AnalysisReport& r, std::string* why = nullptr);

}  // namespace hlab

#pragma once
// Parameter sweeps over the eprb and leggett_garg scenarios. Grid points are
// evaluated on a thread pool (HISTORIES_LAB_THREADS caps it) and gathered in
// row-major grid order, first axis slowest.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hlab/analysis.hpp"

namespace hlab {

struct SweepAxis {
    std::string param;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t steps = 0;  // grid points, endpoints included

    double value(std::size_t i) const;
};

// "lo:hi:steps"; steps must be a positive integer.
SweepAxis parse_range(const std::string& param, const std::string& range);

struct SweepRow {
    std::vector<double> params;
    bool pairwise_consistent = false;
    bool combined_consistent = false;
    bool combined_linearly_positive = false;
    double max_inequality_value = 0.0;  // CHSH (bound 2) or Bell (bound 1)
    bool inequality_satisfied = false;
    std::optional<bool> feasible;
};

std::size_t sweep_threads(std::size_t points);

std::vector<SweepRow> run_sweep(const std::string& scenario, const std::vector<SweepAxis>& axes,
                                const std::map<std::string, double>& fixed = {}, const AnalysisOptions& opts = {},
                                std::size_t threads = 0);

SweepRow sweep_row(const AnalysisReport& r, std::vector<double> params);

std::string sweep_csv(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows);

}  // namespace hlab

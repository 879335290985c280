#pragma once
// Where a history set sits on the ladder of classicality conditions:
//   decoherent => consistent => partially decoherent => linearly positive
// plus zero-cover detection over coarse-grainings within one set.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hlab/histories.hpp"

namespace hlab {

inline constexpr double kDefaultClassicalityTolerance = 1e-10;
inline constexpr double kDefaultZeroCoverThreshold = 1e-9;

struct ClassicalityReport {
    bool decoherent = false;            // all off-diagonal |D| <= tol
    bool consistent = false;            // all off-diagonal |Re D| <= tol
    bool partially_decoherent = false;  // |q(a) - p(a)| <= tol for every a
    bool linearly_positive = false;     // q(a) >= -tol for every a
    double max_offdiag_abs = 0.0;
    double max_offdiag_re = 0.0;
    double max_partial_interference = 0.0;  // max_a |q(a) - p(a)| = max_a |Re D(a, not a)|
    double min_quasi = 0.0;
    double tolerance_used = 0.0;
};

ClassicalityReport classify(const HistorySet& set, double tol = kDefaultClassicalityTolerance);

// Same classification from precomputed pieces. quasi[a] pairs with row a of d.
ClassicalityReport classify(const DecoherenceFunctional& d, std::span<const double> quasi,
                            double tol = kDefaultClassicalityTolerance);

enum class ZeroCoverStatus { found, preclusive, not_evaluated };

struct ZeroCoverReport {
    ZeroCoverStatus status = ZeroCoverStatus::not_evaluated;
    // First offending union: fewest members, ties broken lexicographically
    // (history indices, ascending).
    std::optional<std::vector<std::size_t>> witness;
    double witness_measure = 0.0;
    // Every offending union found, in enumeration order (size, then lexicographic).
    std::vector<std::vector<std::size_t>> witnesses;
    std::size_t unions_examined = 0;

    bool found() const noexcept { return status == ZeroCoverStatus::found; }
    bool preclusive() const noexcept { return status == ZeroCoverStatus::preclusive; }
};

struct ZeroCoverOptions {
    double threshold = kDefaultZeroCoverThreshold;
    std::size_t max_subset = 0;        // 0: up to the whole set
    std::size_t enumeration_cap = 4096;
};

// Searches unions of 2..max_subset histories whose members all have measure
// above threshold while the summed class operator has measure at or below it.
ZeroCoverReport detect_zero_cover(const HistorySet& set, const ZeroCoverOptions& opts = {});

const char* to_string(ZeroCoverStatus s) noexcept;

}  // namespace hlab

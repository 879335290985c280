#include "hlab/classicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hlab/errors.hpp"

namespace hlab {

ClassicalityReport classify(const DecoherenceFunctional& d, std::span<const double> quasi, double tol) {
    const auto n = d.entries.rows();
    if (static_cast<std::size_t>(n) != quasi.size())
        throw ValidationError("quasi-probability count does not match the decoherence functional");
    ClassicalityReport r;
    r.tolerance_used = tol;
    r.min_quasi = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b) continue;
            r.max_offdiag_abs = std::max(r.max_offdiag_abs, std::abs(d.entries(a, b)));
            r.max_offdiag_re = std::max(r.max_offdiag_re, std::abs(d.entries(a, b).real()));
        }
        const double p = d.entries(a, a).real();
        const double q = quasi[static_cast<std::size_t>(a)];
        r.max_partial_interference = std::max(r.max_partial_interference, std::abs(q - p));
        r.min_quasi = std::min(r.min_quasi, q);
    }
    r.decoherent = r.max_offdiag_abs <= tol;
    // Closed under the hierarchy: with a complete set 1 - C_a = sum_{b != a} C_b,
    // so consistency forces Re D(a, not a) = 0 exactly, and q = p >= 0 follows.
    r.consistent = r.decoherent || r.max_offdiag_re <= tol;
    r.partially_decoherent = r.consistent || r.max_partial_interference <= tol;
    r.linearly_positive = r.partially_decoherent || r.min_quasi >= -tol;
    return r;
}

ClassicalityReport classify(const HistorySet& set, double tol) {
    const auto d = decoherence_functional(set);
    const auto q = quasi_probabilities(set);
    return classify(d, q, tol);
}

namespace {

// C(n, k) saturating at cap + 1.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    long double v = 1.0L;
    for (std::size_t i = 1; i <= k; ++i) {
        v = v * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (v > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::size_t>(std::llround(v));
}

}  // namespace

ZeroCoverReport detect_zero_cover(const HistorySet& set, const ZeroCoverOptions& opts) {
    ZeroCoverReport r;
    const std::size_t n = set.size();
    const std::size_t max_k = opts.max_subset == 0 ? n : std::min(opts.max_subset, n);

    std::size_t total = 0;
    for (std::size_t k = 2; k <= max_k; ++k) {
        total += binomial_capped(n, k, opts.enumeration_cap);
        if (total > opts.enumeration_cap) {
            r.status = ZeroCoverStatus::not_evaluated;
            return r;
        }
    }

    std::vector<ComplexMatrix> mats;
    std::vector<bool> nonzero;
    for (const auto& c : set.operators()) {
        mats.push_back(c.matrix());
        nonzero.push_back(measure(set, mats.back()) > opts.threshold);
    }

    std::vector<std::size_t> idx;
    for (std::size_t k = 2; k <= max_k; ++k) {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            ++r.unions_examined;
            const bool members_ok = std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return nonzero[i]; });
            if (members_ok) {
                ComplexMatrix sum = mats[idx[0]];
                for (std::size_t i = 1; i < k; ++i) sum += mats[idx[i]];
                const double mu = measure(set, sum);
                if (mu <= opts.threshold) {
                    if (!r.witness) {
                        r.witness = idx;
                        r.witness_measure = mu;
                    }
                    r.witnesses.push_back(idx);
                }
            }
            // next k-combination in lexicographic order
            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
            if (pos == 0) break;
            ++idx[pos - 1];
            for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    r.status = r.witness ? ZeroCoverStatus::found : ZeroCoverStatus::preclusive;
    return r;
}

const char* to_string(ZeroCoverStatus s) noexcept {
    switch (s) {
        case ZeroCoverStatus::found: return "found";
        case ZeroCoverStatus::preclusive: return "preclusive";
        case ZeroCoverStatus::not_evaluated: return "not_evaluated";
    }
    return "unknown";
}

}  // namespace hlab

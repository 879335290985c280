#pragma once
// End-to-end analysis of a scenario: build every set, classify it, extract
// marginals from the consistent ones, unify them, probe uniqueness and check
// the expected values.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hlab/classicality.hpp"
#include "hlab/scenarios.hpp"
#include "hlab/unify.hpp"

namespace hlab {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr double kExpectedTolerance = 1e-9;

struct AnalysisOptions {
    double tol = kDefaultClassicalityTolerance;
    double delta = kDefaultDelta;
    bool exact = false;
    bool uniqueness = true;
    ZeroCoverOptions zero_cover{};
};

struct SetReport {
    std::string name;
    std::vector<std::string> labels;
    std::vector<double> probabilities;
    std::vector<double> quasi;
    double probability_sum = 0.0;
    bool post_selected = false;
    ClassicalityReport classicality;
    ZeroCoverReport zero_cover;
};

struct CorrelationEntry {
    std::string first;
    std::string second;
    double value = 0.0;
};

struct QuasiSection {
    std::string set;
    std::vector<double> q;  // over the joint space
    bool viable = false;
    std::vector<MarginalTable> marginals_used;
    FeasibilityVerdict verdict;
};

struct UnifySection {
    std::vector<Variable> variables;
    std::vector<MarginalTable> marginals;
    FeasibilityVerdict verdict;
    std::vector<CorrelationEntry> correlations;
    std::optional<BellResult> bell;
    std::optional<ChshResult> chsh;
    std::optional<QuasiSection> quasi;
};

struct ExpectedCheck {
    std::string key;
    double expected = 0.0;
    std::optional<Rational> expected_exact;
    Provenance provenance = Provenance::derived;
    std::optional<double> actual;
    std::optional<Rational> actual_exact;
    bool pass = false;
};

struct AnalysisReport {
    int schema_version = kReportSchemaVersion;
    std::string source;  // "scenario" or "config"
    std::string name;
    std::vector<std::pair<std::string, double>> parameters;
    AnalysisOptions options;
    std::vector<SetReport> sets;
    std::optional<UnifySection> unify;
    std::vector<ExpectedCheck> expected;

    const SetReport* find_set(const std::string& n) const;
    bool expected_pass() const;
};

AnalysisReport analyze(const ScenarioDescriptor& s, const AnalysisOptions& opts = {}, std::string source = "scenario");

// Looks up an expected-value key in a finished report.
std::optional<double> resolve_key(const AnalysisReport& r, const std::string& key);

}  // namespace hlab

#include "hlab/analysis.hpp"

#include <cmath>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

std::optional<std::size_t> label_index(const SetReport& s, const std::string& label) {
    for (std::size_t i = 0; i < s.labels.size(); ++i)
        if (s.labels[i] == label) return i;
    return std::nullopt;
}

std::optional<std::size_t> variable_index(const std::vector<Variable>& vars, const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name) return i;
    return std::nullopt;
}

// "a/b/c" -> {"a", "b/c"}
std::pair<std::string, std::string> split_head(const std::string& s) {
    const auto k = s.find('/');
    if (k == std::string::npos) return {s, {}};
    return {s.substr(0, k), s.substr(k + 1)};
}

std::optional<std::size_t> witness_cell(const UnifySection& u, const std::string& text) {
    const JointSampleSpace space(u.variables);
    for (std::size_t x = 0; x < space.size(); ++x)
        if (space.cell_text(x) == text) return x;
    return std::nullopt;
}

std::optional<Rational> resolve_exact(const AnalysisReport& r, const std::string& key) {
    const auto [head, rest] = split_head(key);
    if (head != "witness" || !r.unify || !r.unify->verdict.exact_witness) return std::nullopt;
    const auto cell = witness_cell(*r.unify, rest);
    if (!cell) return std::nullopt;
    return (*r.unify->verdict.exact_witness)[*cell];
}

}  // namespace

const SetReport* AnalysisReport::find_set(const std::string& n) const {
    for (const auto& s : sets)
        if (s.name == n) return &s;
    return nullptr;
}

bool AnalysisReport::expected_pass() const {
    for (const auto& e : expected)
        if (!e.pass) return false;
    return true;
}

std::optional<double> resolve_key(const AnalysisReport& r, const std::string& key) {
    const auto [head, rest] = split_head(key);
    auto flag = [](bool b) { return b ? 1.0 : 0.0; };
    if (head == "p" || head == "q") {
        const auto [set, label] = split_head(rest);
        const auto* s = r.find_set(set);
        if (!s) return std::nullopt;
        const auto i = label_index(*s, label);
        if (!i) return std::nullopt;
        return head == "p" ? s->probabilities[*i] : s->quasi[*i];
    }
    if (head == "consistent" || head == "zero_cover") {
        const auto* s = r.find_set(rest);
        if (!s) return std::nullopt;
        if (head == "consistent") return flag(s->classicality.consistent);
        if (s->zero_cover.status == ZeroCoverStatus::not_evaluated) return std::nullopt;
        return flag(s->zero_cover.found());
    }
    if (!r.unify) return std::nullopt;
    const auto& u = *r.unify;
    if (head == "feasible") {
        if (u.verdict.status == FeasibilityStatus::not_evaluated) return std::nullopt;
        return flag(u.verdict.feasible());
    }
    if (head == "unique") {
        if (!u.verdict.unique) return std::nullopt;
        return flag(*u.verdict.unique);
    }
    if (head == "viable") {
        if (!u.quasi || u.quasi->verdict.status == FeasibilityStatus::not_evaluated) return std::nullopt;
        return flag(u.quasi->viable);
    }
    if (head == "witness") {
        if (!u.verdict.feasible()) return std::nullopt;
        const auto cell = witness_cell(u, rest);
        if (!cell) return std::nullopt;
        return u.verdict.witness[*cell];
    }
    if (head == "corr") {
        const auto comma = rest.find(',');
        if (comma == std::string::npos) return std::nullopt;
        const auto a = rest.substr(0, comma), b = rest.substr(comma + 1);
        for (const auto& c : u.correlations)
            if ((c.first == a && c.second == b) || (c.first == b && c.second == a)) return c.value;
        return std::nullopt;
    }
    return std::nullopt;
}

AnalysisReport analyze(const ScenarioDescriptor& s, const AnalysisOptions& opts, std::string source) {
    AnalysisReport r;
    r.source = std::move(source);
    r.name = s.name;
    r.parameters = s.parameters;
    r.options = opts;

    std::vector<HistorySet> built;
    built.reserve(s.sets.size());
    for (const auto& ns : s.sets) {
        built.push_back(build_set(s, ns));
        const auto& set = built.back();
        SetReport sr;
        sr.name = ns.name;
        for (std::size_t i = 0; i < set.size(); ++i) sr.labels.push_back(set.label_text(i));
        const auto d = decoherence_functional(set);
        sr.probabilities.resize(set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            sr.probabilities[i] = d.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        sr.quasi = quasi_probabilities(set);
        sr.probability_sum = d.probability_sum();
        sr.post_selected = d.post_selected;
        sr.classicality = classify(d, sr.quasi, opts.tol);
        sr.zero_cover = detect_zero_cover(set, opts.zero_cover);
        r.sets.push_back(std::move(sr));
    }

    if (s.unify) {
        const auto& plan = *s.unify;
        const JointSampleSpace space(plan.variables);
        UnifySection u;
        u.variables = space.variables();
        UnifyOptions uo;
        uo.delta = opts.delta;
        uo.exact = opts.exact;

        std::string skipped;
        for (const auto& [set_name, bindings] : plan.map) {
            std::size_t k = 0;
            while (k < s.sets.size() && s.sets[k].name != set_name) ++k;
            if (k == s.sets.size()) throw ValidationError("unify map names unknown set '" + set_name + "'");
            if (!r.sets[k].classicality.consistent) {
                skipped += (skipped.empty() ? "" : ", ") + set_name;
                continue;
            }
            auto m = extract_marginals(built[k], bindings, space, opts.tol, set_name);
            if (opts.exact) {
                std::vector<Rational> ex;
                for (double v : m.values) {
                    auto q = to_rational(v);
                    if (!q) {
                        ex.clear();
                        break;
                    }
                    ex.push_back(*q);
                }
                if (ex.size() == m.values.size()) m.exact = std::move(ex);
            }
            u.marginals.push_back(std::move(m));
        }
        if (!skipped.empty()) {
            u.verdict.note = "not evaluated: inconsistent sets have no probabilities (" + skipped + ")";
        } else {
            u.verdict = opts.uniqueness ? probe_uniqueness(space, u.marginals, uo)
                                        : find_unifying_probability(space, u.marginals, uo);
        }

        const auto corr = correlations(space, u.marginals);
        for (const auto& [pair, value] : corr.entries())
            u.correlations.push_back({u.variables[pair.first].name, u.variables[pair.second].name, value});
        auto indices = [&](const auto& names) {
            std::array<std::size_t, std::tuple_size_v<std::decay_t<decltype(names)>>> out{};
            for (std::size_t i = 0; i < names.size(); ++i) {
                const auto v = variable_index(u.variables, names[i]);
                if (!v) throw ValidationError("unknown variable '" + names[i] + "'");
                out[i] = *v;
            }
            return out;
        };
        if (plan.bell) u.bell = bell_check(corr, indices(*plan.bell), opts.delta);
        if (plan.chsh) u.chsh = chsh_check(corr, indices(*plan.chsh), opts.delta);

        if (plan.quasi_set) {
            std::size_t k = 0;
            while (k < s.sets.size() && s.sets[k].name != *plan.quasi_set) ++k;
            if (k == s.sets.size()) throw ValidationError("unknown quasi set '" + *plan.quasi_set + "'");
            // Slot i binds variable i with identity groups.
            const auto& slots = s.sets[k].schedule.slots();
            if (slots.size() != u.variables.size())
                throw ValidationError("quasi set '" + *plan.quasi_set + "' needs one slot per variable");
            std::vector<SlotBinding> bindings;
            for (const auto& v : u.variables) bindings.push_back({v.name, {}});
            QuasiSection qs;
            qs.set = *plan.quasi_set;
            qs.q = quasi_table(built[k], bindings, space);
            auto qc = classify_quasiprobability(space, qs.q, MarginalPolicy::maximal_nonnegative, uo, opts.tol);
            qs.viable = qc.viable;
            qs.marginals_used = std::move(qc.marginals_used);
            qs.verdict = std::move(qc.verdict);
            u.quasi = std::move(qs);
        }
        r.unify = std::move(u);
    }

    for (const auto& e : s.expected) {
        ExpectedCheck c;
        c.key = e.key;
        c.expected = e.value;
        c.expected_exact = e.exact;
        c.provenance = e.provenance;
        c.actual = resolve_key(r, e.key);
        c.actual_exact = resolve_exact(r, e.key);
        if (c.expected_exact && c.actual_exact)
            c.pass = *c.expected_exact == *c.actual_exact;
        else
            c.pass = c.actual && std::abs(*c.actual - c.expected) <= kExpectedTolerance;
        r.expected.push_back(std::move(c));
    }
    return r;
}

}  // namespace hlab

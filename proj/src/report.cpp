#include "hlab/report.hpp"

#include "hlab/errors.hpp"

namespace hlab {

namespace {

using J = ordered_json;

J rationals(const std::vector<Rational>& v) {
    J out = J::array();
    for (const auto& r : v) out.push_back(to_text(r));
    return out;
}

std::vector<Rational> rationals_from(const J& j) {
    std::vector<Rational> out;
    for (const auto& x : j) out.push_back(rational_from_text(x.get<std::string>()));
    return out;
}

template <class T>
J opt(const std::optional<T>& v) {
    return v ? J(*v) : J(nullptr);
}

template <class T>
std::optional<T> opt_from(const J& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

FeasibilityStatus status_from(const std::string& s) {
    if (s == "feasible") return FeasibilityStatus::feasible;
    if (s == "infeasible") return FeasibilityStatus::infeasible;
    if (s == "not_evaluated") return FeasibilityStatus::not_evaluated;
    throw ValidationError("report: unknown feasibility status '" + s + "'");
}

ZeroCoverStatus zero_cover_from(const std::string& s) {
    if (s == "found") return ZeroCoverStatus::found;
    if (s == "preclusive") return ZeroCoverStatus::preclusive;
    if (s == "not_evaluated") return ZeroCoverStatus::not_evaluated;
    throw ValidationError("report: unknown zero-cover status '" + s + "'");
}

J to_json(const ClassicalityReport& c) {
    return J{{"decoherent", c.decoherent},
             {"consistent", c.consistent},
             {"partially_decoherent", c.partially_decoherent},
             {"linearly_positive", c.linearly_positive},
             {"max_offdiag_abs", c.max_offdiag_abs},
             {"max_offdiag_re", c.max_offdiag_re},
             {"max_partial_interference", c.max_partial_interference},
             {"min_quasi", c.min_quasi},
             {"tolerance_used", c.tolerance_used}};
}

ClassicalityReport classicality_from(const J& j) {
    ClassicalityReport c;
    c.decoherent = j.at("decoherent");
    c.consistent = j.at("consistent");
    c.partially_decoherent = j.at("partially_decoherent");
    c.linearly_positive = j.at("linearly_positive");
    c.max_offdiag_abs = j.at("max_offdiag_abs");
    c.max_offdiag_re = j.at("max_offdiag_re");
    c.max_partial_interference = j.at("max_partial_interference");
    c.min_quasi = j.at("min_quasi");
    c.tolerance_used = j.at("tolerance_used");
    return c;
}

J to_json(const ZeroCoverReport& z, const std::vector<std::string>& labels) {
    auto texts = [&](const std::vector<std::size_t>& u) {
        J out = J::array();
        for (auto i : u) out.push_back(labels.at(i));
        return out;
    };
    J ws = J::array();
    for (const auto& w : z.witnesses) ws.push_back(w);
    J wt = J::array();
    for (const auto& w : z.witnesses) wt.push_back(texts(w));
    return J{{"status", to_string(z.status)},
             {"witness", z.witness ? J(*z.witness) : J(nullptr)},
             {"witness_labels", z.witness ? texts(*z.witness) : J(nullptr)},
             {"witness_measure", z.witness_measure},
             {"witnesses", std::move(ws)},
             {"witnesses_labels", std::move(wt)},
             {"unions_examined", z.unions_examined}};
}

ZeroCoverReport zero_cover_report_from(const J& j) {
    ZeroCoverReport z;
    z.status = zero_cover_from(j.at("status"));
    z.witness = opt_from<std::vector<std::size_t>>(j.at("witness"));
    z.witness_measure = j.at("witness_measure");
    z.witnesses = j.at("witnesses").get<std::vector<std::vector<std::size_t>>>();
    z.unions_examined = j.at("unions_examined");
    return z;
}

J to_json(const Variable& v) { return J{{"name", v.name}, {"outcomes", v.outcomes}, {"values", v.values}}; }

Variable variable_from(const J& j) {
    return {j.at("name"), j.at("outcomes").get<std::vector<std::string>>(), j.at("values").get<std::vector<double>>()};
}

J to_json(const MarginalTable& m, const std::vector<Variable>& vars) {
    J axes = J::array();
    for (const auto& a : m.axes)
        axes.push_back(J{{"variable", vars.at(a.variable).name}, {"coarse_of", a.coarse_of}, {"labels", a.labels}});
    J cells = J::array();
    for (std::size_t c = 0; c < m.cell_count(); ++c) cells.push_back(m.cell_text(c));
    return J{{"source", m.source},
             {"axes", std::move(axes)},
             {"cells", std::move(cells)},
             {"values", m.values},
             {"exact", m.exact ? rationals(*m.exact) : J(nullptr)}};
}

MarginalTable marginal_from(const J& j, const std::vector<Variable>& vars) {
    MarginalTable m;
    m.source = j.at("source");
    for (const auto& a : j.at("axes")) {
        MarginalAxis axis;
        const std::string name = a.at("variable");
        std::size_t k = 0;
        while (k < vars.size() && vars[k].name != name) ++k;
        if (k == vars.size()) throw ValidationError("report: marginal axis names unknown variable '" + name + "'");
        axis.variable = k;
        axis.coarse_of = a.at("coarse_of").get<std::vector<std::size_t>>();
        axis.labels = a.at("labels").get<std::vector<std::string>>();
        m.axes.push_back(std::move(axis));
    }
    m.values = j.at("values").get<std::vector<double>>();
    if (!j.at("exact").is_null()) m.exact = rationals_from(j.at("exact"));
    return m;
}

J to_json(const FeasibilityVerdict& v, const std::vector<Variable>& vars) {
    J cells = J::array();
    if (!v.witness.empty() || !v.component_bounds.empty()) {
        const JointSampleSpace space(vars);
        for (std::size_t x = 0; x < space.size(); ++x) cells.push_back(space.cell_text(x));
    }
    J bounds = J::array();
    for (const auto& b : v.component_bounds) bounds.push_back(J::array({b.min, b.max}));
    return J{{"status", to_string(v.status)},
             {"arithmetic", to_string(v.arithmetic)},
             {"delta", v.delta},
             {"cells", std::move(cells)},
             {"witness", v.witness},
             {"exact_witness", v.exact_witness ? rationals(*v.exact_witness) : J(nullptr)},
             {"farkas_certificate", v.farkas_certificate},
             {"exact_certificate", v.exact_certificate ? rationals(*v.exact_certificate) : J(nullptr)},
             {"unique", opt(v.unique)},
             {"component_bounds", std::move(bounds)},
             {"note", v.note}};
}

FeasibilityVerdict verdict_from(const J& j) {
    FeasibilityVerdict v;
    v.status = status_from(j.at("status"));
    v.arithmetic = j.at("arithmetic") == "exact" ? Arithmetic::exact : Arithmetic::floating;
    v.delta = j.at("delta");
    v.witness = j.at("witness").get<std::vector<double>>();
    if (!j.at("exact_witness").is_null()) v.exact_witness = rationals_from(j.at("exact_witness"));
    v.farkas_certificate = j.at("farkas_certificate").get<std::vector<double>>();
    if (!j.at("exact_certificate").is_null()) v.exact_certificate = rationals_from(j.at("exact_certificate"));
    v.unique = opt_from<bool>(j.at("unique"));
    for (const auto& b : j.at("component_bounds")) v.component_bounds.push_back({b.at(0), b.at(1)});
    v.note = j.at("note");
    return v;
}

J to_json(const BellResult& b) {
    return J{{"satisfied", b.satisfied}, {"slack", b.slack}, {"sum", b.sum},
             {"lower", b.lower},         {"upper", b.upper}, {"max_value", b.max_value}};
}

BellResult bell_from(const J& j) {
    BellResult b;
    b.satisfied = j.at("satisfied");
    b.slack = j.at("slack");
    b.sum = j.at("sum");
    b.lower = j.at("lower");
    b.upper = j.at("upper");
    b.max_value = j.at("max_value");
    return b;
}

J to_json(const ChshResult& c) {
    return J{{"satisfied", c.satisfied}, {"values", c.values}, {"max_value", c.max_value}};
}

ChshResult chsh_from(const J& j) {
    ChshResult c;
    c.satisfied = j.at("satisfied");
    c.values = j.at("values").get<std::array<double, 8>>();
    c.max_value = j.at("max_value");
    return c;
}

}  // namespace

ordered_json to_json(const AnalysisReport& r) {
    J j;
    j["schema_version"] = r.schema_version;
    j["source"] = r.source;
    j["name"] = r.name;
    J params = J::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    j["parameters"] = std::move(params);
    j["options"] = J{{"tol", r.options.tol},
                     {"delta", r.options.delta},
                     {"exact", r.options.exact},
                     {"uniqueness", r.options.uniqueness},
                     {"zero_cover_threshold", r.options.zero_cover.threshold},
                     {"zero_cover_max_subset", r.options.zero_cover.max_subset},
                     {"zero_cover_enumeration_cap", r.options.zero_cover.enumeration_cap}};

    J sets = J::array();
    for (const auto& s : r.sets) {
        sets.push_back(J{{"name", s.name},
                         {"labels", s.labels},
                         {"probabilities", s.probabilities},
                         {"quasi", s.quasi},
                         {"probability_sum", s.probability_sum},
                         {"post_selected", s.post_selected},
                         {"classicality", to_json(s.classicality)},
                         {"zero_cover", to_json(s.zero_cover, s.labels)}});
    }
    j["sets"] = std::move(sets);

    if (r.unify) {
        const auto& u = *r.unify;
        J vars = J::array();
        for (const auto& v : u.variables) vars.push_back(to_json(v));
        J margs = J::array();
        for (const auto& m : u.marginals) margs.push_back(to_json(m, u.variables));
        J corr = J::array();
        for (const auto& c : u.correlations) corr.push_back(J{{"pair", {c.first, c.second}}, {"value", c.value}});
        J uj;
        uj["variables"] = std::move(vars);
        uj["marginals"] = std::move(margs);
        uj["verdict"] = to_json(u.verdict, u.variables);
        uj["correlations"] = std::move(corr);
        uj["bell"] = u.bell ? to_json(*u.bell) : J(nullptr);
        uj["chsh"] = u.chsh ? to_json(*u.chsh) : J(nullptr);
        if (u.quasi) {
            J used = J::array();
            for (const auto& m : u.quasi->marginals_used) used.push_back(to_json(m, u.variables));
            uj["quasi"] = J{{"set", u.quasi->set},
                            {"q", u.quasi->q},
                            {"viable", u.quasi->viable},
                            {"marginals_used", std::move(used)},
                            {"verdict", to_json(u.quasi->verdict, u.variables)}};
        } else {
            uj["quasi"] = nullptr;
        }
        j["unify"] = std::move(uj);
    } else {
        j["unify"] = nullptr;
    }

    J ex = J::array();
    for (const auto& e : r.expected) {
        ex.push_back(J{{"key", e.key},
                       {"expected", e.expected},
                       {"expected_exact", e.expected_exact ? J(to_text(*e.expected_exact)) : J(nullptr)},
                       {"provenance", to_string(e.provenance)},
                       {"actual", opt(e.actual)},
                       {"actual_exact", e.actual_exact ? J(to_text(*e.actual_exact)) : J(nullptr)},
                       {"pass", e.pass}});
    }
    j["expected"] = std::move(ex);
    j["expected_pass"] = r.expected_pass();
    return j;
}

AnalysisReport report_from_json(const ordered_json& j) {
    try {
        AnalysisReport r;
        r.schema_version = j.at("schema_version");
        if (r.schema_version != kReportSchemaVersion)
            throw ValidationError("report schema version " + std::to_string(r.schema_version) + " is not supported");
        r.source = j.at("source");
        r.name = j.at("name");
        for (const auto& [k, v] : j.at("parameters").items()) r.parameters.emplace_back(k, v.get<double>());
        const auto& o = j.at("options");
        r.options.tol = o.at("tol");
        r.options.delta = o.at("delta");
        r.options.exact = o.at("exact");
        r.options.uniqueness = o.at("uniqueness");
        r.options.zero_cover.threshold = o.at("zero_cover_threshold");
        r.options.zero_cover.max_subset = o.at("zero_cover_max_subset");
        r.options.zero_cover.enumeration_cap = o.at("zero_cover_enumeration_cap");

        for (const auto& s : j.at("sets")) {
            SetReport sr;
            sr.name = s.at("name");
            sr.labels = s.at("labels").get<std::vector<std::string>>();
            sr.probabilities = s.at("probabilities").get<std::vector<double>>();
            sr.quasi = s.at("quasi").get<std::vector<double>>();
            sr.probability_sum = s.at("probability_sum");
            sr.post_selected = s.at("post_selected");
            sr.classicality = classicality_from(s.at("classicality"));
            sr.zero_cover = zero_cover_report_from(s.at("zero_cover"));
            r.sets.push_back(std::move(sr));
        }

        if (!j.at("unify").is_null()) {
            const auto& uj = j.at("unify");
            UnifySection u;
            for (const auto& v : uj.at("variables")) u.variables.push_back(variable_from(v));
            for (const auto& m : uj.at("marginals")) u.marginals.push_back(marginal_from(m, u.variables));
            u.verdict = verdict_from(uj.at("verdict"));
            for (const auto& c : uj.at("correlations"))
                u.correlations.push_back({c.at("pair").at(0), c.at("pair").at(1), c.at("value")});
            if (!uj.at("bell").is_null()) u.bell = bell_from(uj.at("bell"));
            if (!uj.at("chsh").is_null()) u.chsh = chsh_from(uj.at("chsh"));
            if (!uj.at("quasi").is_null()) {
                const auto& qj = uj.at("quasi");
                QuasiSection q;
                q.set = qj.at("set");
                q.q = qj.at("q").get<std::vector<double>>();
                q.viable = qj.at("viable");
                for (const auto& m : qj.at("marginals_used")) q.marginals_used.push_back(marginal_from(m, u.variables));
                q.verdict = verdict_from(qj.at("verdict"));
                u.quasi = std::move(q);
            }
            r.unify = std::move(u);
        }

        for (const auto& e : j.at("expected")) {
            ExpectedCheck c;
            c.key = e.at("key");
            c.expected = e.at("expected");
            if (!e.at("expected_exact").is_null()) c.expected_exact = rational_from_text(e.at("expected_exact"));
            c.provenance = provenance_from_string(e.at("provenance"));
            c.actual = opt_from<double>(e.at("actual"));
            if (!e.at("actual_exact").is_null()) c.actual_exact = rational_from_text(e.at("actual_exact"));
            c.pass = e.at("pass");
            r.expected.push_back(std::move(c));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

std::string dump_report(const AnalysisReport& r) { return to_json(r).dump(2) + "\n"; }

bool reverify(const AnalysisReport& r, std::string* why) {
    if (!r.unify) return true;
    const auto& u = *r.unify;
    const JointSampleSpace space(u.variables);
    auto check = [&](const std::vector<MarginalTable>& ms, const FeasibilityVerdict& v, const char* what) {
        std::string reason;
        bool ok = true;
        if (v.feasible()) ok = verify_witness(space, ms, v, &reason);
        else if (v.infeasible()) ok = verify_certificate(space, ms, v, &reason);
        if (!ok && why) *why = std::string(what) + ": " + reason;
        return ok;
    };
    if (!check(u.marginals, u.verdict, "unifier")) return false;
    if (u.quasi && !check(u.quasi->marginals_used, u.quasi->verdict, "quasi-probability")) return false;
    return true;
}

}  // namespace hlab

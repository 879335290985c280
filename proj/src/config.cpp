#include "hlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hlab {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid config (" << issues.size() << (issues.size() == 1 ? " problem)" : " problems)");
    for (const auto& i : issues) os << "\n  " << (i.path.empty() ? "<root>" : i.path) << ": " << i.reason;
    return os.str();
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

class Parser {
public:
    std::vector<ConfigIssue> issues;

    void fail(const std::string& path, std::string reason) { issues.push_back({path, std::move(reason)}); }

    const ordered_json* field(const ordered_json& obj, const std::string& path, const char* key, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(sub(path, key), "missing required field");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const ordered_json& j, const std::string& path) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            fail(path, "number is not finite");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::string> string(const ordered_json& j, const std::string& path) {
        if (!j.is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    std::optional<std::vector<std::string>> strings(const ordered_json& j, const std::string& path) {
        if (!j.is_array()) {
            fail(path, "expected an array of strings");
            return std::nullopt;
        }
        std::vector<std::string> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto s = string(j[i], at(path, i));
            if (s) out.push_back(*s);
            else ok = false;
        }
        if (!ok) return std::nullopt;
        return out;
    }

    std::optional<Complex> complex(const ordered_json& j, const std::string& path) {
        if (j.is_number()) {
            auto v = number(j, path);
            if (!v) return std::nullopt;
            return Complex(*v, 0.0);
        }
        if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
            auto re = number(j[0], at(path, 0));
            auto im = number(j[1], at(path, 1));
            if (!re || !im) return std::nullopt;
            return Complex(*re, *im);
        }
        fail(path, "expected a complex number (a number or [re, im])");
        return std::nullopt;
    }

    std::optional<ComplexVector> ket(const ordered_json& j, const std::string& path, std::size_t dim) {
        if (!j.is_array()) {
            fail(path, "expected an array of complex amplitudes");
            return std::nullopt;
        }
        if (dim && j.size() != dim) {
            fail(path, "ket has " + std::to_string(j.size()) + " entries, expected dim = " + std::to_string(dim));
            return std::nullopt;
        }
        ComplexVector v(static_cast<Eigen::Index>(j.size()));
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto c = complex(j[i], at(path, i));
            if (c) v(static_cast<Eigen::Index>(i)) = *c;
            else ok = false;
        }
        if (!ok) return std::nullopt;
        return v;
    }

    std::optional<ComplexMatrix> matrix(const ordered_json& j, const std::string& path, std::size_t dim) {
        if (!j.is_array() || j.empty()) {
            fail(path, "expected a matrix (array of rows)");
            return std::nullopt;
        }
        if (dim && j.size() != dim) {
            fail(path, "matrix has " + std::to_string(j.size()) + " rows, expected dim = " + std::to_string(dim));
            return std::nullopt;
        }
        const std::size_t n = j.size();
        ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        bool ok = true;
        for (std::size_t r = 0; r < n; ++r) {
            const auto rp = at(path, r);
            if (!j[r].is_array() || j[r].size() != n) {
                fail(rp, "row must have " + std::to_string(n) + " entries");
                ok = false;
                continue;
            }
            for (std::size_t c = 0; c < n; ++c) {
                auto v = complex(j[r][c], at(rp, c));
                if (v) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *v;
                else ok = false;
            }
        }
        if (!ok) return std::nullopt;
        return m;
    }

    std::optional<DensityOperator> state(const ordered_json& j, const std::string& path, std::size_t dim) {
        try {
            if (j.is_object()) {
                const auto* k = field(j, path, "ket", true);
                if (!k) return std::nullopt;
                auto v = ket(*k, sub(path, "ket"), dim);
                if (!v) return std::nullopt;
                return DensityOperator::pure(*v);
            }
            auto m = matrix(j, path, dim);
            if (!m) return std::nullopt;
            return DensityOperator(*m);
        } catch (const Error& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<Projector> projector(const ordered_json& j, const std::string& path, std::size_t dim) {
        try {
            if (j.is_object()) {
                if (j.contains("ket")) {
                    auto v = ket(j["ket"], sub(path, "ket"), dim);
                    if (!v) return std::nullopt;
                    if (v->norm() == 0.0) {
                        fail(sub(path, "ket"), "zero ket");
                        return std::nullopt;
                    }
                    return Projector::onto(*v);
                }
                if (j.contains("bloch")) {
                    if (dim != 2) {
                        fail(sub(path, "bloch"), "Bloch-vector projectors need dim = 2");
                        return std::nullopt;
                    }
                    const auto& b = j["bloch"];
                    const auto bp = sub(path, "bloch");
                    if (!b.is_array() || b.size() != 3) {
                        fail(bp, "expected [x, y, z]");
                        return std::nullopt;
                    }
                    Eigen::Vector3d a;
                    bool ok = true;
                    for (std::size_t i = 0; i < 3; ++i) {
                        auto v = number(b[i], at(bp, i));
                        if (v) a(static_cast<Eigen::Index>(i)) = *v;
                        else ok = false;
                    }
                    const auto* s = field(j, path, "sign", true);
                    std::optional<double> sign;
                    if (s) sign = number(*s, sub(path, "sign"));
                    if (!ok || !sign) return std::nullopt;
                    if (*sign != 1.0 && *sign != -1.0) {
                        fail(sub(path, "sign"), "sign must be +1 or -1");
                        return std::nullopt;
                    }
                    if (std::abs(a.norm() - 1.0) > kDefaultTolerance) {
                        std::ostringstream os;
                        os << "Bloch vector is not a unit vector (|a| = " << a.norm() << ")";
                        fail(bp, os.str());
                        return std::nullopt;
                    }
                    return Projector::spin(a, static_cast<int>(*sign));
                }
                fail(path, "projector object needs \"ket\" or \"bloch\"");
                return std::nullopt;
            }
            auto m = matrix(j, path, dim);
            if (!m) return std::nullopt;
            return Projector(*m);
        } catch (const Error& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<NamedSchedule> schedule(const ordered_json& j, const std::string& path, std::size_t dim,
                                          const std::optional<Hamiltonian>& h) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return std::nullopt;
        }
        std::optional<std::string> name;
        if (const auto* n = field(j, path, "name", true)) name = string(*n, sub(path, "name"));
        const auto* slots = field(j, path, "slots", true);
        if (!slots) return std::nullopt;
        const auto sp = sub(path, "slots");
        if (!slots->is_array() || slots->empty()) {
            fail(sp, "expected a non-empty array of slots");
            return std::nullopt;
        }
        std::vector<HistorySlot> out;
        bool ok = true;
        for (std::size_t i = 0; i < slots->size(); ++i) {
            const auto& s = (*slots)[i];
            const auto p = at(sp, i);
            if (!s.is_object()) {
                fail(p, "expected an object");
                ok = false;
                continue;
            }
            HistorySlot slot;
            std::optional<double> t;
            if (const auto* tj = field(s, p, "time", true)) t = number(*tj, sub(p, "time"));
            std::optional<std::vector<std::string>> labels;
            if (const auto* lj = field(s, p, "labels", true)) labels = strings(*lj, sub(p, "labels"));
            bool slot_ok = t && labels;
            if (const auto* pj = field(s, p, "projectors", true)) {
                const auto pp = sub(p, "projectors");
                if (!pj->is_array() || pj->empty()) {
                    fail(pp, "expected a non-empty array of projectors");
                    slot_ok = false;
                } else {
                    for (std::size_t k = 0; k < pj->size(); ++k) {
                        auto proj = projector((*pj)[k], at(pp, k), dim);
                        if (proj) slot.projectors.push_back(std::move(*proj));
                        else slot_ok = false;
                    }
                }
            } else {
                slot_ok = false;
            }
            if (slot_ok && labels->size() != slot.projectors.size()) {
                fail(sub(p, "labels"), "label count " + std::to_string(labels->size()) +
                                           " does not match projector count " +
                                           std::to_string(slot.projectors.size()));
                slot_ok = false;
            }
            if (slot_ok) {
                std::set<std::string> uniq(labels->begin(), labels->end());
                if (uniq.size() != labels->size()) {
                    fail(sub(p, "labels"), "duplicate labels");
                    slot_ok = false;
                }
            }
            if (slot_ok && i > 0 && ok && !out.empty() && !(*t > out.back().time)) {
                fail(sub(p, "time"), "slot times must be strictly increasing");
                slot_ok = false;
            }
            if (slot_ok) {
                const auto rep = validate_projective_decomposition(slot.projectors);
                if (!rep.valid) {
                    std::ostringstream os;
                    os << "projectors are not a projective decomposition of the identity (completeness "
                       << rep.completeness_violation << ", orthogonality " << rep.orthogonality_violation << ")";
                    fail(sub(p, "projectors"), os.str());
                    slot_ok = false;
                }
            }
            if (!slot_ok) {
                ok = false;
                continue;
            }
            slot.time = *t;
            slot.labels = std::move(*labels);
            out.push_back(std::move(slot));
        }
        if (!ok || !name || !h) return std::nullopt;
        try {
            return NamedSchedule{*name, HistorySchedule(std::move(out), *h)};
        } catch (const Error& e) {
            fail(path, e.what());
            return std::nullopt;
        }
    }

    std::optional<UnifyPlan> plan(const ordered_json& j, const std::string& path,
                                  const std::vector<NamedSchedule>& sets, const std::set<std::string>& set_names) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return std::nullopt;
        }
        UnifyPlan out;
        bool ok = true;
        std::set<std::string> var_names;
        if (const auto* vj = field(j, path, "variables", true)) {
            const auto vp = sub(path, "variables");
            if (!vj->is_array() || vj->empty()) {
                fail(vp, "expected a non-empty array of variables");
                ok = false;
            } else {
                for (std::size_t i = 0; i < vj->size(); ++i) {
                    const auto& v = (*vj)[i];
                    const auto p = at(vp, i);
                    if (!v.is_object()) {
                        fail(p, "expected an object");
                        ok = false;
                        continue;
                    }
                    Variable var;
                    std::optional<std::string> name;
                    std::optional<std::vector<std::string>> outs;
                    if (const auto* n = field(v, p, "name", true)) name = string(*n, sub(p, "name"));
                    if (const auto* o = field(v, p, "outcomes", true)) outs = strings(*o, sub(p, "outcomes"));
                    if (!name || !outs) {
                        ok = false;
                        continue;
                    }
                    if (!var_names.insert(*name).second) {
                        fail(sub(p, "name"), "duplicate variable '" + *name + "'");
                        ok = false;
                    }
                    if (outs->empty()) {
                        fail(sub(p, "outcomes"), "no outcomes");
                        ok = false;
                    }
                    if (const auto* vals = field(v, p, "values", false)) {
                        const auto vp2 = sub(p, "values");
                        if (!vals->is_array() || vals->size() != outs->size()) {
                            fail(vp2, "expected one number per outcome");
                            ok = false;
                        } else {
                            for (std::size_t k = 0; k < vals->size(); ++k) {
                                auto x = number((*vals)[k], at(vp2, k));
                                if (x) var.values.push_back(*x);
                                else ok = false;
                            }
                        }
                    }
                    var.name = *name;
                    var.outcomes = *outs;
                    out.variables.push_back(std::move(var));
                }
            }
        } else {
            ok = false;
        }

        if (const auto* mj = field(j, path, "map", true)) {
            const auto mp = sub(path, "map");
            if (!mj->is_object() || mj->empty()) {
                fail(mp, "expected an object mapping set names to bindings");
                ok = false;
            } else {
                for (const auto& [set, bindings] : mj->items()) {
                    const auto p = sub(mp, set);
                    if (!set_names.count(set)) {
                        fail(p, "unknown set '" + set + "'");
                        ok = false;
                        continue;
                    }
                    auto bs = binding_list(bindings, p, var_names);
                    if (!bs) {
                        ok = false;
                        continue;
                    }
                    for (const auto& s : sets)
                        if (s.name == set && s.schedule.slots().size() != bs->size()) {
                            fail(p, "set has " + std::to_string(s.schedule.slots().size()) + " slots but " +
                                        std::to_string(bs->size()) + " bindings");
                            ok = false;
                        }
                    out.map.emplace_back(set, std::move(*bs));
                }
            }
        } else {
            ok = false;
        }

        if (const auto* q = field(j, path, "quasi", false)) {
            auto s = string(*q, sub(path, "quasi"));
            if (s && !set_names.count(*s)) {
                fail(sub(path, "quasi"), "unknown set '" + *s + "'");
                ok = false;
            } else if (s) {
                out.quasi_set = *s;
            } else {
                ok = false;
            }
        }
        auto names = [&](const char* key, std::size_t n) -> std::optional<std::vector<std::string>> {
            const auto* f = field(j, path, key, false);
            if (!f) return std::nullopt;
            const auto p = sub(path, key);
            auto v = strings(*f, p);
            if (!v) {
                ok = false;
                return std::nullopt;
            }
            if (v->size() != n) {
                fail(p, "expected " + std::to_string(n) + " variable names");
                ok = false;
                return std::nullopt;
            }
            for (const auto& x : *v)
                if (!var_names.count(x)) {
                    fail(p, "unknown variable '" + x + "'");
                    ok = false;
                    return std::nullopt;
                }
            return v;
        };
        if (auto b = names("bell", 3)) out.bell = std::array<std::string, 3>{(*b)[0], (*b)[1], (*b)[2]};
        if (auto c = names("chsh", 4)) out.chsh = std::array<std::string, 4>{(*c)[0], (*c)[1], (*c)[2], (*c)[3]};
        if (!ok) return std::nullopt;
        return out;
    }

    std::optional<std::vector<SlotBinding>> binding_list(const ordered_json& j, const std::string& path,
                                                         const std::set<std::string>& vars) {
        if (!j.is_array() || j.empty()) {
            fail(path, "expected an array of bindings");
            return std::nullopt;
        }
        std::vector<SlotBinding> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto p = at(path, i);
            SlotBinding b;
            if (j[i].is_string()) {
                b.variable = j[i].get<std::string>();
            } else if (j[i].is_object()) {
                auto v = field(j[i], p, "variable", true);
                auto s = v ? string(*v, sub(p, "variable")) : std::nullopt;
                if (!s) {
                    ok = false;
                    continue;
                }
                b.variable = *s;
                if (const auto* g = field(j[i], p, "groups", false)) {
                    const auto gp = sub(p, "groups");
                    if (!g->is_array()) {
                        fail(gp, "expected an array of outcome groups");
                        ok = false;
                        continue;
                    }
                    for (std::size_t k = 0; k < g->size(); ++k) {
                        auto grp = strings((*g)[k], at(gp, k));
                        if (grp) b.groups.push_back(*grp);
                        else ok = false;
                    }
                }
            } else {
                fail(p, "expected a variable name or {\"variable\", \"groups\"}");
                ok = false;
                continue;
            }
            if (!vars.count(b.variable)) {
                fail(p, "unknown variable '" + b.variable + "'");
                ok = false;
                continue;
            }
            out.push_back(std::move(b));
        }
        if (!ok) return std::nullopt;
        return out;
    }

    std::vector<ExpectedValue> expected(const ordered_json& j, const std::string& path) {
        std::vector<ExpectedValue> out;
        if (!j.is_array()) {
            fail(path, "expected an array");
            return out;
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto p = at(path, i);
            const auto& e = j[i];
            if (!e.is_object()) {
                fail(p, "expected an object");
                continue;
            }
            ExpectedValue ev;
            std::optional<std::string> key, prov;
            std::optional<double> value;
            if (const auto* k = field(e, p, "key", true)) key = string(*k, sub(p, "key"));
            if (const auto* v = field(e, p, "value", true)) value = number(*v, sub(p, "value"));
            if (const auto* pr = field(e, p, "provenance", true)) prov = string(*pr, sub(p, "provenance"));
            bool ok = key && value && prov;
            if (prov) {
                try {
                    ev.provenance = provenance_from_string(*prov);
                } catch (const Error& err) {
                    fail(sub(p, "provenance"), err.what());
                    ok = false;
                }
            }
            if (const auto* x = field(e, p, "exact", false)) {
                auto s = string(*x, sub(p, "exact"));
                try {
                    if (s) ev.exact = rational_from_text(*s);
                    else ok = false;
                } catch (const Error& err) {
                    fail(sub(p, "exact"), err.what());
                    ok = false;
                }
            }
            if (!ok) continue;
            ev.key = *key;
            ev.value = *value;
            out.push_back(std::move(ev));
        }
        return out;
    }
};

ScenarioDescriptor parse_builtin(const ordered_json& doc) {
    Parser p;
    std::map<std::string, double> params;
    const auto name = p.string(doc["scenario"], "scenario");
    if (const auto* pj = p.field(doc, "", "parameters", false)) {
        if (!pj->is_object()) {
            p.fail("parameters", "expected an object of numbers");
        } else {
            for (const auto& [k, v] : pj->items()) {
                auto x = p.number(v, sub("parameters", k));
                if (x) params[k] = *x;
            }
        }
    }
    if (!p.issues.empty() || !name) throw ConfigError(p.issues);
    return make_scenario(*name, params);
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : ValidationError(join_issues(issues)), issues_(std::move(issues)) {}

ScenarioDescriptor parse_config(const ordered_json& doc) {
    if (!doc.is_object()) throw ConfigError(std::vector<ConfigIssue>{{"", "config must be a JSON object"}});
    if (doc.contains("scenario")) return parse_builtin(doc);

    Parser p;
    std::string name = "config";
    if (const auto* n = p.field(doc, "", "name", false))
        if (auto s = p.string(*n, "name")) name = *s;

    std::size_t dim = 0;
    if (const auto* d = p.field(doc, "", "dim", true)) {
        if (!d->is_number_integer() || d->get<long long>() < 1) {
            p.fail("dim", "expected a positive integer");
        } else if (d->get<long long>() > static_cast<long long>(kDefaultDimensionCap)) {
            p.fail("dim", "dimension " + std::to_string(d->get<long long>()) + " exceeds the cap of " +
                              std::to_string(kDefaultDimensionCap));
        } else {
            dim = static_cast<std::size_t>(d->get<long long>());
        }
    }
    // Without a valid dim the remaining checks still run, with sizes unchecked.
    std::optional<DensityOperator> initial;
    if (const auto* i = p.field(doc, "", "initial", true)) initial = p.state(*i, "initial", dim);
    std::optional<DensityOperator> final_state;
    if (const auto* f = p.field(doc, "", "final", false); f && !f->is_null()) final_state = p.state(*f, "final", dim);
    std::optional<Hamiltonian> h;
    if (const auto* hj = p.field(doc, "", "hamiltonian", false)) {
        if (auto m = p.matrix(*hj, "hamiltonian", dim)) {
            try {
                h = Hamiltonian(*m);
            } catch (const Error& e) {
                p.fail("hamiltonian", e.what());
            }
        }
    } else if (dim) {
        h = Hamiltonian::zero(dim);
    }

    std::vector<NamedSchedule> sets;
    std::set<std::string> set_names;
    if (const auto* sj = p.field(doc, "", "sets", true)) {
        if (!sj->is_array() || sj->empty()) {
            p.fail("sets", "expected a non-empty array of sets");
        } else {
            for (std::size_t i = 0; i < sj->size(); ++i) {
                if ((*sj)[i].is_object() && (*sj)[i].contains("name") && (*sj)[i]["name"].is_string()) {
                    const auto n = (*sj)[i]["name"].get<std::string>();
                    if (!set_names.insert(n).second) p.fail(at("sets", i) + ".name", "duplicate set name '" + n + "'");
                }
                if (auto s = p.schedule((*sj)[i], at("sets", i), dim, h)) sets.push_back(std::move(*s));
            }
        }
    }

    std::optional<UnifyPlan> plan;
    if (const auto* u = p.field(doc, "", "unify", false)) plan = p.plan(*u, "unify", sets, set_names);

    std::vector<std::pair<std::string, double>> params;
    if (const auto* pj = p.field(doc, "", "parameters", false)) {
        if (!pj->is_object()) {
            p.fail("parameters", "expected an object of numbers");
        } else {
            for (const auto& [k, v] : pj->items())
                if (auto x = p.number(v, sub("parameters", k))) params.emplace_back(k, *x);
        }
    }
    std::vector<ExpectedValue> expected;
    if (const auto* e = p.field(doc, "", "expected", false)) expected = p.expected(*e, "expected");

    if (initial && final_state) {
        const double norm = (final_state->matrix() * initial->matrix()).trace().real();
        if (norm <= kDefaultTolerance) p.fail("final", "final state is orthogonal to the initial state");
    }
    if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
    if (!initial || !h) throw ConfigError(std::vector<ConfigIssue>{{"", "incomplete config"}});

    return ScenarioDescriptor{
        .name = name,
        .dim = dim,
        .initial = std::move(*initial),
        .final_state = std::move(final_state),
        .hamiltonian = std::move(*h),
        .sets = std::move(sets),
        .unify = std::move(plan),
        .parameters = std::move(params),
        .expected = std::move(expected),
    };
}

ScenarioDescriptor parse_config_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::vector<ConfigIssue>{{"", std::string("malformed JSON: ") + e.what()}});
    }
    return parse_config(doc);
}

ScenarioDescriptor parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const Complex v = m(r, c);
            if (v.imag() == 0.0) row.push_back(v.real());
            else row.push_back(ordered_json::array({v.real(), v.imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json to_config_json(const ScenarioDescriptor& s) {
    ordered_json doc;
    doc["name"] = s.name;
    doc["dim"] = s.dim;
    doc["initial"] = matrix_to_json(s.initial.matrix());
    doc["final"] = s.final_state ? matrix_to_json(s.final_state->matrix()) : ordered_json(nullptr);
    doc["hamiltonian"] = matrix_to_json(s.hamiltonian.matrix());
    ordered_json sets = ordered_json::array();
    for (const auto& ns : s.sets) {
        ordered_json slots = ordered_json::array();
        for (const auto& slot : ns.schedule.slots()) {
            ordered_json ps = ordered_json::array();
            for (const auto& p : slot.projectors) ps.push_back(matrix_to_json(p.matrix()));
            slots.push_back({{"time", slot.time}, {"projectors", std::move(ps)}, {"labels", slot.labels}});
        }
        sets.push_back({{"name", ns.name}, {"slots", std::move(slots)}});
    }
    doc["sets"] = std::move(sets);
    if (s.unify) {
        ordered_json u;
        ordered_json vars = ordered_json::array();
        for (const auto& v : s.unify->variables) {
            ordered_json jv{{"name", v.name}, {"outcomes", v.outcomes}};
            if (!v.values.empty()) jv["values"] = v.values;
            vars.push_back(std::move(jv));
        }
        u["variables"] = std::move(vars);
        ordered_json map = ordered_json::object();
        for (const auto& [set, bindings] : s.unify->map) {
            ordered_json bs = ordered_json::array();
            for (const auto& b : bindings) {
                if (b.groups.empty()) bs.push_back(b.variable);
                else bs.push_back({{"variable", b.variable}, {"groups", b.groups}});
            }
            map[set] = std::move(bs);
        }
        u["map"] = std::move(map);
        if (s.unify->quasi_set) u["quasi"] = *s.unify->quasi_set;
        if (s.unify->bell) u["bell"] = std::vector<std::string>(s.unify->bell->begin(), s.unify->bell->end());
        if (s.unify->chsh) u["chsh"] = std::vector<std::string>(s.unify->chsh->begin(), s.unify->chsh->end());
        doc["unify"] = std::move(u);
    }
    if (!s.parameters.empty()) {
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : s.parameters) params[k] = v;
        doc["parameters"] = std::move(params);
    }
    if (!s.expected.empty()) {
        ordered_json ex = ordered_json::array();
        for (const auto& e : s.expected) {
            ordered_json je{{"key", e.key}, {"value", e.value}};
            if (e.exact) je["exact"] = to_text(*e.exact);
            je["provenance"] = to_string(e.provenance);
            ex.push_back(std::move(je));
        }
        doc["expected"] = std::move(ex);
    }
    return doc;
}

}  // namespace hlab

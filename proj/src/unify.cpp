#include "hlab/unify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "hlab/classicality.hpp"
#include "hlab/errors.hpp"

namespace hlab {

// ---------------------------------------------------------------------------
// Sample space and tables

JointSampleSpace::JointSampleSpace(std::vector<Variable> variables) : vars_(std::move(variables)) {
    std::set<std::string> names;
    for (auto& v : vars_) {
        if (v.name.empty()) throw ValidationError("variable with empty name");
        if (!names.insert(v.name).second) throw ValidationError("duplicate variable name '" + v.name + "'");
        if (v.outcomes.empty()) throw ValidationError("variable '" + v.name + "' has no outcomes");
        std::set<std::string> outs(v.outcomes.begin(), v.outcomes.end());
        if (outs.size() != v.outcomes.size())
            throw ValidationError("variable '" + v.name + "' has duplicate outcomes");
        if (v.values.empty() && v.outcomes.size() == 2) v.values = {1.0, -1.0};
        if (!v.values.empty() && v.values.size() != v.outcomes.size())
            throw ValidationError("variable '" + v.name + "' has a value count different from its outcome count");
        if (size_ > std::numeric_limits<std::size_t>::max() / v.outcomes.size())
            size_ = std::numeric_limits<std::size_t>::max();
        else
            size_ *= v.outcomes.size();
    }
}

std::optional<std::size_t> JointSampleSpace::find(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    return std::nullopt;
}

std::vector<std::size_t> JointSampleSpace::decode(std::size_t cell) const {
    std::vector<std::size_t> out(vars_.size());
    for (std::size_t k = vars_.size(); k-- > 0;) {
        out[k] = cell % vars_[k].outcomes.size();
        cell /= vars_[k].outcomes.size();
    }
    return out;
}

std::size_t JointSampleSpace::encode(std::span<const std::size_t> outcomes) const {
    std::size_t cell = 0;
    for (std::size_t k = 0; k < vars_.size(); ++k) cell = cell * vars_[k].outcomes.size() + outcomes[k];
    return cell;
}

std::string JointSampleSpace::cell_text(std::size_t cell) const {
    const auto outs = decode(cell);
    std::string s;
    for (std::size_t k = 0; k < outs.size(); ++k) {
        if (k) s += ',';
        s += vars_[k].outcomes[outs[k]];
    }
    return s;
}

bool JointSampleSpace::dichotomic(std::size_t variable) const {
    return vars_.at(variable).outcomes.size() == 2 && vars_[variable].values.size() == 2;
}

bool MarginalAxis::identity() const noexcept {
    for (std::size_t i = 0; i < coarse_of.size(); ++i)
        if (coarse_of[i] != i) return false;
    return coarse_of.size() == labels.size();
}

MarginalAxis MarginalAxis::fine(const JointSampleSpace& space, std::size_t variable) {
    MarginalAxis a;
    a.variable = variable;
    a.labels = space.variables().at(variable).outcomes;
    a.coarse_of.resize(a.labels.size());
    std::iota(a.coarse_of.begin(), a.coarse_of.end(), std::size_t{0});
    return a;
}

std::size_t MarginalTable::cell_count() const noexcept {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

std::string MarginalTable::cell_text(std::size_t cell) const {
    std::vector<std::string> parts(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        parts[k] = axes[k].labels.at(cell % axes[k].size());
        cell /= axes[k].size();
    }
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) s += ',';
        s += parts[k];
    }
    return s;
}

void validate_marginal(const JointSampleSpace& space, const MarginalTable& table, double tol) {
    const std::string who = table.source.empty() ? std::string("marginal table") : "marginal '" + table.source + "'";
    std::set<std::size_t> seen;
    for (const auto& a : table.axes) {
        if (a.variable >= space.variable_count()) throw ValidationError(who + ": axis variable out of range");
        if (!seen.insert(a.variable).second) throw ValidationError(who + ": variable used on two axes");
        if (a.coarse_of.size() != space.variables()[a.variable].outcomes.size())
            throw ValidationError(who + ": coarse-graining does not cover the variable's outcomes");
        if (a.labels.empty()) throw ValidationError(who + ": empty axis");
        for (auto c : a.coarse_of)
            if (c >= a.size()) throw ValidationError(who + ": coarse-graining index out of range");
    }
    if (table.values.size() != table.cell_count()) throw ValidationError(who + ": value count does not match axes");
    double sum = 0.0;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        if (!std::isfinite(table.values[i])) throw ValidationError(who + ": non-finite value");
        if (table.values[i] < -tol) {
            std::ostringstream os;
            os << who << ": negative value " << table.values[i] << " at cell " << table.cell_text(i);
            throw ValidationError(os.str());
        }
        sum += table.values[i];
    }
    if (std::abs(sum - 1.0) > tol) {
        std::ostringstream os;
        os << who << ": values sum to " << sum << ", expected 1";
        throw ValidationError(os.str());
    }
    if (table.exact && table.exact->size() != table.values.size())
        throw ValidationError(who + ": exact value count does not match axes");
}

std::vector<std::size_t> project_cells(const JointSampleSpace& space, const MarginalTable& table) {
    std::vector<std::size_t> out(space.size());
    for (std::size_t x = 0; x < out.size(); ++x) {
        const auto outs = space.decode(x);
        std::size_t c = 0;
        for (const auto& a : table.axes) c = c * a.size() + a.coarse_of[outs[a.variable]];
        out[x] = c;
    }
    return out;
}

std::vector<double> marginalize(const JointSampleSpace& space, std::span<const double> joint,
                                const std::vector<MarginalAxis>& axes) {
    MarginalTable shape;
    shape.axes = axes;
    std::vector<double> out(shape.cell_count(), 0.0);
    const auto proj = project_cells(space, shape);
    for (std::size_t x = 0; x < joint.size(); ++x) out[proj[x]] += joint[x];
    return out;
}

// ---------------------------------------------------------------------------
// Bridging history sets

MarginalAxis bind_axis(const JointSampleSpace& space, const SlotBinding& binding,
                       const std::vector<std::string>& slot_labels) {
    const auto v = space.find(binding.variable);
    if (!v) throw ValidationError("unknown variable '" + binding.variable + "'");
    const auto& outs = space.variables()[*v].outcomes;
    MarginalAxis axis;
    axis.variable = *v;
    axis.labels = slot_labels;
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    axis.coarse_of.assign(outs.size(), unset);
    auto cover = [&](std::size_t label, const std::string& outcome) {
        const auto it = std::find(outs.begin(), outs.end(), outcome);
        if (it == outs.end())
            throw ValidationError("variable '" + binding.variable + "' has no outcome '" + outcome + "'");
        auto& slot = axis.coarse_of[static_cast<std::size_t>(it - outs.begin())];
        if (slot != unset)
            throw ValidationError("outcome '" + outcome + "' of '" + binding.variable + "' is covered twice");
        slot = label;
    };
    if (binding.groups.empty()) {
        for (std::size_t i = 0; i < slot_labels.size(); ++i) cover(i, slot_labels[i]);
    } else {
        if (binding.groups.size() != slot_labels.size())
            throw ValidationError("binding for '" + binding.variable + "' has " + std::to_string(binding.groups.size()) +
                                  " groups for " + std::to_string(slot_labels.size()) + " labels");
        for (std::size_t i = 0; i < binding.groups.size(); ++i)
            for (const auto& o : binding.groups[i]) cover(i, o);
    }
    for (std::size_t o = 0; o < outs.size(); ++o)
        if (axis.coarse_of[o] == unset)
            throw ValidationError("outcome '" + outs[o] + "' of '" + binding.variable + "' is not covered");
    return axis;
}

namespace {

std::vector<MarginalAxis> bind_all(const HistorySet& set, std::span<const SlotBinding> bindings,
                                   const JointSampleSpace& space) {
    const auto& alphabets = set.alphabets();
    if (bindings.size() != alphabets.size())
        throw ValidationError("binding count " + std::to_string(bindings.size()) + " does not match slot count " +
                              std::to_string(alphabets.size()));
    std::vector<MarginalAxis> axes;
    std::set<std::size_t> used;
    for (std::size_t k = 0; k < bindings.size(); ++k) {
        axes.push_back(bind_axis(space, bindings[k], alphabets[k]));
        if (!used.insert(axes.back().variable).second)
            throw ValidationError("variable '" + bindings[k].variable + "' bound to two slots");
    }
    return axes;
}

std::size_t cell_of_label(const HistoryLabel& label, const std::vector<MarginalAxis>& axes) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < axes.size(); ++k) c = c * axes[k].size() + label.at(k);
    return c;
}

}  // namespace

MarginalTable extract_marginals(const HistorySet& set, std::span<const SlotBinding> bindings,
                                const JointSampleSpace& space, double tol, std::string source) {
    const auto report = classify(set, tol);
    if (!report.consistent) {
        std::ostringstream os;
        os << "set " << (source.empty() ? std::string("<unnamed>") : "'" + source + "'")
           << " is not consistent (max |Re D| off-diagonal " << report.max_offdiag_re
           << "); its probabilities are undefined";
        throw InconsistentSetError(os.str());
    }
    MarginalTable t;
    t.source = std::move(source);
    t.axes = bind_all(set, bindings, space);
    t.values.assign(t.cell_count(), 0.0);
    const auto p = history_probabilities(set);
    for (std::size_t i = 0; i < set.size(); ++i) t.values[cell_of_label(set.operators()[i].label(), t.axes)] += p[i];
    validate_marginal(space, t, std::max(tol, 1e-9));
    return t;
}

std::vector<double> quasi_table(const HistorySet& set, std::span<const SlotBinding> bindings,
                                const JointSampleSpace& space) {
    const auto axes = bind_all(set, bindings, space);
    if (axes.size() != space.variable_count())
        throw ValidationError("quasi-probability bindings must cover every space variable");
    for (const auto& a : axes)
        if (!a.identity() || a.labels != space.variables()[a.variable].outcomes)
            throw ValidationError("quasi-probability bindings must map slot labels one-to-one onto outcomes");
    std::vector<double> q(space.size(), 0.0);
    const auto qs = quasi_probabilities(set);
    std::vector<std::size_t> outs(space.variable_count());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& label = set.operators()[i].label();
        for (std::size_t k = 0; k < axes.size(); ++k) outs[axes[k].variable] = label.at(k);
        q[space.encode(outs)] += qs[i];
    }
    return q;
}

// ---------------------------------------------------------------------------
// LP feasibility

template <class T>
lp::Problem<T> marginal_system(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                               std::span<const T> values, const T& delta) {
    const std::size_t n = space.size();
    std::size_t cells = 0;
    for (const auto& m : marginals) cells += m.cell_count();
    if (values.size() != cells) throw ValidationError("marginal value count mismatch");
    const bool banded = delta > T(0);
    lp::Problem<T> p(banded ? 2 * cells + 1 : cells + 1, banded ? n + 2 * cells : n);
    std::size_t r = 0;
    for (const auto& m : marginals) {
        const auto proj = project_cells(space, m);
        for (std::size_t c = 0; c < m.cell_count(); ++c, ++r) {
            const T& v = values[r];
            if (banded) {
                for (std::size_t x = 0; x < n; ++x)
                    if (proj[x] == c) {
                        p.at(2 * r, x) = T(1);
                        p.at(2 * r + 1, x) = T(1);
                    }
                p.at(2 * r, n + 2 * r) = T(1);
                p.b[2 * r] = v + delta;
                p.at(2 * r + 1, n + 2 * r + 1) = T(-1);
                p.b[2 * r + 1] = v - delta;
            } else {
                for (std::size_t x = 0; x < n; ++x)
                    if (proj[x] == c) p.at(r, x) = T(1);
                p.b[r] = v;
            }
        }
    }
    const std::size_t last = p.rows - 1;
    for (std::size_t x = 0; x < n; ++x) p.at(last, x) = T(1);
    p.b[last] = T(1);
    return p;
}

template lp::Problem<double> marginal_system<double>(const JointSampleSpace&, std::span<const MarginalTable>,
                                                     std::span<const double>, const double&);
template lp::Problem<Rational> marginal_system<Rational>(const JointSampleSpace&, std::span<const MarginalTable>,
                                                         std::span<const Rational>, const Rational&);

namespace {

constexpr double kWitnessSlack = 1e-10;
constexpr double kCertificateSlack = 1e-9;

std::vector<double> float_values(std::span<const MarginalTable> marginals) {
    std::vector<double> out;
    for (const auto& m : marginals) out.insert(out.end(), m.values.begin(), m.values.end());
    return out;
}

std::optional<std::vector<Rational>> exact_values(std::span<const MarginalTable> marginals) {
    std::vector<Rational> out;
    for (const auto& m : marginals) {
        if (m.exact) {
            out.insert(out.end(), m.exact->begin(), m.exact->end());
            continue;
        }
        for (double v : m.values) {
            auto r = to_rational(v);
            if (!r) return std::nullopt;
            out.push_back(*r);
        }
    }
    return out;
}

void check_inputs(const JointSampleSpace& space, std::span<const MarginalTable> marginals, double delta) {
    for (const auto& m : marginals) validate_marginal(space, m, std::max(kDefaultTolerance, delta));
}

std::vector<double> normalized(const std::vector<double>& y) {
    double mx = 0.0;
    for (double v : y) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return y;
    std::vector<double> out(y);
    for (auto& v : out) v /= mx;
    return out;
}

template <class T>
std::vector<T> cell_cost(std::size_t cols, std::size_t cell, int sign) {
    std::vector<T> c(cols, T(0));
    c[cell] = T(sign);
    return c;
}

}  // namespace

FeasibilityVerdict find_unifying_probability(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                                             const UnifyOptions& opts) {
    FeasibilityVerdict v;
    if (space.size() > opts.joint_cap) {
        std::ostringstream os;
        os << "joint sample space has " << space.size() << " cells, above the cap of " << opts.joint_cap;
        v.note = os.str();
        return v;
    }
    check_inputs(space, marginals, opts.delta);
    const std::size_t n = space.size();

    std::optional<std::vector<Rational>> exact;
    if (opts.exact) {
        exact = exact_values(marginals);
        if (!exact) v.note = "exact arithmetic requested but marginals are not rational; used floating arithmetic";
    }

    if (exact) {
        v.arithmetic = Arithmetic::exact;
        v.delta = 0.0;
        const auto sys = marginal_system<Rational>(space, marginals, *exact, Rational(0));
        const auto res = lp::solve<Rational>(sys);
        if (res.status == lp::Status::optimal) {
            v.status = FeasibilityStatus::feasible;
            v.exact_witness = std::vector<Rational>(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
            for (const auto& r : *v.exact_witness) v.witness.push_back(to_double(r));
        } else {
            v.status = FeasibilityStatus::infeasible;
            v.exact_certificate = res.farkas;
            for (const auto& r : res.farkas) v.farkas_certificate.push_back(to_double(r));
        }
    } else {
        v.arithmetic = Arithmetic::floating;
        v.delta = opts.delta;
        const auto vals = float_values(marginals);
        // The unbanded system first: when the marginals are compatible up to
        // round-off its witness reproduces them far inside the band.
        auto res = lp::solve<double>(marginal_system<double>(space, marginals, vals, 0.0));
        if (res.status != lp::Status::optimal && opts.delta > 0.0)
            res = lp::solve<double>(marginal_system<double>(space, marginals, vals, opts.delta));
        if (res.status == lp::Status::optimal) {
            v.status = FeasibilityStatus::feasible;
            v.witness.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(n));
        } else {
            v.status = FeasibilityStatus::infeasible;
            v.farkas_certificate = normalized(res.farkas);
        }
    }

    std::string why;
    if (v.feasible() && !verify_witness(space, marginals, v, &why))
        throw NumericFailure("LP witness failed verification: " + why);
    if (v.infeasible() && !verify_certificate(space, marginals, v, &why))
        throw NumericFailure("Farkas certificate failed verification: " + why);
    return v;
}

FeasibilityVerdict probe_uniqueness(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                                    const UnifyOptions& opts) {
    FeasibilityVerdict v = find_unifying_probability(space, marginals, opts);
    if (!v.feasible()) return v;
    const std::size_t n = space.size();
    v.component_bounds.assign(n, CellBounds{});
    bool unique = true;

    if (v.arithmetic == Arithmetic::exact) {
        const auto vals = *exact_values(marginals);
        const auto sys = marginal_system<Rational>(space, marginals, vals, Rational(0));
        for (std::size_t x = 0; x < n; ++x) {
            const auto lo_cost = cell_cost<Rational>(sys.cols, x, 1);
            const auto hi_cost = cell_cost<Rational>(sys.cols, x, -1);
            const auto lo = lp::solve<Rational>(sys, lo_cost);
            const auto hi = lp::solve<Rational>(sys, hi_cost);
            if (lo.status != lp::Status::optimal || hi.status != lp::Status::optimal)
                throw NumericFailure("uniqueness probe LP did not reach an optimum");
            const Rational mn = lo.objective;
            const Rational mx = -hi.objective;
            v.component_bounds[x] = {to_double(mn), to_double(mx)};
            if (mx != mn) unique = false;
        }
    } else {
        // Probe on the unbanded system when it is feasible at round-off level,
        // so the band does not open a spurious interval of width ~delta.
        const auto vals = float_values(marginals);
        auto sys = marginal_system<double>(space, marginals, vals, 0.0);
        if (lp::solve<double>(sys).status != lp::Status::optimal) {
            sys = marginal_system<double>(space, marginals, vals, opts.delta);
            v.note += (v.note.empty() ? "" : "; ");
            v.note += "uniqueness probed on the delta-banded system";
        }
        for (std::size_t x = 0; x < n; ++x) {
            const auto lo_cost = cell_cost<double>(sys.cols, x, 1);
            const auto hi_cost = cell_cost<double>(sys.cols, x, -1);
            const auto lo = lp::solve<double>(sys, lo_cost);
            const auto hi = lp::solve<double>(sys, hi_cost);
            if (lo.status != lp::Status::optimal || hi.status != lp::Status::optimal)
                throw NumericFailure("uniqueness probe LP did not reach an optimum");
            const double mn = std::max(0.0, lo.objective);
            const double mx = -hi.objective;
            v.component_bounds[x] = {mn, mx};
            if (mx - mn > opts.delta) unique = false;
        }
    }
    v.unique = unique;
    return v;
}

bool verify_witness(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                    const FeasibilityVerdict& verdict, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const std::size_t n = space.size();
    if (verdict.witness.size() != n) return fail("witness has the wrong size");

    if (verdict.arithmetic == Arithmetic::exact) {
        if (!verdict.exact_witness || verdict.exact_witness->size() != n) return fail("exact witness missing");
        const auto vals = exact_values(marginals);
        if (!vals) return fail("marginals are not rational");
        const auto& w = *verdict.exact_witness;
        Rational total = 0;
        for (const auto& x : w) {
            if (x < 0) return fail("negative witness cell");
            total += x;
        }
        if (total != 1) return fail("witness does not sum to 1");
        std::size_t r = 0;
        for (const auto& m : marginals) {
            const auto proj = project_cells(space, m);
            std::vector<Rational> sums(m.cell_count(), Rational(0));
            for (std::size_t x = 0; x < n; ++x) sums[proj[x]] += w[x];
            for (std::size_t c = 0; c < sums.size(); ++c, ++r)
                if (sums[c] != (*vals)[r]) return fail("witness misses marginal cell " + m.cell_text(c));
        }
        return true;
    }

    const double band = verdict.delta + kWitnessSlack;
    double total = 0.0;
    for (double x : verdict.witness) {
        if (!(x >= 0.0)) return fail("negative witness cell");
        total += x;
    }
    if (std::abs(total - 1.0) > band) return fail("witness does not sum to 1");
    for (const auto& m : marginals) {
        const auto sums = marginalize(space, verdict.witness, m.axes);
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (std::abs(sums[c] - m.values[c]) > band) {
                std::ostringstream os;
                os << "witness gives " << sums[c] << " for cell " << m.cell_text(c) << " of '" << m.source
                   << "', expected " << m.values[c];
                return fail(os.str());
            }
        }
    }
    return true;
}

bool verify_certificate(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                        const FeasibilityVerdict& verdict, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (verdict.arithmetic == Arithmetic::exact) {
        if (!verdict.exact_certificate) return fail("exact certificate missing");
        const auto vals = exact_values(marginals);
        if (!vals) return fail("marginals are not rational");
        const auto sys = marginal_system<Rational>(space, marginals, *vals, Rational(0));
        const auto& y = *verdict.exact_certificate;
        if (y.size() != sys.rows) return fail("certificate has the wrong length");
        for (std::size_t j = 0; j < sys.cols; ++j) {
            Rational s = 0;
            for (std::size_t i = 0; i < sys.rows; ++i)
                if (sys.at(i, j) != 0) s += y[i] * sys.at(i, j);
            if (s < 0) return fail("y^T M has a negative component");
        }
        Rational yb = 0;
        for (std::size_t i = 0; i < sys.rows; ++i) yb += y[i] * sys.b[i];
        if (!(yb < 0)) return fail("y^T r is not negative");
        return true;
    }

    const auto vals = float_values(marginals);
    const auto sys = marginal_system<double>(space, marginals, vals, verdict.delta);
    const auto& y = verdict.farkas_certificate;
    if (y.size() != sys.rows) return fail("certificate has the wrong length");
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return fail("certificate is zero");
    for (std::size_t j = 0; j < sys.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < sys.rows; ++i) s += y[i] * sys.at(i, j);
        if (s < -kCertificateSlack * scale) return fail("y^T M has a negative component");
    }
    double yb = 0.0;
    for (std::size_t i = 0; i < sys.rows; ++i) yb += y[i] * sys.b[i];
    if (!(yb < 0.0)) return fail("y^T r is not negative");
    return true;
}

// ---------------------------------------------------------------------------
// Products

MarginalTable product_unify(std::span<const MarginalTable> tables) {
    MarginalTable out;
    out.values = {1.0};
    bool all_exact = true;
    std::vector<Rational> exact{Rational(1)};
    std::set<std::size_t> used;
    for (const auto& t : tables) {
        for (const auto& a : t.axes) {
            if (!used.insert(a.variable).second)
                throw ValidationError("product_unify: tables share a variable");
            out.axes.push_back(a);
        }
        std::vector<double> next;
        next.reserve(out.values.size() * t.values.size());
        for (double a : out.values)
            for (double b : t.values) next.push_back(a * b);
        out.values = std::move(next);
        if (t.exact && all_exact) {
            std::vector<Rational> nx;
            for (const auto& a : exact)
                for (const auto& b : *t.exact) nx.push_back(a * b);
            exact = std::move(nx);
        } else {
            all_exact = false;
        }
        if (!out.source.empty()) out.source += " x ";
        out.source += t.source;
    }
    if (all_exact && !tables.empty()) out.exact = std::move(exact);
    return out;
}

std::vector<double> to_joint(const JointSampleSpace& space, const MarginalTable& table) {
    if (table.axes.size() != space.variable_count())
        throw ValidationError("table does not cover every space variable");
    for (const auto& a : table.axes)
        if (!a.identity() || a.size() != space.variables().at(a.variable).outcomes.size())
            throw ValidationError("table axes must be fine-grained to form a joint distribution");
    std::vector<double> joint(space.size(), 0.0);
    const auto proj = project_cells(space, table);
    for (std::size_t x = 0; x < joint.size(); ++x) joint[x] = table.values[proj[x]];
    return joint;
}

// ---------------------------------------------------------------------------
// Correlations, Bell and CHSH

void CorrelationSet::set(std::size_t i, std::size_t j, double c) {
    c_[{std::min(i, j), std::max(i, j)}] = c;
}

std::optional<double> CorrelationSet::get(std::size_t i, std::size_t j) const {
    const auto it = c_.find({std::min(i, j), std::max(i, j)});
    if (it == c_.end()) return std::nullopt;
    return it->second;
}

CorrelationSet correlations(const JointSampleSpace& space, std::span<const MarginalTable> marginals) {
    CorrelationSet out;
    for (const auto& m : marginals) {
        if (m.axes.size() != 2) continue;
        const auto& a = m.axes[0];
        const auto& b = m.axes[1];
        if (!a.identity() || !b.identity()) continue;
        const auto& va = space.variables()[a.variable].values;
        const auto& vb = space.variables()[b.variable].values;
        if (va.empty() || vb.empty()) continue;
        double c = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) c += va[i] * vb[j] * m.values[i * b.size() + j];
        out.set(a.variable, b.variable, c);
    }
    return out;
}

BellResult bell_check(double c12, double c13, double c23, double tol) {
    BellResult r;
    r.sum = c12 + c13 + c23;
    r.lower = -1.0;
    r.upper = 1.0 + 2.0 * std::min({c12, c13, c23});
    r.slack = std::min(r.sum - r.lower, r.upper - r.sum);
    r.max_value = std::max({-r.sum, r.sum - 2.0 * c12, r.sum - 2.0 * c13, r.sum - 2.0 * c23});
    r.satisfied = r.slack >= -tol;
    return r;
}

std::optional<BellResult> bell_check(const CorrelationSet& c, std::array<std::size_t, 3> vars, double tol) {
    const auto c12 = c.get(vars[0], vars[1]);
    const auto c13 = c.get(vars[0], vars[2]);
    const auto c23 = c.get(vars[1], vars[2]);
    if (!c12 || !c13 || !c23) return std::nullopt;
    return bell_check(*c12, *c13, *c23, tol);
}

ChshResult chsh_check(double c13, double c14, double c23, double c24, double tol) {
    ChshResult r;
    const double s = c13 + c14 + c23 + c24;
    const std::array<double, 4> cs{c13, c14, c23, c24};
    for (std::size_t k = 0; k < 4; ++k) {
        const double v = s - 2.0 * cs[k];
        r.values[2 * k] = v;
        r.values[2 * k + 1] = -v;
    }
    r.max_value = *std::max_element(r.values.begin(), r.values.end());
    r.satisfied = r.max_value <= 2.0 + tol;
    return r;
}

std::optional<ChshResult> chsh_check(const CorrelationSet& c, std::array<std::size_t, 4> vars, double tol) {
    const auto c13 = c.get(vars[0], vars[2]);
    const auto c14 = c.get(vars[0], vars[3]);
    const auto c23 = c.get(vars[1], vars[2]);
    const auto c24 = c.get(vars[1], vars[3]);
    if (!c13 || !c14 || !c23 || !c24) return std::nullopt;
    return chsh_check(*c13, *c14, *c23, *c24, tol);
}

// ---------------------------------------------------------------------------
// Quasi-probabilities

namespace {

// Set partitions of {0..n-1} as restricted growth strings; block 0 always
// contains outcome 0. The one-block partition comes first.
std::vector<std::vector<std::size_t>> partitions(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> a(n, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t blocks) -> void {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (std::size_t b = 0; b <= blocks; ++b) {
            a[i] = b;
            self(self, i + 1, std::max(blocks, b + 1));
        }
    };
    if (n == 0) return out;
    a[0] = 0;
    rec(rec, 1, 1);
    return out;
}

std::size_t block_count(const std::vector<std::size_t>& p) {
    return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
}

// fine refines coarse when coarse is a function of fine.
bool refines(const std::vector<std::size_t>& fine, const std::vector<std::size_t>& coarse) {
    std::vector<std::size_t> img(block_count(fine), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        auto& slot = img[fine[i]];
        if (slot == std::numeric_limits<std::size_t>::max())
            slot = coarse[i];
        else if (slot != coarse[i])
            return false;
    }
    return true;
}

constexpr std::size_t kMaxPartitionedAlphabet = 6;
constexpr std::size_t kMaxCandidates = 100000;

}  // namespace

QuasiClassification classify_quasiprobability(const JointSampleSpace& space, std::span<const double> q,
                                              MarginalPolicy policy, const UnifyOptions& opts, double tol) {
    if (q.size() != space.size()) throw ValidationError("quasi-probability size does not match the space");
    double total = 0.0;
    for (double v : q) total += v;
    if (std::abs(total - 1.0) > std::max(tol, opts.delta))
        throw ValidationError("quasi-probability does not sum to 1");

    // Candidate per-variable partitions.
    const std::size_t nv = space.variable_count();
    std::vector<std::vector<std::vector<std::size_t>>> options(nv);
    std::size_t combos = 1;
    for (std::size_t k = 0; k < nv; ++k) {
        const std::size_t m = space.variables()[k].outcomes.size();
        std::vector<std::size_t> trivial(m, 0);
        std::vector<std::size_t> fine(m);
        std::iota(fine.begin(), fine.end(), std::size_t{0});
        if (policy == MarginalPolicy::maximal_nonnegative && m <= kMaxPartitionedAlphabet) {
            options[k] = partitions(m);
        } else {
            options[k] = {trivial};
            if (m > 1) options[k].push_back(fine);
        }
        combos = combos > kMaxCandidates / options[k].size() ? kMaxCandidates + 1 : combos * options[k].size();
    }
    if (combos > kMaxCandidates) throw ValidationError("too many candidate marginals to enumerate");

    struct Candidate {
        std::vector<std::size_t> choice;
        MarginalTable table;
    };
    std::vector<Candidate> nonneg;
    std::vector<std::size_t> choice(nv, 0);
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rest = c;
        for (std::size_t k = nv; k-- > 0;) {
            choice[k] = rest % options[k].size();
            rest /= options[k].size();
        }
        MarginalTable t;
        for (std::size_t k = 0; k < nv; ++k) {
            const auto& part = options[k][choice[k]];
            const std::size_t blocks = block_count(part);
            if (blocks <= 1) continue;  // summed out
            MarginalAxis axis;
            axis.variable = k;
            axis.coarse_of = part;
            axis.labels.assign(blocks, std::string());
            const auto& outs = space.variables()[k].outcomes;
            for (std::size_t o = 0; o < outs.size(); ++o) {
                auto& l = axis.labels[part[o]];
                if (!l.empty()) l += '|';
                l += outs[o];
            }
            t.axes.push_back(std::move(axis));
        }
        if (t.axes.empty()) continue;
        t.values = marginalize(space, q, t.axes);
        if (std::all_of(t.values.begin(), t.values.end(), [&](double v) { return v >= -tol; })) {
            for (auto& v : t.values) v = std::max(v, 0.0);
            std::ostringstream name;
            name << "q-marginal";
            for (const auto& a : t.axes) name << ' ' << space.variables()[a.variable].name << (a.identity() ? "" : "*");
            t.source = name.str();
            nonneg.push_back({choice, std::move(t)});
        }
    }

    QuasiClassification out;
    for (std::size_t i = 0; i < nonneg.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < nonneg.size() && !dominated; ++j) {
            if (i == j || nonneg[i].choice == nonneg[j].choice) continue;
            bool all = true;
            for (std::size_t k = 0; k < nv && all; ++k)
                all = refines(options[k][nonneg[j].choice[k]], options[k][nonneg[i].choice[k]]);
            dominated = all;
        }
        if (!dominated) out.marginals_used.push_back(nonneg[i].table);
    }
    if (out.marginals_used.empty()) {
        // Only the trivial marginal survives; any distribution matches it.
        out.verdict = find_unifying_probability(space, {}, opts);
    } else {
        out.verdict = find_unifying_probability(space, out.marginals_used, opts);
    }
    out.viable = out.verdict.feasible();
    return out;
}

const char* to_string(FeasibilityStatus s) noexcept {
    switch (s) {
        case FeasibilityStatus::feasible: return "feasible";
        case FeasibilityStatus::infeasible: return "infeasible";
        case FeasibilityStatus::not_evaluated: return "not_evaluated";
    }
    return "unknown";
}

const char* to_string(Arithmetic a) noexcept {
    switch (a) {
        case Arithmetic::floating: return "floating";
        case Arithmetic::exact: return "exact";
    }
    return "unknown";
}

}  // namespace hlab

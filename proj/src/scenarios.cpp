#include "hlab/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

namespace {

using Vec3 = Eigen::Vector3d;

ExpectedValue expect(std::string key, const Rational& r, Provenance p) {
    return {std::move(key), to_double(r), r, p};
}

ExpectedValue expect(std::string key, double v, Provenance p) {
    return {std::move(key), v, std::nullopt, p};
}

ExpectedValue expect_flag(std::string key, bool v, Provenance p) {
    return expect(std::move(key), Rational(v ? 1 : 0), p);
}

Variable dichotomic(std::string name, std::vector<std::string> outcomes = {"+", "-"}) {
    return {std::move(name), std::move(outcomes), {1.0, -1.0}};
}

SlotBinding bind(std::string variable, std::vector<std::vector<std::string>> groups = {}) {
    return {std::move(variable), std::move(groups)};
}

HistorySlot slot(double time, std::vector<Projector> ps, std::vector<std::string> labels) {
    return {time, std::move(ps), std::move(labels)};
}

std::vector<Projector> spin_pair(const Vec3& axis) {
    return {Projector::spin(axis, +1), Projector::spin(axis, -1)};
}

// P on particle 1 or 2 of a two-spin system.
std::vector<Projector> on_particle(int particle, const Vec3& axis) {
    std::vector<Projector> out;
    for (int s : {+1, -1}) {
        const ComplexMatrix p = Projector::spin(axis, s).matrix();
        const ComplexMatrix i2 = identity(2);
        out.emplace_back(particle == 1 ? tensor_product(p, i2) : tensor_product(i2, p));
    }
    return out;
}

ComplexVector basis(std::size_t dim, std::size_t k) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(k)) = 1.0;
    return v;
}

void check_unit(const Vec3& a, const char* name) {
    if (!a.allFinite() || std::abs(a.norm() - 1.0) > kDefaultTolerance) {
        std::ostringstream os;
        os << "axis " << name << " is not a unit vector (|a| = " << a.norm() << ")";
        throw ValidationError(os.str());
    }
}

bool near(const Vec3& a, const Vec3& b) { return (a - b).cwiseAbs().maxCoeff() <= kDefaultTolerance; }

}  // namespace

const char* to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::published: return "published";
        case Provenance::trivial: return "trivial";
        case Provenance::derived: return "derived";
    }
    return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "published") return Provenance::published;
    if (s == "trivial") return Provenance::trivial;
    if (s == "derived") return Provenance::derived;
    throw ValidationError("unknown provenance '" + s + "'");
}

const NamedSchedule* ScenarioDescriptor::find_set(const std::string& n) const {
    for (const auto& s : sets)
        if (s.name == n) return &s;
    return nullptr;
}

ScenarioDescriptor griffiths_spin() {
    const Vec3 z(0, 0, 1), x(1, 0, 0);
    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto h = Hamiltonian::zero(2);
    const std::vector<std::string> zl{"up", "down"}, xl{"+", "-"};

    ScenarioDescriptor s{
        .name = "griffiths_spin",
        .dim = 2,
        .initial = DensityOperator::pure(basis(2, 0)),
        .final_state = DensityOperator::pure(plus),
        .hamiltonian = h,
        .sets = {},
        .unify = std::nullopt,
        .parameters = {},
        .expected = {},
    };
    s.sets.push_back({"z", HistorySchedule({slot(1.0, spin_pair(z), zl)}, h)});
    s.sets.push_back({"x", HistorySchedule({slot(1.0, spin_pair(x), xl)}, h)});
    // x first, then z: C = P^z P^x.
    s.sets.push_back({"zx", HistorySchedule({slot(1.0, spin_pair(x), xl), slot(2.0, spin_pair(z), zl)}, h)});

    UnifyPlan plan;
    plan.variables = {dichotomic("sx"), dichotomic("sz", zl)};
    plan.map = {{"x", {bind("sx")}}, {"z", {bind("sz")}}};
    plan.quasi_set = "zx";
    s.unify = std::move(plan);

    const auto P = Provenance::published;
    s.expected = {
        expect("p/z/up", Rational(1), P),        expect("p/z/down", Rational(0), P),
        expect("p/x/+", Rational(1), P),         expect("p/x/-", Rational(0), P),
        expect_flag("consistent/z", true, P),    expect_flag("consistent/x", true, P),
        expect_flag("consistent/zx", false, P),  expect_flag("feasible", true, P),
        expect("witness/+,up", Rational(1), P),  expect("witness/+,down", Rational(0), P),
        expect("witness/-,up", Rational(0), P),  expect("witness/-,down", Rational(0), P),
        expect_flag("unique", true, Provenance::trivial),
    };
    return s;
}

ScenarioDescriptor three_box() {
    ComplexVector psi(3), psif(3);
    const double r = 1.0 / std::sqrt(3.0);
    psi << r, r, r;
    psif << r, r, -r;
    const auto h = Hamiltonian::zero(3);
    const Projector p1 = Projector::onto(basis(3, 0)), p2 = Projector::onto(basis(3, 1)),
                    p3 = Projector::onto(basis(3, 2));
    const Projector p23(p2.matrix() + p3.matrix()), p13(p1.matrix() + p3.matrix());

    ScenarioDescriptor s{
        .name = "three_box",
        .dim = 3,
        .initial = DensityOperator::pure(psi),
        .final_state = DensityOperator::pure(psif),
        .hamiltonian = h,
        .sets = {},
        .unify = std::nullopt,
        .parameters = {},
        .expected = {},
    };
    s.sets.push_back({"set1", HistorySchedule({slot(1.0, {p1, p23}, {"1", "23"})}, h)});
    s.sets.push_back({"set2", HistorySchedule({slot(1.0, {p2, p13}, {"2", "13"})}, h)});
    s.sets.push_back({"fine", HistorySchedule({slot(1.0, {p1, p2, p3}, {"1", "2", "3"})}, h)});

    UnifyPlan plan;
    plan.variables = {{"box", {"1", "2", "3"}, {}}};
    plan.map = {{"set1", {bind("box", {{"1"}, {"2", "3"}})}}, {"set2", {bind("box", {{"2"}, {"1", "3"}})}}};
    plan.quasi_set = "fine";
    s.unify = std::move(plan);

    const auto P = Provenance::published;
    s.expected = {
        expect("p/set1/1", Rational(1), P),      expect("p/set1/23", Rational(0), P),
        expect("p/set2/2", Rational(1), P),      expect("p/set2/13", Rational(0), P),
        expect_flag("consistent/set1", true, P), expect_flag("consistent/set2", true, P),
        expect("q/fine/1", Rational(1), P),      expect("q/fine/2", Rational(1), P),
        expect("q/fine/3", Rational(-1), P),     expect_flag("zero_cover/fine", true, P),
        expect_flag("feasible", false, P),       expect_flag("viable", false, Provenance::derived),
    };
    return s;
}

ScenarioDescriptor eprb(const Vec3& a1, const Vec3& a2, const Vec3& a3, const Vec3& a4) {
    check_unit(a1, "a1");
    check_unit(a2, "a2");
    check_unit(a3, "a3");
    check_unit(a4, "a4");
    ComplexVector singlet = ComplexVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const auto h = Hamiltonian::zero(4);
    const std::vector<std::string> pm{"+", "-"};
    const std::array<Vec3, 4> axes{a1, a2, a3, a4};

    ScenarioDescriptor s{
        .name = "eprb",
        .dim = 4,
        .initial = DensityOperator::pure(singlet),
        .final_state = std::nullopt,
        .hamiltonian = h,
        .sets = {},
        .unify = std::nullopt,
        .parameters = {},
        .expected = {},
    };
    // Spins 1, 2 belong to particle 1 and spins 3, 4 to particle 2.
    const std::array<std::pair<int, int>, 4> pairs{{{1, 3}, {1, 4}, {2, 3}, {2, 4}}};
    UnifyPlan plan;
    plan.variables = {dichotomic("s1"), dichotomic("s2"), dichotomic("s3"), dichotomic("s4")};
    for (auto [i, j] : pairs) {
        const std::string name = std::to_string(i) + std::to_string(j);
        s.sets.push_back({name, HistorySchedule({slot(1.0, on_particle(1, axes[i - 1]), pm),
                                                 slot(2.0, on_particle(2, axes[j - 1]), pm)},
                                                h)});
        plan.map.push_back({name, {bind("s" + std::to_string(i)), bind("s" + std::to_string(j))}});
    }
    s.sets.push_back({"1234", HistorySchedule({slot(1.0, on_particle(1, a1), pm), slot(2.0, on_particle(1, a2), pm),
                                               slot(3.0, on_particle(2, a3), pm), slot(4.0, on_particle(2, a4), pm)},
                                              h)});
    plan.quasi_set = "1234";
    plan.chsh = std::array<std::string, 4>{"s1", "s2", "s3", "s4"};
    s.unify = std::move(plan);

    const char* names[] = {"a1", "a2", "a3", "a4"};
    const char* comps[] = {"_x", "_y", "_z"};
    for (int k = 0; k < 4; ++k)
        for (int c = 0; c < 3; ++c) s.parameters.emplace_back(std::string(names[k]) + comps[c], axes[k](c));

    // Singlet correlation -a.b and pair probabilities (1 - s s' a.b) / 4.
    for (auto [i, j] : pairs) {
        const double ab = axes[i - 1].dot(axes[j - 1]);
        const std::string set = std::to_string(i) + std::to_string(j);
        s.expected.push_back(expect("corr/s" + std::to_string(i) + ",s" + std::to_string(j), -ab, Provenance::derived));
        for (int si : {1, -1})
            for (int sj : {1, -1})
                s.expected.push_back(expect("p/" + set + "/" + (si > 0 ? "+" : "-") + "," + (sj > 0 ? "+" : "-"),
                                            0.25 * (1.0 - si * sj * ab), Provenance::derived));
        s.expected.push_back(expect_flag("consistent/" + set, true, Provenance::derived));
    }

    const Vec3 z(0, 0, 1), x(1, 0, 0);
    if (near(a1, z) && near(a3, z) && near(a2, x) && near(a4, x)) {
        const auto P = Provenance::published;
        s.expected.push_back(expect_flag("feasible", true, P));
        s.expected.push_back(expect_flag("unique", true, P));
        s.expected.push_back(expect_flag("viable", true, P));
        s.expected.push_back(expect_flag("consistent/1234", false, P));
        for (int s1 : {1, -1})
            for (int s2 : {1, -1})
                for (int s3 : {1, -1})
                    for (int s4 : {1, -1}) {
                        const Rational w = Rational(1, 16) * (1 - s1 * s3) * (1 - s2 * s4);
                        std::string cell;
                        for (int v : {s1, s2, s3, s4}) cell += std::string(cell.empty() ? "" : ",") + (v > 0 ? "+" : "-");
                        s.expected.push_back(expect("witness/" + cell, w, P));
                    }
    }
    return s;
}

ScenarioDescriptor eprb_planar(double theta1, double theta2, double theta3, double theta4) {
    auto axis = [](double t) { return Vec3(std::sin(t), 0.0, std::cos(t)); };
    auto s = eprb(axis(theta1), axis(theta2), axis(theta3), axis(theta4));
    s.parameters = {{"theta1", theta1}, {"theta2", theta2}, {"theta3", theta3}, {"theta4", theta4}};
    return s;
}

ScenarioDescriptor leggett_garg(double omega, double t1, double t2, double t3) {
    if (!(t1 < t2 && t2 < t3)) {
        std::ostringstream os;
        os << "leggett_garg needs t1 < t2 < t3, got " << t1 << ", " << t2 << ", " << t3;
        throw ValidationError(os.str());
    }
    if (!std::isfinite(omega)) throw ValidationError("leggett_garg omega must be finite");
    const Hamiltonian h(0.5 * omega * pauli::x());
    // P_s = (1 - s sigma_z) / 2
    const std::vector<Projector> q{Projector::spin(Vec3(0, 0, 1), -1), Projector::spin(Vec3(0, 0, 1), +1)};
    const std::vector<std::string> pm{"+", "-"};
    const std::array<double, 3> t{t1, t2, t3};

    ScenarioDescriptor s{
        .name = "leggett_garg",
        .dim = 2,
        .initial = DensityOperator::maximally_mixed(2),
        .final_state = std::nullopt,
        .hamiltonian = h,
        .sets = {},
        .unify = std::nullopt,
        .parameters = {{"omega", omega}, {"t1", t1}, {"t2", t2}, {"t3", t3}},
        .expected = {},
    };
    UnifyPlan plan;
    plan.variables = {dichotomic("q1"), dichotomic("q2"), dichotomic("q3")};
    const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {1, 3}}};
    for (auto [i, j] : pairs) {
        const std::string name = std::to_string(i) + std::to_string(j);
        s.sets.push_back({name, HistorySchedule({slot(t[i - 1], q, pm), slot(t[j - 1], q, pm)}, h)});
        plan.map.push_back({name, {bind("q" + std::to_string(i)), bind("q" + std::to_string(j))}});
        const double c = std::cos(omega * (t[j - 1] - t[i - 1]));
        s.expected.push_back(expect("corr/q" + std::to_string(i) + ",q" + std::to_string(j), c, Provenance::published));
        s.expected.push_back(expect_flag("consistent/" + name, true, Provenance::published));
        for (int si : {1, -1})
            for (int sj : {1, -1})
                s.expected.push_back(expect("p/" + name + "/" + (si > 0 ? "+" : "-") + "," + (sj > 0 ? "+" : "-"),
                                            0.25 * (1.0 + si * sj * c), Provenance::derived));
    }
    s.sets.push_back({"123", HistorySchedule({slot(t1, q, pm), slot(t2, q, pm), slot(t3, q, pm)}, h)});
    plan.quasi_set = "123";
    plan.bell = std::array<std::string, 3>{"q1", "q2", "q3"};
    s.unify = std::move(plan);
    return s;
}

std::vector<std::string> scenario_names() { return {"griffiths_spin", "eprb", "three_box", "leggett_garg"}; }

ScenarioDescriptor make_scenario(const std::string& name, const std::map<std::string, double>& params) {
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : params) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ValidationError("scenario '" + name + "' has no parameter '" + k + "'");
            if (!std::isfinite(v)) throw ValidationError("parameter '" + k + "' is not finite");
        }
    };
    auto get = [&](const char* k, double def) {
        const auto it = params.find(k);
        return it == params.end() ? def : it->second;
    };
    if (name == "griffiths_spin") {
        reject_unknown({});
        return griffiths_spin();
    }
    if (name == "three_box") {
        reject_unknown({});
        return three_box();
    }
    if (name == "leggett_garg") {
        reject_unknown({"omega", "t1", "t2", "t3"});
        return leggett_garg(get("omega", std::numbers::pi / 3.0), get("t1", 0.0), get("t2", 1.0), get("t3", 2.0));
    }
    if (name == "eprb") {
        reject_unknown({"theta1", "theta2", "theta3", "theta4", "a1_x", "a1_y", "a1_z", "a2_x", "a2_y", "a2_z",
                        "a3_x", "a3_y", "a3_z", "a4_x", "a4_y", "a4_z"});
        bool vector_form = false;
        for (const auto& [k, v] : params) vector_form = vector_form || k[0] == 'a';
        bool planar_form = false;
        for (const auto& [k, v] : params) planar_form = planar_form || k[0] == 't';
        if (vector_form && planar_form) throw ValidationError("eprb: give either theta parameters or axis components");
        const double half_pi = std::numbers::pi / 2.0;
        if (!vector_form)
            return eprb_planar(get("theta1", 0.0), get("theta2", half_pi), get("theta3", 0.0), get("theta4", half_pi));
        std::array<Vec3, 4> a{Vec3(0, 0, 1), Vec3(1, 0, 0), Vec3(0, 0, 1), Vec3(1, 0, 0)};
        for (int k = 0; k < 4; ++k) {
            const std::string p = "a" + std::to_string(k + 1);
            if (params.count(p + "_x") || params.count(p + "_y") || params.count(p + "_z"))
                a[k] = Vec3(get((p + "_x").c_str(), 0.0), get((p + "_y").c_str(), 0.0), get((p + "_z").c_str(), 0.0));
        }
        return eprb(a[0], a[1], a[2], a[3]);
    }
    throw ValidationError("unknown scenario '" + name + "' (known: griffiths_spin, eprb, three_box, leggett_garg)");
}

namespace {

bool same_bindings(const std::vector<SlotBinding>& a, const std::vector<SlotBinding>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].variable != b[i].variable || a[i].groups != b[i].groups) return false;
    return true;
}

bool same_plan(const UnifyPlan& a, const UnifyPlan& b) {
    if (a.variables.size() != b.variables.size()) return false;
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
        const auto& x = a.variables[i];
        const auto& y = b.variables[i];
        if (x.name != y.name || x.outcomes != y.outcomes || x.values != y.values) return false;
    }
    if (a.map.size() != b.map.size()) return false;
    for (std::size_t i = 0; i < a.map.size(); ++i)
        if (a.map[i].first != b.map[i].first || !same_bindings(a.map[i].second, b.map[i].second)) return false;
    return a.quasi_set == b.quasi_set && a.bell == b.bell && a.chsh == b.chsh;
}

}  // namespace

bool equivalent(const ScenarioDescriptor& a, const ScenarioDescriptor& b, double tol) {
    if (a.name != b.name || a.dim != b.dim) return false;
    if (!approx_equal(a.initial.matrix(), b.initial.matrix(), tol)) return false;
    if (a.final_state.has_value() != b.final_state.has_value()) return false;
    if (a.final_state && !approx_equal(a.final_state->matrix(), b.final_state->matrix(), tol)) return false;
    if (!approx_equal(a.hamiltonian.matrix(), b.hamiltonian.matrix(), tol)) return false;
    if (a.sets.size() != b.sets.size()) return false;
    for (std::size_t i = 0; i < a.sets.size(); ++i) {
        if (a.sets[i].name != b.sets[i].name) return false;
        const auto& sa = a.sets[i].schedule.slots();
        const auto& sb = b.sets[i].schedule.slots();
        if (sa.size() != sb.size()) return false;
        for (std::size_t k = 0; k < sa.size(); ++k) {
            if (std::abs(sa[k].time - sb[k].time) > tol || sa[k].labels != sb[k].labels) return false;
            if (sa[k].projectors.size() != sb[k].projectors.size()) return false;
            for (std::size_t j = 0; j < sa[k].projectors.size(); ++j)
                if (!approx_equal(sa[k].projectors[j].matrix(), sb[k].projectors[j].matrix(), tol)) return false;
        }
    }
    if (a.unify.has_value() != b.unify.has_value()) return false;
    if (a.unify && !same_plan(*a.unify, *b.unify)) return false;
    if (a.parameters.size() != b.parameters.size()) return false;
    for (std::size_t i = 0; i < a.parameters.size(); ++i)
        if (a.parameters[i].first != b.parameters[i].first ||
            std::abs(a.parameters[i].second - b.parameters[i].second) > tol)
            return false;
    if (a.expected.size() != b.expected.size()) return false;
    for (std::size_t i = 0; i < a.expected.size(); ++i) {
        const auto& x = a.expected[i];
        const auto& y = b.expected[i];
        if (x.key != y.key || x.provenance != y.provenance || x.exact != y.exact || std::abs(x.value - y.value) > tol)
            return false;
    }
    return true;
}

HistorySet build_set(const ScenarioDescriptor& s, const NamedSchedule& schedule) {
    return HistorySet::from_schedule(schedule.schedule, s.initial, s.final_state);
}

}  // namespace hlab

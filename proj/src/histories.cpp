#include "hlab/histories.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hlab/errors.hpp"

namespace hlab {

HistorySchedule::HistorySchedule(std::vector<HistorySlot> slots, Hamiltonian hamiltonian, double tol)
    : slots_(std::move(slots)), h_(std::move(hamiltonian)) {
    if (slots_.empty()) throw ValidationError("history schedule has no slots");
    for (std::size_t k = 0; k < slots_.size(); ++k) {
        const auto& s = slots_[k];
        std::ostringstream where;
        where << "slot " << k;
        if (k > 0 && !(s.time > slots_[k - 1].time))
            throw ValidationError(where.str() + ": times must be strictly increasing");
        if (s.projectors.empty()) throw ValidationError(where.str() + ": no projectors");
        if (s.labels.size() != s.projectors.size())
            throw ValidationError(where.str() + ": label count does not match projector count");
        for (const auto& p : s.projectors)
            if (p.dim() != h_.dim())
                throw ValidationError(where.str() + ": projector dimension differs from hamiltonian");
        const auto report = validate_projective_decomposition(s.projectors, tol);
        if (!report.valid) {
            std::ostringstream os;
            os << where.str() << ": not a projective decomposition of the identity (violation "
               << report.max_violation() << ")";
            throw ValidationError(os.str());
        }
    }
}

std::size_t HistorySchedule::history_count() const noexcept {
    std::size_t n = 1;
    for (const auto& s : slots_) {
        if (n > std::numeric_limits<std::size_t>::max() / s.projectors.size())
            return std::numeric_limits<std::size_t>::max();
        n *= s.projectors.size();
    }
    return n;
}

// ---------------------------------------------------------------------------

ClassOperator::ClassOperator(HistoryLabel label, ComplexMatrix product, bool homogeneous)
    : label_(std::move(label)), base_(std::move(product)), homogeneous_(homogeneous) {}

ComplexMatrix ClassOperator::matrix() const {
    if (!complemented_) return base_;
    return identity(static_cast<std::size_t>(base_.rows())) - base_;
}

ClassOperator negate(const ClassOperator& c) {
    ClassOperator out = c;
    out.complemented_ = !c.complemented_;
    return out;
}

bool operator==(const ClassOperator& a, const ClassOperator& b) {
    return a.label_ == b.label_ && a.homogeneous_ == b.homogeneous_ &&
           a.complemented_ == b.complemented_ && a.base_.rows() == b.base_.rows() &&
           a.base_.cols() == b.base_.cols() && a.base_ == b.base_;
}

ClassOperator coarse_grain(std::span<const ClassOperator> members, HistoryLabel label) {
    if (members.empty()) throw ValidationError("coarse-graining needs at least one member");
    ComplexMatrix sum = members.front().matrix();
    for (std::size_t i = 1; i < members.size(); ++i) sum += members[i].matrix();
    return ClassOperator(std::move(label), std::move(sum), members.size() == 1 && members.front().homogeneous());
}

std::vector<ClassOperator> build_class_operators(const HistorySchedule& schedule, const BuildOptions& opts) {
    const std::size_t count = schedule.history_count();
    if (count > opts.history_cap) {
        std::ostringstream os;
        os << "schedule has " << count << " histories, above the cap of " << opts.history_cap;
        throw HistoryCountError(os.str());
    }
    const auto& slots = schedule.slots();
    // Heisenberg-picture projectors per slot.
    std::vector<std::vector<ComplexMatrix>> heis(slots.size());
    for (std::size_t k = 0; k < slots.size(); ++k)
        for (const auto& p : slots[k].projectors)
            heis[k].push_back(heisenberg_projector(p, schedule.hamiltonian(), slots[k].time, opts.tol).matrix());

    std::vector<ClassOperator> out;
    out.reserve(count);
    HistoryLabel label(slots.size(), 0);
    std::vector<ComplexMatrix> prefix(slots.size());
    // Depth-first over slots; prefix[k] = P_{a_k}(t_k) ... P_{a_1}(t_1).
    auto recurse = [&](auto&& self, std::size_t k) -> void {
        for (std::size_t a = 0; a < heis[k].size(); ++a) {
            label[k] = a;
            prefix[k] = (k == 0) ? heis[0][a] : (heis[k][a] * prefix[k - 1]).eval();
            if (k + 1 == slots.size())
                out.emplace_back(label, prefix[k], true);
            else
                self(self, k + 1);
        }
    };
    recurse(recurse, 0);
    return out;
}

// ---------------------------------------------------------------------------

HistorySet::HistorySet(std::vector<ClassOperator> ops, std::vector<std::vector<std::string>> alphabets,
                       DensityOperator initial, std::optional<DensityOperator> final_state, double tol)
    : ops_(std::move(ops)), alphabets_(std::move(alphabets)), initial_(std::move(initial)),
      final_(std::move(final_state)) {
    if (ops_.empty()) throw ValidationError("history set is empty");
    const std::size_t d = initial_.dim();
    ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& c : ops_) {
        const ComplexMatrix m = c.matrix();
        if (static_cast<std::size_t>(m.rows()) != d)
            throw ValidationError("class operator dimension differs from the initial state");
        sum += m;
    }
    const double dev = max_norm(sum - identity(d));
    if (dev > tol) {
        std::ostringstream os;
        os << "class operators do not sum to the identity (deviation " << dev << ")";
        throw ValidationError(os.str());
    }
    if (final_) {
        if (final_->dim() != d) throw ValidationError("final state dimension differs from the initial state");
        norm_ = (final_->matrix() * initial_.matrix()).trace().real();
        if (!(norm_ > tol)) {
            std::ostringstream os;
            os << "Tr(rho_f rho) = " << norm_ << " is not above tolerance; post-selection is degenerate";
            throw DegeneratePostSelectionError(os.str());
        }
    }
}

HistorySet HistorySet::from_schedule(const HistorySchedule& schedule, DensityOperator initial,
                                     std::optional<DensityOperator> final_state, const BuildOptions& opts) {
    if (initial.dim() != schedule.dim()) throw ValidationError("initial state dimension differs from schedule");
    std::vector<std::vector<std::string>> alphabets;
    for (const auto& s : schedule.slots()) alphabets.push_back(s.labels);
    return HistorySet(build_class_operators(schedule, opts), std::move(alphabets), std::move(initial),
                      std::move(final_state), opts.tol);
}

std::string HistorySet::label_text(std::size_t index) const {
    const auto& label = ops_.at(index).label();
    std::string out;
    for (std::size_t k = 0; k < label.size(); ++k) {
        if (k) out += ',';
        if (k < alphabets_.size() && label[k] < alphabets_[k].size())
            out += alphabets_[k][label[k]];
        else
            out += std::to_string(label[k]);
    }
    return out;
}

std::optional<std::size_t> HistorySet::index_of(const HistoryLabel& label) const {
    for (std::size_t i = 0; i < ops_.size(); ++i)
        if (ops_[i].label() == label) return i;
    return std::nullopt;
}

std::optional<std::size_t> HistorySet::index_of_text(const std::string& text) const {
    for (std::size_t i = 0; i < ops_.size(); ++i)
        if (label_text(i) == text) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Left factor L(C) such that D(a, b) = sum_ij L(C_a)_ij conj(C_b)_ij / norm.
ComplexMatrix left_factor(const HistorySet& set, const ComplexMatrix& c) {
    if (set.final_state()) return set.final_state()->matrix() * c * set.initial().matrix();
    return c * set.initial().matrix();
}

Complex frobenius(const ComplexMatrix& l, const ComplexMatrix& c) {
    return (l.array() * c.array().conjugate()).sum();
}

}  // namespace

DecoherenceFunctional decoherence_functional(const HistorySet& set) {
    const std::size_t n = set.size();
    std::vector<ComplexMatrix> mats;
    std::vector<ComplexMatrix> lefts;
    mats.reserve(n);
    lefts.reserve(n);
    for (const auto& c : set.operators()) {
        mats.push_back(c.matrix());
        lefts.push_back(left_factor(set, mats.back()));
    }
    DecoherenceFunctional d;
    d.post_selected = set.final_state().has_value();
    d.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& c : set.operators()) d.labels.push_back(c.label());
    const double norm = set.normalization();
    for (std::size_t a = 0; a < n; ++a) {
        const auto ia = static_cast<Eigen::Index>(a);
        d.entries(ia, ia) = Complex(frobenius(lefts[a], mats[a]).real() / norm, 0.0);
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto ib = static_cast<Eigen::Index>(b);
            const Complex v = frobenius(lefts[a], mats[b]) / norm;
            d.entries(ia, ib) = v;
            d.entries(ib, ia) = std::conj(v);
        }
    }
    return d;
}

Complex interference(const HistorySet& set, const ComplexMatrix& a, const ComplexMatrix& b) {
    return frobenius(left_factor(set, a), b) / set.normalization();
}

double measure(const HistorySet& set, const ComplexMatrix& c) {
    return interference(set, c, c).real();
}

double history_probability(const HistorySet& set, std::size_t index) {
    if (index >= set.size()) throw ValidationError("history index out of range");
    return measure(set, set.operators()[index].matrix());
}

double history_probability(const HistorySet& set, const HistoryLabel& label) {
    const auto i = set.index_of(label);
    if (!i) throw ValidationError("label not in history set");
    return history_probability(set, *i);
}

std::vector<double> history_probabilities(const HistorySet& set) {
    std::vector<double> out;
    for (std::size_t i = 0; i < set.size(); ++i) out.push_back(history_probability(set, i));
    return out;
}

double quasi_probability(const HistorySet& set, std::size_t index) {
    if (index >= set.size()) throw ValidationError("history index out of range");
    return left_factor(set, set.operators()[index].matrix()).trace().real() / set.normalization();
}

double quasi_probability(const HistorySet& set, const HistoryLabel& label) {
    const auto i = set.index_of(label);
    if (!i) throw ValidationError("label not in history set");
    return quasi_probability(set, *i);
}

std::vector<double> quasi_probabilities(const HistorySet& set) {
    std::vector<double> out;
    for (std::size_t i = 0; i < set.size(); ++i) out.push_back(quasi_probability(set, i));
    return out;
}

HistorySet product_set(const HistorySet& a, const HistorySet& b, double tol) {
    std::vector<ClassOperator> ops;
    ops.reserve(a.size() * b.size());
    for (const auto& ca : a.operators()) {
        const ComplexMatrix ma = ca.matrix();
        for (const auto& cb : b.operators()) {
            HistoryLabel label = ca.label();
            label.insert(label.end(), cb.label().begin(), cb.label().end());
            ops.emplace_back(std::move(label), tensor_product(ma, cb.matrix()),
                             ca.homogeneous() && cb.homogeneous());
        }
    }
    auto alphabets = a.alphabets();
    alphabets.insert(alphabets.end(), b.alphabets().begin(), b.alphabets().end());
    DensityOperator rho(tensor_product(a.initial().matrix(), b.initial().matrix()), tol);
    std::optional<DensityOperator> fin;
    if (a.final_state() || b.final_state()) {
        const ComplexMatrix fa = a.final_state() ? a.final_state()->matrix()
                                                 : DensityOperator::maximally_mixed(a.dim()).matrix();
        const ComplexMatrix fb = b.final_state() ? b.final_state()->matrix()
                                                 : DensityOperator::maximally_mixed(b.dim()).matrix();
        fin.emplace(tensor_product(fa, fb), tol);
    }
    return HistorySet(std::move(ops), std::move(alphabets), std::move(rho), std::move(fin), tol);
}

}  // namespace hlab

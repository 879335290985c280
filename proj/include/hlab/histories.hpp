#pragma once
// Class operators, decoherence functionals and history probabilities.
//
// A history is a tuple of outcome indices, one per time slot. Class operators
// are the time-ordered products P_{a_n}(t_n) ... P_{a_1}(t_1) of Heisenberg
// projectors; histories are enumerated row-major with the first slot varying
// slowest. With a final state rho_f every quantity carries the post-selection
// prefactor 1 / Tr(rho_f rho).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hlab/operator_core.hpp"

namespace hlab {

inline constexpr std::size_t kDefaultHistoryCap = 4096;

struct HistorySlot {
    double time = 0.0;
    std::vector<Projector> projectors;
    std::vector<std::string> labels;  // one symbol per projector
};

class HistorySchedule {
public:
    // Validates strictly increasing times, matching dimensions, label counts
    // and that every slot is a projective decomposition of the identity.
    HistorySchedule(std::vector<HistorySlot> slots, Hamiltonian hamiltonian,
                    double tol = kDefaultTolerance);

    const std::vector<HistorySlot>& slots() const noexcept { return slots_; }
    const Hamiltonian& hamiltonian() const noexcept { return h_; }
    std::size_t dim() const noexcept { return h_.dim(); }
    // Product of the slot alphabet sizes (saturates at SIZE_MAX).
    std::size_t history_count() const noexcept;

private:
    std::vector<HistorySlot> slots_;
    Hamiltonian h_;
};

using HistoryLabel = std::vector<std::size_t>;

// A history's class operator. Homogeneous operators are projector strings;
// negations and explicit sums are inhomogeneous. Negation is kept symbolic so
// that negate(negate(c)) returns c bit for bit.
class ClassOperator {
public:
    ClassOperator(HistoryLabel label, ComplexMatrix product, bool homogeneous = true);

    const HistoryLabel& label() const noexcept { return label_; }
    ComplexMatrix matrix() const;
    bool homogeneous() const noexcept { return homogeneous_ && !complemented_; }
    bool complemented() const noexcept { return complemented_; }

    friend ClassOperator negate(const ClassOperator& c);
    friend bool operator==(const ClassOperator& a, const ClassOperator& b);

private:
    HistoryLabel label_;
    ComplexMatrix base_;
    bool homogeneous_ = true;
    bool complemented_ = false;
};

// 1 - C
ClassOperator negate(const ClassOperator& c);
// Coarse-graining: sum of the members' class operators, flagged inhomogeneous.
ClassOperator coarse_grain(std::span<const ClassOperator> members, HistoryLabel label = {});

struct BuildOptions {
    std::size_t history_cap = kDefaultHistoryCap;
    double tol = kDefaultTolerance;
};

std::vector<ClassOperator> build_class_operators(const HistorySchedule& schedule,
                                                 const BuildOptions& opts = {});

class HistorySet {
public:
    // alphabets[k] holds the outcome symbols of slot k; it is used for label
    // text only. Throws if the operators do not sum to the identity or if the
    // post-selection normalization Tr(rho_f rho) is not above tol.
    HistorySet(std::vector<ClassOperator> ops, std::vector<std::vector<std::string>> alphabets,
               DensityOperator initial, std::optional<DensityOperator> final_state = std::nullopt,
               double tol = kDefaultTolerance);

    static HistorySet from_schedule(const HistorySchedule& schedule, DensityOperator initial,
                                    std::optional<DensityOperator> final_state = std::nullopt,
                                    const BuildOptions& opts = {});

    std::size_t size() const noexcept { return ops_.size(); }
    std::size_t dim() const noexcept { return initial_.dim(); }
    const std::vector<ClassOperator>& operators() const noexcept { return ops_; }
    const std::vector<std::vector<std::string>>& alphabets() const noexcept { return alphabets_; }
    const DensityOperator& initial() const noexcept { return initial_; }
    const std::optional<DensityOperator>& final_state() const noexcept { return final_; }
    // Tr(rho_f rho), or 1 without post-selection.
    double normalization() const noexcept { return norm_; }

    // "a1,a2,..." from the alphabets.
    std::string label_text(std::size_t index) const;
    std::optional<std::size_t> index_of(const HistoryLabel& label) const;
    std::optional<std::size_t> index_of_text(const std::string& text) const;

private:
    std::vector<ClassOperator> ops_;
    std::vector<std::vector<std::string>> alphabets_;
    DensityOperator initial_;
    std::optional<DensityOperator> final_;
    double norm_ = 1.0;
};

struct DecoherenceFunctional {
    std::vector<HistoryLabel> labels;
    ComplexMatrix entries;    // D(alpha, alpha'), Hermitian by construction
    bool post_selected = false;
    Complex total() const { return entries.sum(); }
    // Sum of the diagonal; equals 1 without post-selection, and is a
    // diagnostic with it (only consistent post-selected sets normalize).
    double probability_sum() const { return entries.diagonal().real().sum(); }
};

// D(a, a') = Tr(C_a rho C_a'^dag), or Tr(rho_f C_a rho C_a'^dag) / Tr(rho_f rho).
DecoherenceFunctional decoherence_functional(const HistorySet& set);

// D evaluated on two arbitrary (possibly inhomogeneous) class operators.
Complex interference(const HistorySet& set, const ComplexMatrix& a, const ComplexMatrix& b);
// D(C, C) for an arbitrary class operator; the measure of a coarse-graining.
double measure(const HistorySet& set, const ComplexMatrix& c);

double history_probability(const HistorySet& set, std::size_t index);
double history_probability(const HistorySet& set, const HistoryLabel& label);
std::vector<double> history_probabilities(const HistorySet& set);

// q(a) = Re Tr(C_a rho), or Re Tr(rho_f C_a rho) / Tr(rho_f rho).
double quasi_probability(const HistorySet& set, std::size_t index);
double quasi_probability(const HistorySet& set, const HistoryLabel& label);
std::vector<double> quasi_probabilities(const HistorySet& set);

// Composite of two uncorrelated, non-interacting systems: class operators
// C_a (x) C_b on rho_A (x) rho_B, labels concatenated (A slots first).
HistorySet product_set(const HistorySet& a, const HistorySet& b, double tol = kDefaultTolerance);

}  // namespace hlab

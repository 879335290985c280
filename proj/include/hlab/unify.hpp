#pragma once
// Unifying probabilities for incompatible consistent sets.
//
// Each consistent set contributes a marginal table over some variables of a
// joint sample space (shared variables are identified by name). A unifying
// probability is a non-negative joint table that reproduces every marginal.
// Its existence is an LP feasibility question; infeasibility comes with a
// Farkas certificate, feasibility with a witness, and per-cell min/max LPs
// decide uniqueness. Bell and CHSH checks are the analytic counterparts for
// three and four dichotomic variables.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hlab/histories.hpp"
#include "hlab/rational.hpp"
#include "hlab/simplex.hpp"

namespace hlab {

inline constexpr std::size_t kDefaultJointCap = 1'000'000;
inline constexpr double kDefaultDelta = 1e-9;

struct Variable {
    std::string name;
    std::vector<std::string> outcomes;
    std::vector<double> values;  // numeric value per outcome, used for correlations
};

// Ordered list of finite variables. Cells are enumerated row-major with the
// first variable varying slowest.
class JointSampleSpace {
public:
    // Two-outcome variables without explicit values get (+1, -1).
    explicit JointSampleSpace(std::vector<Variable> variables);

    const std::vector<Variable>& variables() const noexcept { return vars_; }
    std::size_t variable_count() const noexcept { return vars_.size(); }
    // Number of joint cells, saturating at SIZE_MAX.
    std::size_t size() const noexcept { return size_; }
    std::optional<std::size_t> find(const std::string& name) const;
    std::vector<std::size_t> decode(std::size_t cell) const;
    std::size_t encode(std::span<const std::size_t> outcomes) const;
    std::string cell_text(std::size_t cell) const;
    bool dichotomic(std::size_t variable) const;

private:
    std::vector<Variable> vars_;
    std::size_t size_ = 1;
};

// One axis of a marginal table: a space variable, possibly coarse-grained.
// coarse_of maps each outcome of the variable to a table outcome.
struct MarginalAxis {
    std::size_t variable = 0;
    std::vector<std::size_t> coarse_of;
    std::vector<std::string> labels;  // one per table outcome

    std::size_t size() const noexcept { return labels.size(); }
    bool identity() const noexcept;
    static MarginalAxis fine(const JointSampleSpace& space, std::size_t variable);
};

struct MarginalTable {
    std::vector<MarginalAxis> axes;
    std::vector<double> values;                     // row-major over axes
    std::optional<std::vector<Rational>> exact;     // exact values, when known
    std::string source;                             // e.g. the consistent set's name

    std::size_t cell_count() const noexcept;
    std::string cell_text(std::size_t cell) const;
};

// Throws ValidationError unless axes are well-formed, variables distinct,
// values non-negative within tol and summing to 1 within tol.
void validate_marginal(const JointSampleSpace& space, const MarginalTable& table,
                       double tol = kDefaultTolerance);

// Table cell reached by each joint cell.
std::vector<std::size_t> project_cells(const JointSampleSpace& space, const MarginalTable& table);
// Marginal of a joint distribution onto the given axes.
std::vector<double> marginalize(const JointSampleSpace& space, std::span<const double> joint,
                                const std::vector<MarginalAxis>& axes);

// How one history slot maps onto the joint space. groups[i] lists the space
// outcomes covered by slot label i; empty groups mean label i is the space
// outcome with the same name.
struct SlotBinding {
    std::string variable;
    std::vector<std::vector<std::string>> groups;
};

MarginalAxis bind_axis(const JointSampleSpace& space, const SlotBinding& binding,
                       const std::vector<std::string>& slot_labels);

// Probability table of a consistent set over the bound variables. Throws
// InconsistentSetError if the set is not consistent at tol.
MarginalTable extract_marginals(const HistorySet& set, std::span<const SlotBinding> bindings,
                                const JointSampleSpace& space, double tol = kDefaultTolerance,
                                std::string source = {});

// Quasi-probability of a set as a joint table; the bindings must cover every
// space variable once with identity groupings.
std::vector<double> quasi_table(const HistorySet& set, std::span<const SlotBinding> bindings,
                                const JointSampleSpace& space);

enum class Arithmetic { floating, exact };
enum class FeasibilityStatus { feasible, infeasible, not_evaluated };

struct CellBounds {
    double min = 0.0;
    double max = 0.0;
};

struct FeasibilityVerdict {
    FeasibilityStatus status = FeasibilityStatus::not_evaluated;
    Arithmetic arithmetic = Arithmetic::floating;
    double delta = 0.0;  // constraint band actually used
    std::vector<double> witness;
    std::optional<std::vector<Rational>> exact_witness;
    std::vector<double> farkas_certificate;
    std::optional<std::vector<Rational>> exact_certificate;
    std::optional<bool> unique;
    std::vector<CellBounds> component_bounds;
    std::string note;

    bool feasible() const noexcept { return status == FeasibilityStatus::feasible; }
    bool infeasible() const noexcept { return status == FeasibilityStatus::infeasible; }
};

struct UnifyOptions {
    double delta = kDefaultDelta;  // marginal band in floating mode
    bool exact = false;            // use rational arithmetic when inputs are rational
    std::size_t joint_cap = kDefaultJointCap;
};

// Standard-form constraint system {M z = r, z >= 0}. The first space.size()
// columns are the joint cells; with delta > 0 every marginal cell becomes two
// rows (upper and lower band) with one slack column each. The last row is
// the normalization.
template <class T>
lp::Problem<T> marginal_system(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                               std::span<const T> values, const T& delta);

FeasibilityVerdict find_unifying_probability(const JointSampleSpace& space,
                                             std::span<const MarginalTable> marginals,
                                             const UnifyOptions& opts = {});

// find_unifying_probability followed by min/max LPs for every joint cell.
FeasibilityVerdict probe_uniqueness(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                                    const UnifyOptions& opts = {});

// Witness re-check: non-negative, normalized and reproducing every marginal
// cell within delta (floating) or exactly (exact).
bool verify_witness(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                    const FeasibilityVerdict& verdict, std::string* why = nullptr);
// Certificate re-check: y^T M >= 0 componentwise and y^T r < 0.
bool verify_certificate(const JointSampleSpace& space, std::span<const MarginalTable> marginals,
                        const FeasibilityVerdict& verdict, std::string* why = nullptr);

// Product of tables over pairwise disjoint variables; axes concatenated.
MarginalTable product_unify(std::span<const MarginalTable> tables);
// Joint vector of a table whose identity axes cover every space variable.
std::vector<double> to_joint(const JointSampleSpace& space, const MarginalTable& table);

// Pair correlations C_ij = sum v_i v_j p(i, j), keyed by ordered variable pair.
class CorrelationSet {
public:
    void set(std::size_t i, std::size_t j, double c);
    std::optional<double> get(std::size_t i, std::size_t j) const;
    const std::map<std::pair<std::size_t, std::size_t>, double>& entries() const noexcept { return c_; }
    bool empty() const noexcept { return c_.empty(); }

private:
    std::map<std::pair<std::size_t, std::size_t>, double> c_;
};

// Correlations from every two-axis identity table over valued variables.
CorrelationSet correlations(const JointSampleSpace& space, std::span<const MarginalTable> marginals);

struct BellResult {
    bool satisfied = false;
    double slack = 0.0;  // distance to the nearest bound, negative when violated
    double sum = 0.0;
    double lower = -1.0;
    double upper = 0.0;
    // Largest of -S and S - 2 C_k (the four inequalities, each bounded by 1).
    double max_value = 0.0;
};

// -1 <= C12 + C13 + C23 <= 1 + 2 min{C12, C13, C23}
BellResult bell_check(double c12, double c13, double c23, double tol = 1e-12);
std::optional<BellResult> bell_check(const CorrelationSet& c, std::array<std::size_t, 3> vars,
                                     double tol = 1e-12);

struct ChshResult {
    bool satisfied = false;
    // +/- (C13 + C14 + C23 + C24 - 2 C_k) for the minus sign on C13, C14, C23, C24.
    std::array<double, 8> values{};
    double max_value = 0.0;
};

ChshResult chsh_check(double c13, double c14, double c23, double c24, double tol = 1e-12);
// vars = {a1, a2, b1, b2}: pairs (a1,b1), (a1,b2), (a2,b1), (a2,b2).
std::optional<ChshResult> chsh_check(const CorrelationSet& c, std::array<std::size_t, 4> vars,
                                     double tol = 1e-12);

enum class MarginalPolicy {
    maximal_nonnegative,  // coarse-grain over variable subsets and outcome partitions
    variable_subsets,     // only sum out whole variables
};

struct QuasiClassification {
    bool viable = false;
    std::vector<MarginalTable> marginals_used;
    FeasibilityVerdict verdict;
};

// Collects the maximal non-negative marginals of q and asks whether a true
// probability reproduces them all.
QuasiClassification classify_quasiprobability(const JointSampleSpace& space, std::span<const double> q,
                                              MarginalPolicy policy = MarginalPolicy::maximal_nonnegative,
                                              const UnifyOptions& opts = {}, double tol = kDefaultTolerance);

const char* to_string(FeasibilityStatus s) noexcept;
const char* to_string(Arithmetic a) noexcept;

}  // namespace hlab

#pragma once
// Built-in scenarios: boundary states, named history schedules, the plan for
// unifying their consistent sets, and the published values they should hit.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hlab/histories.hpp"
#include "hlab/rational.hpp"
#include "hlab/unify.hpp"

namespace hlab {

// Where an expected value comes from.
enum class Provenance {
    published,  // stated in the source literature
    trivial,    // follows by inspection
    derived,    // computed independently (closed form or brute force)
};

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(const std::string& s);

// Keys:
//   p/<set>/<label>, q/<set>/<label>   probability, quasi-probability
//   consistent/<set>, zero_cover/<set>  0 or 1
//   feasible, unique, viable            0 or 1
//   witness/<cell>                      unifier cell, cell text as "o1,o2,..."
//   corr/<var>,<var>                    pair correlation
struct ExpectedValue {
    std::string key;
    double value = 0.0;
    std::optional<Rational> exact;
    Provenance provenance = Provenance::derived;
};

struct NamedSchedule {
    std::string name;
    HistorySchedule schedule;
};

struct UnifyPlan {
    std::vector<Variable> variables;
    // Set name -> one binding per slot. Only mapped sets are unified.
    std::vector<std::pair<std::string, std::vector<SlotBinding>>> map;
    std::optional<std::string> quasi_set;                  // set whose q is classified
    std::optional<std::array<std::string, 3>> bell;        // three dichotomic variables
    std::optional<std::array<std::string, 4>> chsh;        // a1, a2, b1, b2
};

struct ScenarioDescriptor {
    std::string name;
    std::size_t dim = 0;
    DensityOperator initial;
    std::optional<DensityOperator> final_state;
    Hamiltonian hamiltonian;
    std::vector<NamedSchedule> sets;
    std::optional<UnifyPlan> unify;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<ExpectedValue> expected;

    const NamedSchedule* find_set(const std::string& name) const;
};

ScenarioDescriptor griffiths_spin();
ScenarioDescriptor three_box();
ScenarioDescriptor eprb(const Eigen::Vector3d& a1, const Eigen::Vector3d& a2, const Eigen::Vector3d& a3,
                        const Eigen::Vector3d& a4);
// Axes in the x-z plane at angle theta from z.
ScenarioDescriptor eprb_planar(double theta1, double theta2, double theta3, double theta4);
ScenarioDescriptor leggett_garg(double omega, double t1, double t2, double t3);

std::vector<std::string> scenario_names();
// Builds a named scenario from parameter overrides:
//   eprb:          theta1..theta4 (planar), or a1_x, a1_y, ... a4_z
//   leggett_garg:  omega, t1, t2, t3
// Unknown names or parameters throw ValidationError.
ScenarioDescriptor make_scenario(const std::string& name, const std::map<std::string, double>& params = {});

// Structural equality: states, schedules, plan and expected values.
bool equivalent(const ScenarioDescriptor& a, const ScenarioDescriptor& b, double tol = kDefaultTolerance);

HistorySet build_set(const ScenarioDescriptor& s, const NamedSchedule& schedule);

}  // namespace hlab

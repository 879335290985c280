#pragma once
// JSON scenario configs.
//
//   {"name": str, "dim": n,
//    "initial": matrix | {"ket": [...]}, "final": matrix | {"ket": [...]} | null,
//    "hamiltonian": matrix,
//    "sets": [{"name": str, "slots": [{"time": t, "projectors": [...], "labels": [...]}]}],
//    "unify": {"variables": [{"name", "outcomes", "values"?}],
//              "map": {set: [variable | {"variable", "groups"}]},
//              "quasi"?: set, "bell"?: [3 names], "chsh"?: [4 names]},
//    "parameters"?: {name: x}, "expected"?: [{"key", "value", "exact"?, "provenance"}]}
//
// Matrices are row-major arrays of rows; a complex entry is a number or
// [re, im]. A projector may also be {"ket": [...]} or, for dim 2,
// {"bloch": [x, y, z], "sign": +1|-1}. {"scenario": name, "parameters": {...}}
// selects a built-in scenario instead.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlab/errors.hpp"
#include "hlab/scenarios.hpp"

namespace hlab {

using ordered_json = nlohmann::ordered_json;

struct ConfigIssue {
    std::string path;  // e.g. "sets[0].slots[1].projectors[0]"
    std::string reason;
};

class ConfigError : public ValidationError {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

// All schema problems are collected before throwing ConfigError.
ScenarioDescriptor parse_config(const ordered_json& doc);
ScenarioDescriptor parse_config_text(const std::string& text);
// Missing or unreadable files throw ValidationError.
ScenarioDescriptor parse_config_file(const std::filesystem::path& path);

ordered_json to_config_json(const ScenarioDescriptor& s);

// Complex matrix <-> JSON helpers shared with the report writer.
ordered_json matrix_to_json(const ComplexMatrix& m);

}  // namespace hlab

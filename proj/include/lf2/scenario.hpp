// Scenario files and JSON (de)serialization for the CLI.
//
// Scenarios are data files: each bundles a field, inputs, and expected
// outputs, so new cases can be added without rebuilds.  Expected residue
// approximations may use the symbol `i` for the canonical square root of -1
// at the working precision (declared by "define_i" in the file).

#pragma once

#include <string>
#include <vector>

#include "lf2/decompose.hpp"
#include "lf2/fubini.hpp"
#include "lf2/measure.hpp"
#include "lf2/oracle.hpp"

namespace lf2 {

struct ScenarioResult {
    std::string name;
    bool pass = false;
    std::string detail;   // human-readable report
    std::string json;     // machine-readable report
};

// Parse helpers shared with the CLI.
RatFunc parse_ratfunc(const std::string& text);
SBFunction sbfunction_from_json(const FieldTowerSpec& spec, const std::string& json);
SBFunction2 sbfunction2_from_json(const FieldTowerSpec& spec, const std::string& json);
std::string sbfunction2_to_json(const SBFunction2& f);
IntegrableFunctionF integrable_from_json(const FieldTowerSpec& spec,
                                         const std::string& json);

std::string decomposition_to_json(const Decomposition& dec);
std::string verdict_to_json(const FubiniVerdict& v, int depth, const FPoly& qnorm);

// Run a scenario from its JSON text; `name` is used in reports.
ScenarioResult run_scenario_text(const std::string& name, const std::string& json_text,
                                 int kprec = DEFAULT_KPREC);
// Look up <name>.json under dir.
ScenarioResult run_scenario(const std::string& name, const std::string& dir,
                            int kprec = DEFAULT_KPREC);
std::vector<std::string> list_scenarios(const std::string& dir);

} // namespace lf2

#pragma once

#include <string>
#include <string_view>

#include "sinai/env_model.hpp"
#include "sinai/harness.hpp"
#include "sinai/theory.hpp"

namespace sinai {

/// {"points":[...],"weights":[...]}
EnvironmentDistribution parse_distribution_json(std::string_view text);
std::string distribution_to_json(const EnvironmentDistribution& dist);

/// Either a distribution document (Iid), {"kind":"valley-th1"},
/// {"kind":"valley-th2","sign":"plus","g":8} or {"kind":"constant","p":0.5}.
/// Valley documents may carry "alpha_min"/"alpha_max" or "points"/"weights".
EnvSpec parse_env_spec_json(std::string_view text);
std::string env_spec_to_json(const EnvSpec& spec);

/// Field names mirror ExperimentConfig; "env" holds an env spec document.
/// Fractions are given as strings ("9/10") or numbers.
ExperimentConfig parse_config_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& config);

std::string theory_report_to_json(const TheoryReport& report);

std::string read_text_file(const std::string& path);

}  // namespace sinai

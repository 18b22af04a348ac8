#pragma once

#include <string>

#include "dtmpc/sim_harness.hpp"

namespace dtmpc {

struct RunConfig {
  MachineParams machine;
  ControllerConfig controller;
  ScenarioConfig scenario;
  std::string output_dir = "out";
};

/// Shipped defaults: the 3.3 kV / 2 MVA drive profile with the standard
/// controller settings (N = 5, lambda_T = 0.052, lambda_u = 3.8e-3,
/// n_p_max = 500, 120 solver iterations).
RunConfig default_run_config();

/// Loads a JSON config. Sections machine/controller/scenario are optional;
/// when the machine section is present it must be complete. Unknown keys and
/// missing required fields are reported by name.
RunConfig load_run_config(const std::string& path);

std::string mode_name(ControllerMode mode);
ControllerMode parse_mode(const std::string& name);
std::string extraction_name(ExtractionMethod method);
ExtractionMethod parse_extraction(const std::string& name);

}  // namespace dtmpc

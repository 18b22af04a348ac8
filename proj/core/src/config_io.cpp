#include "dtmpc/config_io.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace dtmpc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("config: " + msg); }

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) fail("unknown key '" + section + "." + key + "'");
  }
}

double require_number(const json& obj, const std::string& section, const std::string& key) {
  if (!obj.contains(key)) fail("missing required field '" + section + "." + key + "'");
  if (!obj[key].is_number()) fail("field '" + section + "." + key + "' must be a number");
  return obj[key].get<double>();
}

template <typename T>
void read_optional(const json& obj, const std::string& key, T& out) {
  if (obj.contains(key)) out = obj[key].get<T>();
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.controller.bnb.n_p_max = 500;  // shipped node budget
  return cfg;
}

std::string mode_name(ControllerMode mode) {
  switch (mode) {
    case ControllerMode::BnbOnly: return "bnb_only";
    case ControllerMode::SdpOnly: return "sdp_only";
    case ControllerMode::Parallel: return "parallel";
  }
  return "parallel";
}

ControllerMode parse_mode(const std::string& name) {
  if (name == "bnb_only") return ControllerMode::BnbOnly;
  if (name == "sdp_only") return ControllerMode::SdpOnly;
  if (name == "parallel") return ControllerMode::Parallel;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected bnb_only, sdp_only, or parallel)");
}

std::string extraction_name(ExtractionMethod method) {
  switch (method) {
    case ExtractionMethod::FirstColumn: return "first_column";
    case ExtractionMethod::Diagonal: return "diagonal";
    case ExtractionMethod::MaxEigenvector: return "max_eigenvector";
    case ExtractionMethod::WeightedEigenvectors: return "weighted_eigenvectors";
  }
  return "first_column";
}

ExtractionMethod parse_extraction(const std::string& name) {
  if (name == "first_column") return ExtractionMethod::FirstColumn;
  if (name == "diagonal") return ExtractionMethod::Diagonal;
  if (name == "max_eigenvector") return ExtractionMethod::MaxEigenvector;
  if (name == "weighted_eigenvectors") return ExtractionMethod::WeightedEigenvectors;
  throw std::invalid_argument("unknown extraction method '" + name + "'");
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(std::string(e.what()));
  }
  check_keys(root, "", {"machine", "controller", "scenario", "output_dir"});

  RunConfig cfg = default_run_config();

  if (root.contains("machine")) {
    const json& m = root["machine"];
    const std::string s = "machine";
    check_keys(m, s, {"R_s", "R_r", "X_ls", "X_lr", "X_m", "V_dc", "pole_pairs", "P_rat",
                      "S_rat", "f_base"});
    cfg.machine.R_s = require_number(m, s, "R_s");
    cfg.machine.R_r = require_number(m, s, "R_r");
    cfg.machine.X_ls = require_number(m, s, "X_ls");
    cfg.machine.X_lr = require_number(m, s, "X_lr");
    cfg.machine.X_m = require_number(m, s, "X_m");
    cfg.machine.V_dc = require_number(m, s, "V_dc");
    cfg.machine.pole_pairs = static_cast<int>(require_number(m, s, "pole_pairs"));
    cfg.machine.P_rat = require_number(m, s, "P_rat");
    cfg.machine.S_rat = require_number(m, s, "S_rat");
    cfg.machine.f_base = require_number(m, s, "f_base");
  }

  if (root.contains("controller")) {
    const json& c = root["controller"];
    check_keys(c, "controller",
               {"lambda_T", "lambda_u", "N", "n_p_max", "child_order", "max_iters", "rho",
                "eps_primal", "eps_dual", "over_relaxation", "extraction", "mode"});
    read_optional(c, "lambda_T", cfg.controller.weights.lambda_T);
    read_optional(c, "lambda_u", cfg.controller.weights.lambda_u);
    read_optional(c, "N", cfg.controller.weights.N);
    if (c.contains("n_p_max")) {
      if (c["n_p_max"].is_string() && c["n_p_max"] == "unlimited") {
        cfg.controller.bnb.n_p_max = BnbConfig::unlimited;
      } else {
        cfg.controller.bnb.n_p_max = c["n_p_max"].get<std::uint64_t>();
      }
    }
    if (c.contains("child_order")) {
      const std::string order = c["child_order"].get<std::string>();
      if (order == "fixed") cfg.controller.bnb.child_order = ChildOrder::FixedEnumeration;
      else if (order == "stage_cost") cfg.controller.bnb.child_order = ChildOrder::StageCostAscending;
      else fail("unknown child_order '" + order + "'");
    }
    read_optional(c, "max_iters", cfg.controller.sdp.max_iters);
    read_optional(c, "rho", cfg.controller.sdp.rho);
    read_optional(c, "eps_primal", cfg.controller.sdp.eps_primal);
    read_optional(c, "eps_dual", cfg.controller.sdp.eps_dual);
    read_optional(c, "over_relaxation", cfg.controller.sdp.over_relaxation);
    if (c.contains("extraction"))
      cfg.controller.extraction = parse_extraction(c["extraction"].get<std::string>());
    if (c.contains("mode")) cfg.controller.mode = parse_mode(c["mode"].get<std::string>());
  }

  if (root.contains("scenario")) {
    const json& s = root["scenario"];
    check_keys(s, "scenario",
               {"T_c", "T_s", "t_start", "t_end", "torque_ref_schedule", "Psi_s_star",
                "noise_amplitude", "rng_seed", "omega_r", "state_sanity_limit",
                "emit_plant_trace"});
    read_optional(s, "T_c", cfg.scenario.T_c);
    read_optional(s, "T_s", cfg.scenario.T_s);
    read_optional(s, "t_start", cfg.scenario.t_start);
    read_optional(s, "t_end", cfg.scenario.t_end);
    if (s.contains("torque_ref_schedule")) {
      cfg.scenario.torque_ref_schedule.clear();
      for (const auto& entry : s["torque_ref_schedule"]) {
        if (!entry.is_array() || entry.size() != 2)
          fail("torque_ref_schedule entries must be [time, value] pairs");
        cfg.scenario.torque_ref_schedule.emplace_back(entry[0].get<double>(),
                                                      entry[1].get<double>());
      }
    }
    read_optional(s, "Psi_s_star", cfg.scenario.Psi_s_star);
    read_optional(s, "noise_amplitude", cfg.scenario.noise_amplitude);
    read_optional(s, "rng_seed", cfg.scenario.rng_seed);
    read_optional(s, "omega_r", cfg.scenario.omega_r);
    read_optional(s, "state_sanity_limit", cfg.scenario.state_sanity_limit);
    read_optional(s, "emit_plant_trace", cfg.scenario.emit_plant_trace);
  }

  read_optional(root, "output_dir", cfg.output_dir);

  cfg.machine.validate();
  cfg.controller.weights.validate();
  cfg.scenario.validate();
  return cfg;
}

}  // namespace dtmpc

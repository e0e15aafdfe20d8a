#pragma once

#include <optional>
#include <string>
#include <vector>

#include "secrate/bounds.hpp"
#include "secrate/numerics.hpp"
#include "secrate/power.hpp"
#include "secrate/protocol.hpp"
#include "secrate/serialization.hpp"

namespace secrate {

enum class Scenario { FullCsi, MainCsi };

// A policy family to include in the optimization menu. Either a single
// threshold or a count of log-spaced thresholds (truncated families only);
// plain families take neither.
struct PolicyRequest {
  PolicyFamily family = PolicyFamily::Constant;
  std::optional<double> threshold;
  std::optional<int> threshold_grid;
};

// Simulation settings as configured; relative knobs (delta as a fraction
// of the mean key rate, rate_target as a multiple of the fixed point) are
// resolved against the fading spec when the run is built.
struct SimSettings {
  int s_count = 2;
  int b_count = 1;
  int n_prime = 1;
  std::uint64_t seed = 1;
  std::optional<double> snr_db;  // defaults to the first grid point
  PolicyRequest policy;
  std::optional<double> delta;
  double delta_factor = 0.05;
  std::optional<double> rate_target;
  double rate_target_factor = 1.0;
  double epsilon = 0.05;
  double epsilon_prime = 0.01;
  std::size_t plan_samples = 200000;
};

struct ExperimentConfig {
  std::string label;
  Scenario scenario = Scenario::FullCsi;
  FadingSpec fading;
  std::vector<double> snr_db_grid;
  McConfig mc;
  Tolerance tol;
  std::vector<PolicyRequest> policies;
  QChoice q = QChoice::eavesdropper_gain();
  bool include_high_snr_limit = true;
  std::optional<SimSettings> sim;
};

// Parses and validates a config document; throws ConfigError naming the
// offending field (or the parser's position for malformed JSON).
ExperimentConfig load_config(const json& j);
ExperimentConfig load_config_file(const std::string& path);

// Expands policy requests into calibrated policies at one budget, with the
// CSI implied by the scenario. Calibration failures propagate.
std::vector<PowerPolicy> build_menu(const ExperimentConfig& cfg,
                                    const PowerBudget& budget);

// Upper and lower bound per grid point (full or main CSI per the
// scenario), plus one trailing high-SNR limit row for full-CSI sweeps.
// All points share mc.seed, so sweeps see common channel draws.
std::vector<BoundResult> run_sweep(const ExperimentConfig& cfg);

// Fixed-point rows only, one per grid point. Requires a main-CSI menu.
std::vector<BoundResult> run_fixed_point(const ExperimentConfig& cfg);

BoundResult run_high_snr(const ExperimentConfig& cfg);

// Builds the SimConfig (calibrating the policy, resolving delta and
// rate_target) and runs the protocol.
SimReport run_sim(const ExperimentConfig& cfg,
                  std::vector<TraceRow>* trace = nullptr);

std::string to_string(Scenario scenario);

}  // namespace secrate

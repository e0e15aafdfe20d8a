#include "secrate/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "secrate/errors.hpp"

namespace secrate {

namespace {

const json& require(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

PolicyFamily parse_family(const std::string& name, const char* what) {
  if (name == "constant") return PolicyFamily::Constant;
  if (name == "inversion_main") return PolicyFamily::InversionMain;
  if (name == "inversion_min") return PolicyFamily::InversionMin;
  if (name == "truncated_inversion_main")
    return PolicyFamily::TruncatedInversionMain;
  if (name == "truncated_inversion_min")
    return PolicyFamily::TruncatedInversionMin;
  throw ConfigError(std::string(what) + ": unknown policy family '" + name + "'");
}

PolicyRequest parse_policy_request(const json& j, const char* what) {
  if (!j.is_object())
    throw ConfigError(std::string(what) + ": policy entry must be an object");
  PolicyRequest req;
  if (!j.contains("family"))
    throw ConfigError(std::string(what) + ": policy entry missing 'family'");
  req.family = parse_family(j.at("family").get<std::string>(), what);
  if (j.contains("threshold") && j.contains("threshold_grid"))
    throw ConfigError(std::string(what) +
                      ": give either 'threshold' or 'threshold_grid', not both");
  if (j.contains("threshold")) req.threshold = j.at("threshold").get<double>();
  if (j.contains("threshold_grid")) {
    int n = j.at("threshold_grid").get<int>();
    if (n < 2)
      throw ConfigError(std::string(what) + ": threshold_grid must be >= 2");
    req.threshold_grid = n;
  }
  return req;
}

Csi scenario_csi(Scenario s) {
  return s == Scenario::FullCsi ? Csi::Full : Csi::MainOnly;
}

}  // namespace

std::string to_string(Scenario scenario) {
  return scenario == Scenario::FullCsi ? "full_csi" : "main_csi";
}

ExperimentConfig load_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  std::string scen = require(j, "scenario", "config").get<std::string>();
  Scenario scenario;
  if (scen == "full_csi")
    scenario = Scenario::FullCsi;
  else if (scen == "main_csi")
    scenario = Scenario::MainCsi;
  else
    throw ConfigError("config: unknown scenario '" + scen + "'");

  ExperimentConfig cfg{
      .label = j.value("label", std::string{}),
      .scenario = scenario,
      .fading = fading_spec_from_json(require(j, "fading", "config")),
      .snr_db_grid = {},
      .mc = {},
      .tol = {},
      .policies = {},
      .q = QChoice::eavesdropper_gain(),
      .include_high_snr_limit = true,
      .sim = std::nullopt,
  };

  if (j.contains("snr_db_grid")) {
    const json& grid = j.at("snr_db_grid");
    if (!grid.is_array())
      throw ConfigError("config: 'snr_db_grid' must be an array");
    for (const json& v : grid) {
      if (!v.is_number())
        throw ConfigError("config: 'snr_db_grid' entries must be numbers");
      cfg.snr_db_grid.push_back(v.get<double>());
    }
  }

  if (j.contains("mc")) {
    const json& m = j.at("mc");
    cfg.mc.samples = m.value("samples", cfg.mc.samples);
    cfg.mc.seed = m.value("seed", cfg.mc.seed);
    if (cfg.mc.samples == 0) throw ConfigError("config: mc.samples must be >= 1");
  }
  if (j.contains("tolerance")) {
    const json& t = j.at("tolerance");
    cfg.tol.abs_tol = t.value("abs_tol", cfg.tol.abs_tol);
    cfg.tol.max_iter = t.value("max_iter", cfg.tol.max_iter);
    if (!(cfg.tol.abs_tol > 0.0))
      throw ConfigError("config: tolerance.abs_tol must be > 0");
    if (cfg.tol.max_iter < 1)
      throw ConfigError("config: tolerance.max_iter must be >= 1");
  }

  if (j.contains("policies")) {
    const json& pol = j.at("policies");
    if (!pol.is_array()) throw ConfigError("config: 'policies' must be an array");
    for (const json& p : pol)
      cfg.policies.push_back(parse_policy_request(p, "config.policies"));
  }

  if (j.contains("q")) {
    const json& q = j.at("q");
    std::string choice = require(q, "choice", "config.q").get<std::string>();
    if (choice == "eavesdropper")
      cfg.q = QChoice::eavesdropper_gain();
    else if (choice == "constant")
      cfg.q = QChoice::constant(require(q, "value", "config.q").get<double>());
    else
      throw ConfigError("config.q: unknown choice '" + choice + "'");
  }

  cfg.include_high_snr_limit =
      j.value("include_high_snr_limit", cfg.include_high_snr_limit);

  if (j.contains("sim")) {
    const json& s = j.at("sim");
    SimSettings sim;
    sim.s_count = require(s, "s_count", "config.sim").get<int>();
    sim.b_count = require(s, "b_count", "config.sim").get<int>();
    sim.n_prime = require(s, "n_prime", "config.sim").get<int>();
    sim.seed = s.value("seed", cfg.mc.seed);
    if (s.contains("snr_db")) sim.snr_db = s.at("snr_db").get<double>();
    if (s.contains("policy"))
      sim.policy = parse_policy_request(s.at("policy"), "config.sim.policy");
    if (s.contains("delta") && s.contains("delta_factor"))
      throw ConfigError(
          "config.sim: give either 'delta' or 'delta_factor', not both");
    if (s.contains("delta")) sim.delta = s.at("delta").get<double>();
    sim.delta_factor = s.value("delta_factor", sim.delta_factor);
    if (s.contains("rate_target") && s.contains("rate_target_factor"))
      throw ConfigError(
          "config.sim: give either 'rate_target' or 'rate_target_factor', not "
          "both");
    if (s.contains("rate_target"))
      sim.rate_target = s.at("rate_target").get<double>();
    sim.rate_target_factor = s.value("rate_target_factor", sim.rate_target_factor);
    sim.epsilon = s.value("epsilon", sim.epsilon);
    sim.epsilon_prime = s.value("epsilon_prime", sim.epsilon_prime);
    sim.plan_samples = s.value("plan_samples", sim.plan_samples);
    cfg.sim = sim;
  }

  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return load_config(j);
}

std::vector<PowerPolicy> build_menu(const ExperimentConfig& cfg,
                                    const PowerBudget& budget) {
  if (cfg.policies.empty())
    throw ConfigError("config: 'policies' must list at least one family");
  Csi csi = scenario_csi(cfg.scenario);
  std::vector<PowerPolicy> menu;
  for (const PolicyRequest& req : cfg.policies) {
    if (req.threshold_grid) {
      for (double t : threshold_grid(cfg.fading, req.family, *req.threshold_grid))
        menu.push_back(calibrate({req.family, t}, csi, cfg.fading, budget,
                                 cfg.mc, cfg.tol));
    } else {
      menu.push_back(calibrate({req.family, req.threshold.value_or(0.0)}, csi,
                               cfg.fading, budget, cfg.mc, cfg.tol));
    }
  }
  return menu;
}

std::vector<BoundResult> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.snr_db_grid.empty())
    throw ConfigError("config: 'snr_db_grid' must list at least one point");
  std::vector<BoundResult> rows;
  for (double snr : cfg.snr_db_grid) {
    PowerBudget budget = PowerBudget::from_snr_db(snr);
    std::vector<PowerPolicy> menu = build_menu(cfg, budget);
    if (cfg.scenario == Scenario::FullCsi) {
      rows.push_back(upper_full(cfg.fading, budget, cfg.mc, menu));
      rows.push_back(lower_full(cfg.fading, budget, cfg.mc, menu, cfg.q));
    } else {
      rows.push_back(upper_main(cfg.fading, budget, cfg.mc, menu));
      rows.push_back(
          lower_main_fixed_point(cfg.fading, budget, cfg.mc, menu, cfg.tol));
    }
  }
  if (cfg.scenario == Scenario::FullCsi && cfg.include_high_snr_limit)
    rows.push_back(high_snr_limit(cfg.fading, cfg.mc));
  return rows;
}

std::vector<BoundResult> run_fixed_point(const ExperimentConfig& cfg) {
  if (cfg.scenario != Scenario::MainCsi)
    throw ConfigError("fixedpoint: scenario must be 'main_csi'");
  if (cfg.snr_db_grid.empty())
    throw ConfigError("config: 'snr_db_grid' must list at least one point");
  std::vector<BoundResult> rows;
  for (double snr : cfg.snr_db_grid) {
    PowerBudget budget = PowerBudget::from_snr_db(snr);
    std::vector<PowerPolicy> menu = build_menu(cfg, budget);
    rows.push_back(
        lower_main_fixed_point(cfg.fading, budget, cfg.mc, menu, cfg.tol));
  }
  return rows;
}

BoundResult run_high_snr(const ExperimentConfig& cfg) {
  return high_snr_limit(cfg.fading, cfg.mc);
}

SimReport run_sim(const ExperimentConfig& cfg, std::vector<TraceRow>* trace) {
  if (!cfg.sim)
    throw ConfigError("config: 'sim' section required for simulation");
  const SimSettings& s = *cfg.sim;

  double snr;
  if (s.snr_db)
    snr = *s.snr_db;
  else if (!cfg.snr_db_grid.empty())
    snr = cfg.snr_db_grid.front();
  else
    throw ConfigError("config.sim: no snr_db and empty snr_db_grid");
  PowerBudget budget = PowerBudget::from_snr_db(snr);

  Csi csi = scenario_csi(cfg.scenario);
  CsiMode mode =
      cfg.scenario == Scenario::FullCsi ? CsiMode::FullCsi : CsiMode::MainCsi;

  if (s.policy.threshold_grid)
    throw ConfigError("config.sim.policy: pick one threshold, not a grid");
  PowerPolicy policy =
      calibrate({s.policy.family, s.policy.threshold.value_or(0.0)}, csi,
                cfg.fading, budget, cfg.mc, cfg.tol);

  // Resolve the payload rate first (the key margin references it in
  // main-CSI mode).
  double rate_target = 0.0;
  if (mode == CsiMode::MainCsi) {
    if (s.rate_target) {
      rate_target = *s.rate_target;
    } else {
      std::vector<PowerPolicy> menu{policy};
      BoundResult fp =
          lower_main_fixed_point(cfg.fading, budget, cfg.mc, menu, cfg.tol);
      rate_target = s.rate_target_factor * fp.value;
    }
  }

  double delta;
  if (s.delta) {
    delta = *s.delta;
  } else {
    McEstimate mean_key = expect(
        [&](const ChannelState& st) {
          double p = policy.evaluate(st);
          double a = std::log2(1.0 + p * st.h_m);
          double b = std::log2(1.0 + p * st.h_e);
          return mode == CsiMode::FullCsi ? pos(a - b)
                                          : pos(a - rate_target - b);
        },
        cfg.fading, cfg.mc);
    delta = s.delta_factor * mean_key.mean;
  }

  SimConfig sim_cfg{
      .spec = cfg.fading,
      .policy = policy,
      .mode = mode,
      .s_count = s.s_count,
      .b_count = s.b_count,
      .n_prime = s.n_prime,
      .seed = s.seed,
      .delta = delta,
      .rate_target = rate_target,
      .epsilon = s.epsilon,
      .epsilon_prime = s.epsilon_prime,
      .plan_samples = s.plan_samples,
  };
  return run(sim_cfg, trace);
}

}  // namespace secrate

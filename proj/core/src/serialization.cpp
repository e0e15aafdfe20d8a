#include "secrate/serialization.hpp"

#include <cstdio>
#include <ostream>

#include "secrate/errors.hpp"

namespace secrate {

namespace {

const json& require(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(std::string(what) + ": missing field '" + key + "'");
  return *it;
}

double require_number(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number())
    throw ConfigError(std::string(what) + ": field '" + key +
                      "' must be a number");
  return v.get<double>();
}

int require_int(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number_integer())
    throw ConfigError(std::string(what) + ": field '" + key +
                      "' must be an integer");
  return v.get<int>();
}

std::string require_string(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_string())
    throw ConfigError(std::string(what) + ": field '" + key +
                      "' must be a string");
  return v.get<std::string>();
}

}  // namespace

json to_json(const GainSpec& spec) {
  json j;
  j["family"] = spec.family_name();
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ChiSquareGain>) {
          j["dof"] = g.dof;
          j["scale"] = g.scale;
        } else if constexpr (std::is_same_v<T, ExponentialGain>) {
          j["mean"] = g.mean;
        } else if constexpr (std::is_same_v<T, DeterministicGain>) {
          j["value"] = g.value;
        } else {
          j["v1"] = g.v1;
          j["v2"] = g.v2;
          j["p1"] = g.p1;
        }
      },
      spec.family());
  return j;
}

GainSpec gain_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("gain spec: expected an object");
  std::string family = require_string(j, "family", "gain spec");
  if (family == "chi_square")
    return GainSpec::chi_square(require_int(j, "dof", "chi_square gain"),
                                require_number(j, "scale", "chi_square gain"));
  if (family == "exponential")
    return GainSpec::exponential(require_number(j, "mean", "exponential gain"));
  if (family == "deterministic")
    return GainSpec::deterministic(
        require_number(j, "value", "deterministic gain"));
  if (family == "two_point")
    return GainSpec::two_point(require_number(j, "v1", "two_point gain"),
                               require_number(j, "v2", "two_point gain"),
                               require_number(j, "p1", "two_point gain"));
  throw ConfigError("gain spec: unknown family '" + family + "'");
}

json to_json(const FadingSpec& spec) {
  return json{{"main", to_json(spec.main)}, {"eavesdropper", to_json(spec.eaves)}};
}

FadingSpec fading_spec_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("fading spec: expected an object");
  return FadingSpec{gain_spec_from_json(require(j, "main", "fading spec")),
                    gain_spec_from_json(require(j, "eavesdropper", "fading spec"))};
}

json to_json(const PowerPolicy& policy) {
  json j;
  j["family"] = policy.family_name();
  j["c"] = policy.c();
  j["csi"] = policy.csi() == Csi::Full ? "full" : "main_only";
  if (policy.family() == PolicyFamily::TruncatedInversionMain ||
      policy.family() == PolicyFamily::TruncatedInversionMin)
    j["threshold"] = policy.threshold();
  return j;
}

namespace {

PolicyFamily policy_family_from_name(const std::string& name) {
  if (name == "constant") return PolicyFamily::Constant;
  if (name == "inversion_main") return PolicyFamily::InversionMain;
  if (name == "inversion_min") return PolicyFamily::InversionMin;
  if (name == "truncated_inversion_main")
    return PolicyFamily::TruncatedInversionMain;
  if (name == "truncated_inversion_min")
    return PolicyFamily::TruncatedInversionMin;
  throw ConfigError("power policy: unknown family '" + name + "'");
}

}  // namespace

PowerPolicy power_policy_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("power policy: expected an object");
  PolicyFamily family =
      policy_family_from_name(require_string(j, "family", "power policy"));
  std::string csi_name = require_string(j, "csi", "power policy");
  Csi csi;
  if (csi_name == "full")
    csi = Csi::Full;
  else if (csi_name == "main_only")
    csi = Csi::MainOnly;
  else
    throw ConfigError("power policy: unknown csi '" + csi_name + "'");
  double threshold = 0.0;
  if (j.contains("threshold"))
    threshold = require_number(j, "threshold", "power policy");
  double c = require_number(j, "c", "power policy");
  return PowerPolicy({family, threshold}, csi, c);
}

json to_json(const SimReport& report) {
  json j;
  j["mode"] = to_string(report.mode);
  j["s_count"] = report.s_count;
  j["b_count"] = report.b_count;
  j["n_prime"] = report.n_prime;
  j["seed"] = report.seed;
  j["planned_r1"] = report.planned_r1;
  j["delta"] = report.delta;
  j["payload_blocks"] = report.payload_blocks;
  j["enc_error_count"] = report.enc_error_count;
  j["enc_error_rate"] = report.enc_error_rate;
  j["decrypt_failures"] = report.decrypt_failures;
  j["achieved_throughput"] = report.achieved_throughput;
  j["key_balance"] = report.key_balance;
  j["outage"] = json{{"beta", report.outage.beta},
                     {"outage_blocks", report.outage.outage_blocks},
                     {"eligible_blocks", report.outage.eligible_blocks},
                     {"outage_rate", report.outage.outage_rate},
                     {"epsilon_satisfied", report.outage.epsilon_satisfied}};
  j["audits"] = json{{"key_reuse_ok", report.audit_key_reuse_ok},
                     {"causality_ok", report.audit_causality_ok},
                     {"no_overdraw_ok", report.audit_no_overdraw_ok}};
  return j;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_bounds_csv(std::ostream& os, std::span<const BoundResult> rows) {
  os << "kind,snr_db,p_bar,value,stderr,policy_family,policy_c\n";
  for (const BoundResult& r : rows) {
    os << to_string(r.kind) << ',' << format_double(r.snr_db) << ','
       << format_double(r.p_bar) << ',' << format_double(r.value) << ','
       << format_double(r.std_error) << ','
       << (r.policy ? r.policy->family_name() : "none") << ','
       << format_double(r.policy ? r.policy->c() : 0.0) << '\n';
  }
}

void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows) {
  os << "s,b,h_m,h_e,power,r_k_bits,r_1_bits,enc_error,outage\n";
  for (const TraceRow& r : rows) {
    os << r.s << ',' << r.b << ',' << format_double(r.h_m) << ','
       << format_double(r.h_e) << ',' << format_double(r.power) << ','
       << r.r_k_bits << ',' << r.r_1_bits << ',' << (r.enc_error ? 1 : 0) << ','
       << (r.outage ? 1 : 0) << '\n';
  }
}

}  // namespace secrate

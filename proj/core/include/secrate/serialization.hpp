#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "secrate/bounds.hpp"
#include "secrate/channel.hpp"
#include "secrate/power.hpp"
#include "secrate/protocol.hpp"

namespace secrate {

using json = nlohmann::json;

// JSON shapes:
//   gain    {"family":"chi_square","dof":4,"scale":0.5}
//           {"family":"exponential","mean":1.0}
//           {"family":"deterministic","value":4.0}
//           {"family":"two_point","v1":1.0,"v2":3.0,"p1":0.5}
//   fading  {"main":<gain>,"eavesdropper":<gain>}
//   policy  {"family":"inversion_min","c":1.234,"csi":"full"[,"threshold":t]}
// Parsing throws ConfigError naming the offending field.

json to_json(const GainSpec& spec);
GainSpec gain_spec_from_json(const json& j);

json to_json(const FadingSpec& spec);
FadingSpec fading_spec_from_json(const json& j);

json to_json(const PowerPolicy& policy);
PowerPolicy power_policy_from_json(const json& j);

json to_json(const SimReport& report);

// Fixed "%.12g" rendering so repeated runs emit byte-identical files.
std::string format_double(double v);

// Header: kind,snr_db,p_bar,value,stderr,policy_family,policy_c
void write_bounds_csv(std::ostream& os, std::span<const BoundResult> rows);

// Header: s,b,h_m,h_e,power,r_k_bits,r_1_bits,enc_error,outage
void write_trace_csv(std::ostream& os, std::span<const TraceRow> rows);

}  // namespace secrate

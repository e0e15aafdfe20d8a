#pragma once

#include <optional>
#include <span>
#include <string>

#include "secrate/channel.hpp"
#include "secrate/numerics.hpp"
#include "secrate/power.hpp"

namespace secrate {

enum class BoundKind {
  UpperFull,      // converse, transmitter sees both gains
  LowerFull,      // achievable rate of the key-renewal scheme, full CSI
  UpperMain,      // converse, transmitter sees the main gain only
  LowerMainEps,   // achievable fixed point, main CSI, epsilon outage
  HighSnrLimit,   // common limit of the full-CSI bounds as p_bar grows
};

std::string to_string(BoundKind kind);

struct BoundResult {
  BoundKind kind = BoundKind::UpperFull;
  double snr_db = 0.0;
  double p_bar = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  // Menu entry that attained the value; empty for the high-SNR limit.
  std::optional<PowerPolicy> policy;
  // High-SNR limit only: set when E[1/min(h_m,h_e)] is analytically
  // infinite, in which case the limit value is still reported but the
  // bounds are not guaranteed to approach it.
  bool hypothesis_violated = false;
};

// Auxiliary rate split at one channel state under the two-stage scheme:
// r_s   secrecy rate of the inner wiretap code,
// r_k   fresh key rate banked for later super-blocks,
// r_2   immediately secret part, r_2 = r_s - r_k,
// r_1   key-protected part (caller-chosen constant),
// r_x   public padding, r_x = min(log2(1+P h_m), log2(1+P h_e)) - r_1.
struct RateAllocation {
  double r_s = 0.0;
  double r_k = 0.0;
  double r_1 = 0.0;
  double r_2 = 0.0;
  double r_x = 0.0;
};

// The fictitious gain q >= h_e used in the key-rate term of the achievable
// full-CSI bound: either the eavesdropper gain itself or a constant upper
// bound on it.
class QChoice {
 public:
  static QChoice eavesdropper_gain() { return QChoice(true, 0.0); }
  static QChoice constant(double q) { return QChoice(false, q); }

  bool is_eavesdropper() const { return eaves_; }
  double value() const { return value_; }
  double resolve(const ChannelState& st) const { return eaves_ ? st.h_e : value_; }

 private:
  QChoice(bool eaves, double value) : eaves_(eaves), value_(value) {}
  bool eaves_;
  double value_;
};

// All bound evaluators take a menu of calibrated policies, evaluate every
// entry on common channel draws (same mc.seed), and return the best entry.
// Ties break toward the earlier menu position, so results are
// deterministic. Expectations are sample means; worst-case terms use the
// sample minimum over the same draws.

// min{ E[log2(1+P h_m) - log2(1+P h_e)]^+ , min_h log2(1+P h_m) },
// maximized over the menu.
BoundResult upper_full(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu);

// Achievable rate R_1 + min_h R_2 with constant R_1 = min{ E[R_k],
// min_h min(log2(1+P h_m), log2(1+P h_e)) }, maximized over the menu.
BoundResult lower_full(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu,
                       const QChoice& q);

// E[log2(h_m/h_e)]^+ restricted to h_m > h_e: the value both full-CSI
// bounds approach as p_bar grows, provided E[1/min(h_m,h_e)] is finite.
BoundResult high_snr_limit(const FadingSpec& spec, const McConfig& mc);

// Same expression as upper_full, but every menu entry must be main-only.
BoundResult upper_main(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu);

// Largest R with R = min{ E[log2(1+P h_m) - R - log2(1+P h_e)]^+ ,
// min_{h_m} log2(1+P h_m) }, solved by bisection per menu entry. The rate
// appears inside the clipped expectation, hence the fixed point.
BoundResult lower_main_fixed_point(const FadingSpec& spec,
                                   const PowerBudget& budget, const McConfig& mc,
                                   std::span<const PowerPolicy> menu,
                                   const Tolerance& tol);

// Rate split at one state. Preconditions: q >= h_e and
// r_1 <= min(log2(1+P h_m), log2(1+P h_e)).
RateAllocation allocate_rates_full(const PowerPolicy& policy,
                                   const ChannelState& state, double q,
                                   double r_1);

}  // namespace secrate

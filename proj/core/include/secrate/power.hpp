#pragma once

#include <string>
#include <vector>

#include "secrate/channel.hpp"
#include "secrate/numerics.hpp"

namespace secrate {

// Which gains the transmitter is allowed to condition its power on.
enum class Csi { Full, MainOnly };

enum class PolicyFamily {
  Constant,
  InversionMain,
  InversionMin,
  TruncatedInversionMain,
  TruncatedInversionMin,
};

// Family plus its free parameters, before the scale c is known.
struct PolicyShape {
  PolicyFamily family = PolicyFamily::Constant;
  double threshold = 0.0;  // truncated families only; gain below it gets zero power
};

// Average transmit power with unit noise variance.
struct PowerBudget {
  double p_bar = 1.0;

  double snr_db() const;
  static PowerBudget from_snr_db(double db);
};

// A fully specified power allocation P(h). Immutable; construction
// validates that the family is compatible with the CSI mode (min-based
// inversion needs the eavesdropper gain, which MainOnly cannot see).
class PowerPolicy {
 public:
  PowerPolicy(PolicyShape shape, Csi csi, double c);

  static PowerPolicy constant(double c, Csi csi);
  static PowerPolicy inversion_main(double c, Csi csi);
  static PowerPolicy inversion_min(double c);
  static PowerPolicy truncated_inversion_main(double c, double threshold, Csi csi);
  static PowerPolicy truncated_inversion_min(double c, double threshold);

  // Transmit power for one block. Throws SingularityError when an
  // untruncated inversion hits a zero gain.
  double evaluate(const ChannelState& state) const;

  PolicyFamily family() const { return shape_.family; }
  double threshold() const { return shape_.threshold; }
  double c() const { return c_; }
  Csi csi() const { return csi_; }
  const PolicyShape& shape() const { return shape_; }
  bool uses_eavesdropper_gain() const;
  std::string family_name() const;

 private:
  PolicyShape shape_;
  Csi csi_ = Csi::Full;
  double c_ = 0.0;
};

// Finds the scale c such that E[P(h)] = p_bar under the given spec. Every
// family here is linear in c, so the fit is a single Monte Carlo estimate
// of E[P(h; c=1)] followed by an exact division; the postcondition
// |E[P] - p_bar| <= tol.abs_tol * p_bar is re-checked on the same draws.
// Throws DivergenceError when the required inverse moment is analytically
// infinite (untruncated inversion over gains with mass near zero).
PowerPolicy calibrate(const PolicyShape& shape, Csi csi, const FadingSpec& spec,
                      const PowerBudget& budget, const McConfig& mc,
                      const Tolerance& tol);

// Log-spaced truncation thresholds spanning [1e-3, 1] times the relevant
// gain's mean (the main gain for main-only truncation, the smaller of the
// two means for min-based truncation).
std::vector<double> threshold_grid(const FadingSpec& spec, PolicyFamily family,
                                   int count = 16);

std::string to_string(PolicyFamily family);
std::string to_string(Csi csi);

}  // namespace secrate

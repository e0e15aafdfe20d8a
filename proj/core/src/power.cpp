#include "secrate/power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "secrate/errors.hpp"

namespace secrate {

namespace {

bool is_truncated(PolicyFamily f) {
  return f == PolicyFamily::TruncatedInversionMain ||
         f == PolicyFamily::TruncatedInversionMin;
}

bool is_min_based(PolicyFamily f) {
  return f == PolicyFamily::InversionMin ||
         f == PolicyFamily::TruncatedInversionMin;
}

bool is_inversion(PolicyFamily f) { return f != PolicyFamily::Constant; }

}  // namespace

std::string to_string(PolicyFamily family) {
  switch (family) {
    case PolicyFamily::Constant: return "constant";
    case PolicyFamily::InversionMain: return "inversion_main";
    case PolicyFamily::InversionMin: return "inversion_min";
    case PolicyFamily::TruncatedInversionMain: return "truncated_inversion_main";
    case PolicyFamily::TruncatedInversionMin: return "truncated_inversion_min";
  }
  return "unknown";
}

std::string to_string(Csi csi) {
  return csi == Csi::Full ? "full" : "main_only";
}

double PowerBudget::snr_db() const { return 10.0 * std::log10(p_bar); }

PowerBudget PowerBudget::from_snr_db(double db) {
  return PowerBudget{std::pow(10.0, db / 10.0)};
}

PowerPolicy::PowerPolicy(PolicyShape shape, Csi csi, double c)
    : shape_(shape), csi_(csi), c_(c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw ConfigError("power policy: scale c must be >= 0 and finite");
  if (!(shape.threshold >= 0.0) || !std::isfinite(shape.threshold))
    throw ConfigError("power policy: threshold must be >= 0 and finite");
  if (!is_truncated(shape.family) && shape.threshold != 0.0)
    throw ConfigError("power policy: threshold only applies to truncated families");
  if (csi == Csi::MainOnly && is_min_based(shape.family))
    throw ConfigError("power policy: " + to_string(shape.family) +
                      " needs the eavesdropper gain and cannot run main-only");
}

PowerPolicy PowerPolicy::constant(double c, Csi csi) {
  return PowerPolicy({PolicyFamily::Constant, 0.0}, csi, c);
}
PowerPolicy PowerPolicy::inversion_main(double c, Csi csi) {
  return PowerPolicy({PolicyFamily::InversionMain, 0.0}, csi, c);
}
PowerPolicy PowerPolicy::inversion_min(double c) {
  return PowerPolicy({PolicyFamily::InversionMin, 0.0}, Csi::Full, c);
}
PowerPolicy PowerPolicy::truncated_inversion_main(double c, double threshold,
                                                  Csi csi) {
  return PowerPolicy({PolicyFamily::TruncatedInversionMain, threshold}, csi, c);
}
PowerPolicy PowerPolicy::truncated_inversion_min(double c, double threshold) {
  return PowerPolicy({PolicyFamily::TruncatedInversionMin, threshold}, Csi::Full,
                     c);
}

bool PowerPolicy::uses_eavesdropper_gain() const {
  return is_min_based(shape_.family);
}

std::string PowerPolicy::family_name() const { return to_string(shape_.family); }

double PowerPolicy::evaluate(const ChannelState& state) const {
  double g = 0.0;
  switch (shape_.family) {
    case PolicyFamily::Constant:
      return c_;
    case PolicyFamily::InversionMain:
      g = state.h_m;
      if (g <= 0.0) {
        std::ostringstream os;
        os << "inversion_main: zero main gain (h_m=" << state.h_m << ")";
        throw SingularityError(os.str());
      }
      return c_ / g;
    case PolicyFamily::InversionMin:
      g = std::min(state.h_m, state.h_e);
      if (g <= 0.0) {
        std::ostringstream os;
        os << "inversion_min: zero gain (h_m=" << state.h_m
           << ", h_e=" << state.h_e << ")";
        throw SingularityError(os.str());
      }
      return c_ / g;
    case PolicyFamily::TruncatedInversionMain:
      g = state.h_m;
      break;
    case PolicyFamily::TruncatedInversionMin:
      g = std::min(state.h_m, state.h_e);
      break;
  }
  // Truncated families: zero power below the threshold, and a zero gain
  // never transmits even when threshold == 0.
  if (g <= 0.0 || g < shape_.threshold) return 0.0;
  return c_ / g;
}

PowerPolicy calibrate(const PolicyShape& shape, Csi csi, const FadingSpec& spec,
                      const PowerBudget& budget, const McConfig& mc,
                      const Tolerance& tol) {
  if (!(budget.p_bar > 0.0) || !std::isfinite(budget.p_bar))
    throw ConfigError("calibrate: p_bar must be positive and finite");

  PowerPolicy unit(shape, csi, 1.0);  // validates the shape/CSI combo

  // E[P] under an inversion policy is an inverse moment. When the
  // truncation doesn't bound the inverted gain away from zero, decide
  // finiteness analytically instead of hoping a finite sample notices:
  // the sample mean of a divergent integrand looks deceptively stable.
  if (is_inversion(shape.family) && shape.threshold <= 0.0) {
    bool finite = is_min_based(shape.family)
                      ? spec.main.inverse_moment_finite() &&
                            spec.eaves.inverse_moment_finite()
                      : spec.main.inverse_moment_finite();
    if (!finite) {
      std::ostringstream os;
      os << "calibrate: E[P] diverges for " << to_string(shape.family)
         << " over (" << spec.main.family_name() << ", "
         << spec.eaves.family_name()
         << "): the inverse gain moment is infinite; use a truncated family";
      throw DivergenceError(os.str());
    }
  }

  McEstimate unit_power =
      expect([&](const ChannelState& st) { return unit.evaluate(st); }, spec, mc);
  if (!(unit_power.mean > 0.0)) {
    std::ostringstream os;
    os << "calibrate: " << to_string(shape.family) << " with threshold "
       << shape.threshold << " never transmits under this spec";
    throw ConfigError(os.str());
  }

  double c = budget.p_bar / unit_power.mean;
  PowerPolicy fitted(shape, csi, c);

  // Same draws, so this can only trip on pathological rounding.
  double refit = c * unit_power.mean;
  if (std::fabs(refit - budget.p_bar) > tol.abs_tol * budget.p_bar) {
    std::ostringstream os;
    os << "calibrate: fitted E[P]=" << refit << " misses p_bar=" << budget.p_bar
       << " beyond tolerance " << tol.abs_tol;
    throw ConvergenceError(os.str());
  }
  return fitted;
}

std::vector<double> threshold_grid(const FadingSpec& spec, PolicyFamily family,
                                   int count) {
  if (count < 2) throw ConfigError("threshold_grid: count must be >= 2");
  if (!is_truncated(family))
    throw ConfigError("threshold_grid: " + to_string(family) +
                      " takes no threshold");
  double ref = family == PolicyFamily::TruncatedInversionMain
                   ? spec.main.mean()
                   : std::min(spec.main.mean(), spec.eaves.mean());
  if (!(ref > 0.0))
    throw ConfigError("threshold_grid: relevant gain mean is zero");
  double lo = 1e-3 * ref;
  double hi = ref;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(count - 1);
    grid[i] = lo * std::pow(hi / lo, t);
  }
  return grid;
}

}  // namespace secrate

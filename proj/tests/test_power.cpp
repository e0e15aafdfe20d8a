#include <doctest.h>

#include <cmath>

#include "secrate/channel.hpp"
#include "secrate/errors.hpp"
#include "secrate/numerics.hpp"
#include "secrate/power.hpp"

using namespace secrate;

TEST_SUITE("power") {

TEST_CASE("policy evaluation") {
  ChannelState st{4.0, 1.0};
  CHECK(PowerPolicy::constant(3.0, Csi::Full).evaluate(st) == 3.0);
  CHECK(PowerPolicy::inversion_main(2.0, Csi::Full).evaluate(st) == 0.5);
  CHECK(PowerPolicy::inversion_min(2.0).evaluate(st) == 2.0);

  PowerPolicy trunc = PowerPolicy::truncated_inversion_main(1.0, 0.5, Csi::Full);
  CHECK(trunc.evaluate({0.25, 1.0}) == 0.0);
  CHECK(trunc.evaluate({2.0, 1.0}) == 0.5);

  PowerPolicy tmin = PowerPolicy::truncated_inversion_min(1.0, 0.5);
  CHECK(tmin.evaluate({2.0, 0.25}) == 0.0);
  CHECK(tmin.evaluate({2.0, 4.0}) == 0.5);
}

TEST_CASE("untruncated inversion at zero gain is a singularity") {
  CHECK_THROWS_AS(PowerPolicy::inversion_main(1.0, Csi::Full).evaluate({0.0, 1.0}),
                  SingularityError);
  CHECK_THROWS_AS(PowerPolicy::inversion_min(1.0).evaluate({5.0, 0.0}),
                  SingularityError);
  // the truncated variant simply stays silent
  CHECK(PowerPolicy::truncated_inversion_main(1.0, 0.0, Csi::Full)
            .evaluate({0.0, 1.0}) == 0.0);
}

TEST_CASE("policy validation") {
  CHECK_THROWS_AS(PowerPolicy::constant(-1.0, Csi::Full), ConfigError);
  CHECK_THROWS_AS(PowerPolicy({PolicyFamily::Constant, 0.5}, Csi::Full, 1.0),
                  ConfigError);
  CHECK_THROWS_AS(PowerPolicy({PolicyFamily::InversionMin, 0.0}, Csi::MainOnly, 1.0),
                  ConfigError);
  CHECK_THROWS_AS(
      PowerPolicy({PolicyFamily::TruncatedInversionMin, 0.5}, Csi::MainOnly, 1.0),
      ConfigError);
  CHECK(PowerPolicy::inversion_main(1.0, Csi::MainOnly).csi() == Csi::MainOnly);
}

TEST_CASE("snr and power budget conversions") {
  CHECK(PowerBudget::from_snr_db(0.0).p_bar == doctest::Approx(1.0));
  CHECK(PowerBudget::from_snr_db(20.0).p_bar == doctest::Approx(100.0));
  CHECK(PowerBudget{100.0}.snr_db() == doctest::Approx(20.0));
  CHECK(PowerBudget::from_snr_db(-10.0).p_bar == doctest::Approx(0.1));
}

TEST_CASE("calibration on deterministic channels is exact") {
  McConfig mc{1000, 2};
  Tolerance tol;
  FadingSpec spec41{GainSpec::deterministic(4.0), GainSpec::deterministic(1.0)};
  PowerPolicy p1 = calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full, spec41,
                             PowerBudget{1.0}, mc, tol);
  CHECK(p1.c() == doctest::Approx(1.0).epsilon(1e-12));

  FadingSpec spec22{GainSpec::deterministic(2.0), GainSpec::deterministic(2.0)};
  PowerPolicy p2 = calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full, spec22,
                             PowerBudget{3.0}, mc, tol);
  CHECK(p2.c() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("calibration rejects divergent inverse moments analytically") {
  McConfig mc{1000, 2};
  Tolerance tol;
  FadingSpec exp_pair{GainSpec::exponential(1.0), GainSpec::exponential(1.0)};
  CHECK_THROWS_AS(calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full,
                            exp_pair, PowerBudget{1.0}, mc, tol),
                  DivergenceError);
  CHECK_THROWS_AS(calibrate({PolicyFamily::InversionMain, 0.0}, Csi::Full,
                            exp_pair, PowerBudget{1.0}, mc, tol),
                  DivergenceError);
  // chi-square needs more than two degrees of freedom
  FadingSpec chi2_pair{GainSpec::chi_square(2, 0.5), GainSpec::chi_square(4, 0.25)};
  CHECK_THROWS_AS(calibrate({PolicyFamily::InversionMain, 0.0}, Csi::Full,
                            chi2_pair, PowerBudget{1.0}, mc, tol),
                  DivergenceError);
  // a positive truncation restores a finite target
  CHECK_NOTHROW(calibrate({PolicyFamily::TruncatedInversionMin, 0.1}, Csi::Full,
                          exp_pair, PowerBudget{1.0}, mc, tol));
  // a mass point at zero poisons the min even if the other side is fine
  FadingSpec zero_mass{GainSpec::deterministic(4.0),
                       GainSpec::two_point(0.0, 1.0, 0.5)};
  CHECK_THROWS_AS(calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full,
                            zero_mass, PowerBudget{1.0}, mc, tol),
                  DivergenceError);
}

TEST_CASE("calibrated policies hit the budget under independent draws") {
  FadingSpec spec{GainSpec::chi_square(6, 0.5), GainSpec::chi_square(6, 0.25)};
  PowerBudget budget{10.0};
  McConfig fit_mc{200000, 101};
  McConfig check_mc{200000, 202};
  Tolerance tol;
  struct Case {
    PolicyShape shape;
    Csi csi;
  };
  Case cases[] = {
      {{PolicyFamily::Constant, 0.0}, Csi::Full},
      {{PolicyFamily::InversionMain, 0.0}, Csi::MainOnly},
      {{PolicyFamily::InversionMin, 0.0}, Csi::Full},
      {{PolicyFamily::TruncatedInversionMain, 0.3}, Csi::MainOnly},
      {{PolicyFamily::TruncatedInversionMin, 0.3}, Csi::Full},
  };
  for (const Case& c : cases) {
    CAPTURE(to_string(c.shape.family));
    PowerPolicy pol = calibrate(c.shape, c.csi, spec, budget, fit_mc, tol);
    McEstimate est = expect(
        [&](const ChannelState& st) { return pol.evaluate(st); }, spec, check_mc);
    CHECK(std::fabs(est.mean - budget.p_bar) <= 4.0 * est.std_error);
    // and exactly on the draws it was fitted to
    McEstimate same = expect(
        [&](const ChannelState& st) { return pol.evaluate(st); }, spec, fit_mc);
    CHECK(std::fabs(same.mean - budget.p_bar) <= 1e-9 * budget.p_bar);
  }
}

TEST_CASE("calibrated scale is linear in the budget") {
  FadingSpec spec{GainSpec::chi_square(4, 0.25), GainSpec::chi_square(4, 0.25)};
  McConfig mc{100000, 7};
  Tolerance tol;
  for (PolicyFamily fam :
       {PolicyFamily::InversionMain, PolicyFamily::InversionMin,
        PolicyFamily::Constant}) {
    CAPTURE(to_string(fam));
    Csi csi = fam == PolicyFamily::InversionMin ? Csi::Full : Csi::MainOnly;
    double c1 = calibrate({fam, 0.0}, csi, spec, PowerBudget{5.0}, mc, tol).c();
    double c2 = calibrate({fam, 0.0}, csi, spec, PowerBudget{10.0}, mc, tol).c();
    CHECK(c2 == doctest::Approx(2.0 * c1).epsilon(1e-12));
  }
}

TEST_CASE("a threshold above the whole support never transmits") {
  McConfig mc{1000, 2};
  Tolerance tol;
  FadingSpec spec{GainSpec::deterministic(4.0), GainSpec::deterministic(1.0)};
  CHECK_THROWS_AS(calibrate({PolicyFamily::TruncatedInversionMin, 5.0}, Csi::Full,
                            spec, PowerBudget{1.0}, mc, tol),
                  ConfigError);
}

TEST_CASE("threshold grid shape") {
  FadingSpec spec{GainSpec::chi_square(4, 0.5), GainSpec::exponential(1.0)};
  auto grid = threshold_grid(spec, PolicyFamily::TruncatedInversionMain, 16);
  REQUIRE(grid.size() == 16);
  CHECK(grid.front() == doctest::Approx(1e-3 * 2.0));
  CHECK(grid.back() == doctest::Approx(2.0));
  for (std::size_t i = 2; i < grid.size(); ++i)
    CHECK(grid[i] / grid[i - 1] ==
          doctest::Approx(grid[1] / grid[0]).epsilon(1e-9));

  // min-based truncation scales with the smaller marginal mean
  auto gmin = threshold_grid(spec, PolicyFamily::TruncatedInversionMin, 16);
  CHECK(gmin.back() == doctest::Approx(1.0));

  CHECK_THROWS_AS(threshold_grid(spec, PolicyFamily::Constant, 16), ConfigError);
  CHECK_THROWS_AS(threshold_grid(spec, PolicyFamily::TruncatedInversionMain, 1),
                  ConfigError);
}

}  // TEST_SUITE

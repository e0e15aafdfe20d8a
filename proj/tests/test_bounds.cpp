#include <doctest.h>

#include <cmath>
#include <vector>

#include "secrate/bounds.hpp"
#include "secrate/channel.hpp"
#include "secrate/errors.hpp"
#include "secrate/numerics.hpp"
#include "secrate/power.hpp"

using namespace secrate;

namespace {

const double kLog2_5 = std::log2(5.0);        // 2.321928...
const double kHalfRate = std::log2(5.0) - 1;  // log2(5)-log2(2) = 1.321928...

FadingSpec det41() {
  return {GainSpec::deterministic(4.0), GainSpec::deterministic(1.0)};
}

FadingSpec chi4_pair() {
  return {GainSpec::chi_square(4, 0.25), GainSpec::chi_square(4, 0.25)};
}

std::vector<PowerPolicy> full_menu(const FadingSpec& spec, double p_bar,
                                   const McConfig& mc) {
  Tolerance tol;
  PowerBudget b{p_bar};
  return {calibrate({PolicyFamily::Constant, 0.0}, Csi::Full, spec, b, mc, tol),
          calibrate({PolicyFamily::InversionMain, 0.0}, Csi::Full, spec, b, mc,
                    tol),
          calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full, spec, b, mc,
                    tol)};
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("upper_full on a deterministic channel") {
  McConfig mc{100, 1};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::Full)};
  BoundResult r = upper_full(det41(), PowerBudget{1.0}, mc, menu);
  // min{ log2(5)-log2(2), log2(5) } = log2(2.5)
  CHECK(r.value == doctest::Approx(kHalfRate).epsilon(1e-12));
  CHECK(r.std_error == doctest::Approx(0.0));
  CHECK(r.kind == BoundKind::UpperFull);
  CHECK(r.p_bar == doctest::Approx(1.0));
  REQUIRE(r.policy.has_value());
  CHECK(r.policy->family() == PolicyFamily::Constant);
}

TEST_CASE("identical gains carry no secrecy") {
  McConfig mc{100, 1};
  FadingSpec spec{GainSpec::deterministic(1.0), GainSpec::deterministic(1.0)};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::Full)};
  CHECK(upper_full(spec, PowerBudget{1.0}, mc, menu).value ==
        doctest::Approx(0.0));
}

TEST_CASE("vanishing power gives vanishing bounds") {
  McConfig mc{20000, 3};
  double p = 1e-9;
  std::vector<PowerPolicy> menu{PowerPolicy::constant(p, Csi::Full)};
  BoundResult r = upper_full(chi4_pair(), PowerBudget{p}, mc, menu);
  CHECK(r.value >= 0.0);
  CHECK(r.value <= 1e-8);
}

TEST_CASE("lower_full with min inversion on the deterministic example") {
  McConfig mc{100, 1};
  std::vector<PowerPolicy> menu{PowerPolicy::inversion_min(1.0)};
  BoundResult r = lower_full(det41(), PowerBudget{1.0}, mc, menu,
                             QChoice::eavesdropper_gain());
  // key rate log2(5)-log2(2) exceeds the worst-case cap log2(1+c) = 1
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.std_error == 0.0);
  CHECK(r.kind == BoundKind::LowerFull);
}

TEST_CASE("upper and lower coincide for min inversion when the mean binds") {
  McConfig mc{200000, 11};
  FadingSpec spec = chi4_pair();
  Tolerance tol;
  std::vector<PowerPolicy> menu{calibrate({PolicyFamily::InversionMin, 0.0},
                                          Csi::Full, spec, PowerBudget{10.0}, mc,
                                          tol)};
  BoundResult up = upper_full(spec, PowerBudget{10.0}, mc, menu);
  BoundResult lo =
      lower_full(spec, PowerBudget{10.0}, mc, menu, QChoice::eavesdropper_gain());
  // with q = h_e the integrands are identical and the mean binds both
  CHECK(up.value == lo.value);
}

TEST_CASE("bound ordering on common draws") {
  McConfig mc{100000, 13};
  struct Case {
    FadingSpec spec;
    double p_bar;
  };
  Case cases[] = {
      {chi4_pair(), 1.0},
      {chi4_pair(), 100.0},
      {{GainSpec::chi_square(6, 0.5), GainSpec::chi_square(4, 0.25)}, 10.0},
      {det41(), 1.0},
      {{GainSpec::two_point(2.0, 4.0, 0.5), GainSpec::two_point(1.0, 2.0, 0.5)},
       5.0},
  };
  for (const Case& c : cases) {
    CAPTURE(c.p_bar);
    auto menu = full_menu(c.spec, c.p_bar, mc);
    double up = upper_full(c.spec, PowerBudget{c.p_bar}, mc, menu).value;
    double lo = lower_full(c.spec, PowerBudget{c.p_bar}, mc, menu,
                           QChoice::eavesdropper_gain())
                    .value;
    CHECK(lo <= up + 1e-9);
    CHECK(lo >= 0.0);
  }
}

TEST_CASE("bounds are nondecreasing in the power budget on common draws") {
  McConfig mc{100000, 17};
  FadingSpec spec = chi4_pair();
  double prev_up = -1.0, prev_lo = -1.0;
  for (double p_bar : {1.0, 10.0, 100.0}) {
    auto menu = full_menu(spec, p_bar, mc);
    double up = upper_full(spec, PowerBudget{p_bar}, mc, menu).value;
    double lo = lower_full(spec, PowerBudget{p_bar}, mc, menu,
                           QChoice::eavesdropper_gain())
                    .value;
    CHECK(up >= prev_up - 1e-12);
    CHECK(lo >= prev_lo - 1e-12);
    prev_up = up;
    prev_lo = lo;
  }
}

TEST_CASE("high_snr_limit closed forms") {
  McConfig mc{100, 1};
  BoundResult det = high_snr_limit(det41(), mc);
  CHECK(det.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(det.hypothesis_violated);
  CHECK(std::isinf(det.p_bar));

  FadingSpec reversed{GainSpec::deterministic(1.0), GainSpec::deterministic(4.0)};
  CHECK(high_snr_limit(reversed, mc).value == doctest::Approx(0.0));
}

TEST_CASE("high_snr_limit for iid exponential gains is one bit") {
  // E[log2(h_m/h_e)]^+ over iid exponentials: the ratio has density
  // 1/(1+t)^2, and the positive-log integral evaluates to ln 2, i.e. 1 bit.
  FadingSpec spec{GainSpec::exponential(1.0), GainSpec::exponential(1.0)};
  McConfig mc{1000000, 19};
  BoundResult r = high_snr_limit(spec, mc);
  CHECK(std::fabs(r.value - 1.0) <= 3.0 * r.std_error);
  CHECK(r.hypothesis_violated);  // E[1/min] is infinite for exponentials
  CHECK_FALSE(high_snr_limit(chi4_pair(), mc).hypothesis_violated);
}

TEST_CASE("high_snr_limit rejects an eavesdropper mass at zero") {
  FadingSpec spec{GainSpec::exponential(1.0), GainSpec::two_point(0.0, 1.0, 0.5)};
  McConfig mc{1000, 3};
  CHECK_THROWS_AS(high_snr_limit(spec, mc), DivergenceError);
}

TEST_CASE("both full-CSI bounds approach the limit from below") {
  McConfig mc{200000, 23};
  FadingSpec spec = chi4_pair();
  double limit = high_snr_limit(spec, mc).value;
  double prev_gap_up = 1e9, prev_gap_lo = 1e9;
  for (double p_bar : {10.0, 100.0, 1000.0, 10000.0}) {
    CAPTURE(p_bar);
    auto menu = full_menu(spec, p_bar, mc);
    double up = upper_full(spec, PowerBudget{p_bar}, mc, menu).value;
    double lo = lower_full(spec, PowerBudget{p_bar}, mc, menu,
                           QChoice::eavesdropper_gain())
                    .value;
    double gap_up = limit - up;
    double gap_lo = limit - lo;
    CHECK(gap_up >= -1e-9);  // approach from below
    CHECK(gap_lo >= -1e-9);
    CHECK(gap_up <= prev_gap_up + 1e-12);
    CHECK(gap_lo <= prev_gap_lo + 1e-12);
    prev_gap_up = gap_up;
    prev_gap_lo = gap_lo;
  }
}

TEST_CASE("upper_main equals upper_full for deterministic gains") {
  McConfig mc{100, 1};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::MainOnly)};
  BoundResult r = upper_main(det41(), PowerBudget{1.0}, mc, menu);
  CHECK(r.value == doctest::Approx(kHalfRate).epsilon(1e-12));

  FadingSpec reversed{GainSpec::deterministic(1.0), GainSpec::deterministic(4.0)};
  CHECK(upper_main(reversed, PowerBudget{1.0}, mc, menu).value ==
        doctest::Approx(0.0));
}

TEST_CASE("main-CSI evaluators reject full-CSI menu entries") {
  McConfig mc{100, 1};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::Full)};
  CHECK_THROWS_AS(upper_main(det41(), PowerBudget{1.0}, mc, menu), ConfigError);
  CHECK_THROWS_AS(lower_main_fixed_point(det41(), PowerBudget{1.0}, mc, menu,
                                         Tolerance{}),
                  ConfigError);
}

TEST_CASE("empty menus are rejected") {
  McConfig mc{100, 1};
  std::vector<PowerPolicy> menu;
  CHECK_THROWS_AS(upper_full(det41(), PowerBudget{1.0}, mc, menu), ConfigError);
  CHECK_THROWS_AS(lower_full(det41(), PowerBudget{1.0}, mc, menu,
                             QChoice::eavesdropper_gain()),
                  ConfigError);
  CHECK_THROWS_AS(upper_main(det41(), PowerBudget{1.0}, mc, menu), ConfigError);
}

TEST_CASE("fixed point on a leak-free deterministic channel") {
  // h_e = 0: R = min{ [log2(1+3) - R]^+, log2(4) } has the root R = 1.
  FadingSpec spec{GainSpec::deterministic(1.0), GainSpec::deterministic(0.0)};
  McConfig mc{100, 1};
  Tolerance tol{1e-9, 200};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(3.0, Csi::MainOnly)};
  BoundResult r = lower_main_fixed_point(spec, PowerBudget{3.0}, mc, menu, tol);
  CHECK(std::fabs(r.value - 1.0) <= 1e-6);
  CHECK(r.kind == BoundKind::LowerMainEps);
}

TEST_CASE("fixed point splits the deterministic secrecy rate in half") {
  // Det(4,1), constant power 1: R = [log2(5)-log2(2) - R]^+ so R* is half
  // the secrecy rate, well below the cap log2(5).
  McConfig mc{100, 1};
  Tolerance tol{1e-9, 200};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::MainOnly)};
  BoundResult r = lower_main_fixed_point(det41(), PowerBudget{1.0}, mc, menu, tol);
  CHECK(r.value == doctest::Approx(kHalfRate / 2.0).epsilon(1e-7));
}

TEST_CASE("fixed point satisfies its own equation") {
  FadingSpec spec = chi4_pair();
  McConfig mc{50000, 29};
  Tolerance tol{1e-9, 200};
  PowerBudget budget{100.0};
  PowerPolicy policy = calibrate({PolicyFamily::InversionMain, 0.0},
                                 Csi::MainOnly, spec, budget, mc, tol);
  std::vector<PowerPolicy> menu{policy};
  double rstar = lower_main_fixed_point(spec, budget, mc, menu, tol).value;

  // re-evaluate the right-hand side independently from raw draws
  auto states = sample(spec, mc.seed, mc.samples);
  double sum = 0.0;
  double min_a = 1e300;
  for (const auto& st : states) {
    double p = policy.evaluate(st);
    double a = std::log2(1.0 + p * st.h_m);
    double b = std::log2(1.0 + p * st.h_e);
    sum += pos(a - rstar - b);
    min_a = std::min(min_a, a);
  }
  double rhs = std::min(sum / static_cast<double>(states.size()), min_a);
  CHECK(std::fabs(rhs - rstar) <= 5e-9);
  CHECK(rstar <= upper_main(spec, budget, mc, menu).value + 1e-9);
}

TEST_CASE("fixed point never exceeds the zero-rate mean and is monotone in power") {
  FadingSpec spec{GainSpec::chi_square(4, 0.25), GainSpec::chi_square(4, 0.5)};
  McConfig mc{50000, 31};
  Tolerance tol{1e-9, 200};
  double prev = -1.0;
  for (double p_bar : {1.0, 10.0, 100.0}) {
    PowerBudget budget{p_bar};
    std::vector<PowerPolicy> menu{calibrate({PolicyFamily::InversionMain, 0.0},
                                            Csi::MainOnly, spec, budget, mc, tol)};
    BoundResult r = lower_main_fixed_point(spec, budget, mc, menu, tol);
    CHECK(r.value >= prev - 2e-9);
    CHECK(r.value >= 0.0);
    prev = r.value;
  }
}

TEST_CASE("rate allocation at one state") {
  PowerPolicy unit = PowerPolicy::constant(1.0, Csi::Full);
  ChannelState st{4.0, 1.0};
  RateAllocation ra = allocate_rates_full(unit, st, 1.0, 1.0);
  CHECK(ra.r_s == doctest::Approx(kHalfRate).epsilon(1e-12));
  CHECK(ra.r_k == doctest::Approx(kHalfRate).epsilon(1e-12));
  CHECK(ra.r_2 == doctest::Approx(0.0));
  CHECK(ra.r_1 == 1.0);
  CHECK(ra.r_x == doctest::Approx(0.0));

  // raising q moves rate from the banked key into the immediate part
  RateAllocation rb = allocate_rates_full(unit, st, 2.0, 1.0);
  CHECK(rb.r_s == doctest::Approx(ra.r_s));
  CHECK(rb.r_k < ra.r_k);
  CHECK(rb.r_2 > ra.r_2);
  CHECK(rb.r_k == doctest::Approx(kLog2_5 - std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("allocation identity r_1 + r_x = min(a, b) across random states") {
  PowerPolicy pol = PowerPolicy::inversion_min(2.0);
  Sampler s({GainSpec::chi_square(4, 0.25), GainSpec::chi_square(4, 0.25)}, 37);
  for (std::size_t i = 0; i < 1000; ++i) {
    ChannelState st = s.at(i);
    double p = pol.evaluate(st);
    double cap = std::min(std::log2(1.0 + p * st.h_m), std::log2(1.0 + p * st.h_e));
    RateAllocation ra = allocate_rates_full(pol, st, st.h_e, 0.3 * cap);
    CHECK(ra.r_1 + ra.r_x == doctest::Approx(cap).epsilon(1e-12));
    CHECK(ra.r_2 >= 0.0);
    CHECK(ra.r_k >= 0.0);
  }
}

TEST_CASE("allocation preconditions") {
  PowerPolicy unit = PowerPolicy::constant(1.0, Csi::Full);
  ChannelState st{4.0, 1.0};
  CHECK_THROWS_AS(allocate_rates_full(unit, st, 0.5, 0.1), PreconditionError);
  CHECK_THROWS_AS(allocate_rates_full(unit, st, 1.0, 1.5), PreconditionError);
  CHECK_THROWS_AS(allocate_rates_full(unit, st, 1.0, -0.1), PreconditionError);
}

TEST_CASE("constant q must dominate the eavesdropper support") {
  McConfig mc{1000, 1};
  FadingSpec bounded{GainSpec::deterministic(4.0), GainSpec::two_point(1.0, 3.0, 0.5)};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::Full)};
  CHECK_NOTHROW(
      lower_full(bounded, PowerBudget{1.0}, mc, menu, QChoice::constant(3.0)));
  CHECK_THROWS_AS(
      lower_full(bounded, PowerBudget{1.0}, mc, menu, QChoice::constant(2.0)),
      PreconditionError);
  FadingSpec unbounded{GainSpec::deterministic(4.0), GainSpec::exponential(1.0)};
  CHECK_THROWS_AS(
      lower_full(unbounded, PowerBudget{1.0}, mc, menu, QChoice::constant(100.0)),
      PreconditionError);
}

TEST_CASE("constant q yields a positive immediate rate floor") {
  // with q above h_e, part of the secrecy rate is immediately secret (r_2)
  FadingSpec spec{GainSpec::deterministic(4.0), GainSpec::two_point(1.0, 2.0, 0.5)};
  McConfig mc{20000, 41};
  std::vector<PowerPolicy> menu{PowerPolicy::constant(1.0, Csi::Full)};
  BoundResult with_q =
      lower_full(spec, PowerBudget{1.0}, mc, menu, QChoice::constant(2.0));
  BoundResult with_he =
      lower_full(spec, PowerBudget{1.0}, mc, menu, QChoice::eavesdropper_gain());
  // r_2 >= 0 keeps the q-variant at least as large as its own key part;
  // both stay below the converse
  BoundResult up = upper_full(spec, PowerBudget{1.0}, mc, menu);
  CHECK(with_q.value <= up.value + 1e-9);
  CHECK(with_he.value <= up.value + 1e-9);
  CHECK(with_q.value >= 0.0);
}

}  // TEST_SUITE

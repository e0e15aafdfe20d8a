#include <benchmark/benchmark.h>

#include <vector>

#include "secrate/bounds.hpp"
#include "secrate/channel.hpp"
#include "secrate/numerics.hpp"
#include "secrate/power.hpp"
#include "secrate/protocol.hpp"

namespace {

using namespace secrate;

FadingSpec chi4_case() {
  return {GainSpec::chi_square(4, 0.25), GainSpec::chi_square(4, 0.25)};
}

void BM_SamplerDraw(benchmark::State& state) {
  Sampler s(chi4_case(), 1);
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.at(i++).h_m);
  }
}
BENCHMARK(BM_SamplerDraw);

void BM_ExpectSecrecyIntegrand(benchmark::State& state) {
  FadingSpec spec = chi4_case();
  McConfig mc{static_cast<std::size_t>(state.range(0)), 1};
  for (auto _ : state) {
    McEstimate est = expect(
        [](const ChannelState& st) { return pos(std::log2(st.h_m / st.h_e)); },
        spec, mc);
    benchmark::DoNotOptimize(est.mean);
  }
}
BENCHMARK(BM_ExpectSecrecyIntegrand)->Arg(100000);

void BM_UpperFull(benchmark::State& state) {
  FadingSpec spec = chi4_case();
  PowerBudget budget = PowerBudget::from_snr_db(20.0);
  McConfig mc{static_cast<std::size_t>(state.range(0)), 1};
  Tolerance tol;
  std::vector<PowerPolicy> menu{
      calibrate({PolicyFamily::Constant, 0.0}, Csi::Full, spec, budget, mc, tol),
      calibrate({PolicyFamily::InversionMain, 0.0}, Csi::Full, spec, budget, mc,
                tol),
      calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full, spec, budget, mc,
                tol)};
  for (auto _ : state) {
    BoundResult r = upper_full(spec, budget, mc, menu);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_UpperFull)->Arg(100000);

void BM_FixedPoint(benchmark::State& state) {
  FadingSpec spec = chi4_case();
  PowerBudget budget = PowerBudget::from_snr_db(20.0);
  McConfig mc{static_cast<std::size_t>(state.range(0)), 1};
  Tolerance tol;
  std::vector<PowerPolicy> menu{calibrate({PolicyFamily::InversionMain, 0.0},
                                          Csi::MainOnly, spec, budget, mc, tol)};
  for (auto _ : state) {
    BoundResult r = lower_main_fixed_point(spec, budget, mc, menu, tol);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_FixedPoint)->Arg(100000);

void BM_ProtocolRun(benchmark::State& state) {
  FadingSpec spec = chi4_case();
  PowerBudget budget = PowerBudget::from_snr_db(20.0);
  McConfig mc{100000, 1};
  Tolerance tol;
  PowerPolicy policy =
      calibrate({PolicyFamily::InversionMin, 0.0}, Csi::Full, spec, budget, mc,
                tol);
  SimConfig cfg{
      .spec = spec,
      .policy = policy,
      .mode = CsiMode::FullCsi,
      .s_count = 10,
      .b_count = 50,
      .n_prime = 1000,
      .seed = 1,
      .delta = 0.02,
      .plan_samples = 20000,
  };
  for (auto _ : state) {
    SimReport rep = run(cfg);
    benchmark::DoNotOptimize(rep.achieved_throughput);
  }
}
BENCHMARK(BM_ProtocolRun);

}  // namespace

BENCHMARK_MAIN();

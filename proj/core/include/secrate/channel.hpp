#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "secrate/rng.hpp"

namespace secrate {

// One fading block: power gains seen by the legitimate receiver (h_m) and
// the eavesdropper (h_e). Noise variance is 1, so "SNR" always means the
// power budget itself.
struct ChannelState {
  double h_m = 0.0;
  double h_e = 0.0;
};

// Position inside a simulation: super-block s, block b, both 1-based.
struct BlockIndex {
  int s = 1;
  int b = 1;
};

struct ChiSquareGain {
  int dof = 2;
  double scale = 1.0;  // gain = scale * sum of dof squared unit normals
};

struct ExponentialGain {
  double mean = 1.0;
};

struct DeterministicGain {
  double value = 1.0;
};

struct TwoPointGain {
  double v1 = 1.0;
  double v2 = 1.0;
  double p1 = 0.5;  // P{gain = v1}; v2 otherwise
};

// Marginal distribution of one power gain. Immutable after construction;
// construction validates parameters and throws ConfigError on nonsense.
class GainSpec {
 public:
  using Family =
      std::variant<ChiSquareGain, ExponentialGain, DeterministicGain, TwoPointGain>;

  explicit GainSpec(Family family);

  static GainSpec chi_square(int dof, double scale);
  static GainSpec exponential(double mean);
  static GainSpec deterministic(double value);
  static GainSpec two_point(double v1, double v2, double p1);

  double mean() const;
  // Essential supremum of the gain; +inf for unbounded families.
  double ess_sup() const;
  // Whether E[1/gain] is finite. Analytic, not sampled: chi-square needs
  // dof > 2, exponential never qualifies, point masses need positive values.
  bool inverse_moment_finite() const;

  double draw(SplitMix64& rng) const;
  const Family& family() const { return family_; }
  std::string family_name() const;

 private:
  Family family_;
};

// Joint block-fading model: gains are independent across blocks and between
// the two marginals.
struct FadingSpec {
  GainSpec main;
  GainSpec eaves;
};

// Counter-based sampler: at(i) is a pure function of (spec, seed, i), so
// draws are reproducible bit for bit, order-independent, and identical
// across any two consumers constructed with the same spec and seed. The
// main-gain stream never depends on the eavesdropper family.
class Sampler {
 public:
  Sampler(FadingSpec spec, std::uint64_t seed)
      : spec_(std::move(spec)), seed_(seed) {}

  ChannelState at(std::uint64_t index) const {
    SplitMix64 rm(derive_seed(seed_, kStreamGainMain, index));
    SplitMix64 re(derive_seed(seed_, kStreamGainEaves, index));
    return {spec_.main.draw(rm), spec_.eaves.draw(re)};
  }

  std::vector<ChannelState> sample(std::size_t count) const;

  const FadingSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  FadingSpec spec_;
  std::uint64_t seed_;
};

std::vector<ChannelState> sample(const FadingSpec& spec, std::uint64_t seed,
                                 std::size_t count);

void validate_block_index(const BlockIndex& idx, int s_count, int b_count);

}  // namespace secrate

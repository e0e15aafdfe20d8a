#include "secrate/channel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "secrate/errors.hpp"

namespace secrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const ChiSquareGain& g) {
  if (g.dof < 1) throw ConfigError("chi_square gain: dof must be >= 1");
  if (!(g.scale > 0.0) || !std::isfinite(g.scale))
    throw ConfigError("chi_square gain: scale must be positive and finite");
}

void validate(const ExponentialGain& g) {
  if (!(g.mean > 0.0) || !std::isfinite(g.mean))
    throw ConfigError("exponential gain: mean must be positive and finite");
}

void validate(const DeterministicGain& g) {
  if (!(g.value >= 0.0) || !std::isfinite(g.value))
    throw ConfigError("deterministic gain: value must be >= 0 and finite");
}

void validate(const TwoPointGain& g) {
  if (!(g.v1 >= 0.0) || !std::isfinite(g.v1) || !(g.v2 >= 0.0) ||
      !std::isfinite(g.v2))
    throw ConfigError("two_point gain: values must be >= 0 and finite");
  if (!(g.p1 >= 0.0 && g.p1 <= 1.0))
    throw ConfigError("two_point gain: p1 must lie in [0,1]");
}

}  // namespace

GainSpec::GainSpec(Family family) : family_(std::move(family)) {
  std::visit([](const auto& g) { validate(g); }, family_);
}

GainSpec GainSpec::chi_square(int dof, double scale) {
  return GainSpec(Family(ChiSquareGain{dof, scale}));
}
GainSpec GainSpec::exponential(double mean) {
  return GainSpec(Family(ExponentialGain{mean}));
}
GainSpec GainSpec::deterministic(double value) {
  return GainSpec(Family(DeterministicGain{value}));
}
GainSpec GainSpec::two_point(double v1, double v2, double p1) {
  return GainSpec(Family(TwoPointGain{v1, v2, p1}));
}

double GainSpec::mean() const {
  struct V {
    double operator()(const ChiSquareGain& g) const { return g.dof * g.scale; }
    double operator()(const ExponentialGain& g) const { return g.mean; }
    double operator()(const DeterministicGain& g) const { return g.value; }
    double operator()(const TwoPointGain& g) const {
      return g.p1 * g.v1 + (1.0 - g.p1) * g.v2;
    }
  };
  return std::visit(V{}, family_);
}

double GainSpec::ess_sup() const {
  struct V {
    double operator()(const ChiSquareGain&) const { return kInf; }
    double operator()(const ExponentialGain&) const { return kInf; }
    double operator()(const DeterministicGain& g) const { return g.value; }
    double operator()(const TwoPointGain& g) const {
      if (g.p1 >= 1.0) return g.v1;
      if (g.p1 <= 0.0) return g.v2;
      return std::max(g.v1, g.v2);
    }
  };
  return std::visit(V{}, family_);
}

bool GainSpec::inverse_moment_finite() const {
  struct V {
    bool operator()(const ChiSquareGain& g) const { return g.dof > 2; }
    bool operator()(const ExponentialGain&) const { return false; }
    bool operator()(const DeterministicGain& g) const { return g.value > 0.0; }
    bool operator()(const TwoPointGain& g) const {
      if (g.p1 > 0.0 && g.v1 <= 0.0) return false;
      if (g.p1 < 1.0 && g.v2 <= 0.0) return false;
      return true;
    }
  };
  return std::visit(V{}, family_);
}

double GainSpec::draw(SplitMix64& rng) const {
  struct V {
    SplitMix64& rng;
    double operator()(const ChiSquareGain& g) const {
      // Sum of dof squared unit normals: pairs collapse to Exp(2) draws,
      // an odd leftover dof contributes one squared normal.
      double sum = 0.0;
      for (int i = 0; i < g.dof / 2; ++i) sum += -2.0 * std::log(rng.uniform01());
      if (g.dof % 2 == 1) {
        double z = rng.normal();
        sum += z * z;
      }
      return g.scale * sum;
    }
    double operator()(const ExponentialGain& g) const {
      return -g.mean * std::log(rng.uniform01());
    }
    double operator()(const DeterministicGain& g) const { return g.value; }
    double operator()(const TwoPointGain& g) const {
      return rng.uniform01() < g.p1 ? g.v1 : g.v2;
    }
  };
  return std::visit(V{rng}, family_);
}

std::string GainSpec::family_name() const {
  struct V {
    std::string operator()(const ChiSquareGain&) const { return "chi_square"; }
    std::string operator()(const ExponentialGain&) const { return "exponential"; }
    std::string operator()(const DeterministicGain&) const {
      return "deterministic";
    }
    std::string operator()(const TwoPointGain&) const { return "two_point"; }
  };
  return std::visit(V{}, family_);
}

std::vector<ChannelState> Sampler::sample(std::size_t count) const {
  std::vector<ChannelState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(at(i));
  return out;
}

std::vector<ChannelState> sample(const FadingSpec& spec, std::uint64_t seed,
                                 std::size_t count) {
  return Sampler(spec, seed).sample(count);
}

void validate_block_index(const BlockIndex& idx, int s_count, int b_count) {
  if (idx.s < 1 || idx.s > s_count || idx.b < 1 || idx.b > b_count) {
    std::ostringstream os;
    os << "block index (s=" << idx.s << ", b=" << idx.b
       << ") outside grid s in [1," << s_count << "], b in [1," << b_count
       << "]";
    throw ConfigError(os.str());
  }
}

}  // namespace secrate

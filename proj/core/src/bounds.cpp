#include "secrate/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "secrate/errors.hpp"

namespace secrate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;

  void add(double v) {
    ++n;
    double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// log2(1 + P h) for receiver and eavesdropper at one state.
struct RateTerms {
  double a = 0.0;  // main channel
  double b = 0.0;  // eavesdropper channel
  double p = 0.0;  // transmit power
};

RateTerms rate_terms(const PowerPolicy& policy, const ChannelState& st,
                     std::size_t index) {
  double p = policy.evaluate(st);
  RateTerms t{std::log2(1.0 + p * st.h_m), std::log2(1.0 + p * st.h_e), p};
  if (!std::isfinite(t.a) || !std::isfinite(t.b)) {
    std::ostringstream os;
    os << "rate terms diverged at sample " << index << " (h_m=" << st.h_m
       << ", h_e=" << st.h_e << ", P=" << p << ")";
    throw DivergenceError(os.str());
  }
  return t;
}

void require_menu(std::span<const PowerPolicy> menu) {
  if (menu.empty()) throw ConfigError("bound evaluation: empty policy menu");
}

void require_main_only(std::span<const PowerPolicy> menu) {
  for (const auto& p : menu)
    if (p.csi() != Csi::MainOnly)
      throw ConfigError("main-CSI bound: policy " + p.family_name() +
                        " is not main-only");
}

struct PolicyScore {
  double value = 0.0;
  double std_error = 0.0;
};

// min{ E[a - b]^+ , min a } for one policy on materialized draws.
PolicyScore score_upper(const PowerPolicy& policy,
                        const std::vector<ChannelState>& states) {
  Welford w;
  double min_a = kInf;
  for (std::size_t i = 0; i < states.size(); ++i) {
    RateTerms t = rate_terms(policy, states[i], i);
    w.add(pos(t.a - t.b));
    min_a = std::min(min_a, t.a);
  }
  if (w.mean <= min_a) return {w.mean, w.std_error()};
  return {min_a, 0.0};
}

template <class Better>
BoundResult pick_best(BoundKind kind, const PowerBudget& budget,
                      std::span<const PowerPolicy> menu, Better&& score_fn) {
  BoundResult best;
  best.kind = kind;
  best.snr_db = budget.snr_db();
  best.p_bar = budget.p_bar;
  bool first = true;
  for (const auto& policy : menu) {
    PolicyScore s = score_fn(policy);
    if (first || s.value > best.value) {
      best.value = s.value;
      best.std_error = s.std_error;
      best.policy = policy;
      first = false;
    }
  }
  return best;
}

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::UpperFull: return "upper_full";
    case BoundKind::LowerFull: return "lower_full";
    case BoundKind::UpperMain: return "upper_main";
    case BoundKind::LowerMainEps: return "lower_main_eps";
    case BoundKind::HighSnrLimit: return "high_snr_limit";
  }
  return "unknown";
}

BoundResult upper_full(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu) {
  require_menu(menu);
  std::vector<ChannelState> states = sample(spec, mc.seed, mc.samples);
  return pick_best(BoundKind::UpperFull, budget, menu,
                   [&](const PowerPolicy& p) { return score_upper(p, states); });
}

BoundResult upper_main(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu) {
  require_menu(menu);
  require_main_only(menu);
  std::vector<ChannelState> states = sample(spec, mc.seed, mc.samples);
  return pick_best(BoundKind::UpperMain, budget, menu,
                   [&](const PowerPolicy& p) { return score_upper(p, states); });
}

BoundResult lower_full(const FadingSpec& spec, const PowerBudget& budget,
                       const McConfig& mc, std::span<const PowerPolicy> menu,
                       const QChoice& q) {
  require_menu(menu);
  if (!q.is_eavesdropper()) {
    double sup = spec.eaves.ess_sup();
    if (!(q.value() >= sup)) {
      std::ostringstream os;
      os << "lower_full: constant q=" << q.value()
         << " does not dominate the eavesdropper gain (ess sup=" << sup << ")";
      throw PreconditionError(os.str());
    }
  }
  std::vector<ChannelState> states = sample(spec, mc.seed, mc.samples);
  auto score = [&](const PowerPolicy& policy) -> PolicyScore {
    Welford wk;
    double min_cap = kInf;
    double min_r2 = kInf;
    for (std::size_t i = 0; i < states.size(); ++i) {
      RateTerms t = rate_terms(policy, states[i], i);
      double bq = std::log2(1.0 + t.p * q.resolve(states[i]));
      double r_s = pos(t.a - t.b);
      double r_k = pos(t.a - bq);
      wk.add(r_k);
      min_cap = std::min(min_cap, std::min(t.a, t.b));
      min_r2 = std::min(min_r2, r_s - r_k);
    }
    // Constant key-protected rate: limited by the mean key refill and by
    // the worst-state transmission rate of the inner code.
    if (wk.mean <= min_cap) return {wk.mean + min_r2, wk.std_error()};
    return {min_cap + min_r2, 0.0};
  };
  return pick_best(BoundKind::LowerFull, budget, menu, score);
}

BoundResult high_snr_limit(const FadingSpec& spec, const McConfig& mc) {
  McEstimate est = expect(
      [](const ChannelState& st) { return pos(std::log2(st.h_m / st.h_e)); },
      spec, mc);
  BoundResult r;
  r.kind = BoundKind::HighSnrLimit;
  r.snr_db = kInf;
  r.p_bar = kInf;
  r.value = est.mean;
  r.std_error = est.std_error;
  r.hypothesis_violated =
      !(spec.main.inverse_moment_finite() && spec.eaves.inverse_moment_finite());
  return r;
}

BoundResult lower_main_fixed_point(const FadingSpec& spec,
                                   const PowerBudget& budget, const McConfig& mc,
                                   std::span<const PowerPolicy> menu,
                                   const Tolerance& tol) {
  require_menu(menu);
  require_main_only(menu);
  std::vector<ChannelState> states = sample(spec, mc.seed, mc.samples);
  auto score = [&](const PowerPolicy& policy) -> PolicyScore {
    std::vector<double> d(states.size());
    double min_a = kInf;
    for (std::size_t i = 0; i < states.size(); ++i) {
      RateTerms t = rate_terms(policy, states[i], i);
      d[i] = t.a - t.b;
      min_a = std::min(min_a, t.a);
    }
    auto rhs = [&](double r) {
      double sum = 0.0;
      for (double di : d) sum += pos(di - r);
      return std::min(sum / static_cast<double>(d.size()), min_a);
    };
    double r0 = rhs(0.0);
    double rstar =
        r0 <= 0.0
            ? 0.0
            : bisect([&](double r) { return rhs(r) - r; }, 0.0, r0 + 1.0, tol);
    // Report the spread of the expectation that pins the fixed point;
    // zero when the worst-state cap is what binds.
    Welford w;
    for (double di : d) w.add(pos(di - rstar));
    double se = (min_a < w.mean) ? 0.0 : w.std_error();
    return {rstar, se};
  };
  return pick_best(BoundKind::LowerMainEps, budget, menu, score);
}

RateAllocation allocate_rates_full(const PowerPolicy& policy,
                                   const ChannelState& state, double q,
                                   double r_1) {
  if (!(q >= state.h_e)) {
    std::ostringstream os;
    os << "allocate_rates_full: q=" << q << " below h_e=" << state.h_e;
    throw PreconditionError(os.str());
  }
  double p = policy.evaluate(state);
  double a = std::log2(1.0 + p * state.h_m);
  double b = std::log2(1.0 + p * state.h_e);
  double cap = std::min(a, b);
  if (!(r_1 >= 0.0) || r_1 > cap + 1e-9) {
    std::ostringstream os;
    os << "allocate_rates_full: r_1=" << r_1 << " outside [0, " << cap << "]";
    throw PreconditionError(os.str());
  }
  double bq = std::log2(1.0 + p * q);
  RateAllocation out;
  out.r_s = pos(a - b);
  out.r_k = pos(a - bq);
  out.r_2 = out.r_s - out.r_k;
  out.r_1 = r_1;
  out.r_x = cap - r_1;
  return out;
}

}  // namespace secrate

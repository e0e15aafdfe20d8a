#include "secrate/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "secrate/errors.hpp"
#include "secrate/numerics.hpp"

namespace secrate {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(CsiMode mode) {
  return mode == CsiMode::FullCsi ? "full_csi" : "main_csi";
}

void validate_sim_config(const SimConfig& cfg) {
  if (cfg.s_count < 2)
    throw ConfigError(
        "sim: s_count must be >= 2 (the first super-block only banks key)");
  if (cfg.b_count < 1) throw ConfigError("sim: b_count must be >= 1");
  if (cfg.n_prime < 1) throw ConfigError("sim: n_prime must be >= 1");
  if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta))
    throw ConfigError("sim: delta must be >= 0 and finite");
  if (!(cfg.rate_target >= 0.0) || !std::isfinite(cfg.rate_target))
    throw ConfigError("sim: rate_target must be >= 0 and finite");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("sim: epsilon must be > 0");
  if (!(cfg.epsilon_prime > 0.0))
    throw ConfigError("sim: epsilon_prime must be > 0");
  if (cfg.plan_samples < 1) throw ConfigError("sim: plan_samples must be >= 1");
  Csi want = cfg.mode == CsiMode::FullCsi ? Csi::Full : Csi::MainOnly;
  if (cfg.policy.csi() != want)
    throw ConfigError("sim: policy csi '" + to_string(cfg.policy.csi()) +
                      "' does not match mode '" + to_string(cfg.mode) + "'");
}

KeyLedger::KeyLedger(int s_count) {
  if (s_count < 1) throw ConfigError("key ledger: s_count must be >= 1");
  pools_.resize(static_cast<std::size_t>(s_count));
}

KeyLedger::Pool& KeyLedger::pool(int s) {
  if (s < 1 || s > s_count())
    throw PreconditionError("key ledger: no bank for super-block " +
                            std::to_string(s));
  return pools_[static_cast<std::size_t>(s - 1)];
}

const KeyLedger::Pool& KeyLedger::pool(int s) const {
  return const_cast<KeyLedger*>(this)->pool(s);
}

void KeyLedger::deposit(int s, std::uint64_t bits, SplitMix64& rng) {
  Pool& p = pool(s);
  p.generated += bits;
  std::size_t need = static_cast<std::size_t>((p.generated + 7) / 8);
  while (p.bytes.size() < need) {
    std::uint64_t w = rng.next();
    for (int i = 0; i < 8 && p.bytes.size() < need; ++i) {
      p.bytes.push_back(static_cast<std::uint8_t>(w & 0xFF));
      w >>= 8;
    }
  }
}

std::uint64_t KeyLedger::generated_bits(int s) const { return pool(s).generated; }
std::uint64_t KeyLedger::consumed_bits(int s) const { return pool(s).consumed; }
std::uint64_t KeyLedger::available_bits(int s) const {
  const Pool& p = pool(s);
  return p.generated - p.consumed;
}

std::vector<std::uint8_t> KeyLedger::consume(int s, std::uint64_t length_bits,
                                             BlockIndex consumer) {
  Pool& p = pool(s);
  if (length_bits % 8 != 0)
    throw PreconditionError("key ledger: consumption must be whole bytes");
  if (p.generated - p.consumed < length_bits) {
    std::ostringstream os;
    os << "key ledger: bank " << s << " holds " << (p.generated - p.consumed)
       << " bits, asked for " << length_bits;
    throw PreconditionError(os.str());
  }
  std::uint64_t offset = p.consumed;
  std::size_t first = static_cast<std::size_t>(offset / 8);
  std::size_t count = static_cast<std::size_t>(length_bits / 8);
  std::vector<std::uint8_t> out(p.bytes.begin() + first,
                                p.bytes.begin() + first + count);
  p.consumed += length_bits;
  spans_.push_back(KeySpan{s, offset, length_bits, consumer});
  return out;
}

std::vector<std::uint8_t> KeyLedger::peek(int s, std::uint64_t offset_bits,
                                          std::uint64_t length_bits) const {
  const Pool& p = pool(s);
  if (offset_bits % 8 != 0 || length_bits % 8 != 0)
    throw PreconditionError("key ledger: peek must be byte aligned");
  if (offset_bits + length_bits > p.generated)
    throw PreconditionError("key ledger: peek past deposited material");
  std::size_t first = static_cast<std::size_t>(offset_bits / 8);
  std::size_t count = static_cast<std::size_t>(length_bits / 8);
  return std::vector<std::uint8_t>(p.bytes.begin() + first,
                                   p.bytes.begin() + first + count);
}

std::optional<std::vector<std::uint8_t>> otp_encrypt(
    std::span<const std::uint8_t> data, KeyLedger& ledger, int key_superblock,
    BlockIndex consumer) {
  if (data.empty()) return std::vector<std::uint8_t>{};
  std::uint64_t need = static_cast<std::uint64_t>(data.size()) * 8;
  if (ledger.available_bits(key_superblock) < need) return std::nullopt;
  std::vector<std::uint8_t> pad = ledger.consume(key_superblock, need, consumer);
  std::vector<std::uint8_t> ct(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) ct[i] = data[i] ^ pad[i];
  return ct;
}

bool audit_no_reuse(const KeyLedger& ledger) {
  std::map<int, std::uint64_t> next_free;  // per bank, first unconsumed bit
  for (const KeySpan& sp : ledger.spans()) {
    auto [it, fresh] = next_free.try_emplace(sp.source_s, 0);
    if (sp.offset_bits < it->second) return false;  // overlaps earlier span
    if (sp.offset_bits + sp.length_bits >
        ledger.generated_bits(sp.source_s))
      return false;  // ran past deposited material
    it->second = sp.offset_bits + sp.length_bits;
  }
  return true;
}

bool audit_causality(const KeyLedger& ledger) {
  for (const KeySpan& sp : ledger.spans())
    if (sp.consumer.s != sp.source_s + 1) return false;
  return true;
}

bool audit_no_overdraw(const KeyLedger& ledger) {
  for (int s = 1; s <= ledger.s_count(); ++s)
    if (ledger.consumed_bits(s) > ledger.generated_bits(s)) return false;
  return true;
}

OutageStats outage_ledger(const SimConfig& cfg,
                          const std::vector<double>& per_block_key_rate) {
  validate_sim_config(cfg);
  std::size_t expect_size =
      static_cast<std::size_t>(cfg.s_count) * static_cast<std::size_t>(cfg.b_count);
  if (per_block_key_rate.size() != expect_size)
    throw ConfigError("outage_ledger: need one key rate per block");
  OutageStats st;
  st.eligible_blocks = static_cast<long>(cfg.s_count - 1) * cfg.b_count;
  for (int s = 2; s <= cfg.s_count; ++s) {
    double banked = 0.0;
    for (int b = 1; b <= cfg.b_count; ++b)
      banked += per_block_key_rate[static_cast<std::size_t>(s - 2) * cfg.b_count +
                                   (b - 1)];
    double deficit = std::max(0.0, cfg.b_count * cfg.rate_target - banked);
    double ratio = deficit / cfg.epsilon_prime;
    int beta = ratio >= static_cast<double>(cfg.b_count)
                   ? cfg.b_count
                   : static_cast<int>(std::floor(ratio));
    st.beta.push_back(beta);
    st.outage_blocks += beta;
  }
  st.outage_rate = st.eligible_blocks > 0
                       ? static_cast<double>(st.outage_blocks) /
                             static_cast<double>(st.eligible_blocks)
                       : 0.0;
  st.epsilon_satisfied = st.outage_rate <= cfg.epsilon;
  return st;
}

namespace {

std::vector<std::uint8_t> payload_bytes_for(std::uint64_t seed,
                                            std::uint64_t block_index,
                                            std::size_t count) {
  SplitMix64 rng(derive_seed(seed, kStreamPayload, block_index));
  std::vector<std::uint8_t> out;
  out.reserve(count);
  while (out.size() < count) {
    std::uint64_t w = rng.next();
    for (int i = 0; i < 8 && out.size() < count; ++i) {
      out.push_back(static_cast<std::uint8_t>(w & 0xFF));
      w >>= 8;
    }
  }
  return out;
}

// FullCsi consumption rate: worst-state transmission cap and the mean
// post-margin key refill, re-margined so the bank drifts upward by delta
// per block in expectation.
double plan_full_csi_r1(const SimConfig& cfg) {
  Sampler sampler(cfg.spec, derive_seed(cfg.seed, kStreamPlanning, 0));
  double acc = 0.0;
  double min_cap = kInf;
  for (std::size_t i = 0; i < cfg.plan_samples; ++i) {
    ChannelState st = sampler.at(i);
    double p = cfg.policy.evaluate(st);
    double a = std::log2(1.0 + p * st.h_m);
    double b = std::log2(1.0 + p * st.h_e);
    acc += pos(pos(a - b) - cfg.delta);
    min_cap = std::min(min_cap, std::min(a, b));
  }
  double mean_refill = acc / static_cast<double>(cfg.plan_samples);
  return std::min(pos(mean_refill - cfg.delta), min_cap);
}

}  // namespace

SimReport run(const SimConfig& cfg, std::vector<TraceRow>* trace) {
  validate_sim_config(cfg);
  const int S = cfg.s_count;
  const int B = cfg.b_count;
  const double n = static_cast<double>(cfg.n_prime);

  double r1_rate = cfg.mode == CsiMode::FullCsi ? plan_full_csi_r1(cfg)
                                                : cfg.rate_target;
  std::uint64_t payload_bits =
      static_cast<std::uint64_t>(std::floor(n * r1_rate)) / 8 * 8;
  std::size_t payload_len = static_cast<std::size_t>(payload_bits / 8);

  Sampler sampler(cfg.spec, cfg.seed);
  KeyLedger ledger(S);
  std::vector<double> banked_rate(static_cast<std::size_t>(S) * B, 0.0);

  SimReport rep;
  rep.mode = cfg.mode;
  rep.s_count = S;
  rep.b_count = B;
  rep.n_prime = cfg.n_prime;
  rep.seed = cfg.seed;
  rep.planned_r1 = r1_rate;
  rep.delta = cfg.delta;
  rep.payload_blocks = payload_len > 0 ? static_cast<long>(S - 1) * B : 0;

  std::uint64_t delivered_bits = 0;
  if (trace) {
    trace->clear();
    trace->reserve(static_cast<std::size_t>(S) * B);
  }

  for (int s = 1; s <= S; ++s) {
    for (int b = 1; b <= B; ++b) {
      std::uint64_t idx =
          static_cast<std::uint64_t>(s - 1) * static_cast<std::uint64_t>(B) +
          static_cast<std::uint64_t>(b - 1);
      ChannelState st = sampler.at(idx);
      double p = cfg.policy.evaluate(st);
      double ra = std::log2(1.0 + p * st.h_m);
      double rb = std::log2(1.0 + p * st.h_e);
      double acc_rate = cfg.mode == CsiMode::FullCsi
                            ? pos(pos(ra - rb) - cfg.delta)
                            : pos(ra - cfg.rate_target - rb - cfg.delta);
      std::uint64_t acc_bits = static_cast<std::uint64_t>(std::floor(n * acc_rate));
      SplitMix64 krng(derive_seed(cfg.seed, kStreamKeyMaterial, idx));
      ledger.deposit(s, acc_bits, krng);
      banked_rate[idx] = static_cast<double>(acc_bits) / n;

      TraceRow row;
      row.s = s;
      row.b = b;
      row.h_m = st.h_m;
      row.h_e = st.h_e;
      row.power = p;
      row.r_k_bits = static_cast<long>(acc_bits);

      if (s >= 2 && payload_len > 0) {
        std::vector<std::uint8_t> payload =
            payload_bytes_for(cfg.seed, idx, payload_len);
        auto ct = otp_encrypt(payload, ledger, s - 1, BlockIndex{s, b});
        if (!ct) {
          ++rep.enc_error_count;
          row.enc_error = true;
        } else {
          const KeySpan& sp = ledger.spans().back();
          std::vector<std::uint8_t> pad =
              ledger.peek(sp.source_s, sp.offset_bits, sp.length_bits);
          bool ok = true;
          for (std::size_t j = 0; j < payload.size(); ++j)
            if (static_cast<std::uint8_t>((*ct)[j] ^ pad[j]) != payload[j]) {
              ok = false;
              break;
            }
          if (!ok) {
            ++rep.decrypt_failures;
          } else {
            delivered_bits += payload_bits;
            row.r_1_bits = static_cast<long>(payload_bits);
          }
        }
      }
      if (trace) trace->push_back(row);
    }
  }

  if (cfg.mode == CsiMode::MainCsi) {
    rep.outage = outage_ledger(cfg, banked_rate);
    if (trace) {
      for (int s = 2; s <= S; ++s) {
        int beta = rep.outage.beta[static_cast<std::size_t>(s - 2)];
        for (int b = B - beta + 1; b <= B; ++b)
          (*trace)[static_cast<std::size_t>(s - 1) * B + (b - 1)].outage = true;
      }
    }
  } else {
    rep.outage.eligible_blocks = static_cast<long>(S - 1) * B;
  }

  rep.enc_error_rate =
      rep.payload_blocks > 0
          ? static_cast<double>(rep.enc_error_count) /
                static_cast<double>(rep.payload_blocks)
          : 0.0;
  rep.achieved_throughput = static_cast<double>(delivered_bits) /
                            (static_cast<double>(S) * B * n);
  rep.key_balance.reserve(static_cast<std::size_t>(S));
  for (int s = 1; s <= S; ++s)
    rep.key_balance.push_back(
        static_cast<long long>(ledger.generated_bits(s)) -
        static_cast<long long>(ledger.consumed_bits(s)));
  rep.audit_key_reuse_ok = audit_no_reuse(ledger);
  rep.audit_causality_ok = audit_causality(ledger);
  rep.audit_no_overdraw_ok = audit_no_overdraw(ledger);
  return rep;
}

}  // namespace secrate

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "secrate/channel.hpp"
#include "secrate/power.hpp"

namespace secrate {

enum class CsiMode { FullCsi, MainCsi };

// One simulation: s_count super-blocks of b_count fading blocks of n_prime
// channel uses. Super-block 1 only banks key material; payload flows from
// super-block 2 on, always padded with key banked in the previous
// super-block. delta and rate_target are absolute rates in bits per use
// (the config loader resolves relative defaults before building this).
struct SimConfig {
  FadingSpec spec;
  PowerPolicy policy;  // calibrated, csi matching mode
  CsiMode mode = CsiMode::FullCsi;
  int s_count = 2;
  int b_count = 1;
  int n_prime = 1;
  std::uint64_t seed = 1;
  double delta = 0.0;        // key accrual margin
  double rate_target = 0.0;  // MainCsi payload rate R
  double epsilon = 0.05;       // tolerated outage block fraction
  double epsilon_prime = 0.01; // rate deficit counted as one outage block
  std::size_t plan_samples = 200000;  // draws for the transmitter's rate planning
};

void validate_sim_config(const SimConfig& cfg);

// One consumed stretch of key material, kept for post-run audits.
struct KeySpan {
  int source_s = 0;             // super-block whose key bank was consumed
  std::uint64_t offset_bits = 0;
  std::uint64_t length_bits = 0;
  BlockIndex consumer;          // block that spent it
};

// Per-super-block bank of one-time-pad material. Deposits are bit
// granular (rate floors land on odd bit counts); consumption is byte
// granular and strictly sequential per bank, so spans can never overlap.
class KeyLedger {
 public:
  explicit KeyLedger(int s_count);

  void deposit(int s, std::uint64_t bits, SplitMix64& rng);
  std::uint64_t generated_bits(int s) const;
  std::uint64_t consumed_bits(int s) const;
  std::uint64_t available_bits(int s) const;

  // Takes length_bits (a multiple of 8) from bank s at the cursor and
  // records the span. Throws PreconditionError when the bank is short.
  std::vector<std::uint8_t> consume(int s, std::uint64_t length_bits,
                                    BlockIndex consumer);
  // Re-reads previously deposited material without consuming it.
  std::vector<std::uint8_t> peek(int s, std::uint64_t offset_bits,
                                 std::uint64_t length_bits) const;

  const std::vector<KeySpan>& spans() const { return spans_; }
  int s_count() const { return static_cast<int>(pools_.size()); }

 private:
  struct Pool {
    std::vector<std::uint8_t> bytes;
    std::uint64_t generated = 0;
    std::uint64_t consumed = 0;
  };
  Pool& pool(int s);
  const Pool& pool(int s) const;
  std::vector<Pool> pools_;
  std::vector<KeySpan> spans_;
};

// XORs data with fresh pad bits from bank key_superblock. Returns nullopt
// (and consumes nothing) when the bank holds too little material; the
// caller records an encoding error and skips the block's payload.
std::optional<std::vector<std::uint8_t>> otp_encrypt(
    std::span<const std::uint8_t> data, KeyLedger& ledger, int key_superblock,
    BlockIndex consumer);

// Ledger audits used by tests and by run() itself.
bool audit_no_reuse(const KeyLedger& ledger);
bool audit_causality(const KeyLedger& ledger);
bool audit_no_overdraw(const KeyLedger& ledger);

// Outage accounting for MainCsi runs: super-block s is charged
// beta(s) = min(B, floor(deficit(s) / epsilon_prime)) outage blocks where
// deficit(s) = max(0, B * rate_target - sum of key rates banked during
// super-block s-1). Rates are the post-margin banked rates, bits per use.
struct OutageStats {
  std::vector<int> beta;        // one entry per consuming super-block (s = 2..S)
  long outage_blocks = 0;
  long eligible_blocks = 0;     // (s_count - 1) * b_count
  double outage_rate = 0.0;
  bool epsilon_satisfied = true;
};

OutageStats outage_ledger(const SimConfig& cfg,
                          const std::vector<double>& per_block_key_rate);

struct TraceRow {
  int s = 0;
  int b = 0;
  double h_m = 0.0;
  double h_e = 0.0;
  double power = 0.0;
  long r_k_bits = 0;   // key bits banked by this block
  long r_1_bits = 0;   // payload bits delivered by this block
  bool enc_error = false;
  bool outage = false;
};

struct SimReport {
  CsiMode mode = CsiMode::FullCsi;
  int s_count = 0;
  int b_count = 0;
  int n_prime = 0;
  std::uint64_t seed = 0;
  double planned_r1 = 0.0;   // constant key-protected rate (FullCsi) or rate_target (MainCsi)
  double delta = 0.0;
  long payload_blocks = 0;   // blocks that attempted payload
  long enc_error_count = 0;
  double enc_error_rate = 0.0;
  long decrypt_failures = 0;
  double achieved_throughput = 0.0;  // delivered payload bits / (S * B * n')
  std::vector<long long> key_balance;  // generated - consumed bits per super-block
  OutageStats outage;        // all zeros for FullCsi
  bool audit_key_reuse_ok = true;
  bool audit_causality_ok = true;
  bool audit_no_overdraw_ok = true;
};

// Runs the two-stage scheme: stage one banks key material every block,
// stage two spends the previous super-block's bank to pad payload. Every
// ciphertext is decrypted and compared against the plaintext before being
// counted as delivered. The run is strictly sequential; all randomness is
// derived from cfg.seed, so a rerun reproduces the report bit for bit.
SimReport run(const SimConfig& cfg, std::vector<TraceRow>* trace = nullptr);

std::string to_string(CsiMode mode);

}  // namespace secrate

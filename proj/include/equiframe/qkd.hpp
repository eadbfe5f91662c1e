#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "equiframe/frames.hpp"

namespace equiframe {

// Closed-form intercept/resend statistics for an N-state protocol in
// dimension d. R0 is the no-adversary sift rate, R / eps_R / QBER the
// full-interception values.
struct ClosedFormStats {
  double R0 = 0.0;
  double R = 0.0;
  double eps_R = 0.0;
  double QBER = 0.0;
};

ClosedFormStats closed_form_stats(int N, int d);

// Counter-based generator: the stream for round i depends only on
// (seed, i), so shards of any size produce identical rounds in any order.
// SplitMix64 finalizer; statistical quality is ample for Monte Carlo use.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t counter);
  std::uint64_t next_u64();
  double next_unit();                        // [0, 1), 53-bit
  std::size_t uniform_below(std::size_t n);  // unbiased via rejection

 private:
  std::uint64_t state_;
};

// 0 when a > b, 1 when a < b. The shared key bit both parties derive from
// their (Alice-state, Bob-outcome) pair.
int key_bit(std::size_t a, std::size_t b);

struct ProtocolParams {
  CompanionPair pair;
  double q = 0.0;            // interception probability per round
  std::uint64_t rounds = 1;
  std::uint64_t seed = 0;
};

struct RoundRecord {
  std::size_t j = 0;        // Alice's state index
  bool intercepted = false;
  int m = -1;               // Eve's outcome, -1 when she sat out
  std::size_t l = 0;        // Bob's companion-measurement outcome
  std::size_t x = 0;        // Bob's random partner, x != l
  bool success = false;     // j is in {l, x}
  int alice_bit = -1;       // set on success
  int bob_bit = -1;
};

// Outcome distribution of the rank-1 POVM built on `frame`, applied to
// `state`: p_j proportional to |<f_j, state>|^2 with weight d/N. The exact
// sum is 1 for unit states; drift above 1e-9 is renormalized and drift above
// 1e-6 raises std::invalid_argument.
std::vector<double> povm_distribution(const CVec& state, const FrameSpec& frame);

std::size_t measure_povm(const CVec& state, const FrameSpec& frame,
                         CounterRng& rng);

struct MiEstimates {
  double I_AB = 0.0;
  double I_AE = 0.0;
  double I_BE = 0.0;
  double key_rate = 0.0;  // I_AB - min(I_AE, I_BE)
};

struct SessionStats {
  int N = 0, d = 0, m = 0;
  double q = 0.0;
  std::uint64_t rounds = 0, seed = 0;

  std::uint64_t successes = 0, bit_matches = 0, bit_mismatches = 0;
  double R_hat = 0.0;
  double QBER_hat = 0.0;  // 0 when there are no successes
  double eps_R_hat = 0.0;
  double se_R = 0.0, se_QBER = 0.0, se_eps_R = 0.0;

  ClosedFormStats theory;        // q = 0 baseline (R0) and q = 1 forms
  double theory_R_at_q = 0.0;    // (1-q) R0 + q R
  double theory_QBER_at_q = 0.0; // q QBER R / theory_R_at_q

  bool anomalous_zero_successes = false;
  std::optional<MiEstimates> mi;  // absent when no round sifted
};

// Joint histogram over two discrete variables, keyed by (left, right).
using JointCounts = std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t>;

// Plug-in (maximum-likelihood) mutual information in bits. Throws
// std::invalid_argument on an empty histogram.
double plugin_mutual_information(const JointCounts& joint);

// Precomputes the measurement distributions once (from the pair's Gram data)
// and replays rounds by index.
class SessionEngine {
 public:
  explicit SessionEngine(ProtocolParams params);

  const ProtocolParams& params() const { return params_; }

  RoundRecord run_round(std::uint64_t round_index) const;
  RoundRecord run_round_with(CounterRng& rng) const;

  SessionStats run() const;

 private:
  ProtocolParams params_;
  std::vector<std::vector<double>> eve_cdf_;  // by true state index
  std::vector<std::vector<double>> bob_cdf_;  // by received state index
};

RoundRecord simulate_round(const ProtocolParams& params, CounterRng& rng);
SessionStats simulate_session(const ProtocolParams& params);

}  // namespace equiframe

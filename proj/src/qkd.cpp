#include "equiframe/qkd.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "equiframe/threads.hpp"

namespace equiframe {

ClosedFormStats closed_form_stats(int N, int d) {
  if (d < 2 || N <= d)
    throw std::invalid_argument("closed_form_stats: need N > d >= 2");
  const double n = N, dd = d;
  ClosedFormStats s;
  s.R0 = 1.0 / (n - 1.0);
  s.R = (2.0 * n * n - (dd + 3.0) * n + 2.0 * dd) / (n * (n - 1.0) * (n - 1.0));
  s.eps_R = (n - dd) * (n - 2.0) / (n * (n - 1.0));
  s.QBER = (n - 1.0) * (n - dd) / (2.0 * n * n - (dd + 3.0) * n + 2.0 * dd);
  // Two identities the four forms must satisfy among themselves.
  if (!approx_equal(s.eps_R, s.R / s.R0 - 1.0, 1e-12) ||
      !approx_equal(s.QBER, (1.0 - dd / n) / ((n - 1.0) * s.R), 1e-12))
    throw std::logic_error("closed_form_stats: internal identity check failed");
  return s;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t counter)
    : state_(mix64(seed + 0x9E3779B97F4A7C15ULL * (counter + 1))) {}

std::uint64_t CounterRng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t CounterRng::uniform_below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_below: empty range");
  if (n == 1) return 0;
  const std::uint64_t un = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return static_cast<std::size_t>(r % un);
}

int key_bit(std::size_t a, std::size_t b) {
  if (a == b) throw std::invalid_argument("key_bit: indices must differ");
  return a < b ? 1 : 0;
}

std::vector<double> povm_distribution(const CVec& state, const FrameSpec& frame) {
  if (state.size() != frame.d)
    throw std::invalid_argument("povm_distribution: state dimension mismatch");
  const double w = static_cast<double>(frame.d) / static_cast<double>(frame.N);
  std::vector<double> p(frame.N);
  double sum = 0.0;
  for (std::size_t j = 0; j < frame.N; ++j) {
    p[j] = w * std::norm(inner(frame.column(j), state));
    sum += p[j];
  }
  const double dev = std::abs(sum - 1.0);
  if (dev > 1e-6)
    throw std::invalid_argument(
        "povm_distribution: outcome probabilities are not normalized");
  if (dev > 1e-9)
    for (double& v : p) v /= sum;
  return p;
}

namespace {

std::vector<double> to_cdf(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;  // close the interval so a draw can never fall off the end
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  return cdf.size() - 1;
}

}  // namespace

std::size_t measure_povm(const CVec& state, const FrameSpec& frame,
                         CounterRng& rng) {
  const std::vector<double> cdf = to_cdf(povm_distribution(state, frame));
  return sample_cdf(cdf, rng.next_unit());
}

double plugin_mutual_information(const JointCounts& joint) {
  std::uint64_t total = 0;
  std::map<std::int64_t, std::uint64_t> left, right;
  for (const auto& [key, count] : joint) {
    if (count == 0) continue;
    total += count;
    left[key.first] += count;
    right[key.second] += count;
  }
  if (total == 0)
    throw std::invalid_argument("plugin_mutual_information: empty histogram");
  const double n = static_cast<double>(total);
  double bits = 0.0;
  for (const auto& [key, count] : joint) {
    if (count == 0) continue;
    const double pxy = static_cast<double>(count) / n;
    const double px = static_cast<double>(left[key.first]) / n;
    const double py = static_cast<double>(right[key.second]) / n;
    bits += pxy * std::log2(pxy / (px * py));
  }
  return std::max(bits, 0.0);
}

SessionEngine::SessionEngine(ProtocolParams params) : params_(std::move(params)) {
  const CompanionPair& pair = params_.pair;
  if (params_.q < 0.0 || params_.q > 1.0)
    throw std::invalid_argument("SessionEngine: q must lie in [0, 1]");
  if (params_.rounds < 1)
    throw std::invalid_argument("SessionEngine: rounds must be >= 1");
  if (!is_companion(pair.base, pair.companion, 1e-8))
    throw std::invalid_argument("SessionEngine: pair is not a certified companion");
  const std::size_t n = pair.base.N;
  eve_cdf_.reserve(n);
  bob_cdf_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const CVec state = pair.base.column(k);
    eve_cdf_.push_back(to_cdf(povm_distribution(state, pair.base)));
    bob_cdf_.push_back(to_cdf(povm_distribution(state, pair.companion)));
  }
}

RoundRecord SessionEngine::run_round_with(CounterRng& rng) const {
  const std::size_t n = params_.pair.base.N;
  RoundRecord rec;
  rec.j = rng.uniform_below(n);
  rec.intercepted = rng.next_unit() < params_.q;
  std::size_t received = rec.j;
  if (rec.intercepted) {
    received = sample_cdf(eve_cdf_[rec.j], rng.next_unit());
    rec.m = static_cast<int>(received);
  }
  rec.l = sample_cdf(bob_cdf_[received], rng.next_unit());
  const std::size_t draw = rng.uniform_below(n - 1);
  rec.x = draw >= rec.l ? draw + 1 : draw;
  rec.success = rec.j == rec.l || rec.j == rec.x;
  if (rec.success) {
    const std::size_t partner = rec.j == rec.l ? rec.x : rec.l;
    rec.alice_bit = key_bit(rec.j, partner);
    rec.bob_bit = key_bit(rec.x, rec.l);
  }
  return rec;
}

RoundRecord SessionEngine::run_round(std::uint64_t round_index) const {
  CounterRng rng(params_.seed, round_index);
  return run_round_with(rng);
}

namespace {

struct Tally {
  std::uint64_t successes = 0;
  std::uint64_t matches = 0;
  std::uint64_t mismatches = 0;
  JointCounts ab, ae, be;

  void merge(const Tally& other) {
    successes += other.successes;
    matches += other.matches;
    mismatches += other.mismatches;
    for (const auto& [k, v] : other.ab) ab[k] += v;
    for (const auto& [k, v] : other.ae) ae[k] += v;
    for (const auto& [k, v] : other.be) be[k] += v;
  }
};

}  // namespace

SessionStats SessionEngine::run() const {
  const std::size_t n = params_.pair.base.N;
  const std::uint64_t rounds = params_.rounds;

  const std::size_t threads =
      std::min<std::size_t>(effective_thread_count(),
                            std::max<std::uint64_t>(rounds / 4096, 1));
  std::vector<Tally> tallies(threads);

  auto shard = [&](std::size_t t) {
    const std::uint64_t lo = rounds * t / threads;
    const std::uint64_t hi = rounds * (t + 1) / threads;
    Tally& tally = tallies[t];
    const auto nn = static_cast<std::int64_t>(n);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const RoundRecord rec = run_round(i);
      if (!rec.success) continue;
      ++tally.successes;
      if (rec.alice_bit == rec.bob_bit)
        ++tally.matches;
      else
        ++tally.mismatches;
      // Eve's record: her outcome plus the announced pair, or nothing.
      std::int64_t esym = -1;
      if (rec.intercepted) {
        const auto lo_ix = static_cast<std::int64_t>(std::min(rec.l, rec.x));
        const auto hi_ix = static_cast<std::int64_t>(std::max(rec.l, rec.x));
        esym = (static_cast<std::int64_t>(rec.m) * nn + lo_ix) * nn + hi_ix;
      }
      ++tally.ab[{rec.alice_bit, rec.bob_bit}];
      ++tally.ae[{rec.alice_bit, esym}];
      ++tally.be[{rec.bob_bit, esym}];
    }
  };

  if (threads <= 1) {
    shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(shard, t);
    shard(0);
    for (auto& th : pool) th.join();
  }

  Tally total;
  for (const Tally& t : tallies) total.merge(t);

  SessionStats stats;
  stats.N = static_cast<int>(n);
  stats.d = static_cast<int>(params_.pair.base.d);
  stats.m = params_.pair.m;
  stats.q = params_.q;
  stats.rounds = rounds;
  stats.seed = params_.seed;
  stats.successes = total.successes;
  stats.bit_matches = total.matches;
  stats.bit_mismatches = total.mismatches;

  const double r = static_cast<double>(rounds);
  stats.R_hat = static_cast<double>(total.successes) / r;
  stats.QBER_hat =
      total.successes == 0
          ? 0.0
          : static_cast<double>(total.mismatches) /
                static_cast<double>(total.successes);
  stats.eps_R_hat = stats.R_hat * (static_cast<double>(n) - 1.0) - 1.0;
  stats.se_R = std::sqrt(stats.R_hat * (1.0 - stats.R_hat) / r);
  stats.se_QBER = total.successes == 0
                      ? 0.0
                      : std::sqrt(stats.QBER_hat * (1.0 - stats.QBER_hat) /
                                  static_cast<double>(total.successes));
  stats.se_eps_R = (static_cast<double>(n) - 1.0) * stats.se_R;

  stats.theory = closed_form_stats(stats.N, stats.d);
  stats.theory_R_at_q = (1.0 - params_.q) * stats.theory.R0 + params_.q * stats.theory.R;
  stats.theory_QBER_at_q =
      params_.q * stats.theory.QBER * stats.theory.R / stats.theory_R_at_q;

  stats.anomalous_zero_successes =
      total.successes == 0 && rounds >= 10 * (n - 1);

  if (total.successes > 0) {
    MiEstimates mi;
    mi.I_AB = plugin_mutual_information(total.ab);
    mi.I_AE = plugin_mutual_information(total.ae);
    mi.I_BE = plugin_mutual_information(total.be);
    mi.key_rate = mi.I_AB - std::min(mi.I_AE, mi.I_BE);
    stats.mi = mi;
  }
  return stats;
}

RoundRecord simulate_round(const ProtocolParams& params, CounterRng& rng) {
  return SessionEngine(params).run_round_with(rng);
}

SessionStats simulate_session(const ProtocolParams& params) {
  return SessionEngine(params).run();
}

}  // namespace equiframe

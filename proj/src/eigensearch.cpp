#include "equiframe/eigensearch.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "equiframe/characters.hpp"
#include "equiframe/threads.hpp"

namespace equiframe {

namespace {

constexpr std::uint64_t kFlushBlock = 1024;  // budget check granularity
constexpr double kLeafWindow = 1e-6;         // slack on |row-1 sum| at a leaf

// Per-n immutable tables shared by all workers.
struct SearchTables {
  int n;
  bool pruning;
  std::vector<Complex> omega;  // omega[t] = exp(-2*pi*i*t/n)
  std::vector<double> lo_sq;   // feasible |partial sum|^2 lower bound by slack
  std::vector<double> hi_sq;   // ... upper bound
  double inv_sqrt_n;

  explicit SearchTables(int n_in, bool pruning_in)
      : n(n_in), pruning(pruning_in) {
    omega.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) omega[static_cast<std::size_t>(k)] = root_of_unity(-k, n);
    const double root = std::sqrt(static_cast<double>(n));
    inv_sqrt_n = 1.0 / root;
    lo_sq.resize(static_cast<std::size_t>(n) + 1);
    hi_sq.resize(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r) {
      // r unassigned unit-modulus terms can move |sum| by at most r.
      const double lo = std::max(root - r - kLeafWindow, 0.0);
      const double hi = root + r + kLeafWindow;
      lo_sq[static_cast<std::size_t>(r)] = lo * lo;
      hi_sq[static_cast<std::size_t>(r)] = hi * hi;
    }
  }

  // Full colinearity test: v = W u, lambda = v[1] (u[1] = +1), residual in
  // max norm, eigenvalue snapped to the fourth roots of unity.
  std::optional<Complex> full_test(const std::vector<int>& u) const {
    const auto un = static_cast<std::size_t>(n);
    std::vector<Complex> v(un);
    for (std::size_t r = 0; r < un; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t k = 1; k < un; ++k) {
        const std::size_t t = r * k % un;
        if (u[k] > 0)
          acc += omega[t];
        else
          acc -= omega[t];
      }
      v[r] = acc * inv_sqrt_n;
    }
    const Complex lambda = v[1];
    double resid = std::abs(v[0]);
    for (std::size_t r = 1; r < un; ++r)
      resid = std::max(resid, std::abs(v[r] - lambda * static_cast<double>(u[r])));
    if (resid > kEigenTol) return std::nullopt;
    static const Complex roots[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex* best = &roots[0];
    double best_dist = std::abs(lambda - roots[0]);
    for (int i = 1; i < 4; ++i) {
      const double dist = std::abs(lambda - roots[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = &roots[i];
      }
    }
    if (best_dist > kEigenTol) return std::nullopt;
    return *best;
  }
};

struct TaskResult {
  std::vector<SignHit> hits;
  std::uint64_t candidates = 0;
};

// Depth-first enumeration over tail positions [2, n), starting from a fixed
// prefix. Candidate counting is flushed to the shared total in blocks so the
// budget check stays cheap.
struct Dfs {
  const SearchTables& t;
  std::vector<int> u;
  Complex s{0.0, 0.0};
  int plus_left = 0;
  int minus_left = 0;
  std::uint64_t unflushed = 0;
  TaskResult out;
  std::atomic<std::uint64_t>* total;
  std::atomic<bool>* stop;
  std::uint64_t budget;

  void flush() {
    if (unflushed == 0) return;
    const std::uint64_t seen = total->fetch_add(unflushed) + unflushed;
    unflushed = 0;
    if (seen > budget) stop->store(true);
  }

  void leaf() {
    ++out.candidates;
    if (++unflushed >= kFlushBlock) flush();
    if (t.pruning) {
      // Only tails whose first-row sum has modulus sqrt(n) can pass the full
      // test; everything else is rejected from the one scalar already in hand.
      const double s_sq = std::norm(s);
      if (std::abs(s_sq - static_cast<double>(t.n)) >
          4.0 * std::sqrt(static_cast<double>(t.n)) * kLeafWindow)
        return;
    }
    if (auto lambda = t.full_test(u)) out.hits.push_back({u, *lambda});
  }

  void run(std::size_t k) {
    if (stop->load(std::memory_order_relaxed)) return;
    const auto un = static_cast<std::size_t>(t.n);
    if (k == un) {
      leaf();
      return;
    }
    if (t.pruning) {
      const std::size_t r = un - k;
      const double s_sq = std::norm(s);
      if (s_sq < t.lo_sq[r] || s_sq > t.hi_sq[r]) return;
    }
    if (!t.pruning || plus_left > 0) {
      u[k] = 1;
      s += t.omega[k];
      --plus_left;
      run(k + 1);
      s -= t.omega[k];
      ++plus_left;
    }
    if (!t.pruning || minus_left > 0) {
      u[k] = -1;
      s -= t.omega[k];
      --minus_left;
      run(k + 1);
      s += t.omega[k];
      ++minus_left;
    }
    u[k] = 0;
  }
};

struct Prefix {
  std::vector<int> assigned;  // values for positions 2..2+len-1
  Complex s;
  int plus_left;
  int minus_left;
};

// Enumerate prefixes of the given depth in lexicographic order (+1 before -1),
// applying the same feasibility cuts the full DFS would apply, so the leaf set
// is independent of the partitioning depth.
void gen_prefixes(const SearchTables& t, std::size_t depth, std::size_t k,
                  std::vector<int>& buf, Complex s, int plus_left,
                  int minus_left, std::vector<Prefix>& out) {
  if (t.pruning) {
    const std::size_t r = static_cast<std::size_t>(t.n) - k;
    const double s_sq = std::norm(s);
    if (s_sq < t.lo_sq[r] || s_sq > t.hi_sq[r]) return;
  }
  if (k == 2 + depth) {
    out.push_back({buf, s, plus_left, minus_left});
    return;
  }
  if (!t.pruning || plus_left > 0) {
    buf.push_back(1);
    gen_prefixes(t, depth, k + 1, buf, s + t.omega[k], plus_left - 1,
                 minus_left, out);
    buf.pop_back();
  }
  if (!t.pruning || minus_left > 0) {
    buf.push_back(-1);
    gen_prefixes(t, depth, k + 1, buf, s - t.omega[k], plus_left,
                 minus_left - 1, out);
    buf.pop_back();
  }
}

}  // namespace

SearchReport sign_eigenvector_search(int n, std::optional<std::uint64_t> budget,
                                     bool use_pruning) {
  if (n < 3) throw std::invalid_argument("sign_eigenvector_search: n must be >= 3");
  const auto start = std::chrono::steady_clock::now();
  SearchReport report;
  report.n = n;
  report.pruned = use_pruning;

  const auto finish = [&](SearchReport& r) {
    r.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  };

  // A zero-sum tail needs equal counts of +1 and -1 among n-1 entries.
  if (use_pruning && n % 2 == 0) {
    finish(report);
    return report;
  }

  const SearchTables tables(n, use_pruning);
  const int tail = n - 1;
  const int plus_total = use_pruning ? tail / 2 - 1 : n - 2;
  const int minus_total = use_pruning ? tail / 2 : n - 2;

  const std::size_t threads = effective_thread_count();
  std::size_t depth = 0;
  if (threads > 1 && n >= 6) {
    // Leave at least two tail positions to the DFS so the leaf accounting is
    // identical for every partitioning depth.
    const auto max_depth = std::min<std::size_t>(14, static_cast<std::size_t>(n - 4));
    const std::size_t want = threads * 8;
    while (depth < max_depth && (std::size_t{1} << depth) < want) ++depth;
  }

  std::vector<Prefix> prefixes;
  {
    std::vector<int> buf;
    gen_prefixes(tables, depth, 2, buf, tables.omega[1], plus_total,
                 minus_total, prefixes);
  }

  std::atomic<std::uint64_t> total{0};
  std::atomic<bool> stop{false};
  const std::uint64_t cap = budget.value_or(UINT64_MAX);
  std::vector<TaskResult> results(prefixes.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= prefixes.size()) return;
      if (stop.load()) return;
      const Prefix& pre = prefixes[i];
      Dfs dfs{tables,
              std::vector<int>(static_cast<std::size_t>(n), 0),
              pre.s,
              pre.plus_left,
              pre.minus_left,
              0,
              {},
              &total,
              &stop,
              cap};
      dfs.u[1] = 1;
      for (std::size_t j = 0; j < pre.assigned.size(); ++j)
        dfs.u[2 + j] = pre.assigned[j];
      dfs.run(2 + pre.assigned.size());
      dfs.flush();
      results[i] = std::move(dfs.out);
    }
  };

  if (threads <= 1 || prefixes.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const std::size_t spawn = std::min(threads, prefixes.size());
    pool.reserve(spawn - 1);
    for (std::size_t i = 0; i + 1 < spawn; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  for (TaskResult& res : results) {
    report.candidates_examined += res.candidates;
    for (SignHit& hit : res.hits) report.hits.push_back(std::move(hit));
  }
  finish(report);
  if (stop.load() && report.candidates_examined > cap)
    throw SearchBudgetExceeded(std::move(report));
  return report;
}

std::optional<Complex> conjugate_eigenvector_check(const CVec& f, double tol) {
  if (f.empty()) return std::nullopt;
  const CVec wf = apply_dft(f);
  std::size_t pivot = f.size();
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::abs(f[k]) > 0.5) {
      pivot = k;
      break;
    }
  if (pivot == f.size()) return std::nullopt;
  const Complex lambda = wf[pivot] / std::conj(f[pivot]);
  if (std::abs(std::abs(lambda) - 1.0) > tol) return std::nullopt;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::abs(wf[k] - lambda * std::conj(f[k])) > tol) return std::nullopt;
  return lambda;
}

std::vector<UniquenessRow> uniqueness_report(int n_max,
                                             std::optional<std::uint64_t> budget) {
  if (n_max < 3) throw std::invalid_argument("uniqueness_report: n_max must be >= 3");
  std::vector<UniquenessRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max - 2));
  for (int n = 3; n <= n_max; ++n) {
    SearchReport rep = sign_eigenvector_search(n, budget);
    UniquenessRow row;
    row.n = n;
    row.prime = is_prime(static_cast<std::uint64_t>(n));
    row.hits = rep.hits.size();
    row.candidates = rep.candidates_examined;
    if (rep.hits.size() == 1) {
      const SignHit& hit = rep.hits.front();
      row.lambda = hit.lambda;
      if (row.prime) {
        bool match = hit.vec[0] == 0;
        for (int k = 1; k < n && match; ++k)
          match = hit.vec[static_cast<std::size_t>(k)] ==
                  legendre(static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(n));
        row.matches_quadratic_character = match;
      }
    }
    if (row.prime) {
      const Complex expect =
          (n % 4 == 1) ? Complex{1.0, 0.0} : Complex{0.0, -1.0};
      row.ok = row.hits == 1 && row.matches_quadratic_character &&
               row.lambda && *row.lambda == expect;
    } else {
      row.ok = row.hits == 0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace equiframe

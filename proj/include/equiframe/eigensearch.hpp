#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "equiframe/linalg.hpp"

namespace equiframe {

// One standardized sign vector u = [0, 1, +/-1, ..., +/-1] with W u = lambda u.
struct SignHit {
  std::vector<int> vec;  // length n, entries in {0, 1, -1}, vec[0]=0, vec[1]=1
  Complex lambda;        // one of {1, -1, i, -i}
};

struct SearchReport {
  int n = 0;
  std::uint64_t candidates_examined = 0;  // leaf sign assignments evaluated
  std::vector<SignHit> hits;              // lexicographic order
  double wall_seconds = 0.0;
  bool pruned = true;  // false when the raw 2^(n-2) enumeration was used
};

// Raised when a candidate budget runs out before the enumeration finishes.
// Carries whatever was found up to that point.
class SearchBudgetExceeded : public std::runtime_error {
 public:
  explicit SearchBudgetExceeded(SearchReport partial_report)
      : std::runtime_error("sign eigenvector search exceeded its candidate budget"),
        partial(std::move(partial_report)) {}
  SearchReport partial;
};

// Enumerates every standardized sign vector of length n and returns those
// that are DFT eigenvectors (max-norm residual <= 1e-9, eigenvalue snapped
// to {1, -1, i, -i}).
//
// With pruning on, only zero-sum tails are generated (a hit must have
// f_hat[0] = 0) and branches whose partial first-row DFT sum cannot reach
// modulus sqrt(n) are cut. With pruning off, all 2^(n-2) raw tails are
// tested; this is the soundness reference for small n.
SearchReport sign_eigenvector_search(int n,
                                     std::optional<std::uint64_t> budget = {},
                                     bool use_pruning = true);

// If W f = lambda * conj(f) holds to tol for a single unimodular lambda,
// returns lambda (read off the first entry where |f| is nonzero), else nullopt.
std::optional<Complex> conjugate_eigenvector_check(const CVec& f,
                                                   double tol = kEigenTol);

struct UniquenessRow {
  int n = 0;
  bool prime = false;
  std::uint64_t hits = 0;
  std::uint64_t candidates = 0;
  std::optional<Complex> lambda;          // eigenvalue of the unique hit, if any
  bool matches_quadratic_character = false;  // hit equals the Legendre tail
  bool ok = false;  // hit count and eigenvalue follow the expected pattern
};

// Runs the exhaustive search for every n in [3, n_max] and checks the
// prime/composite hit pattern: exactly one hit at odd primes (equal to the
// quadratic character vector, eigenvalue 1 when p = 1 mod 4 and -i when
// p = 3 mod 4), zero hits elsewhere.
std::vector<UniquenessRow> uniqueness_report(
    int n_max, std::optional<std::uint64_t> budget = {});

}  // namespace equiframe

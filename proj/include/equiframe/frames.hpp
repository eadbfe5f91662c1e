#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "equiframe/linalg.hpp"

namespace equiframe {

// Thrown when a construction that is supposed to be certified on the fly
// (companion structure, POVM completeness) fails its own check.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// N unit-norm vectors in C^d, stored as the columns of the d x N synthesis
// matrix. Indices are 0-based.
struct FrameSpec {
  std::size_t d = 0;
  std::size_t N = 0;
  CMat synthesis;  // d x N

  CVec column(std::size_t j) const { return synthesis.col(j); }
  void set_col(std::size_t j, const CVec& v) { synthesis.set_col(j, v); }
};

// Columns j of the (d+1)-point DFT restricted to rows 1..d, rescaled to unit
// norm. Tight and equiangular for every p >= 3, with squared cross angle
// alpha = 1/d^2 = (N-d)/(d(N-1)).
FrameSpec fourier_etf(int p);

// Unit columns and frame operator (N/d) * I.
bool is_funtf(const FrameSpec& f, double tol = kRelTol);

struct EtfCheck {
  bool equiangular = false;
  double alpha = 0.0;  // common squared cross angle (meaningful when equiangular)
};

// Requires a FUNTF input (throws std::invalid_argument otherwise).
EtfCheck is_etf(const FrameSpec& f, double tol = kRelTol);

// Base frame F, diagonal traceless unitary U, and companion G = U F with
// |<g_j, f_j>| = 0 and |<g_j, f_k>|^2 = N/(d(N-1)) for j != k.
struct CompanionPair {
  FrameSpec base;
  CMat diag_unitary;  // d x d
  FrameSpec companion;
  double angle_sq = 0.0;  // certified N/(d(N-1))
  int p = 0;              // source modulus when built from a character (0 otherwise)
  int m = 0;              // source character order (0 otherwise)
};

// Builds fourier_etf(p) and U = diag of the order-m character tail, then
// certifies the companion structure at tol. Throws CertificationError if the
// certification fails.
CompanionPair companion_from_character(int p, int m, double tol = kRelTol);

// Certify an arbitrary (F, G) pair from given parts. U may be any unitary
// relating them (not necessarily diagonal); only the inner-product structure
// is certified here.
CompanionPair make_certified_companion(const FrameSpec& f, const CMat& u,
                                       double tol = kRelTol);

bool is_companion(const FrameSpec& f, const FrameSpec& g, double tol = kRelTol);

// Positive rank-1 elements (d/N) f_j f_j^dagger summing to the identity.
struct Povm {
  std::vector<CMat> elements;
};

Povm povm_from_frame(const FrameSpec& f);

// Verification report for the tensor family {f_j f_k^dagger}: tightness with
// constant N^2/d^2 under the Hilbert-Schmidt inner product, plus the
// three-valued multiset of squared cross moduli.
struct TwoDistanceReport {
  double tight_constant = 0.0;      // N^2/d^2
  double max_tightness_dev = 0.0;   // worst |sum - c*||M||^2| / ||M||^2 over probes
  double alpha = 0.0;               // base ETF squared cross angle
  std::size_t count_one = 0;        // pairs at squared modulus 1
  std::size_t count_alpha = 0;      // pairs at alpha
  std::size_t count_alpha_sq = 0;   // pairs at alpha^2
  double max_value_dev = 0.0;       // worst deviation from the class value
  bool pass = false;
};

TwoDistanceReport tensor_two_distance_check(const FrameSpec& f,
                                            double tol = 1e-9);

// The three C^2 fixtures: the trine with its diag(1,-1) companion, the
// four-vector ETF (alpha = 1/3), and the swap companion of the latter.
// refutation_min is the grid minimum of max_j |<U f_j, f_j>| over diagonal
// unitaries U, certifying that no diagonal choice works for the four-vector
// frame.
struct RenesFixtures {
  CompanionPair trine;
  FrameSpec four_state;
  FrameSpec swapped_companion;
  double refutation_min = 0.0;
};

RenesFixtures renes_fixtures(double grid_step = 1e-3);

// Minimum over the 2-torus of diagonal-unitary phases (grid at grid_step
// radians, then a local polish) of max_j |<U f_j, f_j>|.
double diagonal_companion_refutation(const FrameSpec& f, double grid_step = 1e-3);

// Full re-check of a stored pair: frame properties of both frames, unitarity
// and tracelessness of U, companion structure, and companion = U * base.
struct PairVerification {
  bool base_funtf = false;
  bool base_etf = false;
  double base_alpha = 0.0;
  bool companion_funtf = false;
  bool companion_etf = false;
  bool unitary_ok = false;
  bool traceless_ok = false;
  bool product_ok = false;   // companion equals U * base entrywise
  bool companion_ok = false; // inner-product structure of the pair
  double angle_sq = 0.0;     // expected N/(d(N-1))
  bool pass = false;
};

PairVerification verify_pair(const CompanionPair& pair, double tol = kRelTol);

}  // namespace equiframe

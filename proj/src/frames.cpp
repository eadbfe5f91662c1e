#include "equiframe/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "equiframe/characters.hpp"

namespace equiframe {

namespace {

double tol_floor(double tol) { return std::max(tol, kAbsTol); }

}  // namespace

FrameSpec fourier_etf(int p) {
  if (p < 3) throw std::invalid_argument("fourier_etf: p must be >= 3");
  const auto n = static_cast<std::size_t>(p);
  const std::size_t d = n - 1;
  FrameSpec f;
  f.d = d;
  f.N = n;
  f.synthesis = CMat(d, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t r = 0; r < d; ++r) {
      // Row r+1 of the p-point DFT column j, omega = exp(-2*pi*i/p).
      const long long t =
          static_cast<long long>((r + 1) * j % n);
      f.synthesis(r, j) = root_of_unity(-t, p) * scale;
    }
  return f;
}

bool is_funtf(const FrameSpec& f, double tol) {
  if (f.d == 0 || f.N == 0 || f.synthesis.rows() != f.d ||
      f.synthesis.cols() != f.N)
    return false;
  for (std::size_t j = 0; j < f.N; ++j)
    if (!approx_equal(norm_sq(f.column(j)), 1.0, tol)) return false;
  const CMat frame_op = f.synthesis * f.synthesis.adjoint();
  const double a = static_cast<double>(f.N) / static_cast<double>(f.d);
  CMat target = CMat::identity(f.d);
  for (std::size_t i = 0; i < f.d; ++i) target(i, i) = a;
  return frame_op.max_abs_diff(target) <= tol_floor(tol * a);
}

EtfCheck is_etf(const FrameSpec& f, double tol) {
  if (!is_funtf(f, tol))
    throw std::invalid_argument("is_etf: input is not a unit-norm tight frame");
  EtfCheck out;
  if (f.N < 2) {
    out.equiangular = true;
    return out;
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  std::vector<double> vals;
  vals.reserve(f.N * (f.N - 1) / 2);
  for (std::size_t j = 0; j < f.N; ++j)
    for (std::size_t k = j + 1; k < f.N; ++k) {
      const double v = std::norm(inner(f.column(j), f.column(k)));
      vals.push_back(v);
      sum += v;
      ++pairs;
    }
  const double mean = sum / static_cast<double>(pairs);
  out.alpha = mean;
  out.equiangular = true;
  const double allow = tol_floor(tol * std::max(1.0, mean));
  for (double v : vals)
    if (std::abs(v - mean) > allow) {
      out.equiangular = false;
      break;
    }
  return out;
}

bool is_companion(const FrameSpec& f, const FrameSpec& g, double tol) {
  if (f.d != g.d || f.N != g.N)
    throw std::invalid_argument("is_companion: frame shapes disagree");
  const double expected = static_cast<double>(f.N) /
                          (static_cast<double>(f.d) * static_cast<double>(f.N - 1));
  const double allow = tol_floor(tol);
  for (std::size_t j = 0; j < f.N; ++j) {
    const CVec gj = g.column(j);
    for (std::size_t k = 0; k < f.N; ++k) {
      const Complex ip = inner(gj, f.column(k));
      if (j == k) {
        if (std::abs(ip) > allow) return false;
      } else if (std::abs(std::norm(ip) - expected) > allow) {
        return false;
      }
    }
  }
  return true;
}

CompanionPair make_certified_companion(const FrameSpec& f, const CMat& u,
                                       double tol) {
  if (u.rows() != f.d || u.cols() != f.d)
    throw std::invalid_argument("make_certified_companion: unitary shape mismatch");
  if (!u.is_unitary(tol_floor(tol)))
    throw CertificationError("companion certification: U is not unitary");
  if (std::abs(u.trace()) > tol_floor(tol))
    throw CertificationError("companion certification: U is not traceless");
  CompanionPair pair;
  pair.base = f;
  pair.diag_unitary = u;
  pair.companion.d = f.d;
  pair.companion.N = f.N;
  pair.companion.synthesis = u * f.synthesis;
  if (!is_companion(f, pair.companion, tol))
    throw CertificationError("companion certification: inner-product structure failed");
  pair.angle_sq = static_cast<double>(f.N) /
                  (static_cast<double>(f.d) * static_cast<double>(f.N - 1));
  return pair;
}

CompanionPair companion_from_character(int p, int m, double tol) {
  const CharacterVector chi = character_vector(p, m);
  const FrameSpec f = fourier_etf(p);
  CVec diag(chi.entries.begin() + 1, chi.entries.end());
  CompanionPair pair = make_certified_companion(f, CMat::diagonal(diag), tol);
  pair.p = p;
  pair.m = m;
  return pair;
}

Povm povm_from_frame(const FrameSpec& f) {
  if (!is_funtf(f, kRelTol))
    throw std::invalid_argument("povm_from_frame: input is not a tight frame");
  const double w = static_cast<double>(f.d) / static_cast<double>(f.N);
  Povm povm;
  povm.elements.reserve(f.N);
  for (std::size_t j = 0; j < f.N; ++j) {
    const CVec fj = f.column(j);
    CMat e(f.d, f.d);
    for (std::size_t r = 0; r < f.d; ++r)
      for (std::size_t c = 0; c < f.d; ++c)
        e(r, c) = w * fj[r] * std::conj(fj[c]);
    povm.elements.push_back(std::move(e));
  }
  CMat sum(f.d, f.d);
  for (const CMat& e : povm.elements)
    for (std::size_t r = 0; r < f.d; ++r)
      for (std::size_t c = 0; c < f.d; ++c) sum(r, c) += e(r, c);
  if (sum.max_abs_diff(CMat::identity(f.d)) > kRelTol)
    throw CertificationError("povm_from_frame: elements do not resolve the identity");
  return povm;
}

TwoDistanceReport tensor_two_distance_check(const FrameSpec& f, double tol) {
  const EtfCheck etf = is_etf(f, kRelTol);
  if (!etf.equiangular)
    throw std::invalid_argument("tensor_two_distance_check: input is not an ETF");

  TwoDistanceReport report;
  const double dd = static_cast<double>(f.d);
  const double nn = static_cast<double>(f.N);
  report.tight_constant = nn * nn / (dd * dd);
  report.alpha = etf.alpha;

  // Tightness on random probes: sum_{j,k} |<M, f_j f_k*>|^2 = (N^2/d^2) ||M||^2,
  // with <M, f_j f_k*> = f_j^dagger M f_k collected as F^dagger M F.
  std::mt19937_64 gen(0x5eedf00dULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t probes = f.d * f.d + 4;
  const CMat f_adj = f.synthesis.adjoint();
  for (std::size_t t = 0; t < probes; ++t) {
    CMat m(f.d, f.d);
    for (std::size_t r = 0; r < f.d; ++r)
      for (std::size_t c = 0; c < f.d; ++c) m(r, c) = {gauss(gen), gauss(gen)};
    const CMat a = f_adj * m * f.synthesis;
    const double total = hs_norm_sq(a);
    const double msq = hs_norm_sq(m);
    const double dev = std::abs(total / msq - report.tight_constant) /
                       report.tight_constant;
    report.max_tightness_dev = std::max(report.max_tightness_dev, dev);
  }

  // Squared cross moduli factor over the base Gram:
  // |<f_m f_n*, f_j f_l*>|^2 = |<f_m, f_j>|^2 |<f_l, f_n>|^2, so the value class
  // of an ordered pair is decided by which indices coincide.
  std::vector<double> gram_sq(f.N * f.N);
  for (std::size_t j = 0; j < f.N; ++j)
    for (std::size_t k = 0; k < f.N; ++k)
      gram_sq[j * f.N + k] = std::norm(inner(f.column(j), f.column(k)));
  const double alpha = etf.alpha;
  for (std::size_t m = 0; m < f.N; ++m)
    for (std::size_t n = 0; n < f.N; ++n)
      for (std::size_t j = 0; j < f.N; ++j)
        for (std::size_t l = 0; l < f.N; ++l) {
          const double value = gram_sq[m * f.N + j] * gram_sq[l * f.N + n];
          double expected;
          if (m == j && n == l) {
            expected = 1.0;
            ++report.count_one;
          } else if (m == j || n == l) {
            expected = alpha;
            ++report.count_alpha;
          } else {
            expected = alpha * alpha;
            ++report.count_alpha_sq;
          }
          report.max_value_dev =
              std::max(report.max_value_dev, std::abs(value - expected));
        }

  const std::size_t nsq = f.N * f.N;
  const bool counts_ok = report.count_one == nsq &&
                         report.count_alpha == 2 * nsq * (f.N - 1) &&
                         report.count_alpha_sq == nsq * (f.N - 1) * (f.N - 1);
  report.pass = counts_ok && report.max_tightness_dev <= tol &&
                report.max_value_dev <= tol;
  return report;
}

namespace {

// max_j |a_j e^{i t0} + b_j e^{i t1}| for the two-row frame moduli (a_j, b_j).
double diag_phase_objective(const std::vector<double>& a,
                            const std::vector<double>& b, double t0, double t1,
                            double bail_above) {
  const double c0 = std::cos(t0), s0 = std::sin(t0);
  const double c1 = std::cos(t1), s1 = std::sin(t1);
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double re = a[j] * c0 + b[j] * c1;
    const double im = a[j] * s0 + b[j] * s1;
    worst = std::max(worst, re * re + im * im);
    if (worst >= bail_above) break;
  }
  return worst;
}

}  // namespace

double diagonal_companion_refutation(const FrameSpec& f, double grid_step) {
  if (f.d != 2)
    throw std::invalid_argument(
        "diagonal_companion_refutation: implemented for two-dimensional frames");
  if (grid_step <= 0.0 || grid_step > 0.5)
    throw std::invalid_argument("diagonal_companion_refutation: bad grid step");

  // |<U f_j, f_j>| depends only on the squared row moduli of each column.
  std::vector<double> a(f.N), b(f.N);
  for (std::size_t j = 0; j < f.N; ++j) {
    a[j] = std::norm(f.synthesis(0, j));
    b[j] = std::norm(f.synthesis(1, j));
  }

  const double two_pi = 2.0 * std::numbers::pi;
  const auto steps = static_cast<std::size_t>(std::ceil(two_pi / grid_step));
  std::vector<double> angles(steps);
  for (std::size_t s = 0; s < steps; ++s)
    angles[s] = two_pi * static_cast<double>(s) / static_cast<double>(steps);

  double best = std::numeric_limits<double>::infinity();
  double best_t0 = 0.0, best_t1 = 0.0;
  for (std::size_t s = 0; s < steps; ++s)
    for (std::size_t t = 0; t < steps; ++t) {
      const double v =
          diag_phase_objective(a, b, angles[s], angles[t], best);
      if (v < best) {
        best = v;
        best_t0 = angles[s];
        best_t1 = angles[t];
      }
    }

  // Local pattern-search polish around the grid argmin.
  double t0 = best_t0, t1 = best_t1;
  for (double step = grid_step; step > 1e-9; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      const double cand[4][2] = {{t0 + step, t1}, {t0 - step, t1},
                                 {t0, t1 + step}, {t0, t1 - step}};
      for (const auto& c : cand) {
        const double v = diag_phase_objective(a, b, c[0], c[1], best);
        if (v < best) {
          best = v;
          t0 = c[0];
          t1 = c[1];
          moved = true;
        }
      }
    }
  }
  return std::sqrt(best);
}

PairVerification verify_pair(const CompanionPair& pair, double tol) {
  PairVerification v;
  v.base_funtf = is_funtf(pair.base, tol);
  if (v.base_funtf) {
    const EtfCheck etf = is_etf(pair.base, tol);
    v.base_etf = etf.equiangular;
    v.base_alpha = etf.alpha;
  }
  v.companion_funtf = is_funtf(pair.companion, tol);
  if (v.companion_funtf) v.companion_etf = is_etf(pair.companion, tol).equiangular;
  v.unitary_ok = pair.diag_unitary.rows() == pair.base.d &&
                 pair.diag_unitary.cols() == pair.base.d &&
                 pair.diag_unitary.is_unitary(tol_floor(tol));
  v.traceless_ok = std::abs(pair.diag_unitary.trace()) <= tol_floor(tol);
  if (v.unitary_ok) {
    const CMat product = pair.diag_unitary * pair.base.synthesis;
    v.product_ok = product.max_abs_diff(pair.companion.synthesis) <= tol_floor(tol);
  }
  if (pair.base.d == pair.companion.d && pair.base.N == pair.companion.N)
    v.companion_ok = is_companion(pair.base, pair.companion, tol);
  v.angle_sq = static_cast<double>(pair.base.N) /
               (static_cast<double>(pair.base.d) *
                static_cast<double>(pair.base.N - 1));
  v.pass = v.base_funtf && v.base_etf && v.companion_funtf && v.companion_etf &&
           v.unitary_ok && v.traceless_ok && v.product_ok && v.companion_ok;
  return v;
}

RenesFixtures renes_fixtures(double grid_step) {
  RenesFixtures out;

  // Trine: the (3,2) Fourier frame; diag(1,-1) gives its companion.
  out.trine = make_certified_companion(fourier_etf(3),
                                       CMat::diagonal({{1.0, 0.0}, {-1.0, 0.0}}));

  // Four unit vectors in C^2 with all squared cross angles 1/3.
  const double asq = (3.0 + std::sqrt(3.0)) / 6.0;
  const double bsq = (3.0 - std::sqrt(3.0)) / 6.0;
  const double av = std::sqrt(asq);
  const double bv = std::sqrt(bsq);
  out.four_state.d = 2;
  out.four_state.N = 4;
  out.four_state.synthesis = CMat(2, 4);
  out.four_state.set_col(0, {{av, 0.0}, {0.0, bv}});
  out.four_state.set_col(1, {{av, 0.0}, {0.0, -bv}});
  out.four_state.set_col(2, {{bv, 0.0}, {av, 0.0}});
  out.four_state.set_col(3, {{bv, 0.0}, {-av, 0.0}});

  const EtfCheck etf = is_etf(out.four_state, kRelTol);
  if (!etf.equiangular || !approx_equal(etf.alpha, 1.0 / 3.0, 1e-9))
    throw CertificationError("renes_fixtures: four-state frame is not the 1/3 ETF");

  // Swap companion: exchange the rows of every vector and exchange the roles
  // of the last two vectors.
  CMat swap(2, 2);
  swap(0, 1) = 1.0;
  swap(1, 0) = 1.0;
  out.swapped_companion.d = 2;
  out.swapped_companion.N = 4;
  out.swapped_companion.synthesis = CMat(2, 4);
  const std::size_t source[4] = {0, 1, 3, 2};
  for (std::size_t j = 0; j < 4; ++j) {
    CVec v = out.four_state.column(source[j]);
    out.swapped_companion.set_col(j, {v[1], v[0]});
  }
  if (!is_companion(out.four_state, out.swapped_companion, 1e-10))
    throw CertificationError("renes_fixtures: swap companion failed certification");

  out.refutation_min = diagonal_companion_refutation(out.four_state, grid_step);
  if (out.refutation_min <= 0.1)
    throw CertificationError(
        "renes_fixtures: a diagonal unitary nearly orthogonalizes the frame");
  return out;
}

}  // namespace equiframe

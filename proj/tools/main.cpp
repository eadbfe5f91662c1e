#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equiframe/characters.hpp"
#include "equiframe/eigensearch.hpp"
#include "equiframe/frames.hpp"
#include "equiframe/io.hpp"
#include "equiframe/qkd.hpp"

namespace {

using namespace equiframe;

constexpr int kExhaustiveCeiling = 31;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    io::write_text_file(out_path, text);
}

int run_build(int p, int m, const std::string& out, double tol) {
  const CompanionPair pair = companion_from_character(p, m, tol);
  emit(io::frame_file_text(pair, tol), out);
  std::cerr << "built (p=" << p << ", m=" << m << "), companion angle^2 = "
            << io::format_double(pair.angle_sq) << "\n";
  return 0;
}

int run_verify(const std::string& file, double tol) {
  const CompanionPair pair = io::read_frame_file(file);
  const PairVerification v = verify_pair(pair, tol);
  const auto yn = [](bool b) { return b ? "yes" : "NO"; };
  std::cout << "p=" << pair.p << " m=" << pair.m << " N=" << pair.base.N
            << " d=" << pair.base.d << "\n";
  std::cout << "base FUNTF:          " << yn(v.base_funtf) << "\n";
  std::cout << "base ETF:            " << yn(v.base_etf) << " (alpha = "
            << io::format_double(v.base_alpha) << ")\n";
  std::cout << "companion FUNTF:     " << yn(v.companion_funtf) << "\n";
  std::cout << "companion ETF:       " << yn(v.companion_etf) << "\n";
  std::cout << "diag unitary:        " << yn(v.unitary_ok)
            << " (traceless: " << yn(v.traceless_ok) << ")\n";
  std::cout << "companion = U*base:  " << yn(v.product_ok) << "\n";
  std::cout << "companion structure: " << yn(v.companion_ok) << " (angle^2 = "
            << io::format_double(v.angle_sq) << ")\n";
  std::cout << (v.pass ? "PASS" : "FAIL") << "\n";
  return v.pass ? 0 : 1;
}

// Constructive check only: the quadratic character vector must be a DFT
// eigenvector with the eigenvalue dictated by p mod 4.
bool prop2_row(int n, UniquenessRow& row) {
  row.n = n;
  row.prime = is_prime(static_cast<std::uint64_t>(n));
  if (!row.prime) return false;
  const CharacterVector chi = character_vector(n, 2);
  const CVec wf = apply_dft(chi.entries);
  const Complex expect = (n % 4 == 1) ? Complex{1.0, 0.0} : Complex{0.0, -1.0};
  double resid = 0.0;
  for (std::size_t k = 0; k < chi.entries.size(); ++k)
    resid = std::max(resid, std::abs(wf[k] - expect * chi.entries[k]));
  row.hits = 1;
  row.lambda = expect;
  row.matches_quadratic_character = true;
  row.ok = resid <= kEigenTol;
  return true;
}

int run_search(std::optional<int> n_single, const std::string& range,
               const std::string& out, std::optional<std::uint64_t> budget,
               bool prop2_only) {
  int lo = 0, hi = 0;
  if (n_single && !range.empty())
    throw std::invalid_argument("search: give either -n or --range, not both");
  if (n_single) {
    lo = hi = *n_single;
  } else if (!range.empty()) {
    const auto dots = range.find("..");
    if (dots == std::string::npos)
      throw std::invalid_argument("search: --range expects the form A..B");
    lo = std::stoi(range.substr(0, dots));
    hi = std::stoi(range.substr(dots + 2));
  } else {
    throw std::invalid_argument("search: one of -n or --range is required");
  }
  if (lo < 3 || hi < lo) throw std::invalid_argument("search: bad n range");
  if (hi > kExhaustiveCeiling && !prop2_only)
    throw std::invalid_argument(
        "search: n beyond the exhaustive ceiling (" +
        std::to_string(kExhaustiveCeiling) + ") needs --prop2-only");

  if (prop2_only) {
    std::vector<UniquenessRow> rows;
    bool all_ok = true;
    for (int n = lo; n <= hi; ++n) {
      UniquenessRow row;
      if (prop2_row(n, row)) {
        rows.push_back(row);
        all_ok = all_ok && row.ok;
      }
    }
    emit(io::uniqueness_table_text(lo, hi, rows), out);
    return all_ok ? 0 : 1;
  }

  if (n_single) {
    const SearchReport report = sign_eigenvector_search(*n_single, budget);
    emit(io::search_report_text(report), out);
    const bool prime = is_prime(static_cast<std::uint64_t>(*n_single));
    const bool ok = prime ? report.hits.size() == 1 : report.hits.empty();
    return ok ? 0 : 1;
  }

  const std::vector<UniquenessRow> rows = uniqueness_report(hi, budget);
  std::vector<UniquenessRow> window;
  for (const UniquenessRow& row : rows)
    if (row.n >= lo) window.push_back(row);
  bool all_ok = true;
  for (const UniquenessRow& row : window) all_ok = all_ok && row.ok;
  emit(io::uniqueness_table_text(lo, hi, window), out);
  return all_ok ? 0 : 1;
}

int run_theory(int n, int d, const std::string& out) {
  const ClosedFormStats theory = closed_form_stats(n, d);
  if (out.empty()) {
    std::cout << "N=" << n << " d=" << d << "\n";
    std::cout << "R0    = " << io::format_double(theory.R0) << "\n";
    std::cout << "R     = " << io::format_double(theory.R) << "\n";
    std::cout << "eps_R = " << io::format_double(theory.eps_R) << "\n";
    std::cout << "QBER  = " << io::format_double(theory.QBER) << "\n";
  } else {
    io::write_text_file(out, io::theory_text(n, d, theory));
  }
  return 0;
}

SessionStats one_session(int p, int m, double q, std::uint64_t rounds,
                         std::uint64_t seed, double tol) {
  ProtocolParams params;
  params.pair = companion_from_character(p, m, tol);
  params.q = q;
  params.rounds = rounds;
  params.seed = seed;
  return simulate_session(params);
}

int run_simulate(int p, int m, double q, std::uint64_t rounds,
                 std::uint64_t seed, const std::string& out, double tol) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("simulate: q must lie in [0, 1]");
  if (rounds < 1) throw std::invalid_argument("simulate: rounds must be >= 1");
  const SessionStats stats = one_session(p, m, q, rounds, seed, tol);
  emit(io::stats_text(stats, tol), out);
  if (stats.anomalous_zero_successes)
    std::cerr << "warning: no successful rounds; this is statistically anomalous "
                 "for the given round count\n";
  return 0;
}

int run_sweep(int p, int m, const std::string& q_list, std::uint64_t rounds,
              std::uint64_t seed, const std::string& out, double tol) {
  std::vector<double> qs;
  std::size_t pos = 0;
  while (pos <= q_list.size()) {
    const std::size_t comma = q_list.find(',', pos);
    const std::string tok = q_list.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw std::invalid_argument("sweep: empty entry in --q list");
    std::size_t used = 0;
    const double q = std::stod(tok, &used);
    if (used != tok.size() || q < 0.0 || q > 1.0)
      throw std::invalid_argument("sweep: bad q value \"" + tok + "\"");
    qs.push_back(q);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (qs.empty()) throw std::invalid_argument("sweep: --q list is empty");
  if (rounds < 1) throw std::invalid_argument("sweep: rounds must be >= 1");

  std::vector<SessionStats> rows;
  rows.reserve(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i)
    rows.push_back(one_session(p, m, qs[i], rounds, seed + i, tol));
  emit(io::sweep_csv_text(rows), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Fourier frame companions from power-residue characters, exhaustive "
      "DFT sign-eigenvector search, and intercept/resend key-distribution "
      "simulation. EQUIFRAME_THREADS caps worker threads."};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  int p = 0, m = 2, theory_n = 0, theory_d = 0;
  std::optional<int> search_n;
  std::string range, out_path, file_path, q_list = "0,0.25,0.5,0.75,1";
  double tol = 1e-10, q = 0.0;
  std::uint64_t rounds = 1000000, seed = 0;
  std::optional<std::uint64_t> budget;
  bool prop2_only = false;

  CLI::App* build = app.add_subcommand("build", "Construct a companion pair and write its frame file");
  build->add_option("-p", p, "odd prime modulus")->required();
  build->add_option("-m", m, "character order (divides p-1)")->capture_default_str();
  build->add_option("-o,--out", out_path, "output path (stdout if omitted)");
  build->add_option("--tol", tol, "certification tolerance")->capture_default_str();

  CLI::App* verify = app.add_subcommand("verify", "Re-check a stored frame file");
  verify->add_option("file", file_path, "frame file to verify")->required();
  verify->add_option("--tol", tol, "verification tolerance")->capture_default_str();

  CLI::App* search = app.add_subcommand("search", "Enumerate standardized sign eigenvectors of the DFT");
  search->add_option("-n", search_n, "single transform size");
  search->add_option("--range", range, "inclusive size range A..B");
  search->add_option("-o,--out", out_path, "output path (stdout if omitted)");
  search->add_option("--budget", budget, "abort after this many candidates");
  search->add_flag("--prop2-only", prop2_only,
                   "only verify the constructive quadratic-character eigenvector "
                   "(allows sizes beyond the exhaustive ceiling)");

  CLI::App* theory = app.add_subcommand("theory", "Closed-form intercept/resend statistics");
  theory->add_option("-N", theory_n, "number of protocol states")->required();
  theory->add_option("-d", theory_d, "Hilbert-space dimension")->required();
  theory->add_option("-o,--out", out_path, "output path (stdout if omitted)");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo session against the closed forms");
  simulate->add_option("-p", p, "odd prime modulus")->required();
  simulate->add_option("-m", m, "character order (divides p-1)")->capture_default_str();
  simulate->add_option("-q", q, "interception probability")->capture_default_str();
  simulate->add_option("--rounds", rounds, "protocol rounds")->capture_default_str();
  simulate->add_option("--seed", seed, "RNG seed")->capture_default_str();
  simulate->add_option("-o,--out", out_path, "output path (stdout if omitted)");
  simulate->add_option("--tol", tol, "pair certification tolerance")->capture_default_str();

  CLI::App* sweep = app.add_subcommand("sweep", "Sessions across a list of q values, CSV output");
  sweep->add_option("-p", p, "odd prime modulus")->required();
  sweep->add_option("-m", m, "character order (divides p-1)")->capture_default_str();
  sweep->add_option("--q", q_list, "comma-separated q values")->capture_default_str();
  sweep->add_option("--rounds", rounds, "rounds per session")->capture_default_str();
  sweep->add_option("--seed", seed, "base RNG seed (row i uses seed+i)")->capture_default_str();
  sweep->add_option("-o,--out", out_path, "output path (stdout if omitted)");
  sweep->add_option("--tol", tol, "pair certification tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) return run_build(p, m, out_path, tol);
    if (verify->parsed()) return run_verify(file_path, tol);
    if (search->parsed())
      return run_search(search_n, range, out_path, budget, prop2_only);
    if (theory->parsed()) return run_theory(theory_n, theory_d, out_path);
    if (simulate->parsed())
      return run_simulate(p, m, q, rounds, seed, out_path, tol);
    if (sweep->parsed())
      return run_sweep(p, m, q_list, rounds, seed, out_path, tol);
  } catch (const SearchBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (examined "
              << e.partial.candidates_examined << " candidates, found "
              << e.partial.hits.size() << " hits before stopping)\n";
    return 1;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

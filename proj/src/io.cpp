#include "equiframe/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace equiframe::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex json_to_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::runtime_error("frame file: complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMat json_to_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("frame file: bad matrix");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw std::runtime_error("frame file: bad matrix row");
  const std::size_t cols = j[0].size();
  CMat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw std::runtime_error("frame file: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = json_to_complex(j[r][c]);
  }
  return m;
}

}  // namespace

std::string frame_file_text(const CompanionPair& pair, double tol) {
  json out;
  out["p"] = pair.p;
  out["m"] = pair.m;
  out["N"] = pair.base.N;
  out["d"] = pair.base.d;
  out["synthesis"] = matrix_to_json(pair.base.synthesis);
  json diag = json::array();
  for (std::size_t i = 0; i < pair.diag_unitary.rows(); ++i)
    diag.push_back(complex_to_json(pair.diag_unitary(i, i)));
  out["diag_unitary"] = std::move(diag);
  out["companion"] = matrix_to_json(pair.companion.synthesis);
  out["tol"] = tol;
  return out.dump(2) + "\n";
}

CompanionPair read_frame_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open frame file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("frame file is not valid JSON: ") + e.what());
  }
  for (const char* key : {"p", "m", "N", "d", "synthesis", "diag_unitary", "companion"})
    if (!j.contains(key))
      throw std::runtime_error(std::string("frame file: missing key \"") + key + "\"");

  CompanionPair pair;
  pair.p = j["p"].get<int>();
  pair.m = j["m"].get<int>();
  const auto n = j["N"].get<std::size_t>();
  const auto d = j["d"].get<std::size_t>();
  if (n < 2 || d < 1) throw std::runtime_error("frame file: bad dimensions");

  pair.base.d = d;
  pair.base.N = n;
  pair.base.synthesis = json_to_matrix(j["synthesis"]);
  if (pair.base.synthesis.rows() != d || pair.base.synthesis.cols() != n)
    throw std::runtime_error("frame file: synthesis shape disagrees with (d, N)");

  const json& diag = j["diag_unitary"];
  if (!diag.is_array() || diag.size() != d)
    throw std::runtime_error("frame file: diag_unitary must have d entries");
  CVec dvec(d);
  for (std::size_t i = 0; i < d; ++i) dvec[i] = json_to_complex(diag[i]);
  pair.diag_unitary = CMat::diagonal(dvec);

  pair.companion.d = d;
  pair.companion.N = n;
  pair.companion.synthesis = json_to_matrix(j["companion"]);
  if (pair.companion.synthesis.rows() != d || pair.companion.synthesis.cols() != n)
    throw std::runtime_error("frame file: companion shape disagrees with (d, N)");

  pair.angle_sq = static_cast<double>(n) /
                  (static_cast<double>(d) * static_cast<double>(n - 1));
  return pair;
}

namespace {

json hit_to_json(const SignHit& hit) {
  json h;
  h["vector"] = hit.vec;
  h["lambda"] = complex_to_json(hit.lambda);
  return h;
}

}  // namespace

std::string search_report_text(const SearchReport& report) {
  json out;
  out["n"] = report.n;
  out["candidates"] = report.candidates_examined;
  json hits = json::array();
  for (const SignHit& hit : report.hits) hits.push_back(hit_to_json(hit));
  out["hits"] = std::move(hits);
  out["seconds"] = report.wall_seconds;
  out["pruned"] = report.pruned;
  return out.dump(2) + "\n";
}

std::string uniqueness_table_text(int n_lo, int n_hi,
                                  const std::vector<UniquenessRow>& rows) {
  json out;
  out["range"] = json::array({n_lo, n_hi});
  json jrows = json::array();
  bool pass = true;
  for (const UniquenessRow& row : rows) {
    json r;
    r["n"] = row.n;
    r["prime"] = row.prime;
    r["hits"] = row.hits;
    r["candidates"] = row.candidates;
    r["lambda"] = row.lambda ? complex_to_json(*row.lambda) : json();
    r["matches_quadratic_character"] = row.matches_quadratic_character;
    r["ok"] = row.ok;
    pass = pass && row.ok;
    jrows.push_back(std::move(r));
  }
  out["rows"] = std::move(jrows);
  out["pass"] = pass;
  return out.dump(2) + "\n";
}

std::string stats_text(const SessionStats& stats, double tol) {
  json out;
  out["N"] = stats.N;
  out["d"] = stats.d;
  out["m"] = stats.m;
  out["q"] = stats.q;
  out["rounds"] = stats.rounds;
  out["seed"] = stats.seed;
  out["tol"] = tol;
  out["successes"] = stats.successes;
  out["bit_matches"] = stats.bit_matches;
  out["bit_mismatches"] = stats.bit_mismatches;
  out["R_hat"] = stats.R_hat;
  out["QBER_hat"] = stats.QBER_hat;
  out["eps_R_hat"] = stats.eps_R_hat;
  out["stderr"] = {{"R_hat", stats.se_R},
                   {"QBER_hat", stats.se_QBER},
                   {"eps_R_hat", stats.se_eps_R}};
  out["theory"] = {{"R0", stats.theory.R0},
                   {"R", stats.theory.R},
                   {"eps_R", stats.theory.eps_R},
                   {"QBER", stats.theory.QBER}};
  out["theory_at_q"] = {{"R", stats.theory_R_at_q}, {"QBER", stats.theory_QBER_at_q}};
  if (stats.mi) {
    out["mi"] = {{"I_AB", stats.mi->I_AB},
                 {"I_AE", stats.mi->I_AE},
                 {"I_BE", stats.mi->I_BE},
                 {"key_rate", stats.mi->key_rate}};
  } else {
    out["mi"] = nullptr;
  }
  out["anomalous_zero_successes"] = stats.anomalous_zero_successes;
  return out.dump(2) + "\n";
}

std::string theory_text(int N, int d, const ClosedFormStats& theory) {
  json out;
  out["N"] = N;
  out["d"] = d;
  out["R0"] = theory.R0;
  out["R"] = theory.R;
  out["eps_R"] = theory.eps_R;
  out["QBER"] = theory.QBER;
  return out.dump(2) + "\n";
}

std::string sweep_csv_text(const std::vector<SessionStats>& rows) {
  std::string out = "N,d,q,rounds,R0,R,eps_R,QBER,R_hat,QBER_hat,key_rate_hat\n";
  for (const SessionStats& s : rows) {
    out += std::to_string(s.N) + ',' + std::to_string(s.d) + ',';
    out += format_double(s.q) + ',' + std::to_string(s.rounds) + ',';
    out += format_double(s.theory.R0) + ',' + format_double(s.theory.R) + ',';
    out += format_double(s.theory.eps_R) + ',' + format_double(s.theory.QBER) + ',';
    out += format_double(s.R_hat) + ',' + format_double(s.QBER_hat) + ',';
    out += s.mi ? format_double(s.mi->key_rate) : std::string("nan");
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace equiframe::io

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "equiframe/eigensearch.hpp"
#include "equiframe/frames.hpp"
#include "equiframe/qkd.hpp"

namespace equiframe::io {

// Shortest round-trip decimal form of a double (the same style the JSON
// writer uses), so text outputs are byte-stable across runs.
std::string format_double(double v);

std::string frame_file_text(const CompanionPair& pair, double tol);
CompanionPair read_frame_file(const std::filesystem::path& path);

std::string search_report_text(const SearchReport& report);
std::string uniqueness_table_text(int n_lo, int n_hi,
                                  const std::vector<UniquenessRow>& rows);

std::string stats_text(const SessionStats& stats, double tol);
std::string theory_text(int N, int d, const ClosedFormStats& theory);

// Header: N,d,q,rounds,R0,R,eps_R,QBER,R_hat,QBER_hat,key_rate_hat
std::string sweep_csv_text(const std::vector<SessionStats>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace equiframe::io

#pragma once

#include <string>
#include <vector>

#include "qpdnls/state.hpp"

namespace qpdnls {

// Doubles are written as %.17g so artifacts are byte-stable across runs and
// round-trip to the same bits.
std::string fmt_double(double x);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

// Trajectory rows: t,n_1,...,n_nu,re,im, one row per populated mode per
// snapshot, times ascending and modes in lexicographic order.
std::string trajectory_csv(const Trajectory& traj, int nu);
Trajectory trajectory_from_csv(const std::string& csv, const TruncationBox& box);

// Monitor rows: t,M,H,E.
std::string monitors_csv(const Trajectory& traj);

// Same tables as JSON documents: {"header": [...], "rows": [[...], ...]}.
std::string trajectory_json(const Trajectory& traj, int nu);
std::string monitors_json(const Trajectory& traj);
std::string table_json(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);

// Generic check table: lemma,instance,expected,actual,pass.
struct CheckRow {
    std::string lemma;
    std::string instance;
    std::string expected;
    std::string actual;
    bool pass = true;
};
std::string checks_csv(const std::vector<CheckRow>& rows);
bool all_pass(const std::vector<CheckRow>& rows);

} // namespace qpdnls

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aaps/bench/runner.hpp"

namespace aaps::bench {

/// Column layout version of sweep.csv and sweep_summary.csv. Bump when
/// columns are added, removed or renamed.
inline constexpr int kCsvSchemaVersion = 1;

/// sweep.csv, one row per (grid point, replicate). The SV columns are left
/// empty for other targets, and wall_seconds when `wall_time` is false so
/// that repeated runs give byte-identical files.
const std::vector<std::string>& sweep_columns();
/// sweep_summary.csv, one row per grid point (mean and sd over replicates).
const std::vector<std::string>& summary_columns();

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out,
                     bool wall_time = true);
void write_sweep_summary_csv(const std::vector<SweepRecord>& records, std::ostream& out);

/// iteration,<parameter names>
void write_samples_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& samples,
                       std::ostream& out, std::uint64_t first_iteration = 1,
                       std::uint64_t thin = 1);

/// Splits one CSV line on commas (no quoting is ever produced here).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace aaps::bench

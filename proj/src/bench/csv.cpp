#include "aaps/bench/csv.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace aaps::bench {

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "grid_index", "sampler",  "scheme",         "epsilon",          "K",
      "L",          "replicate", "seed",          "iterations",       "min_ess",
      "min_ess_param", "leapfrog_steps", "acceptance_rate", "efficiency", "wall_seconds",
      "status",     "ess_alpha", "ess_beta",      "ess_gamma",        "min_ess_latent"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "grid_index",      "sampler",        "scheme",          "epsilon",
      "K",               "L",              "replicates",      "failed",
      "mean_efficiency", "sd_efficiency",  "mean_min_ess",    "sd_min_ess",
      "mean_acceptance", "mean_leapfrog_steps"};
  return cols;
}

namespace {

void header(const std::vector<std::string>& cols, std::ostream& out) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

std::string clean(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

struct Moments {
  double sum = 0.0;
  double sum2 = 0.0;
  int n = 0;
  void add(double v) {
    sum += v;
    sum2 += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double sd() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sum2 - n * m * m) / (n - 1)));
  }
};

}  // namespace

void write_sweep_csv(const std::vector<SweepRecord>& records, std::ostream& out,
                     bool wall_time) {
  header(sweep_columns(), out);
  out << std::setprecision(10);
  for (const auto& r : records) {
    out << r.grid_index << ',' << r.sampler << ',' << r.scheme << ',' << r.eps << ',' << r.K << ','
        << r.L << ',' << r.replicate << ',' << r.seed << ',' << r.iterations << ',' << r.min_ess
        << ',' << r.min_ess_param << ',' << r.leapfrog_steps << ',' << r.acceptance_rate << ','
        << r.efficiency << ',';
    if (wall_time) out << r.wall_seconds;
    out << ',' << clean(r.status) << ',';
    if (r.has_sv) {
      out << r.ess_alpha << ',' << r.ess_beta << ',' << r.ess_gamma << ',' << r.min_ess_latent;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

void write_sweep_summary_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  header(summary_columns(), out);
  out << std::setprecision(10);
  std::map<std::size_t, std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) groups[r.grid_index].push_back(&r);
  for (const auto& [index, group] : groups) {
    Moments eff, ess, acc, leap;
    int failed = 0;
    for (const SweepRecord* r : group) {
      if (r->status != "ok") {
        ++failed;
        continue;
      }
      eff.add(r->efficiency);
      ess.add(r->min_ess);
      acc.add(r->acceptance_rate);
      leap.add(static_cast<double>(r->leapfrog_steps));
    }
    const SweepRecord& f = *group.front();
    out << index << ',' << f.sampler << ',' << f.scheme << ',' << f.eps << ',' << f.K << ','
        << f.L << ',' << group.size() << ',' << failed << ',' << eff.mean() << ',' << eff.sd()
        << ',' << ess.mean() << ',' << ess.sd() << ',' << acc.mean() << ',' << leap.mean()
        << '\n';
  }
}

void write_samples_csv(const std::vector<std::string>& names, const Eigen::MatrixXd& samples,
                       std::ostream& out, std::uint64_t first_iteration, std::uint64_t thin) {
  out << "iteration";
  for (const auto& n : names) out << ',' << n;
  out << '\n' << std::setprecision(17);
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    out << first_iteration + static_cast<std::uint64_t>(r) * thin;
    for (Eigen::Index c = 0; c < samples.cols(); ++c) out << ',' << samples(r, c);
    out << '\n';
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace aaps::bench

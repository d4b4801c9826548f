#include "aaps/bench/presets.hpp"

#include <stdexcept>

namespace aaps::bench {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1",           "fig2-weights", "table1",
                                                 "table2-sv",      "table3-bimodal",
                                                 "fig6-kdiag",     "apogee-rate"};
  return names;
}

namespace {

std::vector<int> range(int lo, int hi, int step = 1) {
  std::vector<int> v;
  for (int i = lo; i <= hi; i += step) v.push_back(i);
  return v;
}

ExperimentConfig base(const std::string& name, const TargetSpec& target, bool desk) {
  ExperimentConfig c;
  c.name = name;
  c.target = target;
  c.run.iterations = desk ? 2000 : 20000;
  c.run.replicates = 1;
  c.run.seed = 20210101;
  return c;
}

ExperimentConfig aaps_config(const std::string& name, const TargetSpec& target, bool desk,
                             std::vector<double> eps, std::vector<int> K) {
  ExperimentConfig c = base(name, target, desk);
  c.sampler.kind = SamplerKind::Aaps;
  c.sampler.schemes = {WeightScheme::PiSJD};
  c.sampler.eps = std::move(eps);
  c.sampler.K = std::move(K);
  return c;
}

ExperimentConfig hmc_config(const std::string& name, const TargetSpec& target, bool desk,
                            std::vector<double> eps, std::vector<int> L, bool blur) {
  ExperimentConfig c = base(name, target, desk);
  c.sampler.kind = blur ? SamplerKind::BlurredHmc : SamplerKind::Hmc;
  c.sampler.eps = std::move(eps);
  c.sampler.L = std::move(L);
  return c;
}

ExperimentConfig nuts_config(const std::string& name, const TargetSpec& target, bool desk,
                             std::vector<double> eps) {
  ExperimentConfig c = base(name, target, desk);
  c.sampler.kind = SamplerKind::Nuts;
  c.sampler.eps = std::move(eps);
  return c;
}

TargetSpec product(const std::string& family, const std::string& progression, std::size_t d,
                   double xi) {
  TargetSpec t;
  t.family = family;
  t.progression = progression;
  t.dimension = d;
  t.xi = xi;
  return t;
}

std::vector<ExperimentConfig> fig1(bool desk) {
  TargetSpec t;
  t.family = "rosenbrock";
  t.dimension = desk ? 10 : 40;
  const std::vector<double> eps = desk ? std::vector<double>{0.3, 0.5, 0.7}
                                       : std::vector<double>{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<int> L = desk ? std::vector<int>{-40, -20, -10, 10, 20, 40} : range(-60, 60, 5);
  std::erase(L, 0);
  return {hmc_config("fig1-hmc", t, desk, eps, L, false),
          aaps_config("fig1-aaps", t, desk, eps, desk ? std::vector<int>{0, 1, 2, 4, 6} : range(0, 12))};
}

std::vector<ExperimentConfig> fig2(bool desk) {
  ExperimentConfig c = aaps_config("fig2-weights", product("gaussian", "H", desk ? 20 : 40, 20.0),
                                   desk, {1.2}, desk ? std::vector<int>{1, 2, 4, 8} : range(0, 15));
  c.sampler.schemes = {WeightScheme::PiOnly, WeightScheme::SJD,   WeightScheme::PiSJD,
                       WeightScheme::AJD,    WeightScheme::PiAJD, WeightScheme::PiHalves};
  return {c};
}

std::vector<ExperimentConfig> table1(bool desk) {
  struct Row {
    std::string family, progression;
    std::size_t d;
    double xi;
  };
  std::vector<TargetSpec> targets;
  if (desk) {
    targets = {product("gaussian", "SD", 40, 20.0), product("gaussian", "VAR", 40, 20.0)};
  } else {
    const std::vector<Row> rows = {
        {"gaussian", "SD", 40, 20},       {"gaussian", "VAR", 40, 20}, {"gaussian", "H", 40, 20},
        {"gaussian", "invSD", 40, 20},    {"skew_gaussian", "VAR", 40, 20},
        {"logistic", "VAR", 40, 20},      {"gaussian", "VAR", 100, 20}, {"gaussian", "VAR", 40, 40}};
    for (const auto& r : rows) targets.push_back(product(r.family, r.progression, r.d, r.xi));
    for (std::size_t d : {20u, 40u}) {
      TargetSpec t;
      t.family = "rosenbrock";
      t.dimension = d;
      targets.push_back(t);
    }
    TargetSpec rn;
    rn.family = "radford_neal";
    rn.dimension = 30;
    rn.xi = 110;
    targets.push_back(rn);
  }
  const std::vector<double> eps = desk ? std::vector<double>{0.9, 1.1, 1.3}
                                       : std::vector<double>{0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
  const std::vector<int> K = desk ? std::vector<int>{2, 4, 6, 8} : range(1, 20);
  const std::vector<int> L = desk ? std::vector<int>{10, 20, 30, 40} : range(5, 100, 5);
  std::vector<ExperimentConfig> out;
  for (const auto& t : targets) {
    const std::string stem = "table1-" + t.label();
    out.push_back(aaps_config(stem + "-aaps", t, desk, eps, K));
    out.push_back(hmc_config(stem + "-hmc", t, desk, eps, L, false));
    out.push_back(hmc_config(stem + "-hmc_bl", t, desk, eps, L, true));
    out.push_back(nuts_config(stem + "-nuts", t, desk, eps));
  }
  return out;
}

std::vector<ExperimentConfig> table2(bool desk) {
  TargetSpec t;
  t.family = "sv";
  t.sv_length = desk ? 100 : 1000;
  t.sv_seed = 2021;
  const std::vector<double> eps = desk ? std::vector<double>{0.1} : std::vector<double>{0.06, 0.08, 0.1, 0.12};
  std::vector<ExperimentConfig> out = {
      aaps_config("table2-sv-aaps", t, desk, eps, desk ? std::vector<int>{3} : range(1, 10)),
      hmc_config("table2-sv-hmc_bl", t, desk, eps, desk ? std::vector<int>{20} : range(10, 100, 10), true),
      nuts_config("table2-sv-nuts", t, desk, eps)};
  for (auto& c : out) {
    c.run.iterations = desk ? 2000 : 100000;
    c.run.replicates = desk ? 3 : 10;
  }
  return out;
}

std::vector<ExperimentConfig> table3(bool desk) {
  std::vector<ExperimentConfig> out;
  for (double a : {7.0, 10.0, 15.0}) {
    TargetSpec t;
    t.family = "bimodal";
    t.dimension = 40;
    t.separation = a;
    const std::string stem = "table3-bimodal-a" + std::to_string(static_cast<int>(a));
    const std::vector<double> eps = desk ? std::vector<double>{1.0} : std::vector<double>{0.6, 0.8, 1.0, 1.2, 1.4};
    out.push_back(aaps_config(stem + "-aaps", t, desk, eps, desk ? std::vector<int>{1, 3} : range(0, 10)));
    out.push_back(hmc_config(stem + "-hmc_bl", t, desk, eps,
                             desk ? std::vector<int>{20} : range(5, 60, 5), true));
    out.push_back(nuts_config(stem + "-nuts", t, desk, eps));
    for (auto& c : out) c.run.iterations = desk ? 5000 : 100000;
  }
  return out;
}

std::vector<ExperimentConfig> fig6(bool desk) {
  std::vector<ExperimentConfig> out;
  for (double xi : {10.0, 20.0}) {
    const TargetSpec t = product("skew_gaussian", "VAR", 40, xi);
    const std::string stem = "fig6-kdiag-xi" + std::to_string(static_cast<int>(xi));
    ExperimentConfig diag = aaps_config(stem + "-diagnostic", t, desk, {1.0}, {desk ? 30 : 60});
    diag.run.iterations = desk ? 10000 : 100000;
    ExperimentConfig grid = aaps_config(stem + "-grid", t, desk, {1.0},
                                        desk ? std::vector<int>{0, 1, 2, 3, 4, 6, 8, 10} : range(0, 30));
    grid.run.iterations = desk ? 5000 : 100000;
    out.push_back(diag);
    out.push_back(grid);
  }
  return out;
}

std::vector<ExperimentConfig> apogee(bool desk) {
  std::vector<ExperimentConfig> out;
  for (const char* law : {"constant:1", "two_point:1:9"}) {
    ExperimentConfig c;
    c.name = std::string("apogee-rate-") + (law[0] == 'c' ? "constant" : "two_point");
    c.run.experiment = "apogee_rate";
    c.run.seed = 20210101;
    c.apogee.precision = law;
    c.apogee.dimension = 100;
    c.apogee.window = desk ? 200.0 : 1000.0;
    c.apogee.replicates = desk ? 10 : 50;
    c.apogee.covariance_samples = desk ? 20000 : 200000;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<ExperimentConfig> preset(const std::string& name, bool desk_scale) {
  std::vector<ExperimentConfig> out;
  if (name == "fig1") out = fig1(desk_scale);
  else if (name == "fig2-weights") out = fig2(desk_scale);
  else if (name == "table1") out = table1(desk_scale);
  else if (name == "table2-sv") out = table2(desk_scale);
  else if (name == "table3-bimodal") out = table3(desk_scale);
  else if (name == "fig6-kdiag") out = fig6(desk_scale);
  else if (name == "apogee-rate") out = apogee(desk_scale);
  else {
    std::string valid;
    for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + valid);
  }
  for (const auto& c : out) c.validate();
  return out;
}

}  // namespace aaps::bench

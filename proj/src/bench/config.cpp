#include "aaps/bench/config.hpp"

#include <cctype>
#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "aaps/baselines.hpp"
#include "aaps/sv_model.hpp"

namespace aaps::bench {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a number");
  }
}

long long to_integer(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': '" + text + "' is not an integer");
  }
}

template <typename T, typename Convert>
std::vector<T> list_of(const std::string& key, const std::string& text, Convert convert) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) out.push_back(convert(key, item));
  if (out.empty()) throw std::invalid_argument("config key '" + key + "' has an empty list");
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string v = lower(text);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': '" + text + "' is not a boolean");
}

// Shortest text that reads back to the same value.
std::string num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}
std::string num(int v) { return std::to_string(v); }
std::string num(const std::string& v) { return v; }

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + num(values[i]);
  return s;
}

const std::vector<std::string> kTargetKeys = {
    "family", "dimension", "xi", "progression", "jitter_seed", "skew_alpha", "beta",
    "separation", "second_variance", "sv_length", "sv_data", "sv_seed", "sv_phi", "sv_kappa",
    "sv_sigma"};
const std::vector<std::string> kSamplerKeys = {"kind", "scheme", "eps", "K", "L", "delta",
                                               "blur_lo", "blur_hi", "max_depth", "path_mode"};
const std::vector<std::string> kRunKeys = {"name", "experiment", "iterations", "burn_in",
                                           "replicates", "seed", "thin", "write_samples"};
const std::vector<std::string> kApogeeKeys = {"precision", "dimension", "window", "replicates",
                                              "lags", "covariance_samples"};

void check_keys(const pt::ptree& section, const std::string& name,
                const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : section) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == key;
    if (!ok) throw std::invalid_argument("unknown key '" + key + "' in section [" + name + "]");
  }
}

}  // namespace

std::string TargetSpec::label() const {
  std::ostringstream s;
  if (family == "sv") {
    s << "sv_T" << sv_length;
  } else if (family == "rosenbrock" || family == "radford_neal" || family == "bimodal") {
    s << family << "_d" << dimension;
    if (family == "radford_neal") s << "_xi" << xi;
    if (family == "bimodal") s << "_a" << separation;
  } else {
    s << family << '_' << progression << "_d" << dimension << "_xi" << xi;
  }
  return s.str();
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Aaps: return "aaps";
    case SamplerKind::Hmc: return "hmc";
    case SamplerKind::BlurredHmc: return "blurred_hmc";
    case SamplerKind::Nuts: return "nuts";
  }
  return "unknown";
}

SamplerKind parse_sampler_kind(const std::string& text) {
  const std::string v = lower(text);
  if (v == "aaps") return SamplerKind::Aaps;
  if (v == "hmc") return SamplerKind::Hmc;
  if (v == "blurred_hmc" || v == "hmc-bl" || v == "hmc_bl") return SamplerKind::BlurredHmc;
  if (v == "nuts") return SamplerKind::Nuts;
  throw std::invalid_argument("unknown sampler kind '" + text +
                              "' (expected aaps, hmc, blurred_hmc or nuts)");
}

std::uint64_t ExperimentConfig::burn_in() const {
  return run.burn_in ? *run.burn_in : run.iterations / 10;
}

void ExperimentConfig::validate() const {
  if (run.experiment == "apogee_rate") {
    parse_precision(apogee.precision);
    if (apogee.dimension < 1) throw std::invalid_argument("apogee.dimension must be positive");
    if (!(apogee.window > 0.0)) throw std::invalid_argument("apogee.window must be positive");
    if (apogee.replicates < 2) throw std::invalid_argument("apogee.replicates must be >= 2");
    return;
  }
  if (run.experiment != "sampling") {
    throw std::invalid_argument("run.experiment must be 'sampling' or 'apogee_rate'");
  }
  static const std::vector<std::string> families = {
      "gaussian", "logistic", "skew_gaussian", "rosenbrock", "radford_neal", "bimodal", "sv"};
  if (std::find(families.begin(), families.end(), target.family) == families.end()) {
    throw std::invalid_argument("unknown target family '" + target.family + "'");
  }
  if (run.replicates < 1) throw std::invalid_argument("run.replicates must be >= 1");
  if (run.thin < 1) throw std::invalid_argument("run.thin must be >= 1");
  if (run.iterations > 0 && burn_in() >= run.iterations) {
    throw std::invalid_argument("run.burn_in must be smaller than run.iterations");
  }
  if (run.iterations == 0 && burn_in() > 0) {
    throw std::invalid_argument("run.burn_in must be 0 when run.iterations is 0");
  }
  if (sampler.eps.empty()) throw std::invalid_argument("sampler.eps grid is empty");
  for (double e : sampler.eps) {
    if (!(e > 0.0)) throw std::invalid_argument("sampler.eps values must be positive");
  }
  if (sampler.kind == SamplerKind::Aaps) {
    if (sampler.K.empty() || sampler.schemes.empty()) {
      throw std::invalid_argument("sampler.K and sampler.scheme grids must be non-empty");
    }
    for (int k : sampler.K) {
      if (k < 0) throw std::invalid_argument("sampler.K values must be >= 0");
    }
  }
  if (sampler.kind == SamplerKind::Hmc || sampler.kind == SamplerKind::BlurredHmc) {
    if (sampler.L.empty()) throw std::invalid_argument("sampler.L grid is empty");
    for (int l : sampler.L) {
      if (l == 0) throw std::invalid_argument("sampler.L values must be non-zero");
    }
  }
  if (!(sampler.delta > 0.0)) throw std::invalid_argument("sampler.delta must be positive");
  if (sampler.max_depth < 1) throw std::invalid_argument("sampler.max_depth must be >= 1");
  if (!target.is_sv() && target.dimension < 1) {
    throw std::invalid_argument("target.dimension must be positive");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (section != "target" && section != "sampler" && section != "run" && section != "apogee") {
      throw std::invalid_argument("unknown config section [" + section + "]");
    }
  }
  ExperimentConfig c;
  const pt::ptree empty;
  const pt::ptree& t = tree.get_child("target", empty);
  const pt::ptree& s = tree.get_child("sampler", empty);
  const pt::ptree& r = tree.get_child("run", empty);
  const pt::ptree& a = tree.get_child("apogee", empty);
  check_keys(t, "target", kTargetKeys);
  check_keys(s, "sampler", kSamplerKeys);
  check_keys(r, "run", kRunKeys);
  check_keys(a, "apogee", kApogeeKeys);

  auto str = [](const pt::ptree& sec, const std::string& key) -> std::optional<std::string> {
    if (auto v = sec.get_optional<std::string>(key)) return trim(*v);
    return std::nullopt;
  };
  auto num = [&](const pt::ptree& sec, const std::string& key, double& out) {
    if (auto v = str(sec, key)) out = to_double(key, *v);
  };
  auto integer = [&](const pt::ptree& sec, const std::string& key, auto& out) {
    if (auto v = str(sec, key)) {
      const long long n = to_integer(key, *v);
      using T = std::remove_reference_t<decltype(out)>;
      if (std::is_unsigned_v<T> && n < 0) {
        throw std::invalid_argument("config key '" + key + "' must be non-negative");
      }
      out = static_cast<T>(n);
    }
  };

  if (auto v = str(t, "family")) c.target.family = lower(*v);
  integer(t, "dimension", c.target.dimension);
  num(t, "xi", c.target.xi);
  if (auto v = str(t, "progression")) c.target.progression = *v;
  integer(t, "jitter_seed", c.target.jitter_seed);
  num(t, "skew_alpha", c.target.skew_alpha);
  num(t, "beta", c.target.beta);
  num(t, "separation", c.target.separation);
  num(t, "second_variance", c.target.second_variance);
  integer(t, "sv_length", c.target.sv_length);
  if (auto v = str(t, "sv_data")) c.target.sv_data = *v;
  integer(t, "sv_seed", c.target.sv_seed);
  num(t, "sv_phi", c.target.sv_phi);
  num(t, "sv_kappa", c.target.sv_kappa);
  num(t, "sv_sigma", c.target.sv_sigma);

  if (auto v = str(s, "kind")) c.sampler.kind = parse_sampler_kind(*v);
  if (auto v = str(s, "scheme")) {
    c.sampler.schemes.clear();
    for (const auto& item : split(*v, ',')) c.sampler.schemes.push_back(parse_weight_scheme(item));
    if (c.sampler.schemes.empty()) throw std::invalid_argument("config key 'scheme' is empty");
  }
  if (auto v = str(s, "eps")) c.sampler.eps = list_of<double>("eps", *v, to_double);
  if (auto v = str(s, "K")) {
    c.sampler.K.clear();
    for (long long k : list_of<long long>("K", *v, to_integer)) c.sampler.K.push_back(static_cast<int>(k));
  }
  if (auto v = str(s, "L")) {
    c.sampler.L.clear();
    for (long long l : list_of<long long>("L", *v, to_integer)) c.sampler.L.push_back(static_cast<int>(l));
  }
  num(s, "delta", c.sampler.delta);
  num(s, "blur_lo", c.sampler.blur_lo);
  num(s, "blur_hi", c.sampler.blur_hi);
  integer(s, "max_depth", c.sampler.max_depth);
  if (auto v = str(s, "path_mode")) {
    const std::string m = lower(*v);
    if (m == "streaming") {
      c.sampler.path_mode = PathMode::Streaming;
    } else if (m == "stored") {
      c.sampler.path_mode = PathMode::Stored;
    } else {
      throw std::invalid_argument("sampler.path_mode must be 'streaming' or 'stored'");
    }
  }

  if (auto v = str(r, "name")) c.name = *v;
  if (auto v = str(r, "experiment")) c.run.experiment = lower(*v);
  integer(r, "iterations", c.run.iterations);
  if (auto v = str(r, "burn_in")) {
    const long long n = to_integer("burn_in", *v);
    if (n < 0) throw std::invalid_argument("config key 'burn_in' must be non-negative");
    c.run.burn_in = static_cast<std::uint64_t>(n);
  }
  integer(r, "replicates", c.run.replicates);
  integer(r, "seed", c.run.seed);
  integer(r, "thin", c.run.thin);
  if (auto v = str(r, "write_samples")) c.run.write_samples = to_bool("write_samples", *v);

  if (auto v = str(a, "precision")) c.apogee.precision = *v;
  integer(a, "dimension", c.apogee.dimension);
  num(a, "window", c.apogee.window);
  integer(a, "replicates", c.apogee.replicates);
  if (auto v = str(a, "lags")) c.apogee.lags = list_of<double>("lags", *v, to_double);
  integer(a, "covariance_samples", c.apogee.covariance_samples);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(const ExperimentConfig& c, std::ostream& out) {
  std::vector<std::string> schemes;
  for (auto s : c.sampler.schemes) schemes.push_back(std::to_string(static_cast<int>(s)));
  out << "[target]\n"
      << "family = " << c.target.family << '\n'
      << "dimension = " << c.target.dimension << '\n'
      << "xi = " << num(c.target.xi) << '\n'
      << "progression = " << c.target.progression << '\n'
      << "jitter_seed = " << c.target.jitter_seed << '\n'
      << "skew_alpha = " << num(c.target.skew_alpha) << '\n'
      << "beta = " << num(c.target.beta) << '\n'
      << "separation = " << num(c.target.separation) << '\n'
      << "second_variance = " << num(c.target.second_variance) << '\n'
      << "sv_length = " << c.target.sv_length << '\n';
  if (!c.target.sv_data.empty()) out << "sv_data = " << c.target.sv_data << '\n';
  out << "sv_seed = " << c.target.sv_seed << '\n'
      << "sv_phi = " << num(c.target.sv_phi) << '\n'
      << "sv_kappa = " << num(c.target.sv_kappa) << '\n'
      << "sv_sigma = " << num(c.target.sv_sigma) << "\n\n";
  out << "[sampler]\n"
      << "kind = " << to_string(c.sampler.kind) << '\n'
      << "scheme = " << join(schemes) << '\n'
      << "eps = " << join(c.sampler.eps) << '\n'
      << "K = " << join(c.sampler.K) << '\n'
      << "L = " << join(c.sampler.L) << '\n'
      << "delta = " << num(c.sampler.delta) << '\n'
      << "blur_lo = " << num(c.sampler.blur_lo) << '\n'
      << "blur_hi = " << num(c.sampler.blur_hi) << '\n'
      << "max_depth = " << c.sampler.max_depth << '\n'
      << "path_mode = " << (c.sampler.path_mode == PathMode::Stored ? "stored" : "streaming")
      << "\n\n";
  out << "[run]\n"
      << "name = " << c.name << '\n'
      << "experiment = " << c.run.experiment << '\n'
      << "iterations = " << c.run.iterations << '\n'
      << "burn_in = " << c.burn_in() << '\n'
      << "replicates = " << c.run.replicates << '\n'
      << "seed = " << c.run.seed << '\n'
      << "thin = " << c.run.thin << '\n'
      << "write_samples = " << (c.run.write_samples ? "true" : "false") << "\n\n";
  out << "[apogee]\n"
      << "precision = " << c.apogee.precision << '\n'
      << "dimension = " << c.apogee.dimension << '\n'
      << "window = " << num(c.apogee.window) << '\n'
      << "replicates = " << c.apogee.replicates << '\n'
      << "lags = " << join(c.apogee.lags) << '\n'
      << "covariance_samples = " << c.apogee.covariance_samples << '\n';
}

PrecisionDistribution parse_precision(const std::string& text) {
  const auto parts = split(text, ':');
  auto bad = [&]() {
    return std::invalid_argument("bad precision law '" + text +
                                 "' (constant:<v>, two_point:<a>:<b>[:<p>], uniform:<lo>:<hi>)");
  };
  if (parts.empty()) throw bad();
  const std::string kind = lower(parts[0]);
  std::vector<double> v;
  for (std::size_t i = 1; i < parts.size(); ++i) v.push_back(to_double("precision", parts[i]));
  if (kind == "constant" && v.size() == 1) return PrecisionDistribution::constant(v[0]);
  if (kind == "two_point" && v.size() == 2) return PrecisionDistribution::two_point(v[0], v[1]);
  if (kind == "two_point" && v.size() == 3) return PrecisionDistribution::two_point(v[0], v[1], v[2]);
  if (kind == "uniform" && v.size() == 2) return PrecisionDistribution::uniform(v[0], v[1]);
  throw bad();
}

TargetPtr build_target(const TargetSpec& spec) {
  const std::string& f = spec.family;
  if (f == "gaussian" || f == "logistic" || f == "skew_gaussian") {
    ScaleProgression prog;
    prog.kind = parse_progression_kind(spec.progression);
    prog.xi = spec.xi;
    prog.dimension = spec.dimension;
    prog.jitter_seed = spec.jitter_seed;
    return make_product_target(parse_component_family(f), prog, spec.skew_alpha);
  }
  if (f == "rosenbrock") return make_modified_rosenbrock(spec.dimension, spec.beta);
  if (f == "radford_neal") return make_radford_neal_gaussian(spec.dimension, spec.xi);
  if (f == "bimodal") {
    return std::make_shared<BimodalMixture>(spec.dimension, spec.separation, spec.second_variance);
  }
  if (f == "sv") {
    SVModelData data = spec.sv_data.empty()
                           ? simulate_sv_data(spec.sv_length, spec.sv_phi, spec.sv_kappa,
                                              spec.sv_sigma, spec.sv_seed)
                           : read_sv_csv(spec.sv_data);
    return make_sv_posterior(std::move(data));
  }
  throw std::invalid_argument("unknown target family '" + f +
                              "' (expected gaussian, logistic, skew_gaussian, rosenbrock, "
                              "radford_neal, bimodal or sv)");
}

std::vector<GridPoint> expand_grid(const SamplerSpec& spec) {
  std::vector<GridPoint> grid;
  auto add = [&](GridPoint p) {
    p.index = grid.size();
    grid.push_back(p);
  };
  switch (spec.kind) {
    case SamplerKind::Aaps:
      for (auto scheme : spec.schemes) {
        for (double eps : spec.eps) {
          for (int K : spec.K) add({0, SamplerKind::Aaps, scheme, eps, K, 0});
        }
      }
      break;
    case SamplerKind::Hmc:
    case SamplerKind::BlurredHmc:
      for (double eps : spec.eps) {
        for (int L : spec.L) {
          const bool blur = spec.kind == SamplerKind::BlurredHmc || L < 0;
          const int signed_L = blur ? -std::abs(L) : L;
          add({0, blur ? SamplerKind::BlurredHmc : SamplerKind::Hmc, WeightScheme::PiSJD, eps, 0,
               signed_L});
        }
      }
      break;
    case SamplerKind::Nuts:
      for (double eps : spec.eps) add({0, SamplerKind::Nuts, WeightScheme::PiSJD, eps, 0, 0});
      break;
  }
  return grid;
}

std::unique_ptr<Kernel> build_kernel(const SamplerSpec& spec, const GridPoint& point,
                                     const TargetPtr& target) {
  switch (point.kind) {
    case SamplerKind::Aaps: {
      AapsConfig c;
      c.K = point.K;
      c.eps = point.eps;
      c.delta = spec.delta;
      c.scheme = point.scheme;
      c.mode = spec.path_mode;
      return std::make_unique<AapsKernel>(target, c);
    }
    case SamplerKind::Hmc:
    case SamplerKind::BlurredHmc: {
      HmcConfig c;
      c.eps = point.eps;
      c.L = std::abs(point.L);
      c.blur = point.kind == SamplerKind::BlurredHmc;
      c.blur_lo = spec.blur_lo;
      c.blur_hi = spec.blur_hi;
      return std::make_unique<HmcKernel>(target, c);
    }
    case SamplerKind::Nuts: {
      NutsConfig c;
      c.eps = point.eps;
      c.max_depth = spec.max_depth;
      c.delta_max = spec.delta;
      return std::make_unique<NutsKernel>(target, c);
    }
  }
  throw std::logic_error("unhandled sampler kind");
}

}  // namespace aaps::bench

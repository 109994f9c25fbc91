#include "spavg/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "spavg/kernels.hpp"
#include "spavg/oracle.hpp"
#include "spavg/quad.hpp"
#include "spavg/rng.hpp"
#include "spavg/stats.hpp"
#include "spavg/version.hpp"

namespace spavg::experiment {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "' needs a finite number, got '" +
                      value + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v) {
    throw ConfigError("config key '" + key + "' needs an integer, got '" + value +
                      "'");
  }
  return l;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("config key '" + key + "' needs an unsigned integer, got '" +
                      value + "'");
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (errno != 0 || *end != '\0') {
    throw ConfigError("config key '" + key + "' is out of range: '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<double> parse_radii(const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double("radii", item));
  }
  if (out.empty()) throw ConfigError("config key 'radii' needs at least one value");
  return out;
}

std::string join_radii(const std::vector<double>& radii) {
  std::string out;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i) out += ',';
    out += format_value(radii[i]);
  }
  return out;
}

const char* equation_name(Equation eq) {
  return eq == Equation::Heat ? "heat" : "wave";
}

const char* boundary_name(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "dirichlet";
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

oracle::ModelTag model_of(const ExperimentConfig& config) {
  return {config.equation, config.noise};
}

std::vector<double> column_average(const SampleSet& set) {
  std::vector<double> out(set.pairs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = set.pairs[i].spatial_average;
  return out;
}

std::vector<double> column_point(const SampleSet& set) {
  std::vector<double> out(set.pairs.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = set.pairs[i].point_deviation;
  return out;
}

const SampleSet& set_for(const EnsembleMap& ensembles, double R) {
  const auto it = ensembles.find(R);
  if (it == ensembles.end()) {
    throw ConfigError("no ensemble was run for radius " + format_value(R));
  }
  return it->second;
}

std::vector<double> standardized_average(const ExperimentConfig& config,
                                         const SampleSet& set, double sigma_oracle) {
  if (config.sigma.is_constant_one()) {
    return stats::standardize(column_average(set), stats::SigmaMode::Oracle,
                              sigma_oracle);
  }
  return stats::standardize(column_average(set), stats::SigmaMode::Empirical);
}

// ------------------------------ output files ------------------------------

struct OutputDoc {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Footer cells aligned with columns; empty string marks "no value".
  std::vector<std::string> footer;
  std::vector<std::pair<std::string, double>> fits;
  std::vector<std::pair<std::string, bool>> verdicts;
};

std::string csv_document(const ExperimentConfig& config, const OutputDoc& doc) {
  std::string out;
  out += "# spavg ";
  out += kVersion;
  out += "\n# command: " + doc.command + "\n";
  out += "# config_hash: " + config.config_hash_hex() + "\n";
  out += "# master_seed: " + std::to_string(config.master_seed) + "\n";
  for (const std::string& line : config.canonical_lines()) {
    out += "# config: " + line + "\n";
  }
  for (std::size_t c = 0; c < doc.columns.size(); ++c) {
    if (c) out += ',';
    out += doc.columns[c];
  }
  out += '\n';
  for (const std::vector<double>& row : doc.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_value(row[c]);
    }
    out += '\n';
  }
  if (!doc.footer.empty()) {
    for (std::size_t c = 0; c < doc.footer.size(); ++c) {
      if (c) out += ',';
      out += doc.footer[c];
    }
    out += '\n';
  }
  return out;
}

std::string json_document(const ExperimentConfig& config, const OutputDoc& doc) {
  nlohmann::json j;
  j["artifact"] = "spavg";
  j["version"] = kVersion;
  j["command"] = doc.command;
  j["config_hash"] = config.config_hash_hex();
  j["master_seed"] = config.master_seed;
  j["config_lines"] = config.canonical_lines();
  j["columns"] = doc.columns;
  j["rows"] = doc.rows;
  if (!doc.fits.empty()) {
    nlohmann::json fits = nlohmann::json::object();
    for (const auto& [name, value] : doc.fits) fits[name] = value;
    j["fits"] = fits;
  }
  if (!doc.verdicts.empty()) {
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& [name, value] : doc.verdicts) verdicts[name] = value;
    j["verdicts"] = verdicts;
  }
  return j.dump(2) + "\n";
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw Error("cannot open output file " + path.string());
  stream << content;
  if (!stream) throw Error("failed writing output file " + path.string());
}

void write_outputs(const ExperimentConfig& config, const OutputDoc& doc,
                   std::ostream& out) {
  const fs::path dir(config.out_dir);
  write_file(dir / (doc.command + ".csv"), csv_document(config, doc));
  write_file(dir / (doc.command + ".json"), json_document(config, doc));
  out << doc.command << ": wrote " << (dir / (doc.command + ".csv")).string()
      << " and " << (dir / (doc.command + ".json")).string() << "\n";
  out << "  config_hash " << config.config_hash_hex() << "\n";
}

}  // namespace

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

ExperimentConfig ExperimentConfig::defaults(Equation equation) {
  ExperimentConfig config;
  config.equation = equation;
  if (equation == Equation::Wave) {
    config.t = 1.0;
    config.dx = 1.0 / 32.0;
  }
  return config;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "equation") {
    if (value == "heat") {
      equation = Equation::Heat;
    } else if (value == "wave") {
      equation = Equation::Wave;
    } else {
      throw ConfigError("equation must be 'heat' or 'wave', got '" + value + "'");
    }
  } else if (key == "noise") {
    if (value == "white") {
      noise.kind = CovarianceModel::Kind::White;
    } else if (value == "riesz") {
      noise.kind = CovarianceModel::Kind::Riesz;
      if (noise.alpha == 0.0) noise.alpha = 0.5;
    } else {
      throw ConfigError("noise must be 'white' or 'riesz', got '" + value + "'");
    }
  } else if (key == "alpha") {
    noise.alpha = parse_double(key, value);
  } else if (key == "sigma") {
    if (value == "constant") {
      sigma.kind = SigmaFunction::Kind::Constant;
    } else if (value == "affine") {
      sigma.kind = SigmaFunction::Kind::Affine;
    } else if (value == "smooth_bounded") {
      sigma.kind = SigmaFunction::Kind::SmoothBounded;
    } else {
      throw ConfigError(
          "sigma must be 'constant', 'affine' or 'smooth_bounded', got '" + value +
          "'");
    }
  } else if (key == "sigma_p0") {
    sigma.p0 = parse_double(key, value);
  } else if (key == "sigma_p1") {
    sigma.p1 = parse_double(key, value);
  } else if (key == "boundary") {
    if (value == "periodic") {
      boundary = Boundary::Periodic;
    } else if (value == "dirichlet") {
      boundary = Boundary::Dirichlet;
    } else {
      throw ConfigError("boundary must be 'periodic' or 'dirichlet', got '" + value +
                        "'");
    }
  } else if (key == "t") {
    t = parse_double(key, value);
  } else if (key == "dx") {
    dx = parse_double(key, value);
  } else if (key == "x0") {
    x0 = parse_double(key, value);
  } else if (key == "radii") {
    radii = parse_radii(value);
  } else if (key == "replicas") {
    replicas = parse_long(key, value);
  } else if (key == "permutations") {
    permutations = static_cast<int>(parse_long(key, value));
  } else if (key == "master_seed") {
    master_seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "threads") {
    threads = static_cast<int>(parse_long(key, value));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  if (!(dx > 0.0)) throw ConfigError("dx must be positive");
  if (!std::isfinite(x0)) throw ConfigError("x0 must be finite");
  if (replicas < 2) throw ConfigError("replicas must be at least 2");
  if (permutations < 1) throw ConfigError("permutations must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (radii.empty()) throw ConfigError("radii must not be empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ConfigError("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw ConfigError("radii must be strictly increasing");
    }
    const double cells = radii[i] / dx;
    if (std::fabs(cells - std::round(cells)) > 1e-9) {
      throw ConfigError("radius " + format_value(radii[i]) +
                        " is not a whole number of cells");
    }
  }
  if (!noise.is_white()) {
    CovarianceModel::riesz(noise.alpha);  // range check
  }
  grid();  // margin, stability and divisibility checks
}

std::vector<std::string> ExperimentConfig::canonical_lines() const {
  std::vector<std::string> lines;
  if (!noise.is_white()) lines.push_back("alpha=" + format_value(noise.alpha));
  lines.push_back(std::string("boundary=") + boundary_name(boundary));
  lines.push_back("dx=" + format_value(dx));
  lines.push_back(std::string("equation=") + equation_name(equation));
  lines.push_back("master_seed=" + std::to_string(master_seed));
  lines.push_back(std::string("noise=") + (noise.is_white() ? "white" : "riesz"));
  lines.push_back("permutations=" + std::to_string(permutations));
  lines.push_back("radii=" + join_radii(radii));
  lines.push_back("replicas=" + std::to_string(replicas));
  lines.push_back(std::string("sigma=") + sigma.kind_name());
  lines.push_back("sigma_p0=" + format_value(sigma.p0));
  lines.push_back("sigma_p1=" + format_value(sigma.p1));
  lines.push_back("t=" + format_value(t));
  lines.push_back("x0=" + format_value(x0));
  return lines;
}

std::uint64_t ExperimentConfig::config_hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  const auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 1099511628211ULL;
  };
  for (const std::string& line : canonical_lines()) {
    for (char c : line) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

std::string ExperimentConfig::config_hash_hex() const {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "0x%016" PRIx64, config_hash());
  return buffer;
}

GridSpec ExperimentConfig::grid() const {
  const double r_max = *std::max_element(radii.begin(), radii.end());
  return make_default_grid(equation, dx, t, r_max, x0);
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig config;
  config.grid = grid();
  config.noise = noise;
  config.sigma = sigma;
  config.boundary = boundary;
  return config;
}

ExperimentConfig build_config(const std::optional<std::string>& config_path,
                              const std::vector<std::string>& assignments,
                              std::optional<std::uint64_t> seed,
                              const std::optional<std::string>& out_dir,
                              std::optional<int> threads) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (config_path) {
    std::ifstream stream(*config_path);
    if (!stream) throw ConfigError("cannot read config file " + *config_path);
    std::string line;
    while (std::getline(stream, line)) {
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      pairs.push_back(split_assignment(line));
    }
  }
  for (const std::string& text : assignments) {
    pairs.push_back(split_assignment(text));
  }

  Equation equation = Equation::Heat;
  for (const auto& [key, value] : pairs) {
    if (key == "equation") {
      ExperimentConfig probe;
      probe.apply(key, value);
      equation = probe.equation;
    }
  }
  ExperimentConfig config = ExperimentConfig::defaults(equation);
  for (const auto& [key, value] : pairs) config.apply(key, value);
  if (seed) config.master_seed = *seed;
  if (out_dir) config.out_dir = *out_dir;
  if (threads) config.threads = *threads;
  config.validate();
  return config;
}

EnsembleMap run_config_ensemble(const ExperimentConfig& config) {
  EnsembleMap ensembles =
      run_ensemble(config.solver_config(), config.replicas, config.radii, config.t,
                   config.master_seed, config.threads);
  const std::uint64_t hash = config.config_hash();
  for (auto& [radius, set] : ensembles) set.config_hash = hash;
  return ensembles;
}

VarianceScalingResult variance_scaling_rows(const ExperimentConfig& config,
                                            const EnsembleMap& ensembles) {
  if (!config.sigma.is_constant_one()) {
    throw NonAdditiveSigma("variance scaling compares against the exact law, "
                           "which requires sigma = constant 1");
  }
  const oracle::ModelTag model = model_of(config);
  VarianceScalingResult result;
  std::vector<double> oracle_column;
  std::vector<double> empirical_column;
  for (double R : config.radii) {
    const SampleSet& set = set_for(ensembles, R);
    const double sigma_oracle = oracle::sigma_R_exact(model, config.t, R);
    const double sigma_empirical =
        std::sqrt(stats::variance(column_average(set)));
    VarianceScalingRow row;
    row.radius = R;
    row.sigma_oracle = sigma_oracle;
    row.sigma_empirical = sigma_empirical;
    row.se_empirical =
        sigma_empirical / std::sqrt(2.0 * static_cast<double>(set.pairs.size() - 1));
    result.rows.push_back(row);
    oracle_column.push_back(sigma_oracle);
    empirical_column.push_back(sigma_empirical);
  }
  result.slope_oracle = stats::loglog_fit(config.radii, oracle_column).slope;
  result.slope_empirical = stats::loglog_fit(config.radii, empirical_column).slope;
  return result;
}

CltRateResult clt_rate_rows(const ExperimentConfig& config,
                            const EnsembleMap& ensembles) {
  const oracle::ModelTag model = model_of(config);
  const bool additive = config.sigma.is_constant_one();
  CltRateResult result;
  std::vector<double> w1_col, sliced_col, cov_col;
  for (std::size_t idx = 0; idx < config.radii.size(); ++idx) {
    const double R = config.radii[idx];
    const SampleSet& set = set_for(ensembles, R);
    const double sigma_oracle =
        additive ? oracle::sigma_R_exact(model, config.t, R) : 0.0;
    const std::vector<double> f = standardized_average(config, set, sigma_oracle);
    const std::vector<double> u = column_point(set);
    CltRateRow row;
    row.radius = R;
    row.w1_marginal = stats::w1_to_std_normal(f);
    row.w1_sliced_product = stats::sliced_w1_joint(
        f, u, stats::ProductResample{},
        rng::stream_key(config.master_seed, static_cast<std::uint64_t>(idx), 101));
    row.cov_f_u = stats::covariance(f, u);
    result.rows.push_back(row);
    w1_col.push_back(row.w1_marginal);
    sliced_col.push_back(row.w1_sliced_product);
    cov_col.push_back(row.cov_f_u);
  }
  const auto fit_if_positive = [&](const std::vector<double>& ys)
      -> std::optional<double> {
    for (double y : ys) {
      if (!(y > 0.0)) return std::nullopt;
    }
    return stats::loglog_fit(config.radii, ys).slope;
  };
  result.slope_w1_marginal = fit_if_positive(w1_col);
  result.slope_w1_sliced = fit_if_positive(sliced_col);
  result.slope_cov = fit_if_positive(cov_col);
  return result;
}

IndependenceResult independence_rows(const ExperimentConfig& config,
                                     const EnsembleMap& ensembles) {
  const oracle::ModelTag model = model_of(config);
  const bool additive = config.sigma.is_constant_one();
  IndependenceResult result;
  for (std::size_t idx = 0; idx < config.radii.size(); ++idx) {
    const double R = config.radii[idx];
    const SampleSet& set = set_for(ensembles, R);
    const double sigma_oracle =
        additive ? oracle::sigma_R_exact(model, config.t, R) : 0.0;
    const std::vector<double> f = standardized_average(config, set, sigma_oracle);
    const std::vector<double> u = column_point(set);
    const stats::TestResult test = stats::independence_test(
        f, u, config.permutations,
        rng::stream_key(config.master_seed, static_cast<std::uint64_t>(idx), 202));
    IndependenceRow row;
    row.radius = R;
    row.dcov = stats::distance_covariance(f, u);
    row.p_value = test.p_value;
    row.corr_empirical = stats::correlation(f, u);
    row.corr_oracle =
        additive ? oracle::joint_gaussian_law(model, config.t, R, config.x0)
                       .correlation()
                 : std::numeric_limits<double>::quiet_NaN();
    result.rows.push_back(row);
  }
  result.smallest_radius_dependent = result.rows.front().p_value <= 0.01;
  result.largest_radius_independent = result.rows.back().p_value > 0.05;
  return result;
}

std::vector<OracleCompareRow> oracle_compare_rows(const ExperimentConfig& config,
                                                  const EnsembleMap& ensembles) {
  if (!config.sigma.is_constant_one()) {
    throw NonAdditiveSigma(
        "oracle comparison is exact only for sigma = constant 1");
  }
  const oracle::ModelTag model = model_of(config);
  const double var_u = oracle::pointwise_cov(model, config.t, 0.0);
  std::vector<OracleCompareRow> rows;
  for (double R : config.radii) {
    const SampleSet& set = set_for(ensembles, R);
    const std::vector<double> a = column_average(set);
    const std::vector<double> u = column_point(set);
    const double n = static_cast<double>(a.size());
    const double sigma_R = oracle::sigma_R_exact(model, config.t, R);

    OracleCompareRow row;
    row.radius = R;
    row.var_oracle = sigma_R * sigma_R;
    row.var_empirical = stats::variance(a);
    row.z_var = (row.var_empirical - row.var_oracle) /
                (row.var_oracle * std::sqrt(2.0 / (n - 1.0)));
    row.cov_oracle =
        oracle::cov_FRu_exact(model, config.t, R, config.x0) * sigma_R;
    row.cov_empirical = stats::covariance(a, u);
    const double se_cov = std::sqrt(
        (row.var_oracle * var_u + row.cov_oracle * row.cov_oracle) / (n - 1.0));
    row.z_cov = (row.cov_empirical - row.cov_oracle) / se_cov;
    row.corr_oracle = row.cov_oracle / (sigma_R * std::sqrt(var_u));
    row.corr_empirical = stats::correlation(a, u);
    row.z_corr = (std::atanh(row.corr_empirical) - std::atanh(row.corr_oracle)) *
                 std::sqrt(n - 3.0);
    rows.push_back(row);
  }
  return rows;
}

std::vector<KernelIdentityRow> kernel_identity_suite(bool inject_kernel_fault) {
  std::vector<KernelIdentityRow> rows;

  {
    KernelIdentityRow row;
    row.name = "heat_semigroup";
    row.tolerance = 1e-8;
    const double times[] = {0.1, 0.25, 0.5, 1.0};
    const double offsets[] = {0.0, 0.5, -0.7, 1.0, 2.0, 3.0};
    for (double t : times) {
      for (double s : times) {
        for (double w : offsets) {
          double residual;
          if (!inject_kernel_fault) {
            residual = kernels::heat_semigroup_residual(t, s, w).value;
          } else {
            const auto g = [](double tt, double x) {
              return kernels::heat_kernel(tt, x) + 1e-3;
            };
            const double center = w * s / (t + s);
            const double spread = std::sqrt(t * s / (t + s));
            const quad::IntegralResult conv = quad::quad_1d(
                [&](double y) { return g(t, w - y) * g(s, y); },
                center - 12.0 * spread, center + 12.0 * spread, 1e-12, 4000);
            residual = std::fabs(conv.value - g(t + s, w));
          }
          row.max_residual = std::max(row.max_residual, residual);
        }
      }
    }
    row.pass = row.max_residual < row.tolerance;
    rows.push_back(row);
  }

  {
    KernelIdentityRow row;
    row.name = "wave_overlap_quadrature";
    row.tolerance = 1e-10;
    rng::Stream stream(rng::stream_key(424242, 0, 0));
    for (int k = 0; k < 100; ++k) {
      const double s = 0.05 + 1.95 * stream.next_unit_pos();
      const double h = 3.0 * s * stream.next_unit_pos();
      const double closed = kernels::wave_overlap_integral(s, h);
      const double cuts[4] = {-s, s, h - s, h + s};
      const quad::IntegralResult r = quad::quad_1d_split(
          [&](double z) {
            return kernels::wave_kernel(s, z) * kernels::wave_kernel(s, h - z);
          },
          std::min(-s, h - s) - 0.25, std::max(s, h + s) + 0.25, cuts, 1e-13, 4000);
      row.max_residual = std::max(row.max_residual, std::fabs(closed - r.value));
    }
    row.pass = row.max_residual < row.tolerance;
    rows.push_back(row);
  }

  {
    KernelIdentityRow row;
    row.name = "wave_colored_scaling";
    row.tolerance = 1e-6;
    const double betas[] = {0.25, 0.5, 0.75};
    rng::Stream stream(rng::stream_key(424242, 1, 0));
    for (int k = 0; k < 100; ++k) {
      const double beta = betas[k % 3];
      const double tau = 0.2 + 1.3 * stream.next_unit_pos();
      const double delta = 1.8 * tau * stream.next_unit_pos();
      const double lambda = 0.3 + 2.7 * stream.next_unit_pos();
      const double base = kernels::wave_colored_overlap_exact(tau, delta, beta);
      const double scaled =
          kernels::wave_colored_overlap_exact(lambda * tau, lambda * delta, beta);
      const double expected = std::pow(lambda, 2.0 - beta) * base;
      row.max_residual = std::max(
          row.max_residual, std::fabs(scaled - expected) / std::fabs(expected));
    }
    row.pass = row.max_residual < row.tolerance;
    rows.push_back(row);
  }

  {
    KernelIdentityRow row;
    row.name = "wave_colored_quadrature";
    row.tolerance = 1e-6;
    const double points[][3] = {
        {1.0, 0.0, 0.5}, {0.7, 0.9, 0.25}, {1.2, 1.0, 0.75}, {0.5, 0.3, 0.5}};
    for (const double* p : points) {
      const double closed = kernels::wave_colored_overlap_exact(p[0], p[1], p[2]);
      const quad::IntegralResult brute =
          kernels::wave_colored_overlap(p[0], p[1], p[2]);
      row.max_residual = std::max(row.max_residual, std::fabs(closed - brute.value));
    }
    row.pass = row.max_residual < row.tolerance;
    rows.push_back(row);
  }

  return rows;
}

int cmd_kernels_check(bool inject_kernel_fault, std::ostream& out) {
  const std::vector<KernelIdentityRow> rows =
      kernel_identity_suite(inject_kernel_fault);
  out << "kernels-check\n";
  char line[128];
  std::snprintf(line, sizeof(line), "  %-26s %-14s %-10s %s\n", "identity",
                "max_residual", "tolerance", "status");
  out << line;
  bool all_pass = true;
  for (const KernelIdentityRow& row : rows) {
    std::snprintf(line, sizeof(line), "  %-26s %-14.3e %-10.0e %s\n",
                  row.name.c_str(), row.max_residual, row.tolerance,
                  row.pass ? "PASS" : "FAIL");
    out << line;
    all_pass = all_pass && row.pass;
  }
  out << (all_pass ? "all identities pass\n" : "identity check FAILED\n");
  return all_pass ? 0 : 1;
}

int cmd_variance_scaling(const ExperimentConfig& config, std::ostream& out) {
  const EnsembleMap ensembles = run_config_ensemble(config);
  const VarianceScalingResult result = variance_scaling_rows(config, ensembles);
  OutputDoc doc;
  doc.command = "variance-scaling";
  doc.columns = {"R", "sigma_oracle", "sigma_empirical", "se_empirical"};
  for (const VarianceScalingRow& row : result.rows) {
    doc.rows.push_back(
        {row.radius, row.sigma_oracle, row.sigma_empirical, row.se_empirical});
  }
  doc.footer = {"slope", format_value(result.slope_oracle),
                format_value(result.slope_empirical), ""};
  doc.fits = {{"sigma_oracle_slope", result.slope_oracle},
              {"sigma_empirical_slope", result.slope_empirical}};
  write_outputs(config, doc, out);
  out << "  slope_oracle " << format_value(result.slope_oracle)
      << "  slope_empirical " << format_value(result.slope_empirical) << "\n";
  return 0;
}

int cmd_clt_rate(const ExperimentConfig& config, std::ostream& out) {
  const EnsembleMap ensembles = run_config_ensemble(config);
  const CltRateResult result = clt_rate_rows(config, ensembles);
  OutputDoc doc;
  doc.command = "clt-rate";
  doc.columns = {"R", "w1_marginal", "w1_sliced_product", "cov_f_u"};
  for (const CltRateRow& row : result.rows) {
    doc.rows.push_back(
        {row.radius, row.w1_marginal, row.w1_sliced_product, row.cov_f_u});
  }
  doc.footer = {"slope",
                result.slope_w1_marginal ? format_value(*result.slope_w1_marginal)
                                         : std::string(),
                result.slope_w1_sliced ? format_value(*result.slope_w1_sliced)
                                       : std::string(),
                result.slope_cov ? format_value(*result.slope_cov) : std::string()};
  if (result.slope_w1_marginal) {
    doc.fits.emplace_back("w1_marginal_slope", *result.slope_w1_marginal);
  }
  if (result.slope_w1_sliced) {
    doc.fits.emplace_back("w1_sliced_product_slope", *result.slope_w1_sliced);
  }
  if (result.slope_cov) doc.fits.emplace_back("cov_f_u_slope", *result.slope_cov);
  write_outputs(config, doc, out);
  return 0;
}

int cmd_independence(const ExperimentConfig& config, std::ostream& out) {
  const EnsembleMap ensembles = run_config_ensemble(config);
  const IndependenceResult result = independence_rows(config, ensembles);
  OutputDoc doc;
  doc.command = "independence";
  doc.columns = {"R", "dcov", "p_value", "corr_empirical", "corr_oracle"};
  for (const IndependenceRow& row : result.rows) {
    doc.rows.push_back(
        {row.radius, row.dcov, row.p_value, row.corr_empirical, row.corr_oracle});
  }
  doc.verdicts = {{"smallest_radius_dependent", result.smallest_radius_dependent},
                  {"largest_radius_independent", result.largest_radius_independent}};
  write_outputs(config, doc, out);
  out << "  smallest_radius_dependent "
      << (result.smallest_radius_dependent ? "true" : "false")
      << "  largest_radius_independent "
      << (result.largest_radius_independent ? "true" : "false") << "\n";
  return 0;
}

int cmd_oracle_compare(const ExperimentConfig& config, std::ostream& out) {
  const EnsembleMap ensembles = run_config_ensemble(config);
  const std::vector<OracleCompareRow> rows = oracle_compare_rows(config, ensembles);
  OutputDoc doc;
  doc.command = "oracle-compare";
  doc.columns = {"R",       "var_empirical",  "var_oracle",  "z_var",
                 "cov_empirical", "cov_oracle", "z_cov",
                 "corr_empirical", "corr_oracle", "z_corr"};
  int within = 0;
  for (const OracleCompareRow& row : rows) {
    doc.rows.push_back({row.radius, row.var_empirical, row.var_oracle, row.z_var,
                        row.cov_empirical, row.cov_oracle, row.z_cov,
                        row.corr_empirical, row.corr_oracle, row.z_corr});
    within += (std::fabs(row.z_var) <= 3.0) + (std::fabs(row.z_cov) <= 3.0) +
              (std::fabs(row.z_corr) <= 3.0);
  }
  write_outputs(config, doc, out);
  out << "  z_cells_within_3 " << within << "/" << 3 * rows.size() << "\n";
  return 0;
}

}  // namespace spavg::experiment

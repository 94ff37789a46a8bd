#include "mixsde/cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "mixsde/csv.hpp"
#include "mixsde/errors.hpp"
#include "mixsde/fbm.hpp"
#include "mixsde/models.hpp"
#include "mixsde/moments.hpp"
#include "mixsde/parallel.hpp"
#include "mixsde/path_analysis.hpp"
#include "mixsde/rng.hpp"
#include "mixsde/solver.hpp"
#include "mixsde/validators.hpp"
#include "mixsde/young.hpp"

#ifndef MIXSDE_VERSION
#define MIXSDE_VERSION "0.0.0"
#endif

namespace mixsde {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kCommon = {"command", "seed", "workers", "output", "method", "cholesky_cap"};
const std::vector<std::string> kModelKeys = {"model", "model.*", "hurst", "holder_order"};

std::vector<std::string> allowed_keys(const std::string& command) {
  std::vector<std::string> keys = kCommon;
  auto add = [&keys](std::initializer_list<std::string> more) { keys.insert(keys.end(), more); };
  if (command == "fbm") add({"hurst", "steps", "T", "paths"});
  if (command == "integrate") add({"hurst", "holder_order", "T", "paths", "max_level", "tol", "rule", "love_pairs", "love_steps"});
  if (command == "solve") add({"levels", "paths"});
  if (command == "moments") add({"levels", "paths", "p", "exp_c", "exp_gamma"});
  if (command == "check-conditions") add({"set", "radius", "samples"});
  if (command == "fernique") add({"hurst", "holder_order", "steps", "T", "paths"});
  if (command == "boundary") add({"steps", "paths", "exp_c", "exp_gamma"});
  if (command == "solve" || command == "moments" || command == "check-conditions" || command == "boundary")
    keys.insert(keys.end(), kModelKeys.begin(), kModelKeys.end());
  return keys;
}

struct Context {
  std::string command;
  const Config& cfg;
  std::string hash;
  std::uint64_t seed;
  SynthesisOptions options;
  std::ostream& log;
};

SynthesisOptions synthesis_options(const Config& cfg) {
  SynthesisOptions o;
  if (cfg.has("method")) {
    try {
      o.method = synthesis_method_from_string(cfg.get_string("method"));
    } catch (const DomainError& e) {
      throw ConfigError(cfg.line_of("method"), e.what());
    }
  }
  o.cholesky_cap = cfg.get_size("cholesky_cap", o.cholesky_cap);
  o.workers = cfg.get_size("workers", 1);
  if (o.workers == 0) throw ConfigError(cfg.line_of("workers"), "'workers' must be at least 1");
  return o;
}

std::size_t positive_size(const Config& cfg, const std::string& key, std::size_t fallback) {
  const std::size_t v = cfg.get_size(key, fallback);
  if (v == 0) throw ConfigError(cfg.line_of(key), "'" + key + "' must be positive");
  return v;
}

double single_double(const Config& cfg, const std::string& key, double fallback) {
  if (!cfg.has(key)) return fallback;
  auto v = cfg.get_doubles(key);
  if (v.size() != 1) throw ConfigError(cfg.line_of(key), "'" + key + "' must be a single value here");
  return v[0];
}

std::vector<std::size_t> levels_of(const Config& cfg, std::vector<std::size_t> fallback) {
  auto levels = cfg.has("levels") ? cfg.get_sizes("levels") : fallback;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == 0 || (levels[i] & (levels[i] - 1)) != 0)
      throw ConfigError(cfg.line_of("levels"), "'levels' must be powers of two");
    if (i > 0 && levels[i] <= levels[i - 1]) throw ConfigError(cfg.line_of("levels"), "'levels' must increase");
  }
  return levels;
}

std::string model_name(const Config& cfg) { return cfg.get_string("model"); }

ZooModel model_from_config(const Config& cfg) {
  const std::string name = model_name(cfg);
  const auto names = zoo_model_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError(cfg.line_of("model"), "unknown zoo model '" + name + "'");
  ModelParams params;
  if (cfg.has("model.base")) params.base = cfg.get_string("model.base");
  if (name == "malliavin_linearized" &&
      (std::find(names.begin(), names.end(), params.base) == names.end() || params.base == name ||
       params.base == "stochvol"))
    throw ConfigError(cfg.line_of("model.base"), "'model.base' must name a single-stage zoo model");
  auto allowed = zoo_parameter_names(name);
  if (name == "malliavin_linearized") {
    auto more = zoo_parameter_names(params.base);
    allowed.insert(allowed.end(), more.begin(), more.end());
  }
  for (const auto& key : cfg.keys()) {
    if (key.rfind("model.", 0) != 0 || key == "model.base") continue;
    const std::string sub = key.substr(6);
    if (std::find(allowed.begin(), allowed.end(), sub) == allowed.end())
      throw ConfigError(cfg.line_of(key), "model '" + name + "' has no parameter '" + sub + "'");
    params.numbers[sub] = cfg.get_double(key);
  }
  for (const std::string key : {"hurst", "holder_order"}) {
    if (!cfg.has(key)) continue;
    if (params.numbers.count(key)) throw ConfigError(cfg.line_of(key), "'" + key + "' is also set as model." + key);
    params.numbers[key] = single_double(cfg, key, 0.0);
  }
  try {
    return model_zoo(name, params);
  } catch (const DomainError& e) {
    throw ConfigError(cfg.line_of("model"), e.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ResourceError("cannot write '" + path.string() + "'");
  return f;
}

// ---- fbm --------------------------------------------------------------------

void run_fbm(const Context& c, CsvWriter& csv) {
  const auto hursts = c.cfg.has("hurst") ? c.cfg.get_doubles("hurst") : std::vector<double>{0.75};
  const std::size_t steps = positive_size(c.cfg, "steps", 32);
  const std::size_t paths = positive_size(c.cfg, "paths", 10000);
  const double T = c.cfg.get_double("T", 1.0);
  std::vector<SynthesisMethod> methods = {SynthesisMethod::cholesky, SynthesisMethod::circulant};
  if (c.cfg.has("method")) methods = {c.options.method};
  const TimeGrid grid(T, steps);
  for (double h : hursts) {
    HurstParameter H(h);
    const Eigen::MatrixXd exact = fbm_covariance_matrix(grid, H);
    for (auto method : methods) {
      SynthesisOptions o = c.options;
      o.method = method;
      const PathBatch batch = generate_fbm(grid, H, paths, c.seed, o);
      double worst = 0.0;
      for (std::size_t i = 1; i <= steps; ++i) {
        for (std::size_t j = i; j <= steps; ++j) {
          double s = 0.0, s2 = 0.0;
          for (std::size_t p = 0; p < paths; ++p) {
            const double v = batch.at(p, i) * batch.at(p, j);
            s += v;
            s2 += v * v;
          }
          const double N = static_cast<double>(paths);
          const double mean = s / N;
          const double var = std::max(0.0, (s2 - N * mean * mean) / (N - 1.0));
          const double se = std::sqrt(var / N);
          const double target = exact(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
          const double dev = se > 0.0 ? (mean - target) / se : 0.0;
          worst = std::max(worst, std::abs(dev));
          csv.row({c.hash, h, to_string(method), static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j),
                   grid.time(i), grid.time(j), mean, target, se, dev});
        }
      }
      c.log << "fbm H=" << format_number(h) << " method=" << to_string(method)
            << " max|dev|/SE=" << format_number(worst) << "\n";
    }
  }
}

// ---- integrate ---------------------------------------------------------------

void run_integrate(const Context& c, CsvWriter& csv) {
  const double h = single_double(c.cfg, "hurst", 0.75);
  const HurstParameter H(h);
  const double mu = c.cfg.get_double("holder_order", h - 0.01);
  const double T = c.cfg.get_double("T", 1.0);
  const std::size_t paths = c.cfg.get_size("paths", 100);
  const std::size_t max_level = positive_size(c.cfg, "max_level", 12);
  const double tol = c.cfg.get_double("tol", 1e-3);
  const std::string rule_name = c.cfg.get_string("rule", "trapezoid");
  SumRule rule;
  if (rule_name == "trapezoid")
    rule = SumRule::trapezoid;
  else if (rule_name == "left")
    rule = SumRule::left;
  else
    throw ConfigError(c.cfg.line_of("rule"), "'rule' must be trapezoid or left");
  const std::size_t pairs = c.cfg.get_size("love_pairs", 0);
  const std::size_t love_steps = positive_size(c.cfg, "love_steps", 512);
  if ((love_steps & (love_steps - 1)) != 0 || love_steps < 4)
    throw ConfigError(c.cfg.line_of("love_steps"), "'love_steps' must be a power of two >= 4");
  if (max_level > 24) throw ConfigError(c.cfg.line_of("max_level"), "'max_level' is too large");

  struct Row {
    double a, b, value, reference;
    std::size_t level;
    bool converged;
  };
  {
    const TimeGrid grid(T, std::size_t{1} << max_level);
    const FbmSampler sampler(grid, H, c.options.method, c.options.cholesky_cap);
    const std::uint64_t key = derive_key(c.seed, StreamRole::rough, 0);
    std::vector<Row> rows(paths);
    parallel_for(paths, c.options.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> z(grid.points());
      for (std::size_t i = begin; i < end; ++i) {
        sampler.sample(key, i, z);
        const PathView v{grid, 1, z};
        const YoungResult r = young_integrate(v, v, 0.0, T, tol, max_level, rule);
        rows[i] = {0.0, T, r.value[0], 0.5 * z.back() * z.back(), r.refinement_level, r.converged};
      }
    });
    std::size_t worst_path = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
      const Row& r = rows[i];
      const double rel = std::abs(r.value - r.reference) / std::abs(r.reference);
      if (rel > worst) {
        worst = rel;
        worst_path = i;
      }
      csv.row({c.hash, std::string("zdz"), static_cast<std::uint64_t>(i), r.a, r.b,
               static_cast<std::uint64_t>(r.level), r.value, r.reference, rel, std::monostate{}, r.converged});
    }
    if (paths > 0)
      c.log << "integrate zdz paths=" << paths << " max relative error=" << format_number(worst) << " (path "
            << worst_path << ")\n";
  }
  if (pairs == 0) return;
  const TimeGrid grid(T, love_steps);
  const std::size_t level = static_cast<std::size_t>(std::countr_zero(love_steps));
  const FbmSampler sampler(grid, H, c.options.method, c.options.cholesky_cap);
  const std::uint64_t kg = derive_key(c.seed, StreamRole::rough, 1);
  const std::uint64_t kh = derive_key(c.seed, StreamRole::rough, 2);
  const std::uint64_t ki = derive_key(c.seed, StreamRole::validator, 1000);
  std::vector<Row> rows(2 * pairs);
  parallel_for(pairs, c.options.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> g(grid.points()), hh(grid.points());
    for (std::size_t i = begin; i < end; ++i) {
      sampler.sample(kg, i, g);
      sampler.sample(kh, i, hh);
      const PathView gv{grid, 1, g}, hv{grid, 1, hh};
      CounterStream pick(ki, i);
      const std::size_t half = love_steps / 2;
      std::size_t i0 = static_cast<std::size_t>(pick.uniform() * static_cast<double>(half));
      std::size_t i1 = static_cast<std::size_t>(pick.uniform() * static_cast<double>(half));
      if (i0 == i1) i1 = (i1 + 1) % half;
      if (i0 > i1) std::swap(i0, i1);
      const std::pair<double, double> spans[2] = {{0.0, T}, {grid.time(2 * i0), grid.time(2 * i1)}};
      for (int s = 0; s < 2; ++s) {
        const auto [a, b] = spans[s];
        const YoungResult r = young_integrate(gv, hv, a, b, tol, level, rule);
        const double rhs = young_love_rhs(sup_norm(gv, a, b), holder_seminorm(gv, a, b, mu),
                                          holder_seminorm(hv, a, b, mu), a, b, mu, mu);
        rows[2 * i + static_cast<std::size_t>(s)] = {a, b, std::abs(r.value[0]), rhs, r.refinement_level, r.converged};
      }
    }
  });
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    const double ratio = r.value / r.reference;
    worst = std::max(worst, ratio);
    if (r.value > r.reference) ++violations;
    csv.row({c.hash, std::string("young_love"), static_cast<std::uint64_t>(k / 2), r.a, r.b,
             static_cast<std::uint64_t>(r.level), r.value, r.reference, std::monostate{}, ratio, r.converged});
  }
  c.log << "integrate young_love checks=" << rows.size() << " violations=" << violations
        << " max lhs/rhs=" << format_number(worst) << "\n";
}

// ---- solve ---------------------------------------------------------------------

void run_solve(const Context& c, CsvWriter& csv) {
  const ZooModel model = model_from_config(c.cfg);
  const auto levels = levels_of(c.cfg, {64, 128, 256, 512, 1024, 2048, 4096});
  const std::size_t paths = positive_size(c.cfg, "paths", 1000);
  const auto rows = convergence_study(model, levels, paths, c.seed, c.options);
  const std::string name = model_name(c.cfg);
  for (const auto& r : rows) {
    csv.row({c.hash, name, static_cast<std::uint64_t>(r.steps), static_cast<std::uint64_t>(paths),
             static_cast<std::uint64_t>(r.blowups), r.mean_terminal, cell(r.mean_abs_error), cell(r.relative_error),
             cell(r.halving_difference)});
    c.log << "solve n=" << r.steps << " blowups=" << r.blowups;
    if (r.relative_error) c.log << " relative_error=" << format_number(*r.relative_error);
    c.log << "\n";
  }
}

// ---- moments --------------------------------------------------------------------

std::vector<MomentTarget> targets_of(const Config& cfg, bool default_power) {
  std::vector<MomentTarget> out;
  try {
    if (cfg.has("p"))
      for (double p : cfg.get_doubles("p")) out.push_back(MomentTarget::power(p));
    if (cfg.has("exp_gamma")) {
      const double c = cfg.get_double("exp_c", 1.0);
      for (double g : cfg.get_doubles("exp_gamma")) out.push_back(MomentTarget::exponential(c, g));
    }
  } catch (const DomainError& e) {
    throw ConfigError(cfg.line_of(cfg.has("p") ? "p" : "exp_gamma"), e.what());
  }
  if (out.empty() && default_power) out.push_back(MomentTarget::power(2.0));
  return out;
}

void run_moments(const Context& c, CsvWriter& csv) {
  const ZooModel model = model_from_config(c.cfg);
  const auto levels = levels_of(c.cfg, {256, 512, 1024, 2048, 4096});
  const std::size_t paths = positive_size(c.cfg, "paths", 10000);
  const auto targets = targets_of(c.cfg, true);
  const auto tables = grid_stability_study(model, targets, levels, paths, c.seed, c.options);
  const std::string name = model_name(c.cfg);
  std::size_t failures = 0;
  for (const auto& t : tables) {
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      const StabilityRow& r = t.rows[k];
      const std::optional<double> ratio = k > 0 ? t.ratios[k - 1] : std::nullopt;
      if (!r.estimate) {
        ++failures;
        csv.row({c.hash, name, t.target.label(), static_cast<std::uint64_t>(r.steps), std::monostate{},
                 static_cast<std::uint64_t>(r.blowup_count), std::monostate{}, std::monostate{}, std::monostate{},
                 std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}, cell(ratio), r.failure});
        continue;
      }
      const MomentEstimate& e = *r.estimate;
      csv.row({c.hash, name, t.target.label(), static_cast<std::uint64_t>(r.steps),
               static_cast<std::uint64_t>(e.samples), static_cast<std::uint64_t>(e.blowup_count), e.estimate,
               e.standard_error, e.ci_low, e.ci_high, e.tail_dominance, e.unstable,
               static_cast<std::uint64_t>(e.overflow_count), cell(ratio), std::string()});
    }
    c.log << "moments " << t.target.label() << " blowups=" << t.total_blowups()
          << " ratios_in_[0.8,1.25]=" << (t.ratios_within(0.8, 1.25) ? "yes" : "no") << "\n";
  }
  if (failures == tables.size() * levels.size() && failures > 0)
    throw EstimationError("moments: no level produced an estimate");
}

// ---- check-conditions ----------------------------------------------------------

void run_check(const Context& c, CsvWriter& csv) {
  const ZooModel model = model_from_config(c.cfg);
  const AssumptionClaims& claims =
      std::holds_alternative<ModelSpec>(model) ? std::get<ModelSpec>(model).claims : std::get<CoupledModel>(model).claims;
  AssumptionSet set = claims.set;
  if (c.cfg.has("set")) {
    try {
      set = assumption_set_from_string(c.cfg.get_string("set"));
    } catch (const DomainError& e) {
      throw ConfigError(c.cfg.line_of("set"), e.what());
    }
  }
  if (set == AssumptionSet::none) throw ConfigError(c.cfg.line_of("model"), "model declares no assumption set; give 'set'");
  if (set == AssumptionSet::C && std::holds_alternative<ModelSpec>(model))
    throw ConfigError(c.cfg.line_of("set"), "set C needs a coupled model");
  const double radius = c.cfg.get_double("radius", 10.0);
  const std::size_t samples = c.cfg.get_size("samples", 10000);
  if (samples < kMinValidatorSamples) throw ConfigError(c.cfg.line_of("samples"), "'samples' must be at least 1000");
  if (!(radius > 0.0)) throw ConfigError(c.cfg.line_of("radius"), "'radius' must be positive");
  const AssumptionReport rep = std::visit(
      [&](const auto& m) { return validate_assumptions(m, set, radius, samples, c.seed); }, model);
  const std::string name = model_name(c.cfg);
  for (const auto& e : rep.conditions) {
    std::string witness;
    for (std::size_t i = 0; i < e.witness.size(); ++i) witness += (i ? ";" : "") + format_number(e.witness[i]);
    csv.row({c.hash, name, to_string(set), e.id, e.estimate, cell(e.claimed), e.violated, e.witness_layout, witness,
             to_string(rep.verdict)});
  }
  c.log << "check-conditions " << name << " set " << to_string(set) << ": " << to_string(rep.verdict) << "\n";
}

// ---- fernique ----------------------------------------------------------------------

void run_fernique(const Context& c, CsvWriter& csv) {
  const double h = single_double(c.cfg, "hurst", 0.75);
  const double mu = c.cfg.get_double("holder_order", 0.65);
  const std::size_t steps = positive_size(c.cfg, "steps", 1024);
  const std::size_t paths = c.cfg.get_size("paths", kMinFerniquePaths);
  if (paths < kMinFerniquePaths) throw ConfigError(c.cfg.line_of("paths"), "'paths' must be at least 10000");
  if (steps % 2 != 0) throw ConfigError(c.cfg.line_of("steps"), "'steps' must be even");
  const TimeGrid grid(c.cfg.get_double("T", 1.0), steps);
  const FerniqueReport r = fernique_tail_check(h, mu, grid, paths, c.seed, c.options);
  csv.row({c.hash, h, mu, static_cast<std::uint64_t>(steps), static_cast<std::uint64_t>(paths), r.fit_performed,
           r.fit_performed ? CsvCell(r.slope) : CsvCell(), r.fit_performed ? CsvCell(r.intercept) : CsvCell(),
           r.fit_performed ? CsvCell(r.r_squared) : CsvCell(), static_cast<std::uint64_t>(r.tail_points),
           r.mean_seminorm, r.mean_seminorm_half, r.growth_ratio});
  c.log << "fernique H=" << format_number(h) << " mu=" << format_number(mu);
  if (r.fit_performed)
    c.log << " slope=" << format_number(r.slope) << " R2=" << format_number(r.r_squared);
  else
    c.log << " fit skipped, growth ratio=" << format_number(r.growth_ratio);
  c.log << "\n";
}

// ---- boundary ------------------------------------------------------------------------

void run_boundary(const Context& c, CsvWriter& csv) {
  const ZooModel model = model_from_config(c.cfg);
  const std::size_t steps = positive_size(c.cfg, "steps", 256);
  if ((steps & (steps - 1)) != 0) throw ConfigError(c.cfg.line_of("steps"), "'steps' must be a power of two");
  const std::size_t paths = positive_size(c.cfg, "paths", 10000);
  const double cc = c.cfg.get_double("exp_c", 1.0);
  if (!c.cfg.has("exp_gamma")) throw ConfigError(0, "missing required key 'exp_gamma'");
  const auto gammas = c.cfg.get_doubles("exp_gamma");
  if (!std::is_sorted(gammas.begin(), gammas.end()))
    throw ConfigError(c.cfg.line_of("exp_gamma"), "'exp_gamma' must be sorted");
  for (double g : gammas)
    if (!(g > 0.0)) throw ConfigError(c.cfg.line_of("exp_gamma"), "'exp_gamma' entries must be positive");
  if (!(cc > 0.0)) throw ConfigError(c.cfg.line_of("exp_c"), "'exp_c' must be positive");
  const BoundaryReport rep = exponent_boundary_study(model, gammas, cc, steps, paths, c.seed, c.options);
  const std::string name = model_name(c.cfg);
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    const BoundaryRow& r = rep.rows[k];
    const MomentEstimate& e = r.estimate;
    csv.row({c.hash, name, r.gamma, rep.theorem_bound, r.above_theorem_bound, r.above_gaussian_bound, e.estimate,
             e.log_estimate, e.standard_error, e.tail_dominance, e.unstable,
             static_cast<std::uint64_t>(e.overflow_count), rep.first_unstable && *rep.first_unstable == k});
  }
  c.log << "boundary bound=" << format_number(rep.theorem_bound) << " first unstable gamma=";
  if (rep.first_unstable)
    c.log << format_number(rep.rows[*rep.first_unstable].gamma);
  else
    c.log << "none";
  c.log << "\n";
}

using Runner = std::function<void(const Context&, CsvWriter&)>;

Runner runner_for(const std::string& command) {
  if (command == "fbm") return run_fbm;
  if (command == "integrate") return run_integrate;
  if (command == "solve") return run_solve;
  if (command == "moments") return run_moments;
  if (command == "check-conditions") return run_check;
  if (command == "fernique") return run_fernique;
  if (command == "boundary") return run_boundary;
  return {};
}

}  // namespace

std::string library_version() { return MIXSDE_VERSION; }

std::vector<std::string> cli_commands() {
  return {"fbm", "integrate", "solve", "moments", "check-conditions", "fernique", "boundary"};
}

std::vector<std::string> csv_columns(const std::string& command) {
  if (command == "fbm")
    return {"manifest_hash", "hurst", "method", "i", "j", "t_i", "t_j", "sample_cov", "exact_cov", "std_error",
            "deviation_se"};
  if (command == "integrate")
    return {"manifest_hash", "study", "path", "a", "b", "level", "value", "reference", "relative_error",
            "bound_ratio", "converged"};
  if (command == "solve")
    return {"manifest_hash", "model", "steps", "paths", "blowups", "mean_terminal", "mean_abs_error",
            "relative_error", "halving_difference"};
  if (command == "moments")
    return {"manifest_hash", "model", "target", "steps", "samples", "blowups", "estimate", "std_error", "ci_low",
            "ci_high", "tail_dominance", "unstable", "overflow_count", "ratio", "failure"};
  if (command == "check-conditions")
    return {"manifest_hash", "model", "set", "condition", "estimate", "claimed", "violated", "witness_layout",
            "witness", "verdict"};
  if (command == "fernique")
    return {"manifest_hash", "hurst", "mu", "steps", "paths", "fit_performed", "slope", "intercept", "r_squared",
            "tail_points", "mean_seminorm", "mean_seminorm_half", "growth_ratio"};
  if (command == "boundary")
    return {"manifest_hash", "model", "gamma", "theorem_bound", "above_theorem_bound", "above_gaussian_bound",
            "estimate", "log_estimate", "std_error", "tail_dominance", "unstable", "overflow_count",
            "first_unstable"};
  throw DomainError("unknown command '" + command + "'");
}

std::string manifest_hash(const Config& config) { return hex64(fnv1a64(config.canonical({"workers", "output"}))); }

std::string manifest_yaml(const std::string& command, const Config& config, const std::string& csv_name) {
  std::ostringstream out;
  out << "tool: mixsde\n"
      << "version: " << library_version() << "\n"
      << "command: " << command << "\n"
      << "seed: " << config.get_u64("seed") << "\n"
      << "workers: " << config.get_size("workers", 1) << "\n"
      << "manifest_hash: \"" << manifest_hash(config) << "\"\n"
      << "csv: " << csv_name << "\n"
      << "config:\n"
      << config.to_yaml(2);
  return out.str();
}

Manifest parse_manifest(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.mark.line + 1, e.msg);
  }
  if (!root.IsMap() || !root["config"] || !root["config"].IsMap()) throw ConfigError(0, "manifest has no config block");
  Manifest m;
  m.tool = root["tool"].as<std::string>("");
  m.version = root["version"].as<std::string>("");
  m.command = root["command"].as<std::string>("");
  m.seed = root["seed"].as<std::uint64_t>(0);
  m.workers = root["workers"].as<std::size_t>(1);
  m.hash = root["manifest_hash"].as<std::string>("");
  m.csv = root["csv"].as<std::string>("");
  YAML::Emitter em;
  em << root["config"];
  m.config = Config::parse(em.c_str());
  return m;
}

int run_command(const std::string& command, Config config, const RunOverrides& overrides, std::ostream& out,
                std::ostream& err) {
  try {
    const Runner runner = runner_for(command);
    if (!runner) throw ConfigError(0, "unknown command '" + command + "'");
    config.require_known(allowed_keys(command));
    if (config.has("command") && config.get_string("command") != command)
      throw ConfigError(config.line_of("command"), "config is for command '" + config.get_string("command") + "'");
    if (overrides.seed) config.set("seed", std::to_string(*overrides.seed));
    if (overrides.workers) config.set("workers", std::to_string(*overrides.workers));
    if (!config.has("seed")) throw ConfigError(0, "missing required key 'seed' (no default seed)");
    const std::uint64_t seed = config.get_u64("seed");
    const SynthesisOptions options = synthesis_options(config);
    const fs::path dir = overrides.out_dir ? fs::path(*overrides.out_dir) : fs::path(config.get_string("output", "."));

    std::ostringstream body;
    const Context ctx{command, config, manifest_hash(config), seed, options, out};
    {
      CsvWriter csv(body, csv_columns(command));
      runner(ctx, csv);
    }
    fs::create_directories(dir);
    const std::string csv_name = command + ".csv";
    open_output(dir / csv_name) << body.str();
    open_output(dir / (command + ".manifest.yaml")) << manifest_yaml(command, config, csv_name);
    out << "wrote " << (dir / csv_name).string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "config:0: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    err << "config:0: " << e.what() << "\n";
    return 2;
  } catch (const EstimationError& e) {
    err << "estimation: " << e.what() << "\n";
    return 3;
  } catch (const SynthesisError& e) {
    err << "estimation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed Wiener/fractional SDE experiments", "mixsde"};
  app.set_version_flag("--version", library_version());
  std::string command, config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(cli_commands()));
  app.add_option("--config", config_path, "Config file (YAML)")->required();
  app.add_option("--seed", seed, "Seed (overrides config)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  }
  Config config;
  try {
    config = Config::parse_file(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return 2;
  }
  return run_command(command, std::move(config), {seed, workers, out_dir}, out, err);
}

}  // namespace mixsde

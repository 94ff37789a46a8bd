#include "mixsde/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixsde/errors.hpp"
#include "mixsde/parallel.hpp"
#include "mixsde/path_analysis.hpp"
#include "mixsde/rng.hpp"

namespace mixsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Neumaier {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string number(double v) {
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

// Mean and standard error, computed about the first term so identical terms
// give exactly that term and a zero error.
std::pair<double, double> shifted_mean(std::span<const double> v) {
  const double origin = v[0];
  Neumaier s;
  for (double x : v) s.add(x - origin);
  const double n = static_cast<double>(v.size());
  const double mean = origin + s.value() / n;
  Neumaier sq;
  for (double x : v) sq.add((x - mean) * (x - mean));
  const double var = v.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double sup_of(std::span<const double> values, std::size_t dim) {
  double best = 0.0;
  for (std::size_t k = 0; k * dim < values.size(); ++k) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) acc += values[k * dim + d] * values[k * dim + d];
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

}  // namespace

MomentTarget MomentTarget::power(double p) {
  if (!(p > 0.0)) throw DomainError("moment order p must be positive");
  MomentTarget t;
  t.kind = Kind::sup_power;
  t.p = p;
  return t;
}

MomentTarget MomentTarget::exponential(double c, double gamma) {
  if (!(c > 0.0)) throw DomainError("exponential moment needs c > 0");
  if (!(gamma > 0.0)) throw DomainError("exponential moment needs gamma > 0");
  MomentTarget t;
  t.kind = Kind::exponential;
  t.c = c;
  t.gamma = gamma;
  return t;
}

std::string MomentTarget::label() const {
  if (kind == Kind::sup_power) return "p=" + number(p);
  return "c=" + number(c) + ";gamma=" + number(gamma);
}

MomentEstimate estimate_moment(std::span<const double> sups, std::size_t blowup_count, const MomentTarget& target) {
  MomentEstimate est;
  est.target = target;
  est.samples = sups.size();
  est.blowup_count = blowup_count;
  if (sups.size() < kMinMomentPaths)
    throw EstimationError("moment estimate needs at least " + std::to_string(kMinMomentPaths) +
                          " non-blowup paths, got " + std::to_string(sups.size()));
  for (double s : sups)
    if (!(std::isfinite(s) && s >= 0.0)) throw EstimationError("moment estimate: non-finite path supremum");

  if (target.kind == MomentTarget::Kind::sup_power) {
    std::vector<double> terms(sups.size());
    for (std::size_t i = 0; i < sups.size(); ++i) terms[i] = std::pow(sups[i], target.p);
    for (double v : terms) {
      if (!std::isfinite(v)) {
        ++est.overflow_count;
      }
    }
    if (est.overflow_count > 0) {
      est.estimate = est.standard_error = est.ci_high = est.log_estimate = std::numeric_limits<double>::infinity();
      est.ci_low = 0.0;
      est.tail_dominance = 1.0;
      est.unstable = true;
      return est;
    }
    auto [mean, se] = shifted_mean(terms);
    est.estimate = mean;
    est.standard_error = se;
    Neumaier total;
    for (double v : terms) total.add(v);
    const double biggest = *std::max_element(terms.begin(), terms.end());
    est.tail_dominance = total.value() > 0.0 ? biggest / total.value() : 0.0;
    est.log_estimate = std::log(mean);
  } else {
    // exp(u_i) with u_i = c sup^gamma, accumulated relative to the largest term.
    std::vector<double> u(sups.size());
    for (std::size_t i = 0; i < sups.size(); ++i) u[i] = target.c * std::pow(sups[i], target.gamma);
    const double umax = *std::max_element(u.begin(), u.end());
    std::vector<double> w(u.size());
    Neumaier total;
    const double limit = std::log(std::numeric_limits<double>::max());
    for (std::size_t i = 0; i < u.size(); ++i) {
      w[i] = std::exp(u[i] - umax);
      total.add(w[i]);
      if (u[i] > limit) ++est.overflow_count;
    }
    auto [mean_w, se_w] = shifted_mean(w);
    est.tail_dominance = 1.0 / total.value();
    est.log_estimate = umax + std::log(mean_w);
    const double scale = std::exp(umax);
    est.estimate = scale * mean_w;
    est.standard_error = se_w == 0.0 ? 0.0 : scale * se_w;
    if (!std::isfinite(est.estimate) && est.overflow_count == 0) est.overflow_count = 1;
  }
  est.ci_low = std::max(0.0, est.estimate - 1.96 * est.standard_error);
  est.ci_high = est.estimate + 1.96 * est.standard_error;
  est.unstable = est.tail_dominance > kTailDominanceThreshold || est.overflow_count > 0;
  return est;
}

std::vector<double> path_sups(const SolveOutput& batch) {
  std::vector<double> out;
  out.reserve(batch.solution.count());
  for (std::size_t i = 0; i < batch.solution.count(); ++i)
    if (!batch.blown_up(i)) out.push_back(sup_of(batch.solution.path(i).values, batch.solution.dim()));
  return out;
}

MomentEstimate sup_moment_estimate(const SolveOutput& batch, double p) {
  return estimate_moment(path_sups(batch), batch.blowup_count(), MomentTarget::power(p));
}

MomentEstimate exp_moment_estimate(const SolveOutput& batch, double c, double gamma) {
  return estimate_moment(path_sups(batch), batch.blowup_count(), MomentTarget::exponential(c, gamma));
}

LevelSups simulate_level_sups(const ZooModel& model, const std::vector<std::size_t>& levels, std::size_t paths,
                              std::uint64_t seed, const SynthesisOptions& options) {
  LevelSups out;
  out.levels = levels;
  out.sups.assign(levels.size(), std::vector<double>(paths, kNaN));
  out.blowups.assign(levels.size(), 0);
  solve_levels(model, levels, paths, seed, options, [&out](const LevelVisit& v) {
    if (!v.blowup) out.sups[v.level][v.path] = sup_of(v.values, v.dim);
  });
  for (std::size_t li = 0; li < levels.size(); ++li)
    out.blowups[li] = static_cast<std::size_t>(
        std::count_if(out.sups[li].begin(), out.sups[li].end(), [](double s) { return std::isnan(s); }));
  return out;
}

bool StabilityTable::ratios_within(double lo, double hi) const {
  if (ratios.empty()) return rows.size() == 1 && rows[0].estimate.has_value();
  return std::all_of(ratios.begin(), ratios.end(), [lo, hi](const auto& r) { return r && *r >= lo && *r <= hi; });
}

std::size_t StabilityTable::total_blowups() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.blowup_count;
  return n;
}

std::vector<StabilityTable> stability_tables(const LevelSups& sups, const std::vector<MomentTarget>& targets) {
  std::vector<StabilityTable> out;
  for (const auto& target : targets) {
    StabilityTable table;
    table.target = target;
    for (std::size_t li = 0; li < sups.levels.size(); ++li) {
      StabilityRow row;
      row.steps = sups.levels[li];
      row.blowup_count = sups.blowups[li];
      std::vector<double> finite;
      finite.reserve(sups.sups[li].size());
      for (double s : sups.sups[li])
        if (!std::isnan(s)) finite.push_back(s);
      try {
        row.estimate = estimate_moment(finite, row.blowup_count, target);
      } catch (const EstimationError& e) {
        row.failure = e.what();
      }
      table.rows.push_back(std::move(row));
    }
    for (std::size_t li = 1; li < table.rows.size(); ++li) {
      const auto& a = table.rows[li - 1].estimate;
      const auto& b = table.rows[li].estimate;
      if (a && b && std::isfinite(a->estimate) && std::isfinite(b->estimate) && a->estimate > 0.0)
        table.ratios.emplace_back(b->estimate / a->estimate);
      else if (a && b && a->estimate == 0.0 && b->estimate == 0.0)
        table.ratios.emplace_back(1.0);
      else
        table.ratios.emplace_back(std::nullopt);
    }
    out.push_back(std::move(table));
  }
  return out;
}

std::vector<StabilityTable> grid_stability_study(const ZooModel& model, const std::vector<MomentTarget>& targets,
                                                 const std::vector<std::size_t>& levels, std::size_t paths,
                                                 std::uint64_t seed, const SynthesisOptions& options) {
  return stability_tables(simulate_level_sups(model, levels, paths, seed, options), targets);
}

FerniqueReport fernique_tail_check(double hurst, double mu, const TimeGrid& grid, std::size_t paths,
                                   std::uint64_t seed, const SynthesisOptions& options) {
  const HurstParameter H(hurst);
  if (!(mu > 0.0 && mu <= 1.0)) throw DomainError("fernique_tail_check: holder order must lie in (0, 1]");
  if (paths < kMinFerniquePaths) throw DomainError("fernique_tail_check: needs at least 10000 paths");
  if (grid.steps() < 2 || grid.steps() % 2 != 0) throw DomainError("fernique_tail_check: needs an even step count");

  FerniqueReport rep;
  rep.hurst = hurst;
  rep.mu = mu;
  rep.steps = grid.steps();
  rep.paths = paths;
  rep.seminorms.assign(paths, 0.0);
  std::vector<double> half(paths, 0.0);
  const FbmSampler sampler(grid, H, options.method, options.cholesky_cap);
  const std::uint64_t key = derive_key(seed, StreamRole::rough, 0);
  const TimeGrid coarse = grid.coarsen(2);
  parallel_for(paths, options.workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> f(grid.points()), g(coarse.points());
    for (std::size_t i = begin; i < end; ++i) {
      sampler.sample(key, i, f);
      for (std::size_t k = 0; k < g.size(); ++k) g[k] = f[2 * k];
      rep.seminorms[i] = holder_seminorm(PathView{grid, 1, f}, mu);
      half[i] = holder_seminorm(PathView{coarse, 1, g}, mu);
    }
  });
  for (double s : rep.seminorms)
    if (!std::isfinite(s)) throw EstimationError("fernique_tail_check: non-finite seminorm");
  Neumaier a, b;
  for (std::size_t i = 0; i < paths; ++i) {
    a.add(rep.seminorms[i]);
    b.add(half[i]);
  }
  rep.mean_seminorm = a.value() / static_cast<double>(paths);
  rep.mean_seminorm_half = b.value() / static_cast<double>(paths);
  rep.growth_ratio = rep.mean_seminorm / rep.mean_seminorm_half;
  if (mu >= hurst) return rep;

  std::vector<double> sorted = rep.seminorms;
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.back() > sorted.front())) throw EstimationError("fernique_tail_check: degenerate sample");
  const std::size_t n = sorted.size();
  const std::size_t start = n - n / 10;
  std::vector<double> xs, ys;
  for (std::size_t i = start; i < n; ++i) {
    xs.push_back(sorted[i] * sorted[i]);
    ys.push_back(std::log(static_cast<double>(n - i) / static_cast<double>(n + 1)));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw EstimationError("fernique_tail_check: degenerate upper decile");
  rep.fit_performed = true;
  rep.tail_points = xs.size();
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  rep.r_squared = sxy * sxy / (sxx * syy);
  return rep;
}

BoundaryReport exponent_boundary_study(const ZooModel& model, const std::vector<double>& gammas, double c,
                                       std::size_t steps, std::size_t paths, std::uint64_t seed,
                                       const SynthesisOptions& options) {
  if (gammas.empty()) throw DomainError("exponent_boundary_study: empty gamma list");
  if (!std::is_sorted(gammas.begin(), gammas.end())) throw DomainError("exponent_boundary_study: gammas must be sorted");
  const DriverSpec& drivers = std::holds_alternative<ModelSpec>(model) ? std::get<ModelSpec>(model).drivers
                                                                       : std::get<CoupledModel>(model).base.drivers;
  BoundaryReport rep;
  rep.holder_order = drivers.holder_order;
  rep.theorem_bound = exp_gamma_upper_bound(drivers.holder_order);
  rep.steps = steps;
  const LevelSups sups = simulate_level_sups(model, {steps}, paths, seed, options);
  std::vector<double> finite;
  for (double s : sups.sups[0])
    if (!std::isnan(s)) finite.push_back(s);
  for (double g : gammas) {
    BoundaryRow row;
    row.gamma = g;
    row.estimate = estimate_moment(finite, sups.blowups[0], MomentTarget::exponential(c, g));
    row.above_theorem_bound = g >= rep.theorem_bound;
    row.above_gaussian_bound = g > 2.0;
    if (row.estimate.unstable && !rep.first_unstable) rep.first_unstable = rep.rows.size();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace mixsde

#include "mixsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixsde/errors.hpp"
#include "mixsde/parallel.hpp"

namespace mixsde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_driver_view(const DriverPathView& v, std::size_t steps, std::size_t m, std::size_t l) {
  if (v.stride == 0) throw DomainError("euler: stride must be positive");
  const std::size_t fine_points = steps * v.stride + 1;
  if (v.wiener.size() < fine_points * m) throw DomainError("euler: Wiener driver shorter than the grid");
  if (v.rough.size() < fine_points * l) throw DomainError("euler: rough driver shorter than the grid");
}

struct Scratch {
  std::vector<double> a, b, c;
  Scratch(std::size_t d, std::size_t m, std::size_t l) : a(d), b(d * m), c(d * l) {}
};

// Advances from row k to row k + 1 of `out`; true when the new row is finite.
bool step(std::size_t d, std::size_t m, std::size_t l, double dt, const DriverPathView& dr, std::size_t k,
          const Scratch& s, std::span<double> out) {
  const std::size_t f0 = k * dr.stride, f1 = (k + 1) * dr.stride;
  bool finite = true;
  for (std::size_t r = 0; r < d; ++r) {
    double next = out[k * d + r] + s.a[r] * dt;
    for (std::size_t i = 0; i < m; ++i) next += s.b[i * d + r] * (dr.wiener[f1 * m + i] - dr.wiener[f0 * m + i]);
    for (std::size_t j = 0; j < l; ++j) next += s.c[j * d + r] * (dr.rough[f1 * l + j] - dr.rough[f0 * l + j]);
    out[(k + 1) * d + r] = next;
    finite = finite && std::isfinite(next);
  }
  return finite;
}

void truncate(std::span<double> out, std::size_t d, std::size_t from) {
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(from * d), out.end(), kNaN);
}

void check_batch(const std::optional<PathBatch>& b, const TimeGrid& grid, std::size_t dim, std::size_t count,
                 const char* what) {
  if (dim == 0) return;
  if (!b) throw DomainError(std::string("euler_mixed: missing ") + what + " drivers");
  if (b->dim() != dim) throw DomainError(std::string("euler_mixed: ") + what + " driver dimension mismatch");
  if (!(b->grid() == grid)) throw DomainError(std::string("euler_mixed: ") + what + " drivers on a different grid");
  if (b->count() != count) throw DomainError("euler_mixed: driver batches disagree on path count");
}

std::size_t batch_count(const DriverBatches& d) {
  if (d.wiener) return d.wiener->count();
  if (d.rough) return d.rough->count();
  return 0;
}

DriverPathView view_of(const DriverBatches& d, std::size_t i) {
  DriverPathView v;
  if (d.wiener) v.wiener = d.wiener->path(i).values;
  if (d.rough) v.rough = d.rough->path(i).values;
  return v;
}

}  // namespace

std::size_t SolveOutput::blowup_count() const {
  return static_cast<std::size_t>(std::count_if(blowup.begin(), blowup.end(), [](const auto& b) { return b.has_value(); }));
}

std::optional<std::size_t> euler_path(const ModelSpec& model, const TimeGrid& grid, const DriverPathView& drivers,
                                      std::span<double> out) {
  const std::size_t d = model.state_dim, m = model.drivers.wiener_dim, l = model.drivers.rough_dim();
  check_driver_view(drivers, grid.steps(), m, l);
  if (out.size() != grid.points() * d) throw DomainError("euler_path: output size mismatch");
  const double dt = grid.step();
  Scratch s(d, m, l);
  std::copy(model.x0.begin(), model.x0.end(), out.begin());
  if (!std::all_of(model.x0.begin(), model.x0.end(), [](double v) { return std::isfinite(v); })) {
    truncate(out, d, 0);
    return 0;
  }
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k);
    std::span<const double> x = out.subspan(k * d, d);
    model.drift.eval(t, x, s.a);
    if (m > 0) model.diffusion.eval(t, x, s.b);
    if (l > 0) model.rough.eval(t, x, s.c);
    if (!step(d, m, l, dt, drivers, k, s, out)) {
      truncate(out, d, k + 1);
      return k + 1;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> euler_coupled_path(const CoupledModel& model, const TimeGrid& grid,
                                              std::span<const double> x, const DriverPathView& drivers,
                                              std::span<double> out) {
  const std::size_t dx = model.base.state_dim;
  const std::size_t d = model.state_dim, m = model.drivers.wiener_dim, l = model.drivers.rough_dim();
  check_driver_view(drivers, grid.steps(), m, l);
  if (out.size() != grid.points() * d) throw DomainError("euler_coupled_path: output size mismatch");
  if (x.size() != grid.points() * dx) throw DomainError("euler_coupled_path: X path size mismatch");
  const double dt = grid.step();
  Scratch s(d, m, l);
  std::copy(model.y0.begin(), model.y0.end(), out.begin());
  for (std::size_t k = 0; k < grid.steps(); ++k) {
    const double t = grid.time(k);
    std::span<const double> xk = x.subspan(k * dx, dx);
    std::span<const double> y = out.subspan(k * d, d);
    model.drift.eval(t, xk, y, s.a);
    if (m > 0) model.diffusion.eval(t, xk, y, s.b);
    if (l > 0) model.rough.eval(t, xk, y, s.c);
    if (!step(d, m, l, dt, drivers, k, s, out)) {
      truncate(out, d, k + 1);
      return k + 1;
    }
  }
  return std::nullopt;
}

SolveOutput euler_mixed(const ModelSpec& model, const TimeGrid& grid, DriverBatches drivers, std::size_t workers) {
  model.validate();
  const std::size_t count = batch_count(drivers);
  check_batch(drivers.wiener, grid, model.drivers.wiener_dim, count, "Wiener");
  check_batch(drivers.rough, grid, model.drivers.rough_dim(), count, "rough");
  if (count == 0) throw DomainError("euler_mixed: no driver paths");
  SolveOutput out{PathBatch(grid, model.state_dim, count), std::vector<std::optional<std::size_t>>(count),
                  std::move(drivers)};
  out.solution.provenance = out.drivers.rough ? out.drivers.rough->provenance : out.drivers.wiener->provenance;
  out.solution.provenance.generator = "solution/" + model.name;
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      out.blowup[i] = euler_path(model, grid, view_of(out.drivers, i), out.solution.mutable_path(i));
  });
  return out;
}

SolveOutput euler_mixed(const ModelSpec& model, const TimeGrid& grid, std::size_t count, std::uint64_t seed,
                        const SynthesisOptions& options) {
  if (model.drivers.wiener_dim + model.drivers.rough_dim() == 0) {
    // Deterministic equation: a zero Wiener driver keeps the batch shapes uniform.
    ModelSpec copy = model;
    copy.drivers.wiener_dim = 1;
    copy.diffusion = CoefficientField::zero(model.state_dim, 1);
    return euler_mixed(copy, grid, generate_drivers(copy.drivers, grid, count, seed, options), options.workers);
  }
  return euler_mixed(model, grid, generate_drivers(model.drivers, grid, count, seed, options), options.workers);
}

CoupledSolveOutput solve_coupled(const CoupledModel& model, const TimeGrid& grid, std::size_t count,
                                 std::uint64_t seed, const SynthesisOptions& options) {
  model.validate();
  CoupledSolveOutput out{euler_mixed(model.base, grid, count, seed, options), {PathBatch(grid, model.state_dim, count), {}, {}}};
  DriverBatches ydrivers;
  if (model.shared_drivers) {
    ydrivers = out.x.drivers;
  } else {
    ydrivers = generate_drivers(model.drivers, grid, count, seed, options, 1);
  }
  check_batch(ydrivers.wiener, grid, model.drivers.wiener_dim, count, "coupled Wiener");
  check_batch(ydrivers.rough, grid, model.drivers.rough_dim(), count, "coupled rough");
  SolveOutput& y = out.y;
  y.blowup.assign(count, std::nullopt);
  y.drivers = std::move(ydrivers);
  y.solution.provenance = out.x.solution.provenance;
  y.solution.provenance.generator = "solution/" + model.name;
  parallel_for(count, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::span<double> dst = y.solution.mutable_path(i);
      if (out.x.blown_up(i)) {
        // Y is undefined past the X blowup; flag it at the same index.
        const std::size_t at = *out.x.blowup[i];
        std::fill(dst.begin(), dst.end(), kNaN);
        std::copy(model.y0.begin(), model.y0.end(), dst.begin());
        if (at == 0) dst[0] = kNaN;
        y.blowup[i] = at;
        continue;
      }
      y.blowup[i] = euler_coupled_path(model, grid, out.x.solution.path(i).values, view_of(y.drivers, i), dst);
    }
  });
  return out;
}

DiscretePath closed_form_geometric(double s0, double mu, double sigma_w, double sigma_b, PathView W, PathView Z) {
  if (W.dim != 1 || Z.dim != 1) throw DomainError("closed_form_geometric: scalar drivers required");
  if (!(W.grid == Z.grid)) throw DomainError("closed_form_geometric: drivers on different grids");
  std::vector<double> v(W.grid.points());
  const double drift = mu - 0.5 * sigma_w * sigma_w;
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = s0 * std::exp(drift * W.grid.time(k) + sigma_w * W(k) + sigma_b * Z(k));
  return DiscretePath(W.grid, 1, std::move(v));
}

DiscretePath closed_form_geometric(const GeometricParams& p, PathView W, PathView Z) {
  return closed_form_geometric(p.s0, p.mu, p.sigma_w, p.sigma_b, W, Z);
}

}  // namespace mixsde

namespace mixsde {

namespace {

void check_levels(const std::vector<std::size_t>& levels) {
  if (levels.empty()) throw DomainError("levels: at least one grid level is required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] == 0 || (levels[i] & (levels[i] - 1)) != 0) throw DomainError("levels must be powers of two");
    if (i > 0 && levels[i] <= levels[i - 1]) throw DomainError("levels must be strictly increasing");
  }
}

double distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

void solve_levels(const ZooModel& model, const std::vector<std::size_t>& levels, std::size_t count,
                  std::uint64_t seed, const SynthesisOptions& options,
                  const std::function<void(const LevelVisit&)>& visit) {
  check_levels(levels);
  if (count == 0) throw DomainError("solve_levels: need at least one path");
  const CoupledModel* coupled = std::get_if<CoupledModel>(&model);
  const ModelSpec& base = coupled ? coupled->base : std::get<ModelSpec>(model);
  base.validate();
  if (coupled) coupled->validate();

  const std::size_t finest = levels.back();
  const TimeGrid fine(base.horizon, finest);
  const DriverSampler xdrivers(base.drivers, fine, seed, options, 0);
  std::optional<DriverSampler> ydrivers;
  if (coupled && !coupled->shared_drivers) ydrivers.emplace(coupled->drivers, fine, seed, options, 1);
  std::vector<TimeGrid> grids;
  for (std::size_t n : levels) grids.emplace_back(base.horizon, n);

  parallel_for(count, options.workers, [&](std::size_t begin, std::size_t end) {
    const std::size_t fp = fine.points();
    std::vector<double> w(fp * base.drivers.wiener_dim), z(fp * base.drivers.rough_dim());
    std::vector<double> wy, zy;
    if (ydrivers) {
      wy.resize(fp * coupled->drivers.wiener_dim);
      zy.resize(fp * coupled->drivers.rough_dim());
    }
    std::vector<double> x, y;
    for (std::size_t i = begin; i < end; ++i) {
      xdrivers.sample(i, w, z);
      if (ydrivers) ydrivers->sample(i, wy, zy);
      for (std::size_t li = 0; li < levels.size(); ++li) {
        const TimeGrid& grid = grids[li];
        const std::size_t stride = finest / levels[li];
        x.resize(grid.points() * base.state_dim);
        auto bx = euler_path(base, grid, {w, z, stride}, x);
        if (!coupled) {
          visit({i, li, grid, x, base.state_dim, bx, fine, {w, z, 1}});
          continue;
        }
        y.resize(grid.points() * coupled->state_dim);
        std::optional<std::size_t> by;
        if (bx) {
          std::fill(y.begin(), y.end(), kNaN);
          by = bx;
        } else {
          const DriverPathView yv = ydrivers ? DriverPathView{wy, zy, stride} : DriverPathView{w, z, stride};
          by = euler_coupled_path(*coupled, grid, x, yv, y);
        }
        visit({i, li, grid, y, coupled->state_dim, by, fine, {w, z, 1}});
      }
    }
  });
}

std::vector<ConvergenceRow> convergence_study(const ZooModel& model, const std::vector<std::size_t>& levels,
                                              std::size_t count, std::uint64_t seed,
                                              const SynthesisOptions& options) {
  const ModelSpec* plain = std::get_if<ModelSpec>(&model);
  const bool has_exact = plain && plain->exact;
  const std::size_t L = levels.size();
  // terminal[level][path * dim + r]; NaN marks a blowup
  std::vector<std::vector<double>> terminal(L);
  std::vector<std::vector<double>> exact;
  const std::size_t dim = plain ? plain->state_dim : std::get<CoupledModel>(model).state_dim;
  for (auto& t : terminal) t.assign(count * dim, kNaN);
  if (has_exact) exact.assign(1, std::vector<double>(count * dim, kNaN));
  solve_levels(model, levels, count, seed, options, [&](const LevelVisit& v) {
    if (!v.blowup) {
      auto last = v.values.subspan(v.grid.steps() * v.dim, v.dim);
      std::copy(last.begin(), last.end(), terminal[v.level].begin() + static_cast<std::ptrdiff_t>(v.path * dim));
    }
    if (has_exact && v.level == L - 1) {
      const std::size_t m = plain->drivers.wiener_dim, l = plain->drivers.rough_dim();
      const std::size_t k = v.fine.steps();
      plain->exact(v.fine.horizon(), v.fine_drivers.wiener.subspan(k * m, m), v.fine_drivers.rough.subspan(k * l, l),
                   std::span<double>(exact[0]).subspan(v.path * dim, dim));
    }
  });

  std::vector<ConvergenceRow> rows(L);
  const std::vector<double> zero(dim, 0.0);
  for (std::size_t li = 0; li < L; ++li) {
    ConvergenceRow& row = rows[li];
    row.steps = levels[li];
    double sum_terminal = 0.0, sum_err = 0.0, sum_exact = 0.0, sum_half = 0.0;
    std::size_t finite = 0, both = 0;
    for (std::size_t i = 0; i < count; ++i) {
      std::span<const double> xi(terminal[li].data() + i * dim, dim);
      if (std::isnan(xi[0])) {
        ++row.blowups;
        continue;
      }
      ++finite;
      sum_terminal += distance(xi, zero);
      if (has_exact) {
        std::span<const double> ei(exact[0].data() + i * dim, dim);
        sum_err += distance(xi, ei);
        sum_exact += distance(ei, zero);
      }
      if (li + 1 < L) {
        std::span<const double> next(terminal[li + 1].data() + i * dim, dim);
        if (!std::isnan(next[0])) {
          ++both;
          sum_half += distance(xi, next);
        }
      }
    }
    if (finite > 0) {
      row.mean_terminal = sum_terminal / static_cast<double>(finite);
      if (has_exact) {
        row.mean_abs_error = sum_err / static_cast<double>(finite);
        row.relative_error = sum_err / sum_exact;
      }
    } else {
      row.mean_terminal = kNaN;
    }
    if (li + 1 < L && both > 0) row.halving_difference = sum_half / static_cast<double>(both);
  }
  return rows;
}

}  // namespace mixsde

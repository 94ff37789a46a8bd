#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mixsde/fbm.hpp"
#include "mixsde/grid.hpp"
#include "mixsde/models.hpp"

namespace mixsde {

struct SolveOutput {
  PathBatch solution;
  // First grid index holding a non-finite state; values from there on are NaN.
  std::vector<std::optional<std::size_t>> blowup;
  DriverBatches drivers;

  std::size_t blowup_count() const;
  bool blown_up(std::size_t path) const { return blowup[path].has_value(); }
};

/// Driver values for one path on a fine grid; the solver reads every
/// `stride`-th point, so coarse levels see exact restrictions.
struct DriverPathView {
  std::span<const double> wiener;  // fine points x m
  std::span<const double> rough;   // fine points x l
  std::size_t stride = 1;
};

/// Left-point Euler step for one path. Writes grid.points() x d values to
/// `out` and returns the first non-finite index, if any.
std::optional<std::size_t> euler_path(const ModelSpec& model, const TimeGrid& grid, const DriverPathView& drivers,
                                      std::span<double> out);

/// Same for the coupled equation, reading X on `grid` from `x` (points x dx).
std::optional<std::size_t> euler_coupled_path(const CoupledModel& model, const TimeGrid& grid,
                                              std::span<const double> x, const DriverPathView& drivers,
                                              std::span<double> out);

SolveOutput euler_mixed(const ModelSpec& model, const TimeGrid& grid, DriverBatches drivers, std::size_t workers = 1);

/// Convenience: generates drivers with generate_drivers(seed, options) first.
SolveOutput euler_mixed(const ModelSpec& model, const TimeGrid& grid, std::size_t count, std::uint64_t seed,
                        const SynthesisOptions& options = {});

struct CoupledSolveOutput {
  SolveOutput x;
  SolveOutput y;
};

/// X by euler_mixed, then Y on the same grid, with stage-1 drivers unless the
/// model shares drivers with X.
CoupledSolveOutput solve_coupled(const CoupledModel& model, const TimeGrid& grid, std::size_t count,
                                 std::uint64_t seed, const SynthesisOptions& options = {});

/// One solved path at one level. values holds the reported process (X, or
/// Y for coupled models) as points x dim; the drivers are the finest ones.
struct LevelVisit {
  std::size_t path;
  std::size_t level;  // index into the level list
  const TimeGrid& grid;
  std::span<const double> values;
  std::size_t dim;
  std::optional<std::size_t> blowup;
  const TimeGrid& fine;
  DriverPathView fine_drivers;  // drivers of the reported process's base equation
};

/// Solves paths 0..count-1 at every dyadic level, coarse drivers being exact
/// restrictions of the finest. visit runs on worker threads, once per
/// (path, level); different paths may run concurrently.
void solve_levels(const ZooModel& model, const std::vector<std::size_t>& levels, std::size_t count,
                  std::uint64_t seed, const SynthesisOptions& options,
                  const std::function<void(const LevelVisit&)>& visit);

struct ConvergenceRow {
  std::size_t steps = 0;
  std::size_t blowups = 0;
  double mean_terminal = 0.0;                 // E|X_T| over finite paths
  std::optional<double> mean_abs_error;       // E|X_T - exact|, when the model has a closed form
  std::optional<double> relative_error;       // mean_abs_error / E|exact|
  std::optional<double> halving_difference;  // E|X_T^(n) - X_T^(2n)|, absent on the finest level
};

std::vector<ConvergenceRow> convergence_study(const ZooModel& model, const std::vector<std::size_t>& levels,
                                              std::size_t count, std::uint64_t seed,
                                              const SynthesisOptions& options = {});

/// S_t = S0 exp((mu - sigma_w^2 / 2) t + sigma_w W_t + sigma_b Z_t).
DiscretePath closed_form_geometric(double s0, double mu, double sigma_w, double sigma_b, PathView W, PathView Z);
DiscretePath closed_form_geometric(const GeometricParams& p, PathView W, PathView Z);

}  // namespace mixsde

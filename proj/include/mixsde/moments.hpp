#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixsde/fbm.hpp"
#include "mixsde/models.hpp"
#include "mixsde/solver.hpp"

namespace mixsde {

/// E sup|X|^p (kind sup_power) or E exp(c sup|X|^gamma) (kind exponential).
struct MomentTarget {
  enum class Kind { sup_power, exponential };
  Kind kind = Kind::sup_power;
  double p = 2.0;
  double c = 1.0;
  double gamma = 1.0;

  static MomentTarget power(double p);
  static MomentTarget exponential(double c, double gamma);
  std::string label() const;  // "p=2", "c=1;gamma=1.08"
};

inline constexpr double kTailDominanceThreshold = 0.2;
inline constexpr std::size_t kMinMomentPaths = 100;

struct MomentEstimate {
  MomentTarget target;
  double estimate = 0.0;  // +inf when exp overflowed
  double standard_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double log_estimate = 0.0;  // log of the estimate, finite even on overflow
  std::size_t samples = 0;    // non-blowup paths used
  std::size_t blowup_count = 0;
  std::size_t overflow_count = 0;
  double tail_dominance = 0.0;  // largest term / sum of terms
  bool unstable = false;        // tail_dominance above threshold or overflow
};

/// Estimator on per-path sup norms; blown-up paths are counted, not used.
/// Fewer than kMinMomentPaths finite paths raise EstimationError.
MomentEstimate estimate_moment(std::span<const double> sups, std::size_t blowup_count, const MomentTarget& target);

/// sup_k |X_k| per non-blowup path, in path order.
std::vector<double> path_sups(const SolveOutput& batch);

MomentEstimate sup_moment_estimate(const SolveOutput& batch, double p);
MomentEstimate exp_moment_estimate(const SolveOutput& batch, double c, double gamma);

/// Per-path sups of the reported process (X, or Y for coupled models) at
/// several dyadic levels; every level reuses the finest drivers.
struct LevelSups {
  std::vector<std::size_t> levels;
  std::vector<std::vector<double>> sups;  // [level][path], NaN on blowup
  std::vector<std::size_t> blowups;       // per level
};

LevelSups simulate_level_sups(const ZooModel& model, const std::vector<std::size_t>& levels, std::size_t paths,
                              std::uint64_t seed, const SynthesisOptions& options = {});

struct StabilityRow {
  std::size_t steps = 0;
  std::size_t blowup_count = 0;
  std::optional<MomentEstimate> estimate;  // empty when estimation failed
  std::string failure;
};

struct StabilityTable {
  MomentTarget target;
  std::vector<StabilityRow> rows;
  std::vector<std::optional<double>> ratios;  // estimate(2n) / estimate(n)

  bool ratios_within(double lo, double hi) const;
  std::size_t total_blowups() const;
};

std::vector<StabilityTable> stability_tables(const LevelSups& sups, const std::vector<MomentTarget>& targets);

std::vector<StabilityTable> grid_stability_study(const ZooModel& model, const std::vector<MomentTarget>& targets,
                                                 const std::vector<std::size_t>& levels, std::size_t paths,
                                                 std::uint64_t seed, const SynthesisOptions& options = {});

inline constexpr std::size_t kMinFerniquePaths = 10000;

struct FerniqueReport {
  double hurst = 0.0;
  double mu = 0.0;
  std::size_t steps = 0;
  std::size_t paths = 0;
  bool fit_performed = false;
  double slope = 0.0;  // of log P(seminorm > x) against x^2
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t tail_points = 0;
  double mean_seminorm = 0.0;
  double mean_seminorm_half = 0.0;  // same paths restricted to n / 2
  double growth_ratio = 0.0;        // mean_seminorm / mean_seminorm_half
  std::vector<double> seminorms;    // per path, path order
};

FerniqueReport fernique_tail_check(double hurst, double mu, const TimeGrid& grid, std::size_t paths,
                                   std::uint64_t seed, const SynthesisOptions& options = {});

struct BoundaryRow {
  double gamma = 0.0;
  MomentEstimate estimate;
  bool above_theorem_bound = false;  // gamma >= 4 mu / (2 mu + 1)
  bool above_gaussian_bound = false; // gamma > 2
};

struct BoundaryReport {
  double holder_order = 0.0;
  double theorem_bound = 0.0;
  std::size_t steps = 0;
  std::vector<BoundaryRow> rows;
  std::optional<std::size_t> first_unstable;  // row index
};

BoundaryReport exponent_boundary_study(const ZooModel& model, const std::vector<double>& gammas, double c,
                                       std::size_t steps, std::size_t paths, std::uint64_t seed,
                                       const SynthesisOptions& options = {});

}  // namespace mixsde

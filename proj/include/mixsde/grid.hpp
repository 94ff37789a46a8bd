#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mixsde {

/// Uniform grid t_k = k T / n, k = 0..n, on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t steps);

  double horizon() const { return horizon_; }
  std::size_t steps() const { return steps_; }
  std::size_t points() const { return steps_ + 1; }
  double step() const { return horizon_ / static_cast<double>(steps_); }
  double time(std::size_t k) const;

  // Index of t if t is a grid point (up to 1e-9 relative slack), else nullopt.
  std::optional<std::size_t> index_of(double t) const;

  /// Coarser grid keeping every `stride`-th point; stride must divide steps.
  TimeGrid coarsen(std::size_t stride) const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// Non-owning view of one vector-valued path, row k holds the value at t_k.
struct PathView {
  TimeGrid grid;
  std::size_t dim;
  std::span<const double> values;

  double operator()(std::size_t k, std::size_t d = 0) const { return values[k * dim + d]; }
  std::span<const double> at(std::size_t k) const { return values.subspan(k * dim, dim); }
};

/// Owning sampled path.
struct DiscretePath {
  TimeGrid grid;
  std::size_t dim = 1;
  std::vector<double> values;

  DiscretePath(TimeGrid g, std::size_t d, std::vector<double> v);

  // Samples f on the grid (scalar).
  template <class F>
  static DiscretePath from_function(const TimeGrid& g, F&& f) {
    std::vector<double> v(g.points());
    for (std::size_t k = 0; k < g.points(); ++k) v[k] = f(g.time(k));
    return DiscretePath(g, 1, std::move(v));
  }

  PathView view() const { return {grid, dim, values}; }
  operator PathView() const { return view(); }  // NOLINT: implicit by intent
};

enum class SynthesisMethod { cholesky, circulant };

std::string to_string(SynthesisMethod m);
SynthesisMethod synthesis_method_from_string(const std::string& s);

/// Where a batch's randomness came from.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::string generator;  // "fbm/cholesky", "fbm/circulant", "wiener", "solution", ...
  std::uint64_t key = 0;  // derived stream key actually used
};

/// count independent realizations of a dim-valued path on a grid. Storage is
/// path-major: values[(i * points + k) * dim + d].
class PathBatch {
 public:
  PathBatch(TimeGrid grid, std::size_t dim, std::size_t count);

  const TimeGrid& grid() const { return grid_; }
  std::size_t dim() const { return dim_; }
  std::size_t count() const { return count_; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  double at(std::size_t path, std::size_t k, std::size_t d = 0) const {
    return values_[(path * grid_.points() + k) * dim_ + d];
  }
  PathView path(std::size_t i) const;
  std::span<double> mutable_path(std::size_t i);

  /// Restriction to every stride-th grid point (exact subsampling).
  PathBatch coarsen(std::size_t stride) const;

  SeedRecord provenance;

 private:
  TimeGrid grid_;
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> values_;
};

}  // namespace mixsde

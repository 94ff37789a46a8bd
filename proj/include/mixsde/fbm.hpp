#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixsde/grid.hpp"

namespace mixsde {

class HurstParameter {
 public:
  explicit HurstParameter(double value);
  double value() const { return value_; }
  bool operator==(const HurstParameter&) const = default;

 private:
  double value_;
};

/// Noise sources of a mixed equation: m Wiener coordinates and l fBm
/// coordinates with their own Hurst indices. holder_order is the order mu
/// used for seminorm diagnostics; it defaults to min(H) - 0.01.
struct DriverSpec {
  std::size_t wiener_dim = 0;
  std::vector<HurstParameter> rough_hurst;
  double holder_order = 0.0;

  static DriverSpec make(std::size_t wiener_dim, std::vector<double> hurst,
                         std::optional<double> holder_order = std::nullopt);

  std::size_t rough_dim() const { return rough_hurst.size(); }
  double min_hurst() const;
};

struct SynthesisOptions {
  SynthesisMethod method = SynthesisMethod::circulant;
  std::size_t cholesky_cap = 4096;
  std::size_t workers = 1;
};

double fbm_covariance(double t, double s, HurstParameter H);

/// Covariance of (B_{t_1}, ..., B_{t_n}); the point t_0 = 0 is left out.
Eigen::MatrixXd fbm_covariance_matrix(const TimeGrid& grid, HurstParameter H);

// True when min eigenvalue >= -1e-10 * max eigenvalue.
bool is_positive_semidefinite(const Eigen::MatrixXd& symmetric);

/// Per-path exact fBm sampler for one (grid, H, method). sample() is const
/// and thread-safe; path i depends only on (key, i).
class FbmSampler {
 public:
  FbmSampler(const TimeGrid& grid, HurstParameter H, SynthesisMethod method,
             std::size_t cholesky_cap = 4096);
  ~FbmSampler();
  FbmSampler(FbmSampler&&) noexcept;
  FbmSampler& operator=(FbmSampler&&) noexcept;

  // Writes n + 1 values starting with 0, spaced by `stride` in `out`.
  void sample(std::uint64_t key, std::uint64_t path, std::span<double> out,
              std::size_t stride = 1) const;

  // Normalized spectrum of the embedding (circulant only; empty otherwise).
  std::span<const double> embedding_eigenvalues() const;

  const TimeGrid& grid() const;
  SynthesisMethod method() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One dim-dimensional Wiener path, row-major (points x dim), W_0 = 0.
void sample_wiener_path(const TimeGrid& grid, std::size_t dim, std::uint64_t key,
                        std::uint64_t path, std::span<double> out);

/// count fBm paths with Hurst index H. Uses key derive_key(seed, rough, 0).
PathBatch generate_fbm(const TimeGrid& grid, HurstParameter H, std::size_t count,
                       std::uint64_t seed, const SynthesisOptions& options = {});

/// count dim-dimensional standard Wiener paths. Uses derive_key(seed, wiener, 0).
PathBatch generate_wiener(const TimeGrid& grid, std::size_t dim, std::size_t count,
                          std::uint64_t seed, std::size_t workers = 1);

struct DriverBatches {
  std::optional<PathBatch> wiener;
  std::optional<PathBatch> rough;
};

/// Per-path sampler for every coordinate of a DriverSpec.
class DriverSampler {
 public:
  DriverSampler(const DriverSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                const SynthesisOptions& options = {}, int stage = 0);

  // wiener: points x m, rough: points x l (row-major); either may be empty
  // when the corresponding dimension is zero.
  void sample(std::uint64_t path, std::span<double> wiener, std::span<double> rough) const;

  const DriverSpec& spec() const { return spec_; }
  const TimeGrid& grid() const { return grid_; }
  std::uint64_t wiener_key() const { return wiener_key_; }
  std::uint64_t rough_key(std::size_t j) const { return rough_keys_[j]; }

 private:
  DriverSpec spec_;
  TimeGrid grid_;
  std::uint64_t wiener_key_;
  std::vector<std::uint64_t> rough_keys_;
  std::vector<FbmSampler> rough_;
};

/// Drivers for a full DriverSpec. Rough component j uses key
/// derive_key(seed, rough_role, j); stage 1 selects the coupled_* roles so a
/// coupled equation gets noise independent of the base equation.
DriverBatches generate_drivers(const DriverSpec& spec, const TimeGrid& grid, std::size_t count,
                               std::uint64_t seed, const SynthesisOptions& options = {},
                               int stage = 0);

}  // namespace mixsde

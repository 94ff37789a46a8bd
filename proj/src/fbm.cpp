#include "mixsde/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "mixsde/errors.hpp"
#include "mixsde/parallel.hpp"
#include "mixsde/rng.hpp"

namespace mixsde {

HurstParameter::HurstParameter(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) throw DomainError("Hurst parameter must lie in (0, 1)");
}

DriverSpec DriverSpec::make(std::size_t wiener_dim, std::vector<double> hurst,
                            std::optional<double> holder_order) {
  DriverSpec spec;
  spec.wiener_dim = wiener_dim;
  for (double h : hurst) spec.rough_hurst.emplace_back(h);
  if (wiener_dim + spec.rough_hurst.size() < 1) throw DomainError("DriverSpec: need at least one driver");
  for (const auto& h : spec.rough_hurst)
    if (!(h.value() > 0.5)) throw DomainError("DriverSpec: rough drivers need H > 1/2");
  if (spec.rough_hurst.empty()) {
    spec.holder_order = holder_order.value_or(0.0);
    return spec;
  }
  const double h_min = spec.min_hurst();
  spec.holder_order = holder_order.value_or(h_min - 0.01);
  if (!(spec.holder_order > 0.5 && spec.holder_order < h_min))
    throw DomainError("DriverSpec: holder order must lie in (1/2, min H)");
  return spec;
}

double DriverSpec::min_hurst() const {
  double h = 1.0;
  for (const auto& r : rough_hurst) h = std::min(h, r.value());
  return h;
}

double fbm_covariance(double t, double s, HurstParameter H) {
  if (t < 0.0 || s < 0.0) throw DomainError("fbm_covariance: negative time");
  const double two_h = 2.0 * H.value();
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

Eigen::MatrixXd fbm_covariance_matrix(const TimeGrid& grid, HurstParameter H) {
  const std::size_t n = grid.steps();
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = fbm_covariance(grid.time(i + 1), grid.time(j + 1), H);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  return cov;
}

bool is_positive_semidefinite(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return false;
  const auto& ev = solver.eigenvalues();
  return ev.minCoeff() >= -1e-10 * std::max(0.0, ev.maxCoeff());
}

namespace {

// The FFTW planner is not re-entrant; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw ResourceError("fftw_malloc failed");
  return FftwBuffer<T>(p);
}

// Autocovariance of unit-step fractional Gaussian noise at integer lag k.
double fgn_autocovariance(std::size_t k, double H) {
  const double two_h = 2.0 * H;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) +
                std::pow(std::abs(kk - 1.0), two_h));
}

}  // namespace

struct FbmSampler::Impl {
  TimeGrid grid;
  double hurst;
  SynthesisMethod method;
  // cholesky
  Eigen::MatrixXd lower;
  // circulant: n + 1 amplitudes sqrt(lambda_k / M) (k = 0, n) or sqrt(lambda_k / 2M)
  std::vector<double> eigenvalues;
  std::vector<double> amplitude;
  fftw_plan plan = nullptr;

  Impl(const TimeGrid& g, double h, SynthesisMethod m) : grid(g), hurst(h), method(m) {}
  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FbmSampler::FbmSampler(const TimeGrid& grid, HurstParameter H, SynthesisMethod method,
                       std::size_t cholesky_cap)
    : impl_(std::make_unique<Impl>(grid, H.value(), method)) {
  const std::size_t n = grid.steps();
  if (method == SynthesisMethod::cholesky) {
    if (n > cholesky_cap)
      throw ResourceError("Cholesky synthesis limited to " + std::to_string(cholesky_cap) + " steps");
    Eigen::LLT<Eigen::MatrixXd> llt(fbm_covariance_matrix(grid, H));
    if (llt.info() != Eigen::Success) throw SynthesisError("fBm covariance is not numerically positive definite");
    impl_->lower = llt.matrixL();
    return;
  }

  // Circulant embedding of the fGn covariance, size M = 2n.
  const std::size_t m = 2 * n;
  auto row = fftw_buffer<double>(m);
  auto spectrum = fftw_buffer<fftw_complex>(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = fgn_autocovariance(j, H.value());
  for (std::size_t j = n + 1; j < m; ++j) row[j] = row[m - j];
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), row.get(), spectrum.get(), FFTW_ESTIMATE);
    // planning with ESTIMATE leaves inputs intact
    fftw_execute(forward);
    fftw_destroy_plan(forward);
  }
  impl_->eigenvalues.resize(n + 1);
  impl_->amplitude.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double lambda = spectrum[k][0];
    if (lambda < -1e-9)
      throw SynthesisError("circulant embedding eigenvalue " + std::to_string(lambda) + " at index " +
                           std::to_string(k) + " is negative");
    lambda = std::max(lambda, 0.0);
    impl_->eigenvalues[k] = lambda;
    const bool real_mode = (k == 0 || k == n);
    impl_->amplitude[k] = std::sqrt(lambda / (real_mode ? m : 2.0 * m));
  }

  auto in = fftw_buffer<fftw_complex>(n + 1);
  auto out = fftw_buffer<double>(m);
  std::lock_guard lock(fftw_planner_mutex());
  impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), in.get(), out.get(), FFTW_ESTIMATE);
  if (impl_->plan == nullptr) throw SynthesisError("FFTW plan creation failed");
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;

const TimeGrid& FbmSampler::grid() const { return impl_->grid; }
SynthesisMethod FbmSampler::method() const { return impl_->method; }

std::span<const double> FbmSampler::embedding_eigenvalues() const { return impl_->eigenvalues; }

void FbmSampler::sample(std::uint64_t key, std::uint64_t path, std::span<double> out,
                        std::size_t stride) const {
  const std::size_t n = impl_->grid.steps();
  if (out.size() < n * stride + 1) throw DomainError("FbmSampler::sample: output too small");
  CounterStream stream(key, path);
  out[0] = 0.0;

  if (impl_->method == SynthesisMethod::cholesky) {
    std::vector<double> xi(n);
    for (auto& v : xi) v = stream.normal();
    const auto& lower = impl_->lower;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) acc += lower(i, j) * xi[j];
      out[(i + 1) * stride] = acc;
    }
    return;
  }

  const std::size_t m = 2 * n;
  auto in = fftw_buffer<fftw_complex>(n + 1);
  auto noise = fftw_buffer<double>(m);
  const auto& amp = impl_->amplitude;
  in[0][0] = amp[0] * stream.normal();
  in[0][1] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    in[k][0] = amp[k] * stream.normal();
    in[k][1] = amp[k] * stream.normal();
  }
  in[n][0] = amp[n] * stream.normal();
  in[n][1] = 0.0;
  fftw_execute_dft_c2r(impl_->plan, in.get(), noise.get());

  const double scale = std::pow(impl_->grid.step(), impl_->hurst);
  double level = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    level += noise[k];
    out[(k + 1) * stride] = scale * level;
  }
}

void sample_wiener_path(const TimeGrid& grid, std::size_t dim, std::uint64_t key,
                        std::uint64_t path, std::span<double> out) {
  if (out.size() < grid.points() * dim) throw DomainError("sample_wiener_path: output too small");
  CounterStream stream(key, path);
  const double sd = std::sqrt(grid.step());
  for (std::size_t d = 0; d < dim; ++d) out[d] = 0.0;
  for (std::size_t k = 1; k < grid.points(); ++k)
    for (std::size_t d = 0; d < dim; ++d)
      out[k * dim + d] = out[(k - 1) * dim + d] + sd * stream.normal();
}

PathBatch generate_fbm(const TimeGrid& grid, HurstParameter H, std::size_t count, std::uint64_t seed,
                       const SynthesisOptions& options) {
  if (count < 1) throw DomainError("generate_fbm: count must be positive");
  FbmSampler sampler(grid, H, options.method, options.cholesky_cap);
  PathBatch batch(grid, 1, count);
  const std::uint64_t key = derive_key(seed, StreamRole::rough, 0);
  batch.provenance = {seed, "fbm/" + to_string(options.method), key};
  parallel_for(count, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) sampler.sample(key, i, batch.mutable_path(i));
  });
  return batch;
}

PathBatch generate_wiener(const TimeGrid& grid, std::size_t dim, std::size_t count, std::uint64_t seed,
                          std::size_t workers) {
  if (dim < 1) throw DomainError("generate_wiener: dimension must be positive");
  if (count < 1) throw DomainError("generate_wiener: count must be positive");
  PathBatch batch(grid, dim, count);
  const std::uint64_t key = derive_key(seed, StreamRole::wiener, 0);
  batch.provenance = {seed, "wiener", key};
  parallel_for(count, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) sample_wiener_path(grid, dim, key, i, batch.mutable_path(i));
  });
  return batch;
}

DriverSampler::DriverSampler(const DriverSpec& spec, const TimeGrid& grid, std::uint64_t seed,
                             const SynthesisOptions& options, int stage)
    : spec_(spec), grid_(grid) {
  const StreamRole wiener_role = stage == 0 ? StreamRole::wiener : StreamRole::coupled_wiener;
  const StreamRole rough_role = stage == 0 ? StreamRole::rough : StreamRole::coupled_rough;
  wiener_key_ = derive_key(seed, wiener_role, 0);
  for (std::size_t j = 0; j < spec.rough_dim(); ++j) {
    rough_keys_.push_back(derive_key(seed, rough_role, j));
    rough_.emplace_back(grid, spec.rough_hurst[j], options.method, options.cholesky_cap);
  }
}

void DriverSampler::sample(std::uint64_t path, std::span<double> wiener, std::span<double> rough) const {
  const std::size_t m = spec_.wiener_dim;
  const std::size_t l = spec_.rough_dim();
  if (m > 0) sample_wiener_path(grid_, m, wiener_key_, path, wiener);
  for (std::size_t j = 0; j < l; ++j) rough_[j].sample(rough_keys_[j], path, rough.subspan(j), l);
}

DriverBatches generate_drivers(const DriverSpec& spec, const TimeGrid& grid, std::size_t count,
                               std::uint64_t seed, const SynthesisOptions& options, int stage) {
  DriverSampler sampler(spec, grid, seed, options, stage);
  DriverBatches out;
  if (spec.wiener_dim > 0) {
    out.wiener.emplace(grid, spec.wiener_dim, count);
    out.wiener->provenance = {seed, "wiener", sampler.wiener_key()};
  }
  if (spec.rough_dim() > 0) {
    out.rough.emplace(grid, spec.rough_dim(), count);
    out.rough->provenance = {seed, "fbm/" + to_string(options.method), sampler.rough_key(0)};
  }
  parallel_for(count, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::span<double> w = out.wiener ? out.wiener->mutable_path(i) : std::span<double>{};
      std::span<double> z = out.rough ? out.rough->mutable_path(i) : std::span<double>{};
      sampler.sample(i, w, z);
    }
  });
  return out;
}

}  // namespace mixsde

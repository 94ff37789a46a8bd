#include "mixsde/grid.hpp"

#include <cmath>

#include "mixsde/errors.hpp"

namespace mixsde {

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("TimeGrid: horizon must be positive");
  if (steps < 1) throw DomainError("TimeGrid: need at least one step");
}

double TimeGrid::time(std::size_t k) const {
  if (k == steps_) return horizon_;
  return horizon_ * static_cast<double>(k) / static_cast<double>(steps_);
}

std::optional<std::size_t> TimeGrid::index_of(double t) const {
  if (!std::isfinite(t)) return std::nullopt;
  const double position = t / horizon_ * static_cast<double>(steps_);
  const double rounded = std::round(position);
  if (rounded < 0.0 || rounded > static_cast<double>(steps_)) return std::nullopt;
  if (std::abs(position - rounded) > 1e-9 * static_cast<double>(steps_)) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

TimeGrid TimeGrid::coarsen(std::size_t stride) const {
  if (stride == 0 || steps_ % stride != 0) throw DomainError("TimeGrid::coarsen: stride must divide step count");
  return TimeGrid(horizon_, steps_ / stride);
}

DiscretePath::DiscretePath(TimeGrid g, std::size_t d, std::vector<double> v)
    : grid(g), dim(d), values(std::move(v)) {
  if (dim < 1) throw DomainError("DiscretePath: dimension must be positive");
  if (values.size() != grid.points() * dim) throw DomainError("DiscretePath: value count does not match grid");
}

std::string to_string(SynthesisMethod m) {
  return m == SynthesisMethod::cholesky ? "cholesky" : "circulant";
}

SynthesisMethod synthesis_method_from_string(const std::string& s) {
  if (s == "cholesky") return SynthesisMethod::cholesky;
  if (s == "circulant") return SynthesisMethod::circulant;
  throw DomainError("unknown synthesis method '" + s + "'");
}

PathBatch::PathBatch(TimeGrid grid, std::size_t dim, std::size_t count)
    : grid_(grid), dim_(dim), count_(count), values_(grid.points() * dim * count, 0.0) {
  if (dim < 1) throw DomainError("PathBatch: dimension must be positive");
  if (count < 1) throw DomainError("PathBatch: count must be positive");
}

PathView PathBatch::path(std::size_t i) const {
  const std::size_t stride = grid_.points() * dim_;
  return {grid_, dim_, std::span<const double>(values_).subspan(i * stride, stride)};
}

std::span<double> PathBatch::mutable_path(std::size_t i) {
  const std::size_t stride = grid_.points() * dim_;
  return std::span<double>(values_).subspan(i * stride, stride);
}

PathBatch PathBatch::coarsen(std::size_t stride) const {
  PathBatch out(grid_.coarsen(stride), dim_, count_);
  out.provenance = provenance;
  const std::size_t coarse_points = out.grid().points();
  for (std::size_t i = 0; i < count_; ++i) {
    auto src = path(i).values;
    auto dst = out.mutable_path(i);
    for (std::size_t k = 0; k < coarse_points; ++k)
      for (std::size_t d = 0; d < dim_; ++d) dst[k * dim_ + d] = src[k * stride * dim_ + d];
  }
  return out;
}

}  // namespace mixsde

#pragma once

#include <cstddef>

#include "mixsde/grid.hpp"

namespace mixsde {

inline constexpr std::size_t kHolderScanCap = 8192;

struct NormReport {
  double sup_norm = 0.0;
  double holder_seminorm = 0.0;
  double exponent = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// max_{a <= t_k <= b} |f(t_k)| (Euclidean). a, b must be grid points, a < b.
double sup_norm(const PathView& path, double a, double b);
double sup_norm(const PathView& path);

/// Exact scan over all grid pairs a <= t_i < t_j <= b of
/// |f(t_j) - f(t_i)| / (t_j - t_i)^gamma. At most kHolderScanCap cells.
double holder_seminorm(const PathView& path, double a, double b, double gamma);
double holder_seminorm(const PathView& path, double gamma);

// Index-range variants used by batch code; [first, last] inclusive.
double sup_norm_range(const PathView& path, std::size_t first, std::size_t last);
double holder_seminorm_range(const PathView& path, std::size_t first, std::size_t last, double gamma);

NormReport norm_report(const PathView& path, double a, double b, double gamma);

struct GrrResult {
  double value = 0.0;             // +inf when the sum overflowed
  double seminorm_ratio = 0.0;    // holder_seminorm(theta)^p / value; NaN if undefined
  bool divergent = false;
};

/// Trapezoid approximation of the Garsia-Rodemich-Rumsey double integral
///   int int |f(x) - f(y)|^p / |x - y|^(p theta + 2) dx dy
/// over the path interval, diagonal nodes excluded. Diagnostic only.
GrrResult grr_functional(const PathView& path, double theta, double p);

/// Least-squares slope of log RMS increment against log lag over dyadic
/// lags 2^j, j = 0..log2(n) - 3. Needs n >= 64; NaN for a constant path.
double holder_exponent_estimate(const PathView& path);

}  // namespace mixsde

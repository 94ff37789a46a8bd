#include "mixsde/path_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mixsde/errors.hpp"

namespace mixsde {

namespace {

std::size_t checked_index(const PathView& path, double t, const char* what) {
  auto k = path.grid.index_of(t);
  if (!k) throw DomainError(std::string(what) + ": time " + std::to_string(t) + " is not a grid point");
  return *k;
}

void check_range(const PathView& path, std::size_t first, std::size_t last) {
  if (first >= last || last >= path.grid.points()) throw DomainError("path range must satisfy a < b on the grid");
  if (path.values.size() != path.grid.points() * path.dim) throw DomainError("path length does not match grid");
}

double increment_norm(const PathView& path, std::size_t i, std::size_t j) {
  if (path.dim == 1) return std::abs(path.values[j] - path.values[i]);
  double acc = 0.0;
  for (std::size_t d = 0; d < path.dim; ++d) {
    const double diff = path(j, d) - path(i, d);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

double sup_norm_range(const PathView& path, std::size_t first, std::size_t last) {
  check_range(path, first, last);
  double best = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    double norm;
    if (path.dim == 1) {
      norm = std::abs(path.values[k]);
    } else {
      double acc = 0.0;
      for (double v : path.at(k)) acc += v * v;
      norm = std::sqrt(acc);
    }
    best = std::max(best, norm);
  }
  return best;
}

double sup_norm(const PathView& path, double a, double b) {
  return sup_norm_range(path, checked_index(path, a, "sup_norm"), checked_index(path, b, "sup_norm"));
}

double sup_norm(const PathView& path) { return sup_norm_range(path, 0, path.grid.steps()); }

double holder_seminorm_range(const PathView& path, std::size_t first, std::size_t last, double gamma) {
  check_range(path, first, last);
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("holder_seminorm: exponent must lie in (0, 1]");
  const std::size_t cells = last - first;
  if (cells > kHolderScanCap)
    throw ResourceError("holder_seminorm: " + std::to_string(cells) + " cells exceed the scan cap");

  const double dt = path.grid.step();
  double best = 0.0;
  if (path.dim == 1) {
    const double* f = path.values.data();
    for (std::size_t lag = 1; lag <= cells; ++lag) {
      double widest = 0.0;
      for (std::size_t i = first; i + lag <= last; ++i) widest = std::max(widest, std::abs(f[i + lag] - f[i]));
      best = std::max(best, widest / std::pow(static_cast<double>(lag) * dt, gamma));
    }
    return best;
  }
  for (std::size_t lag = 1; lag <= cells; ++lag) {
    double widest = 0.0;
    for (std::size_t i = first; i + lag <= last; ++i) widest = std::max(widest, increment_norm(path, i, i + lag));
    best = std::max(best, widest / std::pow(static_cast<double>(lag) * dt, gamma));
  }
  return best;
}

double holder_seminorm(const PathView& path, double a, double b, double gamma) {
  return holder_seminorm_range(path, checked_index(path, a, "holder_seminorm"),
                               checked_index(path, b, "holder_seminorm"), gamma);
}

double holder_seminorm(const PathView& path, double gamma) {
  return holder_seminorm_range(path, 0, path.grid.steps(), gamma);
}

NormReport norm_report(const PathView& path, double a, double b, double gamma) {
  return {sup_norm(path, a, b), holder_seminorm(path, a, b, gamma), gamma, a, b};
}

GrrResult grr_functional(const PathView& path, double theta, double p) {
  if (!(p >= 1.0)) throw DomainError("grr_functional: p must be >= 1");
  if (!(p * theta + 2.0 > 0.0)) throw DomainError("grr_functional: need p * theta + 2 > 0");
  const std::size_t n = path.grid.steps();
  check_range(path, 0, n);
  const double dt = path.grid.step();
  const double singular_power = p * theta + 2.0;

  auto weight = [n](std::size_t i) { return (i == 0 || i == n) ? 0.5 : 1.0; };
  double total = 0.0;
  for (std::size_t lag = 1; lag <= n; ++lag) {
    double row = 0.0;
    for (std::size_t i = 0; i + lag <= n; ++i) {
      const double inc = increment_norm(path, i, i + lag);
      const double powered = (p == 2.0) ? inc * inc : (p == 1.0 ? inc : std::pow(inc, p));
      row += weight(i) * weight(i + lag) * powered;
    }
    total += row / std::pow(static_cast<double>(lag) * dt, singular_power);
  }
  // both orderings (x, y) and (y, x), each cell of area dt^2
  total *= 2.0 * dt * dt;

  GrrResult result;
  if (!std::isfinite(total)) {
    result.value = std::numeric_limits<double>::infinity();
    result.divergent = true;
    result.seminorm_ratio = 0.0;
    return result;
  }
  result.value = total;
  if (theta > 0.0 && theta <= 1.0 && n <= kHolderScanCap && total > 0.0) {
    result.seminorm_ratio = std::pow(holder_seminorm_range(path, 0, n, theta), p) / total;
  } else {
    result.seminorm_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

double holder_exponent_estimate(const PathView& path) {
  const std::size_t n = path.grid.steps();
  if (n < 64) throw DomainError("holder_exponent_estimate: need at least 64 steps");
  check_range(path, 0, n);
  const int top = static_cast<int>(std::floor(std::log2(static_cast<double>(n)))) - 3;

  std::vector<double> xs, ys;
  for (int j = 0; j <= top; ++j) {
    const std::size_t lag = std::size_t{1} << j;
    double acc = 0.0;
    for (std::size_t i = 0; i + lag <= n; ++i) {
      const double inc = increment_norm(path, i, i + lag);
      acc += inc * inc;
    }
    const double rms = std::sqrt(acc / static_cast<double>(n + 1 - lag));
    if (!(rms > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    xs.push_back(std::log(static_cast<double>(lag) * path.grid.step()));
    ys.push_back(std::log(rms));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace mixsde

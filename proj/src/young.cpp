#include "mixsde/young.hpp"

#include <bit>
#include <cmath>

#include "mixsde/errors.hpp"

namespace mixsde {

namespace {

struct Span {
  std::size_t first;
  std::size_t last;
};

Span integration_span(const PathView& g, const PathView& h, double a, double b) {
  if (!(g.grid == h.grid)) throw DomainError("Young sum: integrand and integrator grids differ");
  if (h.dim != 1) throw DomainError("Young sum: integrator must be scalar");
  if (g.values.size() != g.grid.points() * g.dim || h.values.size() != h.grid.points())
    throw DomainError("Young sum: path length does not match grid");
  auto first = g.grid.index_of(a);
  auto last = g.grid.index_of(b);
  if (!first || !last) throw DomainError("Young sum: interval ends must be grid points");
  if (*first >= *last) throw DomainError("Young sum: need a < b");
  return {*first, *last};
}

// Neumaier-compensated sum over cells [first, last] with the given stride.
std::vector<double> strided_sum(const PathView& g, const PathView& h, std::size_t first, std::size_t last,
                                std::size_t stride, SumRule rule) {
  std::vector<double> sum(g.dim, 0.0), carry(g.dim, 0.0);
  for (std::size_t k = first; k + stride <= last; k += stride) {
    const double dh = h.values[k + stride] - h.values[k];
    for (std::size_t d = 0; d < g.dim; ++d) {
      const double integrand = rule == SumRule::left ? g(k, d) : 0.5 * (g(k, d) + g(k + stride, d));
      const double term = integrand * dh;
      const double t = sum[d] + term;
      if (std::abs(sum[d]) >= std::abs(term))
        carry[d] += (sum[d] - t) + term;
      else
        carry[d] += (term - t) + sum[d];
      sum[d] = t;
    }
  }
  for (std::size_t d = 0; d < g.dim; ++d) sum[d] += carry[d];
  return sum;
}

}  // namespace

std::vector<double> rs_sum(const PathView& g, const PathView& h, double a, double b) {
  const Span s = integration_span(g, h, a, b);
  return strided_sum(g, h, s.first, s.last, 1, SumRule::left);
}

YoungResult young_integrate(const PathView& g, const PathView& h, double a, double b, double tol,
                            std::size_t max_level, SumRule rule) {
  const Span s = integration_span(g, h, a, b);
  const std::size_t n = g.grid.steps();
  if ((n & (n - 1)) != 0) throw DomainError("young_integrate: step count must be a power of two");
  const std::size_t finest = static_cast<std::size_t>(std::countr_zero(n));
  if (max_level > finest) throw DomainError("young_integrate: max_level exceeds the supplied grid");

  std::size_t first_level = 0;
  while (first_level <= max_level) {
    const std::size_t stride = n >> first_level;
    if (s.first % stride == 0 && s.last % stride == 0) break;
    ++first_level;
  }
  if (first_level >= max_level)
    throw DomainError("young_integrate: interval resolves at fewer than two levels");

  YoungResult result;
  result.first_level = first_level;
  for (std::size_t level = first_level; level <= max_level; ++level)
    result.level_values.push_back(strided_sum(g, h, s.first, s.last, n >> level, rule));

  const auto& fine = result.level_values.back();
  const auto& coarse = result.level_values[result.level_values.size() - 2];
  double err = 0.0;
  for (std::size_t d = 0; d < fine.size(); ++d) err += (fine[d] - coarse[d]) * (fine[d] - coarse[d]);
  result.value = fine;
  result.refinement_level = max_level;
  result.error_estimate = std::sqrt(err);
  result.converged = std::isfinite(result.error_estimate) && result.error_estimate < tol;
  return result;
}

double young_love_constant(double alpha, double beta) {
  if (!(alpha + beta > 1.0)) throw DomainError("Young-Love constant needs alpha + beta > 1");
  return 1.0 + 1.0 / (1.0 - std::pow(2.0, 1.0 - (alpha + beta)));
}

double young_love_rhs(double sup_g, double hol_g_alpha, double hol_h_beta, double a, double b,
                      double alpha, double beta) {
  if (!(alpha + beta > 1.0)) throw DomainError("young_love_rhs: need alpha + beta > 1");
  if (sup_g < 0.0 || hol_g_alpha < 0.0 || hol_h_beta < 0.0) throw DomainError("young_love_rhs: negative norm");
  if (!(b > a)) throw DomainError("young_love_rhs: need a < b");
  const double len = b - a;
  return young_love_constant(alpha, beta) * hol_h_beta * (sup_g + hol_g_alpha * std::pow(len, alpha)) *
         std::pow(len, beta);
}

}  // namespace mixsde

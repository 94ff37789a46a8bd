#pragma once

#include <cstddef>
#include <vector>

#include "mixsde/grid.hpp"

namespace mixsde {

enum class SumRule {
  left,       // sum g(t_k) dh_k
  trapezoid,  // sum (g(t_k) + g(t_{k+1})) / 2 dh_k
};

struct YoungResult {
  std::vector<double> value;         // one entry per integrand coordinate
  std::size_t refinement_level = 0;  // finest level used (2^level cells on [0, T])
  double error_estimate = 0.0;       // |value(finest) - value(previous)|
  bool converged = false;
  std::vector<std::vector<double>> level_values;  // coarsest first
  std::size_t first_level = 0;
};

/// Left-point sum of g dh over the grid cells of [a, b]. g may be vector
/// valued, h must be scalar; both on the same grid.
std::vector<double> rs_sum(const PathView& g, const PathView& h, double a, double b);

/// Riemann-Stieltjes sums on dyadic subsamples of the supplied paths. The
/// paths must have 2^L steps with L >= max_level; level l uses every
/// 2^(L - l)-th point. Converged when the last two levels differ by < tol.
YoungResult young_integrate(const PathView& g, const PathView& h, double a, double b, double tol,
                            std::size_t max_level, SumRule rule = SumRule::trapezoid);

/// Constant 1 + (1 - 2^(1 - alpha - beta))^(-1) used in the Young-Love bound.
double young_love_constant(double alpha, double beta);

/// Right-hand side of the Young-Love estimate
///   C hol_h (sup_g + hol_g (b - a)^alpha) (b - a)^beta.
double young_love_rhs(double sup_g, double hol_g_alpha, double hol_h_beta, double a, double b,
                      double alpha, double beta);

}  // namespace mixsde

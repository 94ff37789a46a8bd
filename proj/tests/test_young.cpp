#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixsde/errors.hpp"
#include "mixsde/fbm.hpp"
#include "mixsde/path_analysis.hpp"
#include "mixsde/young.hpp"

using namespace mixsde;

TEST_CASE("riemann-stieltjes sums") {
  const TimeGrid g2(1.0, 2);
  const auto t2 = DiscretePath::from_function(g2, [](double t) { return t; });
  CHECK(rs_sum(t2, t2, 0.0, 1.0)[0] == doctest::Approx(0.25));

  const TimeGrid g(1.0, 4096);
  const auto one = DiscretePath::from_function(g, [](double) { return 1.0; });
  const auto h = DiscretePath::from_function(g, [](double t) { return std::cos(3.0 * t); });
  CHECK(rs_sum(one, h, 0.25, 0.75)[0] == doctest::Approx(std::cos(2.25) - std::cos(0.75)).epsilon(1e-12));

  const auto sq = DiscretePath::from_function(g, [](double t) { return t * t; });
  const auto cube = DiscretePath::from_function(g, [](double t) { return t * t * t; });
  CHECK(std::abs(rs_sum(sq, cube, 0.0, 1.0)[0] - 0.6) < 1e-3);

  const auto other = DiscretePath::from_function(TimeGrid(1.0, 2048), [](double t) { return t; });
  CHECK_THROWS_AS(rs_sum(sq, other, 0.0, 1.0), DomainError);
}

TEST_CASE("constant integrands are exact at every level") {
  const TimeGrid g(1.0, 1024);
  const PathBatch z = generate_fbm(g, HurstParameter(0.7), 1, 3);
  const auto c = DiscretePath::from_function(g, [](double) { return 1.5; });
  for (auto rule : {SumRule::left, SumRule::trapezoid}) {
    const YoungResult r = young_integrate(c, z.path(0), 0.0, 1.0, 1e-9, 10, rule);
    const double exact = 1.5 * z.at(0, 1024);
    for (const auto& level : r.level_values) CHECK(level[0] == doctest::Approx(exact).epsilon(1e-13));
    CHECK(r.converged);
  }
}

TEST_CASE("integral of Z dZ by the chain rule") {
  const TimeGrid g(1.0, 4096);
  const PathBatch z = generate_fbm(g, HurstParameter(0.75), 10, 8);
  for (std::size_t i = 0; i < z.count(); ++i) {
    const YoungResult r = young_integrate(z.path(i), z.path(i), 0.0, 1.0, 1e-3, 12);
    const double exact = 0.5 * z.at(i, 4096) * z.at(i, 4096);
    CHECK(std::abs(r.value[0] - exact) <= 1e-3 * std::abs(exact));
    CHECK(r.refinement_level == 12);
    CHECK(r.error_estimate >= 0.0);
  }
}

TEST_CASE("left-point sums carry the quadratic-variation bias") {
  // -1/2 sum (dZ)^2 ~ -n^{1-2H}/2 for H = 0.75 at n = 4096
  const TimeGrid g(1.0, 4096);
  const PathBatch z = generate_fbm(g, HurstParameter(0.75), 20, 9);
  double bias = 0.0;
  for (std::size_t i = 0; i < z.count(); ++i) {
    const YoungResult r = young_integrate(z.path(i), z.path(i), 0.0, 1.0, 1e-3, 12, SumRule::left);
    bias += r.value[0] - 0.5 * z.at(i, 4096) * z.at(i, 4096);
  }
  bias /= 20.0;
  CHECK(bias == doctest::Approx(-0.5 / std::sqrt(4096.0)).epsilon(0.05));
}

TEST_CASE("chain rule for a smooth function of a rough path") {
  const TimeGrid g(1.0, 4096);
  const PathBatch z = generate_fbm(g, HurstParameter(0.7), 10, 10);
  for (std::size_t i = 0; i < z.count(); ++i) {
    std::vector<double> dF(g.points());
    for (std::size_t k = 0; k < g.points(); ++k) dF[k] = std::cos(z.at(i, k));
    const YoungResult r = young_integrate(PathView{g, 1, dF}, z.path(i), 0.0, 1.0, 1e-3, 12);
    CHECK(std::abs(r.value[0] - (std::sin(z.at(i, 4096)) - std::sin(0.0))) < 1e-3);
    CHECK(r.converged);
  }
}

TEST_CASE("integration is linear in the integrand and additive in the interval") {
  const TimeGrid g(1.0, 2048);
  const PathBatch z = generate_fbm(g, HurstParameter(0.8), 3, 12);
  std::vector<double> mix(g.points());
  for (std::size_t k = 0; k < g.points(); ++k) mix[k] = -3.0 * z.at(0, k) + z.at(1, k);
  for (auto rule : {SumRule::left, SumRule::trapezoid}) {
    const auto a = young_integrate(z.path(0), z.path(2), 0.0, 1.0, 1e-3, 11, rule);
    const auto b = young_integrate(z.path(1), z.path(2), 0.0, 1.0, 1e-3, 11, rule);
    const auto m = young_integrate(PathView{g, 1, mix}, z.path(2), 0.0, 1.0, 1e-3, 11, rule);
    for (std::size_t l = 0; l < m.level_values.size(); ++l)
      CHECK(m.level_values[l][0] == doctest::Approx(-3.0 * a.level_values[l][0] + b.level_values[l][0]).epsilon(1e-12));
    const auto left = young_integrate(z.path(0), z.path(2), 0.0, 0.375, 1e-3, 11, rule);
    const auto right = young_integrate(z.path(0), z.path(2), 0.375, 1.0, 1e-3, 11, rule);
    CHECK(left.value[0] + right.value[0] == doctest::Approx(a.value[0]).epsilon(1e-12));
  }
}

TEST_CASE("independent Wiener paths do not settle at tight tolerance") {
  const TimeGrid g(1.0, 4096);
  const PathBatch w = generate_wiener(g, 2, 20, 13);
  int unconverged = 0;
  for (std::size_t i = 0; i < w.count(); ++i) {
    std::vector<double> a(g.points()), b(g.points());
    for (std::size_t k = 0; k < g.points(); ++k) {
      a[k] = w.at(i, k, 0);
      b[k] = w.at(i, k, 1);
    }
    const auto r = young_integrate(PathView{g, 1, a}, PathView{g, 1, b}, 0.0, 1.0, 1e-3, 12);
    if (!r.converged) ++unconverged;
  }
  CHECK(unconverged >= 15);
}

TEST_CASE("young_integrate rejects unusable input") {
  const TimeGrid g(1.0, 1000);
  const auto f = DiscretePath::from_function(g, [](double t) { return t; });
  CHECK_THROWS_AS(young_integrate(f, f, 0.0, 1.0, 1e-3, 8), DomainError);
  const TimeGrid g2(1.0, 256);
  const auto f2 = DiscretePath::from_function(g2, [](double t) { return t; });
  CHECK_THROWS_AS(young_integrate(f2, f2, 0.0, 1.0, 1e-3, 9), DomainError);
  CHECK_THROWS_AS(young_integrate(f2, f2, 0.5, 0.5, 1e-3, 8), DomainError);
}

TEST_CASE("young-love constant and right-hand side") {
  CHECK(young_love_constant(0.75, 0.75) == doctest::Approx(1.0 + 1.0 / (1.0 - std::pow(2.0, -0.5))));
  CHECK(young_love_constant(0.75, 0.75) == doctest::Approx(4.4142).epsilon(1e-4));
  CHECK_THROWS_AS(young_love_constant(0.5, 0.5), DomainError);
  CHECK(young_love_rhs(1.0, 2.0, 0.0, 0.0, 1.0, 0.7, 0.7) == 0.0);
  CHECK(young_love_rhs(1.0, 0.0, 1.0, 0.0, 1.0, 0.6, 0.6) == doctest::Approx(young_love_constant(0.6, 0.6)));
  CHECK_THROWS_AS(young_love_rhs(1.0, 0.0, 1.0, 0.0, 1.0, 0.4, 0.6), DomainError);
  CHECK_THROWS_AS(young_love_rhs(-1.0, 0.0, 1.0, 0.0, 1.0, 0.7, 0.7), DomainError);
}

TEST_CASE("young-love bound holds on random fractional pairs") {
  const TimeGrid g(1.0, 256);
  const double mu = 0.69;
  const PathBatch a = generate_fbm(g, HurstParameter(0.7), 100, 14);
  const PathBatch b = generate_fbm(g, HurstParameter(0.7), 100, 15);
  for (std::size_t i = 0; i < 100; ++i) {
    const PathView f = a.path(i), h = b.path(i);
    const double lo = (i % 8) / 16.0, hi = 0.5 + (i % 8) / 16.0;
    const auto r = young_integrate(f, h, lo, hi, 1e-3, 8);
    const double rhs = young_love_rhs(sup_norm(f, lo, hi), holder_seminorm(f, lo, hi, mu),
                                      holder_seminorm(h, lo, hi, mu), lo, hi, mu, mu);
    CHECK(std::abs(r.value[0]) <= rhs);
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixsde/errors.hpp"
#include "mixsde/fbm.hpp"
#include "mixsde/path_analysis.hpp"

using namespace mixsde;

TEST_CASE("sup norm on subintervals") {
  const auto p = DiscretePath::from_function(TimeGrid(1.0, 10), [](double t) { return std::sin(6.0 * t) - 0.2; });
  double expected = 0.0;
  for (std::size_t k = 2; k <= 7; ++k) expected = std::max(expected, std::abs(std::sin(6.0 * k / 10.0) - 0.2));
  CHECK(sup_norm(p, 0.2, 0.7) == doctest::Approx(expected));
  CHECK_THROWS_AS(sup_norm(p, 0.25, 0.7), DomainError);
  CHECK_THROWS_AS(sup_norm(p, 0.7, 0.2), DomainError);
}

TEST_CASE("sup norm is Euclidean for vector paths") {
  DiscretePath p(TimeGrid(1.0, 2), 2, {0.0, 0.0, 3.0, 4.0, 1.0, 1.0});
  CHECK(sup_norm(p) == doctest::Approx(5.0));
}

TEST_CASE("holder seminorm of simple functions") {
  const TimeGrid g(1.0, 256);
  const auto line = DiscretePath::from_function(g, [](double t) { return 2.0 * t; });
  CHECK(holder_seminorm(line, 1.0) == doctest::Approx(2.0));
  // (t - s)^{1/2} is maximal over the whole interval
  CHECK(holder_seminorm(line, 0.5) == doctest::Approx(2.0));
  const auto root = DiscretePath::from_function(g, [](double t) { return std::sqrt(t); });
  CHECK(holder_seminorm(root, 0.5) == doctest::Approx(1.0));
  const auto constant = DiscretePath::from_function(g, [](double) { return 3.0; });
  CHECK(holder_seminorm(constant, 0.7) == 0.0);
}

TEST_CASE("holder seminorm scales, shifts and restricts as a seminorm should") {
  const TimeGrid g(1.0, 512);
  const PathBatch z = generate_fbm(g, HurstParameter(0.75), 3, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    const PathView v = z.path(i);
    std::vector<double> scaled(v.values.begin(), v.values.end()), shifted = scaled;
    for (auto& x : scaled) x *= -2.5;
    for (auto& x : shifted) x += 7.0;
    const double base = holder_seminorm(v, 0.6);
    CHECK(holder_seminorm(PathView{g, 1, scaled}, 0.6) == doctest::Approx(2.5 * base));
    CHECK(holder_seminorm(PathView{g, 1, shifted}, 0.6) == doctest::Approx(base).epsilon(1e-9));
    CHECK(holder_seminorm(v, 0.25, 0.75, 0.6) <= base);
    CHECK(norm_report(v, 0.0, 1.0, 0.6).holder_seminorm == base);
  }
}

TEST_CASE("holder scan has a resource cap") {
  const TimeGrid g(1.0, kHolderScanCap * 2);
  std::vector<double> v(g.points(), 0.0);
  CHECK_THROWS_AS(holder_seminorm(PathView{g, 1, v}, 0.6), ResourceError);
  CHECK_NOTHROW(holder_seminorm(PathView{g, 1, v}, 0.0, 0.5, 0.6));
  CHECK_THROWS_AS(holder_seminorm(PathView{g, 1, v}, 0.0, 0.5, 0.0), DomainError);
}

TEST_CASE("GRR functional of a line converges to its closed form") {
  // f(t) = t, p = 2, theta = 1/4: int int |x - y|^{-1/2} dx dy = 8/3
  double previous_gap = 1e9;
  for (std::size_t n : {256u, 1024u, 4096u}) {
    const auto f = DiscretePath::from_function(TimeGrid(1.0, n), [](double t) { return t; });
    const GrrResult r = grr_functional(f, 0.25, 2.0);
    CHECK_FALSE(r.divergent);
    const double gap = std::abs(r.value - 8.0 / 3.0);
    CHECK(gap < previous_gap);
    previous_gap = gap;
    if (n == 4096) CHECK(gap < 0.06);
  }
  const auto f = DiscretePath::from_function(TimeGrid(1.0, 16), [](double t) { return t; });
  CHECK_THROWS_AS(grr_functional(f, 0.25, 0.5), DomainError);
  CHECK_THROWS_AS(grr_functional(f, -3.0, 1.0), DomainError);
}

double median_exponent(double h, std::uint64_t seed) {
  const TimeGrid g(1.0, 1024);
  const PathBatch b = generate_fbm(g, HurstParameter(h), 31, seed);
  std::vector<double> est;
  for (std::size_t i = 0; i < b.count(); ++i) est.push_back(holder_exponent_estimate(b.path(i)));
  std::nth_element(est.begin(), est.begin() + 15, est.end());
  return est[15];
}

TEST_CASE("regularity estimator recovers the Hurst index") {
  CHECK(median_exponent(0.5, 21) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(median_exponent(0.75, 22) == doctest::Approx(0.75).epsilon(0.0667));
  const auto line = DiscretePath::from_function(TimeGrid(1.0, 256), [](double t) { return t; });
  CHECK(holder_exponent_estimate(line) == doctest::Approx(1.0));
  const auto flat = DiscretePath::from_function(TimeGrid(1.0, 256), [](double) { return 1.0; });
  CHECK(std::isnan(holder_exponent_estimate(flat)));
  const auto tiny = DiscretePath::from_function(TimeGrid(1.0, 32), [](double t) { return t; });
  CHECK_THROWS_AS(holder_exponent_estimate(tiny), DomainError);
}

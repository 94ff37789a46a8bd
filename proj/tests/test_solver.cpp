#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixsde/errors.hpp"
#include "mixsde/models.hpp"
#include "mixsde/solver.hpp"

using namespace mixsde;

namespace {

ModelSpec additive(double a0, double b0, double c0, double x0) {
  return linear_mixed(LinearMixedParams::scalar(0.0, a0, 0.0, b0, 0.0, c0, x0));
}

}  // namespace

TEST_CASE("zero coefficients keep the initial value") {
  const SolveOutput out = euler_mixed(additive(0.0, 0.0, 0.0, 1.25), TimeGrid(1.0, 64), 5, 1);
  for (double v : out.solution.values()) CHECK(v == 1.25);
  CHECK(out.blowup_count() == 0);
}

TEST_CASE("unit drift integrates time exactly") {
  const TimeGrid g(1.0, 1024);
  const SolveOutput out = euler_mixed(additive(1.0, 0.0, 0.0, 0.0), g, 2, 1);
  for (std::size_t k = 0; k < g.points(); ++k) CHECK(out.solution.at(1, k) == g.time(k));
}

TEST_CASE("additive noise is reproduced exactly") {
  const TimeGrid g(1.0, 256);
  const SolveOutput out = euler_mixed(additive(0.3, 0.5, 0.7, 1.0), g, 4, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < g.points(); ++k) {
      const double expected = 1.0 + 0.3 * g.time(k) + 0.5 * out.drivers.wiener->at(i, k) + 0.7 * out.drivers.rough->at(i, k);
      CHECK(out.solution.at(i, k) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("geometric model meets its closed form") {
  GeometricParams p;
  const ModelSpec m = geometric_mixed(p);
  const TimeGrid g(1.0, 4096);
  const SolveOutput out = euler_mixed(m, g, 200, 3);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    const DiscretePath s = closed_form_geometric(p, out.drivers.wiener->path(i), out.drivers.rough->path(i));
    err += std::abs(out.solution.at(i, 4096) - s.values.back());
    scale += std::abs(s.values.back());
  }
  CHECK(err / scale < 0.01);
}

TEST_CASE("closed form reductions") {
  const TimeGrid g(1.0, 8);
  std::vector<double> w(9), z(9);
  for (std::size_t k = 0; k < 9; ++k) {
    w[k] = std::sin(double(k));
    z[k] = 0.1 * k;
  }
  const PathView W{g, 1, w}, Z{g, 1, z};
  const DiscretePath flat = closed_form_geometric(2.0, 0.3, 0.0, 0.0, W, Z);
  for (std::size_t k = 0; k < 9; ++k) CHECK(flat.values[k] == doctest::Approx(2.0 * std::exp(0.3 * g.time(k))));
  const DiscretePath gbm = closed_form_geometric(1.0, 0.0, 0.4, 0.0, W, Z);
  for (std::size_t k = 0; k < 9; ++k)
    CHECK(gbm.values[k] == doctest::Approx(std::exp(-0.08 * g.time(k) + 0.4 * w[k])));
}

TEST_CASE("closed form against a very fine Euler run on one driver pair") {
  GeometricParams p;
  const TimeGrid g(1.0, 16384);
  const SolveOutput out = euler_mixed(geometric_mixed(p), g, 1, 4);
  const DiscretePath s = closed_form_geometric(p, out.drivers.wiener->path(0), out.drivers.rough->path(0));
  double worst = 0.0;
  for (std::size_t k = 0; k < g.points(); ++k)
    worst = std::max(worst, std::abs(out.solution.at(0, k) - s.values[k]) / s.values[k]);
  CHECK(worst < 0.005);
}

TEST_CASE("blowup is flagged at the first non-finite state") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("quadratic_drift"));
  const TimeGrid g(1.0, 256);
  const SolveOutput out = euler_mixed(m, g, 20, 5);
  CHECK(out.blowup_count() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t at = *out.blowup[i];
    REQUIRE(at > 0);
    for (std::size_t k = 0; k < at; ++k) CHECK(std::isfinite(out.solution.at(i, k)));
    for (std::size_t k = at; k < g.points(); ++k) CHECK(std::isnan(out.solution.at(i, k)));
  }
}

TEST_CASE("solution depends only on past increments") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("bounded_trig"));
  const TimeGrid g(1.0, 128);
  const SolveOutput base = euler_mixed(m, g, 1, 6);
  DriverBatches perturbed = base.drivers;
  const std::size_t cut = 70;
  for (std::size_t k = cut + 1; k < g.points(); ++k) {
    perturbed.wiener->mutable_path(0)[k] += 3.0;
    perturbed.rough->mutable_path(0)[k] -= 2.0;
  }
  const SolveOutput other = euler_mixed(m, g, std::move(perturbed));
  for (std::size_t k = 0; k <= cut; ++k) CHECK(other.solution.at(0, k) == base.solution.at(0, k));
  CHECK(other.solution.at(0, cut + 2) != base.solution.at(0, cut + 2));
}

TEST_CASE("geometric solutions stay positive on desk-scale parameters") {
  const TimeGrid g(1.0, 1024);
  for (double mu : {-0.5, 0.5})
    for (double sw : {0.0, 0.5})
      for (double sb : {0.0, 0.5}) {
        GeometricParams p;
        p.mu = mu;
        p.sigma_w = sw;
        p.sigma_b = sb;
        const SolveOutput out = euler_mixed(geometric_mixed(p), g, 50, 7);
        for (std::size_t i = 0; i < 50; ++i) {
          if (out.blown_up(i)) continue;
          const PathView v = out.solution.path(i);
          CHECK(*std::min_element(v.values.begin(), v.values.end()) > 0.0);
        }
      }
}

TEST_CASE("results do not depend on the worker count") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("bounded_trig"));
  SynthesisOptions one, three;
  three.workers = 3;
  const SolveOutput a = euler_mixed(m, TimeGrid(1.0, 256), 13, 8, one);
  const SolveOutput b = euler_mixed(m, TimeGrid(1.0, 256), 13, 8, three);
  CHECK(std::equal(a.solution.values().begin(), a.solution.values().end(), b.solution.values().begin()));
}

TEST_CASE("grid halving differences shrink") {
  for (const auto& name : {"linear_mixed", "bounded_trig", "geometric_mixed"}) {
    const auto rows = convergence_study(model_zoo(name), {64, 128, 256, 512, 1024, 2048, 4096}, 200, 9);
    INFO(name);
    for (std::size_t k = 1; k + 1 < rows.size(); ++k)
      CHECK(*rows[k].halving_difference <= 1.1 * *rows[k - 1].halving_difference);
    CHECK_FALSE(rows.back().halving_difference.has_value());
  }
}

TEST_CASE("driver dimensions are checked") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("linear_mixed"));
  const TimeGrid g(1.0, 32);
  DriverBatches d = generate_drivers(DriverSpec::make(2, {0.75}), g, 3, 1);
  CHECK_THROWS_AS(euler_mixed(m, g, d), DomainError);
  DriverBatches e = generate_drivers(m.drivers, TimeGrid(1.0, 64), 3, 1);
  CHECK_THROWS_AS(euler_mixed(m, g, e), DomainError);
}

TEST_CASE("coupled stage with zero coefficients keeps its initial value") {
  CoupledModel m = std::get<CoupledModel>(model_zoo("stochvol"));
  auto zero = [](double, std::span<const double>, std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
  };
  m.drift.eval = m.diffusion.eval = m.rough.eval = zero;
  m.y0 = {2.5};
  const CoupledSolveOutput out = solve_coupled(m, TimeGrid(1.0, 64), 4, 10);
  for (double v : out.y.solution.values()) CHECK(v == 2.5);
}

TEST_CASE("linearized geometric equation tracks the price ratio") {
  const ModelSpec base = std::get<ModelSpec>(model_zoo("geometric_mixed"));
  const CoupledModel d = malliavin_linearized(base, std::vector<double>{1.0});
  const CoupledSolveOutput out = solve_coupled(d, TimeGrid(1.0, 512), 10, 11);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t k = 0; k <= 512; k += 64)
      CHECK(out.y.solution.at(i, k) == doctest::Approx(out.x.solution.at(i, k) / base.x0[0]).epsilon(1e-12));
}

TEST_CASE("stochvol with frozen volatility is a geometric model") {
  StochVolParams p;
  p.volatility.alpha_a = p.volatility.beta_a = 0.0;
  p.volatility.alpha_b = p.volatility.beta_b = 0.0;
  p.volatility.alpha_c = p.volatility.beta_c = 0.0;
  const CoupledModel sv = stochvol(p);
  GeometricParams gp;
  gp.s0 = p.y0;
  gp.mu = p.drift;
  gp.sigma_w = p.vol_w * std::cos(p.volatility.x0);
  gp.sigma_b = p.vol_b * std::pow(1.0 + p.x0_2 * p.x0_2, 0.5 * p.rho);
  const ModelSpec geo = geometric_mixed(gp);
  const TimeGrid g(1.0, 256);
  const CoupledSolveOutput out = solve_coupled(sv, g, 5, 12);
  const SolveOutput ref = euler_mixed(geo, g, out.y.drivers);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(out.x.solution.at(i, 256, 0) == p.volatility.x0);
    for (std::size_t k = 0; k < g.points(); k += 16)
      CHECK(out.y.solution.at(i, k) == doctest::Approx(ref.solution.at(i, k)).epsilon(1e-12));
  }
}

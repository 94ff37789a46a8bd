#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixsde/errors.hpp"
#include "mixsde/models.hpp"
#include "mixsde/rng.hpp"

using namespace mixsde;

namespace {

// Central-difference check of a field's jacobian at random points.
void check_jacobian(const CoefficientField& f, std::uint64_t seed) {
  REQUIRE(f.has_jacobian());
  CounterStream s(seed, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = s.uniform();
    std::vector<double> x(f.dim);
    for (auto& v : x) v = 3.0 * s.normal();
    std::vector<double> J(f.columns * f.dim * f.dim);
    f.jacobian(t, x, J);
    for (std::size_t c = 0; c < f.dim; ++c) {
      std::vector<double> xp = x, xm = x, fp(f.output_size()), fm(f.output_size());
      xp[c] += 1e-6;
      xm[c] -= 1e-6;
      f.eval(t, xp, fp);
      f.eval(t, xm, fm);
      for (std::size_t j = 0; j < f.columns; ++j)
        for (std::size_t r = 0; r < f.dim; ++r)
          CHECK(J[j * f.dim * f.dim + r * f.dim + c] ==
                doctest::Approx((fp[j * f.dim + r] - fm[j * f.dim + r]) / 2e-6).epsilon(1e-5));
    }
  }
}

void check_jacobian(const CoupledField& f, std::uint64_t seed) {
  REQUIRE(f.has_jacobian());
  CounterStream s(seed, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = s.uniform();
    std::vector<double> x(f.x_dim), y(f.dim);
    for (auto& v : x) v = 2.0 * s.normal();
    for (auto& v : y) v = 2.0 * s.normal();
    std::vector<double> J(f.columns * f.dim * f.dim);
    f.jacobian_y(t, x, y, J);
    for (std::size_t c = 0; c < f.dim; ++c) {
      std::vector<double> yp = y, ym = y, fp(f.output_size()), fm(f.output_size());
      yp[c] += 1e-6;
      ym[c] -= 1e-6;
      f.eval(t, x, yp, fp);
      f.eval(t, x, ym, fm);
      for (std::size_t j = 0; j < f.columns; ++j)
        for (std::size_t r = 0; r < f.dim; ++r)
          CHECK(J[j * f.dim * f.dim + r * f.dim + c] ==
                doctest::Approx((fp[j * f.dim + r] - fm[j * f.dim + r]) / 2e-6).epsilon(1e-5));
    }
  }
}

}  // namespace

TEST_CASE("zoo lookup") {
  for (const auto& name : zoo_model_names()) CHECK_NOTHROW(model_zoo(name));
  CHECK_THROWS_AS(model_zoo("heston"), DomainError);
  ModelParams p;
  p.numbers["sigma"] = 0.1;
  CHECK_THROWS_AS(model_zoo("geometric_mixed", p), DomainError);
  const auto names = zoo_parameter_names("geometric_mixed");
  CHECK(std::find(names.begin(), names.end(), "sigma_b") != names.end());
}

TEST_CASE("declared sets of the zoo") {
  CHECK(std::get<ModelSpec>(model_zoo("linear_mixed")).claims.set == AssumptionSet::A);
  CHECK(std::get<ModelSpec>(model_zoo("geometric_mixed")).claims.set == AssumptionSet::A);
  CHECK(std::get<ModelSpec>(model_zoo("bounded_trig")).claims.set == AssumptionSet::B);
  CHECK(std::get<CoupledModel>(model_zoo("stochvol")).claims.set == AssumptionSet::C);
  CHECK(std::get<CoupledModel>(model_zoo("malliavin_linearized")).claims.set == AssumptionSet::C);
  CHECK(std::get<CoupledModel>(model_zoo("malliavin_linearized")).shared_drivers);
}

TEST_CASE("admissible exponent ranges") {
  CHECK(rho_upper_bound(0.75) == doctest::Approx(0.3));
  CHECK(exp_gamma_upper_bound(0.75) == doctest::Approx(1.2));
  CHECK(exp_gamma_upper_bound(1.0) == doctest::Approx(4.0 / 3.0));
  const double beta = default_time_exponent(0.7);
  CHECK(beta > 0.3);
  CHECK(beta < 0.5);
}

TEST_CASE("linear model with zero matrices is additive") {
  auto p = LinearMixedParams::scalar(0.0, 0.4, 0.0, 0.2, 0.0, 0.3, 1.0);
  const ModelSpec m = linear_mixed(p);
  std::vector<double> out(1);
  const std::vector<double> x{5.0};
  m.drift.eval(0.1, x, out);
  CHECK(out[0] == 0.4);
  m.diffusion.eval(0.1, x, out);
  CHECK(out[0] == 0.2);
  m.rough.eval(0.1, x, out);
  CHECK(out[0] == 0.3);
}

TEST_CASE("jacobians match finite differences") {
  for (const auto& name : {"linear_mixed", "bounded_trig", "geometric_mixed", "quadratic_drift"}) {
    const ModelSpec m = std::get<ModelSpec>(model_zoo(name));
    check_jacobian(m.drift, 1);
    check_jacobian(m.diffusion, 2);
    check_jacobian(m.rough, 3);
  }
  ModelParams two;
  two.numbers["dim"] = 3;
  const ModelSpec trig3 = std::get<ModelSpec>(model_zoo("bounded_trig", two));
  check_jacobian(trig3.rough, 4);
  for (const auto& name : {"stochvol", "malliavin_linearized"}) {
    const CoupledModel m = std::get<CoupledModel>(model_zoo(name));
    check_jacobian(m.drift, 5);
    check_jacobian(m.diffusion, 6);
    check_jacobian(m.rough, 7);
  }
}

TEST_CASE("stochvol warns outside the admissible rho range") {
  StochVolParams p;
  CHECK(stochvol(p).warnings.empty());
  p.rho = 0.35;
  CHECK_FALSE(stochvol(p).warnings.empty());
  p.rho = 0.7;
  CHECK_THROWS_AS(stochvol(p), DomainError);
}

TEST_CASE("model invariants are enforced") {
  ModelSpec m = std::get<ModelSpec>(model_zoo("linear_mixed"));
  m.x0 = {std::nan("")};
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = std::get<ModelSpec>(model_zoo("linear_mixed"));
  m.rough.columns = 2;
  CHECK_THROWS_AS(m.validate(), DomainError);
  m = std::get<ModelSpec>(model_zoo("linear_mixed"));
  m.claims.beta = 0.2;  // below 1 - mu
  CHECK_THROWS_AS(m.validate(), DomainError);
  BoundedTrigParams b;
  b.time_exponent = 0.6;
  CHECK_THROWS_AS(bounded_trig(b), DomainError);
}

TEST_CASE("malliavin derivative of a linear equation is the equation itself") {
  const ModelSpec base = std::get<ModelSpec>(model_zoo("geometric_mixed"));
  const CoupledModel d = malliavin_linearized(base);
  std::vector<double> a(1), b(1);
  const std::vector<double> x{2.0}, y{3.0};
  d.drift.eval(0.5, x, y, a);
  base.drift.eval(0.5, y, b);
  CHECK(a[0] == doctest::Approx(b[0]));
  d.rough.eval(0.5, x, y, a);
  base.rough.eval(0.5, y, b);
  CHECK(a[0] == doctest::Approx(b[0]));
}

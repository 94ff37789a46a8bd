#include <doctest.h>

#include <cmath>
#include <limits>

#include "mixsde/errors.hpp"
#include "mixsde/models.hpp"
#include "mixsde/validators.hpp"

using namespace mixsde;

namespace {

ModelSpec scalar_model(StateEvaluator a, StateEvaluator b, StateEvaluator c) {
  ModelSpec m;
  m.name = "custom";
  m.x0 = {0.0};
  m.drivers = DriverSpec::make(1, {0.75});
  m.drift = {1, 1, std::move(a), {}};
  m.diffusion = {1, 1, std::move(b), {}};
  m.rough = {1, 1, std::move(c), {}};
  return m;
}

void zero(double, std::span<const double>, std::span<double> out) { out[0] = 0.0; }

}  // namespace

TEST_CASE("linear growth constant of the identity drift") {
  const ModelSpec m = scalar_model([](double, auto x, auto out) { out[0] = x[0]; }, zero, zero);
  for (double R : {2.0, 10.0}) {
    const auto rep = validate_assumptions(m, AssumptionSet::A, R, 2000, 1);
    CHECK(rep.condition("A1").estimate == doctest::Approx(R / (1.0 + R)).epsilon(1e-3));
    CHECK(rep.verdict == Verdict::no_violation_found);
  }
}

TEST_CASE("sine coefficient: bound and derivative bound") {
  ModelSpec m = scalar_model(zero, zero, [](double, auto x, auto out) { out[0] = std::sin(x[0]); });
  m.rough.jacobian = [](double, auto x, auto out) { out[0] = std::cos(x[0]); };
  for (double R : {2.0, 10.0}) {
    const auto rep = validate_assumptions(m, AssumptionSet::B, R, 2000, 2);
    CHECK(rep.condition("B1").estimate >= 0.99);
    CHECK(rep.condition("B1").estimate <= 1.0);
    CHECK(rep.condition("B2").estimate >= 0.99);
    CHECK(rep.condition("B2").estimate <= 1.0);
  }
}

TEST_CASE("local Lipschitz constant of a square on a box") {
  const ModelSpec m = scalar_model(zero, [](double, auto x, auto out) { out[0] = x[0] * x[0]; }, zero);
  const auto rep = validate_assumptions(m, AssumptionSet::A, 2.0, 4000, 3);
  CHECK(rep.condition("A3").estimate == doctest::Approx(4.0).epsilon(0.01));
  CHECK(rep.condition("A3").estimate <= 4.0 + 1e-9);
}

TEST_CASE("every zoo model passes its declared set") {
  for (const auto& name : zoo_model_names()) {
    if (std::string(name) == "quadratic_drift") continue;
    const ZooModel model = model_zoo(name);
    const AssumptionReport rep = std::visit(
        [](const auto& m) { return validate_assumptions(m, m.claims.set, 10.0, 10000, 4); }, model);
    INFO(name);
    for (const auto& c : rep.conditions) {
      INFO(c.id << " estimate " << c.estimate);
      CHECK_FALSE(c.violated);
    }
    CHECK(rep.verdict == Verdict::no_violation_found);
  }
}

TEST_CASE("stochvol base equation also passes set B") {
  const CoupledModel m = std::get<CoupledModel>(model_zoo("stochvol"));
  CHECK(validate_assumptions(m, AssumptionSet::B, 10.0, 4000, 5).verdict == Verdict::no_violation_found);
}

TEST_CASE("planted quadratic drift is flagged with a witness") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("quadratic_drift"));
  const auto rep = validate_assumptions(m, AssumptionSet::A, 10.0, 10000, 6);
  CHECK(rep.verdict == Verdict::violated);
  const auto& a1 = rep.condition("A1");
  CHECK(a1.violated);
  REQUIRE(a1.witness.size() == 2);
  CHECK(std::abs(a1.witness[1]) > 5.0);
  CHECK(a1.estimate > 1.01 * *a1.claimed);
}

TEST_CASE("estimates are non-decreasing in the sample count") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("bounded_trig"));
  const auto r1 = validate_assumptions(m, AssumptionSet::B, 10.0, 1000, 7);
  const auto r2 = validate_assumptions(m, AssumptionSet::B, 10.0, 3000, 7);
  const auto r3 = validate_assumptions(m, AssumptionSet::B, 10.0, 9000, 7);
  for (std::size_t i = 0; i < r1.conditions.size(); ++i) {
    CHECK(r1.conditions[i].estimate <= r2.conditions[i].estimate);
    CHECK(r2.conditions[i].estimate <= r3.conditions[i].estimate);
  }
}

TEST_CASE("non-finite coefficients are reported with a witness") {
  const ModelSpec m = scalar_model(
      [](double, auto x, auto out) { out[0] = x[0] > 9.0 ? std::numeric_limits<double>::infinity() : 0.0; }, zero,
      zero);
  const auto rep = validate_assumptions(m, AssumptionSet::A, 10.0, 5000, 8);
  CHECK(rep.verdict == Verdict::violated);
  const auto& a1 = rep.condition("A1");
  CHECK(a1.violated);
  CHECK_FALSE(a1.witness.empty());
}

TEST_CASE("validator preconditions") {
  const ModelSpec m = std::get<ModelSpec>(model_zoo("linear_mixed"));
  CHECK_THROWS_AS(validate_assumptions(m, AssumptionSet::A, 10.0, 999, 1), DomainError);
  CHECK_THROWS_AS(validate_assumptions(m, AssumptionSet::C, 10.0, 1000, 1), DomainError);
  CHECK_THROWS_AS(validate_assumptions(m, AssumptionSet::A, 0.0, 1000, 1), DomainError);
}

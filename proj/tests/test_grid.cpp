#include <doctest.h>

#include "mixsde/errors.hpp"
#include "mixsde/grid.hpp"

using namespace mixsde;

TEST_CASE("uniform grid points and lookup") {
  TimeGrid g(2.0, 8);
  CHECK(g.points() == 9);
  CHECK(g.step() == 0.25);
  CHECK(g.time(0) == 0.0);
  CHECK(g.time(8) == 2.0);
  CHECK(g.index_of(0.75) == 3);
  CHECK_FALSE(g.index_of(0.8).has_value());
  CHECK_FALSE(g.index_of(2.5).has_value());
  CHECK(g.coarsen(4) == TimeGrid(2.0, 2));
  CHECK_THROWS_AS(g.coarsen(3), DomainError);
  CHECK_THROWS_AS(TimeGrid(0.0, 4), DomainError);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), DomainError);
}

TEST_CASE("batch coarsening is an exact restriction") {
  PathBatch b(TimeGrid(1.0, 8), 2, 3);
  auto v = b.mutable_values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i) * 0.5;
  const PathBatch c = b.coarsen(2);
  CHECK(c.grid() == TimeGrid(1.0, 4));
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t k = 0; k <= 4; ++k)
      for (std::size_t d = 0; d < 2; ++d) CHECK(c.at(p, k, d) == b.at(p, 2 * k, d));
}

TEST_CASE("path views index rows") {
  const DiscretePath p = DiscretePath::from_function(TimeGrid(1.0, 4), [](double t) { return t * t; });
  const PathView v = p;
  CHECK(v(2) == 0.25);
  CHECK(v.at(4)[0] == 1.0);
  CHECK_THROWS_AS(DiscretePath(TimeGrid(1.0, 4), 1, std::vector<double>(3)), DomainError);
}

TEST_CASE("synthesis method names round-trip") {
  for (auto m : {SynthesisMethod::cholesky, SynthesisMethod::circulant})
    CHECK(synthesis_method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(synthesis_method_from_string("fft"), DomainError);
}

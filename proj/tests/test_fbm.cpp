#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixsde/errors.hpp"
#include "mixsde/fbm.hpp"
#include "mixsde/rng.hpp"

using namespace mixsde;

TEST_CASE("hurst parameter must lie strictly inside the unit interval") {
  CHECK_THROWS_AS(HurstParameter(0.0), DomainError);
  CHECK_THROWS_AS(HurstParameter(1.0), DomainError);
  CHECK_THROWS_AS(HurstParameter(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK(HurstParameter(0.3).value() == 0.3);
}

TEST_CASE("covariance function") {
  const HurstParameter half(0.5);
  CHECK(fbm_covariance(0.3, 0.7, half) == doctest::Approx(0.3));
  const HurstParameter H(0.75);
  CHECK(fbm_covariance(0.4, 0.4, H) == doctest::Approx(std::pow(0.4, 1.5)));
  CHECK(fbm_covariance(0.0, 0.9, H) == 0.0);
  CHECK(fbm_covariance(0.2, 0.6, H) == doctest::Approx(fbm_covariance(0.6, 0.2, H)));
  // increments: E(B_t - B_s)^2 = |t - s|^{2H}
  const double t = 0.9, s = 0.35;
  const double inc = fbm_covariance(t, t, H) + fbm_covariance(s, s, H) - 2 * fbm_covariance(t, s, H);
  CHECK(inc == doctest::Approx(std::pow(t - s, 1.5)));
}

TEST_CASE("covariance matrices are positive semidefinite") {
  for (double h : {0.1, 0.5, 0.75, 0.95}) {
    const Eigen::MatrixXd C = fbm_covariance_matrix(TimeGrid(1.0, 64), HurstParameter(h));
    CHECK(C.rows() == 64);
    CHECK(is_positive_semidefinite(C));
  }
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_FALSE(is_positive_semidefinite(bad));
}

TEST_CASE("circulant embedding spectrum is non-negative") {
  for (double h : {0.55, 0.6, 0.75, 0.9, 0.99}) {
    FbmSampler s(TimeGrid(1.0, 1024), HurstParameter(h), SynthesisMethod::circulant);
    auto ev = s.embedding_eigenvalues();
    REQUIRE(ev.size() == 1025);  // half of the symmetric 2048-point spectrum
    CHECK(*std::min_element(ev.begin(), ev.end()) >= -1e-9);
  }
}

TEST_CASE("cholesky synthesis respects its size cap") {
  CHECK_THROWS_AS(FbmSampler(TimeGrid(1.0, 64), HurstParameter(0.7), SynthesisMethod::cholesky, 32), ResourceError);
  CHECK_NOTHROW(FbmSampler(TimeGrid(1.0, 32), HurstParameter(0.7), SynthesisMethod::cholesky, 32));
}

TEST_CASE("paths start at zero and are reproducible") {
  const TimeGrid g(1.0, 128);
  for (auto m : {SynthesisMethod::cholesky, SynthesisMethod::circulant}) {
    SynthesisOptions o;
    o.method = m;
    const PathBatch a = generate_fbm(g, HurstParameter(0.7), 20, 5, o);
    o.workers = 3;
    const PathBatch b = generate_fbm(g, HurstParameter(0.7), 20, 5, o);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    for (std::size_t i = 0; i < 20; ++i) CHECK(a.at(i, 0) == 0.0);
    CHECK(a.provenance.seed == 5);
    CHECK(a.provenance.key == derive_key(5, StreamRole::rough, 0));
    const PathBatch c = generate_fbm(g, HurstParameter(0.7), 20, 6, o);
    CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  }
}

TEST_CASE("path i does not depend on the batch size") {
  const TimeGrid g(1.0, 64);
  const PathBatch small = generate_fbm(g, HurstParameter(0.8), 3, 11);
  const PathBatch large = generate_fbm(g, HurstParameter(0.8), 10, 11);
  for (std::size_t k = 0; k < g.points(); ++k) CHECK(small.at(2, k) == large.at(2, k));
}

// Sample variance of increments of lag L at many positions, pooled over paths.
double increment_variance(const PathBatch& b, std::size_t lag) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t p = 0; p < b.count(); ++p)
    for (std::size_t k = 0; k + lag <= b.grid().steps(); k += lag) {
      const double d = b.at(p, k + lag) - b.at(p, k);
      s += d * d;
      ++n;
    }
  return s / static_cast<double>(n);
}

TEST_CASE("increments are stationary with variance |t-s|^{2H}") {
  const TimeGrid g(1.0, 256);
  for (double h : {0.5, 0.7, 0.9}) {
    const PathBatch b = generate_fbm(g, HurstParameter(h), 2000, 3);
    for (std::size_t lag : {1u, 8u, 64u}) {
      const double expected = std::pow(static_cast<double>(lag) * g.step(), 2 * h);
      CHECK(increment_variance(b, lag) == doctest::Approx(expected).epsilon(0.1));
    }
  }
}

TEST_CASE("both synthesis methods agree in distribution on a small grid") {
  const TimeGrid g(1.0, 16);
  const HurstParameter H(0.75);
  const Eigen::MatrixXd exact = fbm_covariance_matrix(g, H);
  for (auto m : {SynthesisMethod::cholesky, SynthesisMethod::circulant}) {
    SynthesisOptions o;
    o.method = m;
    const PathBatch b = generate_fbm(g, H, 4000, 17, o);
    double worst = 0.0;
    for (std::size_t i = 1; i <= 16; ++i)
      for (std::size_t j = i; j <= 16; ++j) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t p = 0; p < b.count(); ++p) {
          const double v = b.at(p, i) * b.at(p, j);
          s += v;
          s2 += v * v;
        }
        const double n = static_cast<double>(b.count());
        const double mean = s / n;
        const double se = std::sqrt((s2 / n - mean * mean) / n);
        worst = std::max(worst, std::abs(mean - exact(i - 1, j - 1)) / se);
      }
    CHECK(worst < 4.0);
  }
}

TEST_CASE("wiener paths have independent unit-rate coordinates") {
  const TimeGrid g(2.0, 64);
  const PathBatch w = generate_wiener(g, 2, 2000, 8);
  double v0 = 0.0, v1 = 0.0, c01 = 0.0;
  for (std::size_t p = 0; p < w.count(); ++p) {
    const double a = w.at(p, 64, 0), b = w.at(p, 64, 1);
    v0 += a * a;
    v1 += b * b;
    c01 += a * b;
  }
  const double n = 2000;
  CHECK(v0 / n == doctest::Approx(2.0).epsilon(0.1));
  CHECK(v1 / n == doctest::Approx(2.0).epsilon(0.1));
  CHECK(std::abs(c01 / n) < 4.0 * 2.0 / std::sqrt(n));
  CHECK(w.at(0, 0, 0) == 0.0);
}

TEST_CASE("driver specs enforce the regularity window") {
  CHECK_THROWS_AS(DriverSpec::make(1, {0.5}), DomainError);
  CHECK_THROWS_AS(DriverSpec::make(1, {0.7}, 0.72), DomainError);
  CHECK_THROWS_AS(DriverSpec::make(1, {0.7}, 0.5), DomainError);
  const DriverSpec d = DriverSpec::make(2, {0.8, 0.7});
  CHECK(d.holder_order == doctest::Approx(0.69));
  CHECK(d.min_hurst() == 0.7);
  CHECK(d.rough_dim() == 2);
}

TEST_CASE("coupled stage drivers are independent of the base stage") {
  const DriverSpec d = DriverSpec::make(1, {0.75});
  const TimeGrid g(1.0, 32);
  const DriverBatches a = generate_drivers(d, g, 4, 9, {}, 0);
  const DriverBatches b = generate_drivers(d, g, 4, 9, {}, 1);
  CHECK(a.wiener->at(0, 32) != b.wiener->at(0, 32));
  CHECK(a.rough->at(0, 32) != b.rough->at(0, 32));
  // rough component 0 matches the single-process generator under the same seed
  const PathBatch z = generate_fbm(g, HurstParameter(0.75), 4, 9);
  for (std::size_t k = 0; k <= 32; ++k) CHECK(a.rough->at(3, k) == z.at(3, k));
}

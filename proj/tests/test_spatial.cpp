#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "support.hpp"
#include "vbdf2/rng.hpp"
#include "vbdf2/spatial.hpp"

using namespace vbdf2;

namespace {

constexpr double kPi = std::numbers::pi;

double single_mode(double x, double y) {
  return std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
}

GridField random_field(const GridField& like, SplitMix64& rng) {
  GridField f = like;
  for (double& x : f.v) x = rng.uniform(-1.0, 1.0);
  return f;
}

}  // namespace

TEST_CASE("scalar operator basics") {
  const ScalarOperator op({-1.0, 0.0});
  CHECK(op.apply({3.0, 0.0}) == std::complex<double>(-3.0, 0.0));
  CHECK(op.l2_norm({3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(op.h1_seminorm({3.0, 4.0}) == 0.0);
  // (sigma - lambda) u = rhs
  CHECK(op.shifted_solve(2.0, {6.0, 0.0}).real() == doctest::Approx(2.0));
  const ScalarOperator singular({2.0, 0.0});
  CHECK_THROWS_AS(singular.shifted_solve(2.0, {1.0, 0.0}), std::domain_error);
  CHECK(op.energy({2.0, 0.0}) == doctest::Approx(4.0));  // -Re(lambda)|u|^2
}

TEST_CASE("spectral operator applies the Laplacian eigenfunction exactly") {
  const SpectralOperator op(32, 1.0, 0.0);
  const GridField u = op.sample(single_mode);
  const GridField au = op.apply(u);
  const double factor = -8.0 * kPi * kPi;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    CHECK(au.v[i] == doctest::Approx(factor * u.v[i]).epsilon(1e-10));
  }
  CHECK(op.symbol(0, 0) == 0.0);

  const SpectralOperator reactive(16, 0.5, -2.0);
  CHECK(reactive.symbol(0, 0) == -2.0);
  CHECK(reactive.kappa_max() == -2.0);
}

TEST_CASE("spectral operator validates construction") {
  CHECK_THROWS_AS(SpectralOperator(2, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralOperator(9, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SpectralOperator(16, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("spectral norms of the single mode") {
  const SpectralOperator op(32, 1.0, 0.0);
  const GridField zero = op.zero();
  CHECK(op.l2_norm(zero) == 0.0);
  CHECK(op.h1_seminorm(zero) == 0.0);

  const GridField u = op.sample(single_mode);
  CHECK(op.l2_norm(u) == doctest::Approx(1.0).epsilon(1e-12));
  // |u|_1^2 = 8 pi^2 for the single mode with unit L2 norm.
  const double h1 = op.h1_seminorm(u);
  CHECK(h1 * h1 == doctest::Approx(8.0 * kPi * kPi).epsilon(1e-12));

  const GridField c = op.sample([](double, double) { return 2.5; });
  CHECK(op.h1_seminorm(c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral solve inverts per mode") {
  const SpectralOperator op(16, 1.0, 0.0);
  // Single cosine mode: (sigma + eps k^2) u = rhs mode by mode.
  const GridField rhs = op.sample([](double x, double) { return std::cos(kPi * x); });
  const double sigma = 3.0;
  const GridField u = op.shifted_solve(sigma, rhs);
  const double denom = sigma + kPi * kPi;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    CHECK(u.v[i] == doctest::Approx(rhs.v[i] / denom).epsilon(1e-12));
  }

  SplitMix64 rng(3);
  const GridField w = random_field(op.zero(), rng);
  // shifted_solve(sigma, sigma w - A w) == w mode by mode.
  GridField forward = op.apply(w);
  for (std::size_t i = 0; i < forward.v.size(); ++i) {
    forward.v[i] = sigma * w.v[i] - forward.v[i];
  }
  const GridField back = op.shifted_solve(sigma, forward);
  for (std::size_t i = 0; i < w.v.size(); ++i) {
    CHECK(back.v[i] == doctest::Approx(w.v[i]).epsilon(1e-12));
  }

  CHECK_THROWS_AS(SpectralOperator(16, 1.0, 2.0).shifted_solve(1.0, rhs),
                  std::domain_error);
}

TEST_CASE("fd operator is symmetric and dissipative") {
  const FdDirichletOperator op(16, 1.0, 0.0);
  const GridField zero = op.zero();
  CHECK(op.l2_norm(op.apply(zero)) == 0.0);

  SplitMix64 rng(5);
  const FdDirichletOperator reactive(
      12, 0.7, [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); },
      1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const GridField u = random_field(reactive.zero(), rng);
    const GridField v = random_field(reactive.zero(), rng);
    const double uv = reactive.inner(reactive.apply(u), v);
    const double vu = reactive.inner(u, reactive.apply(v));
    CHECK(uv == doctest::Approx(vu).epsilon(1e-12));
  }

  // kappa <= 0 makes the operator negative semi-definite.
  const FdDirichletOperator damped(16, 1.0, -0.5);
  const SpectralOperator spectral(16, 1.0, -0.5);
  for (int trial = 0; trial < 5; ++trial) {
    const GridField u = random_field(damped.zero(), rng);
    const double norm = damped.l2_norm(u);
    CHECK(damped.inner(damped.apply(u), u) <= 1e-10 * norm * norm);
    const GridField w = random_field(spectral.zero(), rng);
    const double wn = spectral.l2_norm(w);
    CHECK(spectral.inner(spectral.apply(w), w) <= 1e-10 * wn * wn);
  }
}

TEST_CASE("fd shifted solve round-trips through apply") {
  const FdDirichletOperator op(16, 1.0, 0.0);
  SplitMix64 rng(7);
  const GridField u = random_field(op.zero(), rng);
  const double sigma = 1.0;
  GridField rhs = op.apply(u);
  for (std::size_t i = 0; i < rhs.v.size(); ++i) {
    rhs.v[i] = sigma * u.v[i] - rhs.v[i];
  }
  int iterations = 0;
  const GridField x = op.shifted_solve(sigma, rhs, &iterations);
  CHECK(iterations > 0);
  const GridField diff = lincomb(1.0, x, -1.0, u);
  CHECK(op.l2_norm(diff) <= 1e-6 * op.l2_norm(u));

  CHECK_THROWS_AS(op.shifted_solve(-1.0, rhs), std::domain_error);
}

TEST_CASE("fd operator rejects an out-of-bound reaction coefficient") {
  CHECK_THROWS_AS(
      FdDirichletOperator(
          8, 1.0, [](double, double) { return 2.0; }, 1.0),
      std::invalid_argument);
}

TEST_CASE("project_exact samples the manufactured solution") {
  const SpectralOperator op(32, 1.0, 0.0);
  auto exact = [](double t, double x, double y) {
    return std::exp(-t) * single_mode(x, y);
  };
  const GridField u0 = project_exact(op, 0.0, exact);
  const GridField phi = op.sample(single_mode);
  for (std::size_t i = 0; i < u0.v.size(); ++i) CHECK(u0.v[i] == phi.v[i]);

  const GridField u1 = project_exact(op, 1.0, exact);
  for (std::size_t i = 0; i < u1.v.size(); ++i) {
    CHECK(u1.v[i] == doctest::Approx(std::exp(-1.0) * phi.v[i]).epsilon(1e-14));
  }

  const GridField none = project_exact(op, 0.3, [](double, double, double) {
    return 0.0;
  });
  CHECK(op.l2_norm(none) == 0.0);
}

TEST_CASE("manufactured forcing closes the equation to spectral accuracy") {
  const double eps = 0.7;
  const SpectralOperator op(32, eps, 0.0);
  const double t = 0.3;
  auto exact = [](double tt, double x, double y) {
    return std::exp(-tt) * single_mode(x, y);
  };
  // f = u_t - eps*Lap(u) = (8 pi^2 eps - 1) u
  const double coeff = 8.0 * kPi * kPi * eps - 1.0;
  const GridField u = project_exact(op, t, exact);
  const GridField f = scaled(coeff, u);
  GridField residual = op.apply(u);
  // u_t = A u + f must hold at the samples.
  const GridField ut = scaled(-1.0, u);
  for (std::size_t i = 0; i < residual.v.size(); ++i) {
    residual.v[i] += f.v[i] - ut.v[i];
  }
  CHECK(op.l2_norm(residual) <= 1e-8);
}

TEST_CASE("grid mismatch is rejected") {
  const SpectralOperator op(16, 1.0, 0.0);
  const SpectralOperator other(32, 1.0, 0.0);
  CHECK_THROWS_AS(op.apply(other.zero()), std::invalid_argument);
  CHECK_THROWS_AS(op.inner(op.zero(), other.zero()), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/expint.hpp>

#include "arith/green.hpp"

using namespace arith;

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kGamma = std::numbers::egamma_v<Real>;

RealMat2 tz(Real a, Real b, Real c) {
  RealMat2 x;
  x << a, b, c, -a;
  return x;
}

Complex mobius(const RealMat2& h, Complex z) { return (h(0, 0) * z + h(0, 1)) / (h(1, 0) * z + h(1, 1)); }

}  // namespace

TEST_CASE("R vanishes exactly on D_x") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<Real> U(-3, 3);
  for (int it = 0; it < 200; ++it) {
    const RealMat2 x = tz(U(rng), U(rng), U(rng));
    const UpperHalfPoint z(Complex(U(rng), std::fabs(U(rng)) + 0.05L));
    CHECK(R_value(x, z) >= 0);
    if (Q_real(x) > 0) {
      CHECK(R_value(x, fixed_point(x)) < 1e-12L * (1 + x.squaredNorm()));
    } else if (Q_real(x) < 0) {
      CHECK(R_value(x, z) > 0);
    }
  }
  CHECK_THROWS_AS(UpperHalfPoint(Complex(1, 0)), DomainError);
  CHECK(UpperHalfPoint(Complex(1, -2)).y() == 2);
}

TEST_CASE("conjugation invariance of R") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<Real> U(-2, 2);
  for (int it = 0; it < 100; ++it) {
    RealMat2 h;
    do h << U(rng), U(rng), U(rng), U(rng);
    while (h.determinant() < 0.1L);
    const RealMat2 x = tz(U(rng), U(rng), U(rng));
    const UpperHalfPoint z(Complex(U(rng), std::fabs(U(rng)) + 0.1L));
    const Real r = R_value(x, z);
    const Real s = R_value(h * x * h.inverse(), UpperHalfPoint(mobius(h, z.z)));
    CHECK(std::fabs(r - s) <= 1e-10L * std::max<Real>(1, r));
  }
}

TEST_CASE("majorant identity") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<Real> U(-2, 2);
  for (int it = 0; it < 100; ++it) {
    const RealMat2 x = tz(U(rng), U(rng), U(rng));
    const UpperHalfPoint z(Complex(U(rng), std::fabs(U(rng)) + 0.1L));
    // The positive line at z is spanned by x_z with tr(x_z w(z)) = 0 and Q(x_z) = 1.
    const Real y = z.y(), a = z.x();
    const RealMat2 xz = tz(a / y, -(a * a + y * y) / y, 1 / y);
    CHECK(std::fabs(Q_real(xz) - 1) < 1e-12L);
    const Real pr = pairing_real(x, xz);
    const Real standard = 2 * pr * pr / pairing_real(xz, xz) - pairing_real(x, x);
    CHECK(std::fabs(majorant_value(x, z) - standard) < 1e-12L * (1 + std::fabs(standard)));
    CHECK(majorant_value(x, z) >= -1e-12L);
  }
}

TEST_CASE("beta1") {
  CHECK(std::fabs(beta1(1) - 0.219384L) < 1e-5L);
  for (Real r = 0.5L; r <= 2; r += 0.05L) CHECK(std::fabs(beta1_series(r) - beta1_continued_fraction(r)) < 1e-12L);
  for (Real r : {1e-6L, 1e-3L, 0.3L, 1.0L, 2.5L, 10.0L, 40.0L})
    CHECK(std::fabs(beta1(r) - boost::math::expint(1, r)) <= 1e-15L * boost::math::expint(1, r));
  for (Real r = 1e-6L; r <= 0.1L; r *= 1.5L) CHECK(std::fabs(beta1(r) + std::log(r) + kGamma) <= 2 * r);
  for (Real r = 1; r <= 30; r += 0.5L) CHECK(beta1(r) <= std::exp(-r));
  CHECK_THROWS_AS(beta1(0), DomainError);
}

TEST_CASE("xi and phi0") {
  const RealMat2 x = tz(0, 1, -1);  // Q = 1, fixed point i
  const GreenEvaluation on = xi_and_phi0(x, UpperHalfPoint(Complex(0, 1)));
  CHECK(on.singular);
  CHECK(std::isinf(on.xi));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<Real> U(-4, 4);
  for (int it = 0; it < 50; ++it) {
    const UpperHalfPoint z(Complex(U(rng), std::fabs(U(rng)) + 0.05L));
    const GreenEvaluation g = xi_and_phi0(x, z);
    if (g.R > 3) CHECK(g.xi < 1e-6L);
    CHECK(g.xi == beta1(2 * kPi * g.R));
  }
  CHECK_THROWS_AS(xi_and_phi0(tz(1, 1, -1), UpperHalfPoint(Complex(0, 1))), DomainError);
}

TEST_CASE("Green equation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<Real> U(-1.5L, 1.5L);
  for (Real q : {1.0L, 3.0L, -2.0L}) {
    for (int it = 0; it < 20; ++it) {
      const Real a = U(rng), c = U(rng) + (U(rng) > 0 ? 2 : -2);
      const RealMat2 x = tz(a, -(q + a * a) / c, c);
      REQUIRE(std::fabs(Q_real(x) - q) < 1e-12L);
      const UpperHalfPoint z(Complex(U(rng), std::fabs(U(rng)) + 0.3L));
      const GreenEvaluation g = xi_and_phi0(x, z);
      if (g.R < 1e-3L || g.R > 4 || std::fabs(g.phi0) < 1e-8L) continue;
      CHECK(green_residual(x, z).relative_error < 1e-4L);
    }
  }
}

TEST_CASE("embedding") {
  for (std::int64_t D : {6, 10, 15}) {
    const QuaternionAlgebra B = algebra_from_disc(D);
    const MaximalOrder O = maximal_order(B);
    for (int k = 0; k < 3; ++k) {
      const RealMat2 e = embed(B, O.trace_zero.basis[k]);
      CHECK(std::fabs(e.trace()) < 1e-15L);
      CHECK(std::fabs(Q_real(e) - O.trace_zero.gram(k, k).convert_to<Real>() / 2) < 1e-12L);
    }
  }
  const QuaternionAlgebra swapped = make_algebra(-1, 3);
  const RealMat2 i = embed(swapped, Quaternion(0, 1, 0, 0)), j = embed(swapped, Quaternion(0, 0, 1, 0));
  CHECK((i * i - RealMat2::Identity() * -1).norm() < 1e-15L);
  CHECK((j * j - RealMat2::Identity() * 3).norm() < 1e-15L);
  CHECK((i * j + j * i).norm() < 1e-15L);
  CHECK_THROWS_AS(embed(make_algebra(-1, -1), Quaternion(0, 1, 0, 0)), DomainError);
}

TEST_CASE("Xi sums") {
  const QuaternionAlgebra B = algebra_from_disc(6);
  const MaximalOrder O = maximal_order(B);
  const UpperHalfPoint z(Complex(0.1L, 0.9L));
  for (std::int64_t t : {2, 5, 7}) {
    const GreenEvaluation g = Xi_sum(t, 1, z, B, O.trace_zero, 1e-10L);
    CHECK(g.terms == 0);
    CHECK(g.xi == 0);
  }
  for (std::int64_t t : {-2, -3, -6}) {
    const GreenEvaluation g = Xi_sum(t, 0.7L, z, B, O.trace_zero, 1e-10L);
    CHECK(std::isfinite(g.xi));
    CHECK(g.truncation_error <= 1e-10L);
  }
  for (std::int64_t t : {1, 3, -2}) {
    XiConfig wide;
    wide.radius_scale = 2;
    const GreenEvaluation g = Xi_sum(t, 0.5L, z, B, O.trace_zero, 1e-9L);
    const GreenEvaluation h = Xi_sum(t, 0.5L, z, B, O.trace_zero, 1e-9L, wide);
    CHECK(h.terms >= g.terms);
    CHECK(std::fabs(h.xi - g.xi) <= g.truncation_error);
  }
  // On the divisor of a norm-1 vector the sum is flagged.
  const auto c = enumerate_norm_t(O.trace_zero, Rational(1), standard_majorant(B, O.trace_zero), Rational(40));
  REQUIRE(!c.empty());
  const UpperHalfPoint on = fixed_point(embed(B, O.trace_zero.element(c.front())));
  CHECK(Xi_sum(1, 1, on, B, O.trace_zero, 1e-8L).singular);
  CHECK_THROWS_AS(Xi_sum(0, 1, z, B, O.trace_zero, 1e-8L), DomainError);
  XiConfig tiny;
  tiny.max_points = 10;
  CHECK_THROWS_AS(Xi_sum(1, 0.01L, z, B, O.trace_zero, 1e-12L, tiny), SearchExhausted);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "arith/eis32.hpp"
#include "oracles.hpp"

using namespace arith;

namespace {

// J by double-exponential quadrature in the original variable.
Real J_oracle(Real x) {
  boost::math::quadrature::exp_sinh<Real> q;
  return q.integrate([x](Real r) { return std::exp(-x * r) * (std::sqrt(1 + r) - 1) / r; });
}

constexpr Real kPi = std::numbers::pi_v<Real>;

}  // namespace

TEST_CASE("central coefficients") {
  CHECK(central_coeff(1, 6) == 1);
  CHECK(central_coeff(2, 6) == 0);
  CHECK(central_coeff(3, 1) == 2 * H0(3, 1));
  CHECK(central_coeff(3, 1) == oracle::count_forms(-12).weighted);
}

TEST_CASE("local factors") {
  const Discriminant d4 = fundamental_decomposition(1);    // d = 4, chi(3) = -1, k = 0
  const Discriminant d36 = fundamental_decomposition(9);   // d = 4, n = 3
  const Discriminant d3 = fundamental_decomposition(3);    // d = 3, n = 2
  const Discriminant d27 = fundamental_decomposition(27);  // d = 3, n = 6
  CHECK(Kp(3, d4) == 0);
  CHECK(Kp(3, d36) == 1);
  CHECK(Kp(3, d3) == 0);
  CHECK_THROWS_AS(Kp(3, fundamental_decomposition(2)), DomainError);  // 3 splits in Q(sqrt -2)
  // k = 0: the two fractions cancel for every value of chi.
  CHECK(bp_ratio(3, fundamental_decomposition(2)) == 0);
  CHECK(bp_ratio(5, d4) == 0);
  CHECK(bp_ratio(3, d4) == 0);
  CHECK(bp_ratio(3, d3) == 0);
  // chi = 0, k = 1, p = 3: 4p^2 / (1 - p^2) - 2p / (1 - p) = -9/2 + 3.
  CHECK(bp_ratio(3, d27) == Rational(-3, 2));
  // chi = -1, k = 1, p = 3: (-1 + 3 * 3 + 4 * 9) / (1 + 1 - 3 - 9) + 3.
  CHECK(bp_ratio(3, d36) == Rational(-7, 5));
}

TEST_CASE("J integral") {
  CHECK(std::fabs(1e4L * J_integral(1e4L).value - 0.5L) < 0.01L);
  CHECK(J_integral(1).value > J_integral(2).value);
  CHECK(J_integral(2).value > J_integral(10).value);
  CHECK(std::fabs(J_integral(1e-6L).value * std::sqrt(1e-6L) / std::sqrt(kPi) - 1) < 0.02L);
  for (Real x : {0.5L, 1.0L, 3.0L, 4 * kPi, 40.0L}) {
    const Numeric j = J_integral(x);
    CHECK(std::fabs(j.value - J_oracle(x)) < 1e-12L);
    CHECK(j.error < 1e-12L);
  }
  CHECK_THROWS_AS(J_integral(0), DomainError);
}

TEST_CASE("Dirichlet L-values") {
  const LValues l4 = L_chi(fundamental_decomposition(1));
  CHECK(std::fabs(l4.value - kPi / 4) < 1e-12L);
  const Discriminant d3 = fundamental_decomposition(3);
  CHECK(std::fabs(L_chi(d3).value - L_chi_direct(d3, 1e-10L).value) < 1e-8L);
  for (std::int64_t t : {1, 2, 3, 5, 6, 11}) {
    const Discriminant d = fundamental_decomposition(t);
    CHECK(std::fabs(L_chi(d, 1e-11L).ratio.value - L_chi(d, 1e-9L).ratio.value) < 1e-6L);
  }
}

TEST_CASE("central derivative coefficients") {
  const QCoefficient q = deriv_coeff(1, 1, 6);
  CHECK(q.exact_part == 1);
  CHECK(q.breakdown.size() == 7);
  CHECK(q.breakdown[5].first.find("p=2") == 0);
  CHECK(q.breakdown[6].first.find("p=3") == 0);
  CHECK(std::fabs(q.numeric_part - 0.0973101848265923637554L) < 1e-10L);
  for (std::int64_t t : {1, 3}) {
    const QCoefficient a = deriv_coeff(t, 0.5L, 6), b = deriv_coeff(t, 2.0L, 6);
    const Real expected = (a.exact_part.convert_to<Real>()) *
                          (J_oracle(4 * kPi * t * 0.5L) - J_oracle(4 * kPi * t * 2.0L)) / 2;
    CHECK(std::fabs((a.numeric_part - b.numeric_part) - expected) < 1e-8L + a.error_bound + b.error_bound);
  }
  CHECK_THROWS_AS(deriv_coeff(7, 1, 6), EmptyCycle);
  CHECK(deriv_coeff_unguarded(7, 1, 6).numeric_part == 0);
  CHECK_THROWS_AS(deriv_coeff(0, 1, 6), DomainError);
}

TEST_CASE("Zagier series") {
  const SeriesTable z = zagier_series(1, 200);
  CHECK(z.coefficients.at(0).exact_part == Rational(-1, 12));
  CHECK(tail_integral(0) == 2);
  CHECK(z.coefficients.at(0).numeric_part == doctest::Approx(2 / (16 * kPi)).epsilon(1e-15));
  for (std::int64_t N = 1; N <= 200; ++N)
    CHECK(z.coefficients.at(N).exact_part == (N % 4 == 0 || N % 4 == 3 ? oracle::count_forms(-N).weighted : 0));
  const SeriesComparison cmp = compare_positive_coefficients(eisenstein_series_D1(1, 50), z);
  CHECK(cmp.compared == 50);
  CHECK(cmp.matched == 50);
  CHECK_THROWS_AS(compare_positive_coefficients(eisenstein_series_D1(1, 51), z), DomainError);
}

TEST_CASE("omega pairing value") {
  const HodgeValue h6 = hodge_pairing_value(6), h10 = hodge_pairing_value(10);
  CHECK(h6.zeta_D_minus1 == Rational(-1, 6));
  CHECK(std::fabs(h6.value.convert_to<double>() - 0.1954) < 5e-3);
  // Only the sum over p | D differs between D = 6 and D = 10.
  const Real50 diff = h6.bracket - h10.bracket;
  const Real50 expected = -Real50(3) * log(Real50(3)) / 2 + Real50(5) * log(Real50(5)) / 4;
  CHECK(abs(diff - expected) < Real50("1e-45"));
}

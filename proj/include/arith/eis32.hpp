#pragma once

// Weight-3/2 Eisenstein coefficients: central values, central-derivative
// coefficients, Zagier's series and the conjectural <omega, omega> value.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "arith/cycles.hpp"
#include "arith/errors.hpp"
#include "arith/exact.hpp"
#include "arith/types.hpp"

namespace arith {

using Real = long double;
using Real50 = mp::cpp_bin_float_50;

/// A real number with an absolute error bound.
struct Numeric {
  Real value = 0;
  Real error = 0;
};

struct QCoefficient {
  std::int64_t t = 0;
  Real v = 0;
  Rational exact_part;  // rational prefactor or exact coefficient
  Real numeric_part = 0;
  Real error_bound = 0;
  std::vector<std::pair<std::string, Real>> breakdown;  // bracket summands
};

struct SeriesTable {
  std::int64_t D = 1;
  Real v = 0;
  std::map<std::int64_t, QCoefficient> coefficients;
};

/// deg Z(t) = 2 delta H0.
Rational central_coeff(std::int64_t t, std::int64_t D);

/// K_p for chi_d(p) in {-1, 0}; k = ord_p(n).
Rational Kp(std::int64_t p, const Discriminant& d);

/// (b'_p / b_p) / log p for p not dividing D.
Rational bp_ratio(std::int64_t p, const Discriminant& d);

/// J(x) = int_0^oo e^{-xr} ((1 + r)^{1/2} - 1) r^{-1} dr.
Numeric J_integral(Real x, Real tol = 1e-13L);

struct LValues {
  Real value = 0;  // L(1, chi_d) by the class number formula
  Numeric derivative;
  Numeric ratio;  // L'(1, chi_d) / L(1, chi_d)
  std::int64_t cutoff = 0;
};

/// L(1, chi) exactly from h and w; L'(1, chi) by a smoothed character sum
/// with doubling cutoff until two successive sums agree within tol.
LValues L_chi(const Discriminant& d, Real tol = 1e-11L);

/// L(1, chi) by the same smoothed summation (independent of class numbers).
Numeric L_chi_direct(const Discriminant& d, Real tol = 1e-11L);

/// t-th coefficient of the central derivative. Throws EmptyCycle when
/// deg Z(t) = 0.
QCoefficient deriv_coeff(std::int64_t t, Real v, std::int64_t D, Real tol = 1e-11L);

/// The same assembly without the nonempty-cycle guard. Local factors K_p
/// with chi_d(p) = +1 are outside their domain and are left out; the
/// prefactor vanishes in that case.
QCoefficient deriv_coeff_unguarded(std::int64_t t, Real v, std::int64_t D, Real tol = 1e-11L);

/// int_1^oo e^{-c r} r^{-3/2} dr, closed form via erfc; equals 2 at c = 0.
Real tail_integral(Real c);

/// Zagier's series: H(N) for 0 < N <= n_max, -1/12 plus the m = 0 term at
/// index 0, and the nonholomorphic terms at -m^2 (both signs of m counted).
SeriesTable zagier_series(Real v, std::int64_t n_max);

/// The D = 1 Eisenstein series: 2 H0(t; 1) for 0 < t <= t_max and the
/// nonholomorphic terms with 1/(8 pi).
SeriesTable eisenstein_series_D1(Real v, std::int64_t t_max);

struct SeriesComparison {
  std::int64_t compared = 0;
  std::int64_t matched = 0;
  std::vector<std::int64_t> mismatches;
};

/// Compares index t of the D = 1 series with index 4t of Zagier's series.
/// Throws DomainError if a needed index is absent.
SeriesComparison compare_positive_coefficients(const SeriesTable& eis, const SeriesTable& zagier);

struct Constants50 {
  Real50 gamma;
  Real50 pi;
  Real50 log_pi;
  Real50 log_4pi;
  Real50 log_glaisher;
  Real50 zeta_prime_minus1;  // 1/12 - log A
};

const Constants50& constants50();

struct HodgeValue {
  Rational zeta_D_minus1;
  Real50 bracket;
  Real50 value;
  Real error_bound = 0;
};

/// zeta_D(-1) [2 zeta'(-1)/zeta(-1) + 1 - 2C - sum_{p | D} p log p / (p - 1)].
HodgeValue hodge_pairing_value(std::int64_t D);

}  // namespace arith

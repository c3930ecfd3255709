#include "arith/eis32.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace arith {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

Rational rpow(std::int64_t p, int k) { return Rational(mp::pow(BigInt(p), k)); }

Real to_real(const Rational& q) { return q.convert_to<Real>(); }

// Smooth cutoff: 1 on [0, 1], 0 on [2, oo), C-infinity in between.
Real cutoff(Real x) {
  if (x <= 1) return 1;
  if (x >= 2) return 0;
  const Real a = std::exp(-1 / (2 - x)), b = std::exp(-1 / (x - 1));
  return a / (a + b);
}

std::vector<int> chi_table(const Discriminant& d) {
  std::vector<int> table(static_cast<std::size_t>(d.d));
  for (std::int64_t r = 0; r < d.d; ++r) table[static_cast<std::size_t>(r)] = chi(d, r);
  return table;
}

// sum_{n < 2N} chi(n) f(n) w(n / N) with Kahan compensation.
template <class F>
Real smoothed_sum(const std::vector<int>& table, std::int64_t N, F f) {
  Real sum = 0, comp = 0;
  const std::int64_t period = static_cast<std::int64_t>(table.size());
  for (std::int64_t n = 1; n < 2 * N; ++n) {
    const int c = table[static_cast<std::size_t>(n % period)];
    if (c == 0) continue;
    const Real term = c * f(static_cast<Real>(n)) * cutoff(static_cast<Real>(n) / N);
    const Real y = term - comp;
    const Real s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

template <class F>
Numeric converged_sum(const Discriminant& d, Real tol, F f, const char* what) {
  const auto table = chi_table(d);
  std::int64_t N = std::max<std::int64_t>(64, 8 * d.d);
  Real prev = smoothed_sum(table, N, f);
  for (int iter = 0; iter < 24; ++iter) {
    N *= 2;
    const Real cur = smoothed_sum(table, N, f);
    const Real diff = std::fabs(cur - prev);
    if (diff < tol) return {cur, diff + std::numeric_limits<Real>::epsilon() * static_cast<Real>(N)};
    prev = cur;
    if (N > (std::int64_t{1} << 26)) break;
  }
  throw PrecisionFailure(std::string(what) + ": smoothed sum did not converge");
}

QCoefficient assemble(std::int64_t t, Real v, std::int64_t D, Real tol, bool guarded) {
  if (t < 1) throw DomainError("deriv_coeff: t must be positive");
  if (!(v > 0)) throw DomainError("deriv_coeff: v must be positive");
  const DegreeResult deg = degree_Z(t, D);
  if (guarded && deg.degree == 0)
    throw EmptyCycle("deriv_coeff: Z(t) has empty generic fiber (delta = 0)");
  const Discriminant disc = fundamental_decomposition(t);
  const Constants50& K = constants50();

  QCoefficient q;
  q.t = t;
  q.v = v;
  q.exact_part = deg.degree;

  const LValues L = L_chi(disc, tol);
  const Numeric J = J_integral(4 * kPi * static_cast<Real>(t) * v, tol);
  q.breakdown.emplace_back("1/2 log d", std::log(static_cast<Real>(disc.d)) / 2);
  q.breakdown.emplace_back("L'(1,chi)/L(1,chi)", L.ratio.value);
  q.breakdown.emplace_back("-1/2 log pi", -K.log_pi.convert_to<Real>() / 2);
  q.breakdown.emplace_back("-1/2 gamma", -K.gamma.convert_to<Real>() / 2);
  q.breakdown.emplace_back("1/2 J(4 pi t v)", J.value / 2);

  for (std::int64_t p : prime_divisors(disc.n)) {
    if (D % p == 0) continue;
    const int k = valuation(disc.n, p);
    const Real coeff = to_real(Rational(-k) - bp_ratio(p, disc));
    q.breakdown.emplace_back("p=" + std::to_string(p) + " log|n|_p - b'/b", coeff * std::log(static_cast<Real>(p)));
  }
  for (std::int64_t p : prime_divisors(D)) {
    if (chi(disc, p) == 1) continue;  // only reachable unguarded, where the prefactor is 0
    q.breakdown.emplace_back("p=" + std::to_string(p) + " K_p log p",
                             to_real(Kp(p, disc)) * std::log(static_cast<Real>(p)));
  }

  Real bracket = 0, magnitude = 0;
  for (const auto& [name, value] : q.breakdown) {
    bracket += value;
    magnitude += std::fabs(value);
  }
  const Real pref = to_real(q.exact_part);
  q.numeric_part = pref * bracket;
  q.error_bound = std::fabs(pref) * (L.ratio.error + J.error / 2 +
                                     4 * std::numeric_limits<Real>::epsilon() * magnitude);
  return q;
}

}  // namespace

Rational central_coeff(std::int64_t t, std::int64_t D) { return degree_Z(t, D).degree; }

Rational Kp(std::int64_t p, const Discriminant& d) {
  const int c = chi(d, p);
  const int k = valuation(d.n, p);
  if (c == 1) throw DomainError("Kp: chi_d(p) = +1 is outside the formula's domain");
  if (c == -1) return Rational(-k) + Rational((p + 1) * (rpow(p, k) - 1)) / Rational(2 * (p - 1));
  return Rational(-1 - k) + (rpow(p, k + 1) - 1) / Rational(p - 1);
}

Rational bp_ratio(std::int64_t p, const Discriminant& d) {
  const Rational c = chi(d, p);
  const int k = valuation(d.n, p);
  const Rational pk = rpow(p, k), pk1 = rpow(p, k + 1);
  const Rational num = c - c * (2 * k + 1) * pk + (2 * k + 2) * pk1;
  const Rational den = 1 - c + c * pk - pk1;
  return num / den - Rational(2 * p) / Rational(1 - p);
}

Numeric J_integral(Real x, Real tol) {
  if (!(x > 0)) throw DomainError("J_integral: x must be positive");
  // r = w^2 / x removes the r^{-1/2} behaviour at small x.
  auto f = [x](Real w) -> Real {
    const Real w2 = w * w;
    return 2 * w * std::exp(-w2) / (x + std::sqrt(x * x + x * w2));
  };
  Real err = 0;
  const Real val = boost::math::quadrature::gauss_kronrod<Real, 61>::integrate(
      f, Real(0), std::numeric_limits<Real>::infinity(), 20, tol, &err);
  // Boost reports the error in the mapped variable, before the final factor 2.
  const Real bound = 2 * err + 4 * std::numeric_limits<Real>::epsilon() * std::fabs(val);
  if (!(bound <= tol * std::max<Real>(1, std::fabs(val))))
    throw PrecisionFailure("J_integral: tolerance not reached");
  return {val, bound};
}

LValues L_chi(const Discriminant& d, Real tol) {
  const ClassNumber cn = class_number(-d.d);
  LValues out;
  out.value = 2 * kPi * static_cast<Real>(cn.h) / (static_cast<Real>(cn.w) * std::sqrt(static_cast<Real>(d.d)));
  const Numeric s = converged_sum(d, tol, [](Real n) { return std::log(n) / n; }, "L_chi");
  out.derivative = {-s.value, s.error};
  out.ratio = {out.derivative.value / out.value, out.derivative.error / out.value};
  return out;
}

Numeric L_chi_direct(const Discriminant& d, Real tol) {
  return converged_sum(d, tol, [](Real n) { return 1 / n; }, "L_chi_direct");
}

QCoefficient deriv_coeff(std::int64_t t, Real v, std::int64_t D, Real tol) {
  return assemble(t, v, D, tol, true);
}

QCoefficient deriv_coeff_unguarded(std::int64_t t, Real v, std::int64_t D, Real tol) {
  return assemble(t, v, D, tol, false);
}

Real tail_integral(Real c) {
  if (c < 0) throw DomainError("tail_integral: c must be nonnegative");
  if (c == 0) return 2;
  return 2 * std::exp(-c) - 2 * std::sqrt(kPi * c) * std::erfc(std::sqrt(c));
}

namespace {

void add_nonholomorphic(SeriesTable& s, Real v, std::int64_t min_index, Real scale) {
  for (std::int64_t m = 0; m * m <= -min_index; ++m) {
    const Real single = scale / std::sqrt(v) * tail_integral(4 * kPi * static_cast<Real>(m * m) * v);
    auto& c = s.coefficients[-m * m];
    c.t = -m * m;
    c.v = v;
    c.numeric_part += m == 0 ? single : 2 * single;
    c.error_bound = 16 * std::numeric_limits<Real>::epsilon() * std::fabs(c.numeric_part);
  }
}

}  // namespace

SeriesTable zagier_series(Real v, std::int64_t n_max) {
  if (!(v > 0) || n_max < 1) throw DomainError("zagier_series: need v > 0 and n_max >= 1");
  SeriesTable s;
  s.D = 1;
  s.v = v;
  auto& c0 = s.coefficients[0];
  c0.exact_part = Rational(-1, 12);
  for (std::int64_t N = 1; N <= n_max; ++N) {
    auto& c = s.coefficients[N];
    c.t = N;
    c.v = v;
    c.exact_part = (N % 4 == 0 || N % 4 == 3) ? hurwitz_H(N) : Rational(0);
  }
  add_nonholomorphic(s, v, -n_max, 1 / (16 * kPi));
  return s;
}

SeriesTable eisenstein_series_D1(Real v, std::int64_t t_max) {
  if (!(v > 0) || t_max < 1) throw DomainError("eisenstein_series_D1: need v > 0 and t_max >= 1");
  SeriesTable s;
  s.D = 1;
  s.v = v;
  auto& c0 = s.coefficients[0];
  c0.exact_part = Rational(-1, 12);
  for (std::int64_t t = 1; t <= t_max; ++t) {
    auto& c = s.coefficients[t];
    c.t = t;
    c.v = v;
    c.exact_part = 2 * H0(t, 1);
  }
  add_nonholomorphic(s, v, -t_max, 1 / (8 * kPi));
  return s;
}

SeriesComparison compare_positive_coefficients(const SeriesTable& eis, const SeriesTable& zagier) {
  SeriesComparison out;
  for (const auto& [t, c] : eis.coefficients) {
    if (t <= 0) continue;
    const auto it = zagier.coefficients.find(4 * t);
    if (it == zagier.coefficients.end())
      throw DomainError("compare_positive_coefficients: Zagier index " + std::to_string(4 * t) + " missing");
    ++out.compared;
    if (it->second.exact_part == c.exact_part)
      ++out.matched;
    else
      out.mismatches.push_back(t);
  }
  return out;
}

const Constants50& constants50() {
  static const Constants50 k = [] {
    namespace bc = boost::math::constants;
    Constants50 c;
    c.gamma = bc::euler<Real50>();
    c.pi = bc::pi<Real50>();
    c.log_pi = log(c.pi);
    c.log_4pi = log(4 * c.pi);
    c.log_glaisher = log(bc::glaisher<Real50>());
    c.zeta_prime_minus1 = Real50(1) / 12 - c.log_glaisher;
    return c;
  }();
  return k;
}

HodgeValue hodge_pairing_value(std::int64_t D) {
  if (D < 1 || !is_squarefree(D)) throw DomainError("hodge_pairing_value: D must be squarefree and positive");
  const Constants50& K = constants50();
  HodgeValue h;
  h.zeta_D_minus1 = Rational(-1, 12);
  for (std::int64_t p : prime_divisors(D)) h.zeta_D_minus1 *= 1 - p;
  const Real50 zeta_m1 = Real50(-1) / 12;
  h.bracket = 2 * K.zeta_prime_minus1 / zeta_m1 + 1 - (K.log_4pi + K.gamma);
  for (std::int64_t p : prime_divisors(D)) h.bracket -= Real50(p) * log(Real50(p)) / (p - 1);
  h.value = Real50(h.zeta_D_minus1.convert_to<Real50>()) * h.bracket;
  h.error_bound = 1e-45L;
  return h;
}

}  // namespace arith

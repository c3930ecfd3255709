#include "arith/cycles.hpp"

#include <numeric>

namespace arith {

std::int64_t unit_for_class(int flag, std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw DomainError("unit_for_class: p must be an odd prime");
  if (flag == 1) return -1;
  if (flag != -1) throw DomainError("unit_for_class: flag must be +1 or -1");
  for (std::int64_t n = 2;; ++n)
    if (legendre(n, p) == -1) return -n;
}

std::int64_t delta_factor(const Discriminant& d, std::int64_t D) {
  std::int64_t out = 1;
  for (std::int64_t p : prime_divisors(D)) out *= 1 - chi(d, p);
  return out;
}

Rational H0(std::int64_t t, std::int64_t D) {
  if (t < 1) throw DomainError("H0: t must be positive");
  const Discriminant disc = fundamental_decomposition(t);
  Rational sum = 0;
  for (std::int64_t c : divisors(disc.n)) {
    if (std::gcd(c, D) != 1) continue;
    const ClassNumber cn = class_number(-c * c * disc.d);
    sum += Rational(cn.h, cn.w);
  }
  return sum;
}

Rational H0_product_form(std::int64_t t, std::int64_t D) {
  if (t < 1) throw DomainError("H0: t must be positive");
  const Discriminant disc = fundamental_decomposition(t);
  const ClassNumber base = class_number(-disc.d);
  Rational sum = 0;
  for (std::int64_t c : divisors(disc.n)) {
    if (std::gcd(c, D) != 1) continue;
    Rational term = c;
    for (std::int64_t l : prime_divisors(c)) term *= 1 - Rational(chi(disc, l), l);
    sum += term;
  }
  return Rational(base.h, base.w) * sum;
}

DegreeResult degree_Z(std::int64_t t, std::int64_t D) {
  if (t < 1) throw DomainError("degree_Z: t must be positive");
  if (D < 1 || !is_squarefree(D)) throw DomainError("degree_Z: D must be a squarefree positive integer");
  DegreeResult r;
  r.t = t;
  r.D = D;
  const Discriminant disc = fundamental_decomposition(t);
  r.delta = delta_factor(disc, D);
  r.H0 = H0(t, D);
  r.degree = 2 * r.delta * r.H0;
  return r;
}

bool vertical_criterion(std::int64_t t, std::int64_t p, std::int64_t D) {
  if (t < 1) throw DomainError("vertical_criterion: t must be positive");
  if (D % p != 0 || !is_prime(p)) throw DomainError("vertical_criterion: p must be a prime dividing D");
  if (valuation(t, p) < 2) return false;
  const Discriminant disc = fundamental_decomposition(t);
  for (std::int64_t l : prime_divisors(D))
    if (l != p && chi(disc, l) == 1) return false;
  return true;
}

PadicDiagonalization diagonalize_padic(const FundamentalMatrix& T, std::int64_t p) {
  if (p == 2) throw DomainError("diagonalize_padic: p = 2 is not supported");
  if (!is_prime(p)) throw DomainError("diagonalize_padic: p must be prime");
  if (T.det() == 0) throw DomainError("diagonalize_padic: T must be nonsingular");

  Mat2<Rational> S;
  S << Rational(T.t1), T.m(), T.m(), Rational(T.t2);
  Mat2<Rational> U = Mat2<Rational>::Identity();
  auto apply = [&](const Mat2<Rational>& V) {
    S = (V.transpose() * S * V).eval();
    U = (U * V).eval();
  };
  auto val = [p](const Rational& q) { return q == 0 ? INT32_MAX : valuation(q, p); };

  const int v00 = val(S(0, 0)), v11 = val(S(1, 1)), v01 = val(S(0, 1));
  const int vdiag = std::min(v00, v11);
  if (v01 < vdiag) {
    Mat2<Rational> V;
    V << 1, 0, 1, 1;
    apply(V);
  } else if (v11 < v00) {
    Mat2<Rational> V;
    V << 0, 1, 1, 0;
    apply(V);
  }
  if (S(0, 1) != 0) {
    Mat2<Rational> V;
    V << 1, -S(0, 1) / S(0, 0), 0, 1;
    apply(V);
  }
  if (val(S(1, 1)) < val(S(0, 0))) {
    Mat2<Rational> V;
    V << 0, 1, 1, 0;
    apply(V);
  }

  PadicDiagonalization out;
  out.U = U;
  out.diagonal = S;
  out.inv.p = p;
  out.inv.alpha = valuation(S(0, 0), p);
  out.inv.beta = valuation(S(1, 1), p);
  out.eps1 = S(0, 0) / Rational(mp::pow(BigInt(p), out.inv.alpha));
  out.eps2 = S(1, 1) / Rational(mp::pow(BigInt(p), out.inv.beta));
  auto flag = [p](const Rational& eps) {
    return legendre(BigInt(numerator(-eps) * denominator(eps)), p);
  };
  out.inv.eps1_class = flag(out.eps1);
  out.inv.eps2_class = flag(out.eps2);
  return out;
}

Rational gross_keating_ep(const GKInvariants& inv) {
  const int a = inv.alpha, b = inv.beta;
  if (a < 0 || a > b) throw DomainError("gross_keating_ep: need 0 <= alpha <= beta");
  Rational sum = 0;
  if (a % 2 == 1) {
    for (int j = 0; j <= (a - 1) / 2; ++j) sum += Rational(a + b - 4 * j) * Rational(mp::pow(BigInt(inv.p), j));
  } else {
    for (int j = 0; j <= a / 2 - 1; ++j) sum += Rational(a + b - 4 * j) * Rational(mp::pow(BigInt(inv.p), j));
    sum += Rational(b - a + 1, 2) * Rational(mp::pow(BigInt(inv.p), a / 2));
  }
  return sum;
}

std::int64_t kr_ep_closed(const GKInvariants& inv) {
  const int a = inv.alpha, b = inv.beta;
  if (a < 0 || a > b) throw DomainError("kr_ep_closed: need 0 <= alpha <= beta");
  const std::int64_t p = inv.p;
  std::int64_t sub;
  if (a % 2 == 1) {
    sub = 2 * (ipow(p, (a + 1) / 2) - 1) / (p - 1);
  } else {
    const std::int64_t pa = ipow(p, a / 2);
    const std::int64_t geom = 2 * (pa - 1) / (p - 1);
    sub = inv.eps1_class == -1 ? pa + geom : (b - a + 1) * pa + geom;
  }
  return a + b + 1 - sub;
}

}  // namespace arith

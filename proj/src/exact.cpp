#include "arith/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "arith/errors.hpp"

namespace arith {

namespace {

using i128 = __int128;

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw DomainError("isqrt of negative");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// (a | 2) as a Kronecker symbol, indexed by a mod 8.
constexpr std::array<int, 8> kTwoTable{0, 1, 0, -1, 0, -1, 0, 1};

struct SquareClass {
  int parity;    // valuation mod 2
  BigInt unit;   // p-free part of num*den
};

SquareClass square_class(const Rational& q, std::int64_t p) {
  if (q == 0) throw DomainError("Hilbert symbol of zero");
  BigInt m = numerator(q) * denominator(q);
  int v = 0;
  const BigInt pp = p;
  while (m % pp == 0) {
    m /= pp;
    ++v;
  }
  return {v & 1, m};
}

std::int64_t mod_of(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r.convert_to<std::int64_t>();
}

// Brute-force solubility of z^2 = A x^2 + B y^2 modulo p^k with (x, y, z)
// primitive, where A = p^ea * ua and B = p^eb * ub.
int brute_solubility(std::int64_t p, int k, int ea, std::int64_t ua, int eb,
                     std::int64_t ub) {
  const std::int64_t m = ipow(p, k);
  std::vector<char> square(m, 0), unit_square(m, 0);
  for (std::int64_t z = 0; z < m; ++z) {
    const std::int64_t s = static_cast<std::int64_t>((i128)z * z % m);
    square[s] = 1;
    if (z % p != 0) unit_square[s] = 1;
  }
  const std::int64_t A = static_cast<std::int64_t>((i128)ipow(p, ea) * ua % m);
  const std::int64_t B = static_cast<std::int64_t>((i128)ipow(p, eb) * ub % m);
  for (std::int64_t x = 0; x < m; ++x) {
    const i128 ax = (i128)A * ((i128)x * x % m) % m;
    for (std::int64_t y = 0; y < m; ++y) {
      const std::int64_t s =
          static_cast<std::int64_t>((ax + (i128)B * ((i128)y * y % m)) % m);
      const bool primitive_xy = (x % p != 0) || (y % p != 0);
      if (primitive_xy ? square[s] : unit_square[s]) return 1;
    }
  }
  return -1;
}

// Memoized 2-adic symbol keyed by (parity, unit mod 8) of both arguments.
int hilbert_two(const SquareClass& a, const SquareClass& b) {
  static const auto table = [] {
    std::array<int, 256> t{};
    for (int ea = 0; ea < 2; ++ea)
      for (int ua = 1; ua < 8; ua += 2)
        for (int eb = 0; eb < 2; ++eb)
          for (int ub = 1; ub < 8; ub += 2)
            t[(ea * 8 + ua) * 16 + eb * 8 + ub] = brute_solubility(2, 6, ea, ua, eb, ub);
    return t;
  }();
  const int ua = static_cast<int>(mod_of(a.unit, 8));
  const int ub = static_cast<int>(mod_of(b.unit, 8));
  return table[(a.parity * 8 + ua) * 16 + b.parity * 8 + ub];
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q : {2, 3, 5, 7, 11, 13}) {
    if (n % q == 0) return n == q;
  }
  for (std::int64_t q = 17; q * q <= n; q += 2) {
    if (n % q == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  n = std::llabs(n);
  for (std::int64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (auto [q, e] : factor(n)) out.push_back(q);
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out{1};
  for (auto [q, e] : factor(n)) {
    const std::size_t base = out.size();
    std::int64_t qk = 1;
    for (int k = 1; k <= e; ++k) {
      qk *= q;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * qk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_squarefree(std::int64_t n) {
  if (n == 0) return false;
  for (auto [q, e] : factor(n))
    if (e > 1) return false;
  return true;
}

int valuation(std::int64_t n, std::int64_t p) {
  if (n == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int valuation(const BigInt& n, std::int64_t p) {
  if (n == 0) throw DomainError("valuation of zero");
  BigInt m = n;
  const BigInt pp = p;
  int v = 0;
  while (m % pp == 0) {
    m /= pp;
    ++v;
  }
  return v;
}

int valuation(const Rational& q, std::int64_t p) {
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

std::int64_t ipow(std::int64_t base, int exp) {
  if (exp < 0) throw DomainError("ipow: negative exponent");
  i128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > INT64_MAX || r < INT64_MIN) throw DomainError("ipow: overflow");
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  i128 result = 1 % mod;
  i128 b = ((base % mod) + mod) % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t mod) {
  std::int64_t g = mod, x = 0, x1 = 1, r = ((a % mod) + mod) % mod;
  while (r != 0) {
    const std::int64_t q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw DomainError("mod_inverse: not invertible");
  return ((x % mod) + mod) % mod;
}

BigInt reduce_mod_ppow(const Rational& q, std::int64_t p, int k) {
  if (valuation(denominator(q), p) > 0) throw DomainError("reduce_mod_ppow: not p-integral");
  BigInt m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  if (k == 0) return 0;
  BigInt inv;
  BigInt den = denominator(q) % m;
  if (mpz_invert(inv.backend().data(), den.backend().data(), m.backend().data()) == 0)
    throw DomainError("reduce_mod_ppow: denominator not invertible");
  BigInt r = (numerator(q) % m) * inv % m;
  if (r < 0) r += m;
  return r;
}

int legendre(std::int64_t a, std::int64_t p) {
  const std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  return mod_pow(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int legendre(const BigInt& a, std::int64_t p) { return legendre(mod_of(a, p), p); }

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  if ((a % 2 == 0) && (n % 2 == 0)) return 0;
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : kTwoTable[static_cast<std::size_t>(a & 7)];
  if (n < 0) {
    n = -n;
    if (a < 0) k = -k;
  }
  // n is now odd and positive; Jacobi recursion with the sign of a tracked.
  while (true) {
    if (a == 0) return n == 1 ? k : 0;
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= kTwoTable[static_cast<std::size_t>(n & 7)];
    if (a < 0) {
      // (-1 | n) = (-1)^((n-1)/2)
      a = -a;
      if (n % 4 == 3) k = -k;
    }
    if ((a & n & 2) != 0) k = -k;
    const std::int64_t r = a;
    a = n % r;
    n = r;
  }
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

// ---------------------------------------------------------------------------

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t r = ((D % 4) + 4) % 4;
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

Discriminant fundamental_decomposition(std::int64_t t) {
  if (t < 1) throw DomainError("fundamental_decomposition: t must be positive");
  // -t = f^2 s with s squarefree.
  std::int64_t f = 1, s = 1;
  for (auto [q, e] : factor(t)) {
    f *= ipow(q, e / 2);
    if (e % 2) s *= q;
  }
  s = -s;
  Discriminant out;
  out.t = t;
  if (((s % 4) + 4) % 4 == 1) {
    out.d = -s;
    out.n = 2 * f;
  } else {
    out.d = -4 * s;
    out.n = f;
  }
  return out;
}

int chi(std::int64_t d, std::int64_t m) { return kronecker(-d, m); }

// ---------------------------------------------------------------------------

std::vector<ReducedForm> reduced_forms(std::int64_t D, bool primitive_only) {
  if (D >= 0) throw DomainError("reduced_forms: discriminant must be negative");
  const std::int64_t r = ((D % 4) + 4) % 4;
  if (r != 0 && r != 1) throw DomainError("reduced_forms: discriminant must be 0 or 1 mod 4");
  std::vector<ReducedForm> out;
  const std::int64_t absD = -D;
  // |b| <= a <= c forces 3a^2 <= |D|.
  const std::int64_t a_max = isqrt(absD / 3);
  for (std::int64_t a = 1; a <= a_max; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (((b - D) % 2) != 0) continue;
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (primitive_only && std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  return out;
}

ClassNumber class_number(std::int64_t D) {
  const auto forms = reduced_forms(D, true);
  ClassNumber cn;
  cn.h = static_cast<std::int64_t>(forms.size());
  cn.w = D == -3 ? 6 : (D == -4 ? 4 : 2);
  return cn;
}

Rational hurwitz_H(std::int64_t N) {
  if (N < 0) throw DomainError("hurwitz_H: N must be nonnegative");
  if (N == 0) return Rational(-1, 12);
  const std::int64_t r = N % 4;
  if (r == 1 || r == 2) throw DomainError("hurwitz_H: N must be 0 or 3 mod 4");
  Rational total = 0;
  for (const auto& f : reduced_forms(-N, false)) {
    if (f.a == f.c && f.b == 0)
      total += Rational(1, 2);
    else if (f.a == f.b && f.b == f.c)
      total += Rational(1, 3);
    else
      total += 1;
  }
  return total;
}

// ---------------------------------------------------------------------------

int hilbert_symbol_odd_formula(const Rational& a, const Rational& b, std::int64_t p) {
  const SquareClass sa = square_class(a, p);
  const SquareClass sb = square_class(b, p);
  int sign = 1;
  if (sa.parity && sb.parity && ((p - 1) / 2) % 2 == 1) sign = -sign;
  if (sb.parity) sign *= legendre(sa.unit, p);
  if (sa.parity) sign *= legendre(sb.unit, p);
  return sign;
}

int hilbert_symbol_bruteforce(const Rational& a, const Rational& b, std::int64_t p, int k) {
  const SquareClass sa = square_class(a, p);
  const SquareClass sb = square_class(b, p);
  const std::int64_t m = ipow(p, k);
  return brute_solubility(p, k, sa.parity, mod_of(sa.unit, m), sb.parity, mod_of(sb.unit, m));
}

int hilbert_symbol(const Rational& a, const Rational& b, Place v) {
  if (a == 0 || b == 0) throw DomainError("hilbert_symbol: arguments must be nonzero");
  if (v == kInfinity) return (a < 0 && b < 0) ? -1 : 1;
  if (v == 2) return hilbert_two(square_class(a, 2), square_class(b, 2));
  if (!is_prime(v)) throw DomainError("hilbert_symbol: place must be prime or infinity");
  return hilbert_symbol_odd_formula(a, b, v);
}

std::set<std::int64_t> bad_primes(const Rational& a, const Rational& b) {
  std::set<std::int64_t> out{2};
  for (const Rational* q : {&a, &b}) {
    for (const BigInt& part : {BigInt(numerator(*q)), BigInt(denominator(*q))}) {
      BigInt m = abs(part);
      // Inputs of interest are small; trial division on the BigInt is fine.
      for (std::int64_t pr = 2; BigInt(pr) * pr <= m; ++pr) {
        if (m % pr == 0) {
          out.insert(pr);
          while (m % pr == 0) m /= pr;
        }
      }
      if (m > 1) out.insert(m.convert_to<std::int64_t>());
    }
  }
  return out;
}

std::set<Place> ramified_places(const Rational& a, const Rational& b) {
  std::set<Place> out;
  if (hilbert_symbol(a, b, kInfinity) == -1) out.insert(kInfinity);
  for (std::int64_t p : bad_primes(a, b))
    if (hilbert_symbol(a, b, p) == -1) out.insert(p);
  return out;
}

std::string place_name(Place v) { return v == kInfinity ? "inf" : std::to_string(v); }

}  // namespace arith

#pragma once

// Brute-force reference implementations used only by the tests. Nothing here
// calls into the library.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "arith/types.hpp"

namespace oracle {

using arith::Rational;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

/// Legendre symbol by listing the squares mod p.
inline int legendre(std::int64_t a, std::int64_t p) {
  a = mod(a, p);
  if (a == 0) return 0;
  for (std::int64_t x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

/// Character of Q(sqrt(-d)) at a positive integer, prime by prime.
inline int chi(std::int64_t d, std::int64_t m) {
  int out = 1;
  for (std::int64_t p = 2; m > 1; ++p) {
    while (m % p == 0) {
      m /= p;
      if (p == 2) {
        if (d % 2 == 0) return 0;
        out *= mod(-d, 8) == 1 ? 1 : -1;
      } else {
        out *= legendre(-d, p);
      }
    }
    if (out == 0) return 0;
  }
  return out;
}

struct Forms {
  std::int64_t primitive = 0;
  Rational weighted;  // all forms, weights 1/2 and 1/3
};

/// Reduced forms (a, b, c) with b^2 - 4ac = D < 0.
inline Forms count_forms(std::int64_t D) {
  Forms f;
  for (std::int64_t a = 1; 3 * a * a <= -D; ++a)
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if ((b * b - D) % (4 * a) != 0) continue;
      const std::int64_t c = (b * b - D) / (4 * a);
      if (c < a || (c == a && b < 0)) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) == 1) ++f.primitive;
      if (a == b && a == c)
        f.weighted += Rational(1, 3);
      else if (b == 0 && a == c)
        f.weighted += Rational(1, 2);
      else
        f.weighted += 1;
    }
  return f;
}

inline int units(std::int64_t D) { return D == -3 ? 6 : (D == -4 ? 4 : 2); }

/// Largest fundamental -d with 4t = n^2 d, by trial over n.
inline std::pair<std::int64_t, std::int64_t> decompose(std::int64_t t) {
  auto fundamental = [](std::int64_t D) {  // D < 0
    const std::int64_t r = oracle::mod(D, 16);
    if (oracle::mod(D, 4) == 1) {
      for (std::int64_t q = 2; q * q <= -D; ++q)
        if (D % (q * q) == 0) return false;
      return true;
    }
    if (r != 8 && r != 12) return false;
    const std::int64_t m = -D / 4;
    for (std::int64_t q = 2; q * q <= m; ++q)
      if (m % (q * q) == 0) return false;
    return true;
  };
  for (std::int64_t n = 1; n * n <= 4 * t; ++n)
    if ((4 * t) % (n * n) == 0) {
      const std::int64_t d = 4 * t / (n * n);
      if (fundamental(-d)) {
        bool ok = true;
        for (std::int64_t m = n + 1; m * m <= 4 * t; ++m)
          if ((4 * t) % (m * m) == 0 && fundamental(-4 * t / (m * m))) ok = false;
        if (ok) return {d, n};
      }
    }
  return {0, 0};
}

/// (a, b)_2 for nonzero integers from the 2-adic unit characters.
inline int hilbert2(std::int64_t a, std::int64_t b) {
  int alpha = 0, beta = 0;
  while (a % 2 == 0) a /= 2, ++alpha;
  while (b % 2 == 0) b /= 2, ++beta;
  auto eps = [](std::int64_t u) { return static_cast<int>(mod((u - 1) / 2, 2)); };
  auto omega = [](std::int64_t u) { return static_cast<int>(mod((u * u - 1) / 8, 2)); };
  const int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
  return e % 2 == 0 ? 1 : -1;
}

/// z^2 = a x^2 + b y^2 solvable in Q_p, tested by primitive solutions modulo
/// p^k with a valuation margin, for integers a, b.
inline bool hilbert_solvable(std::int64_t a, std::int64_t b, std::int64_t p, int k) {
  std::int64_t m = 1;
  for (int i = 0; i < k; ++i) m *= p;
  for (std::int64_t x = 0; x < m; ++x)
    for (std::int64_t y = 0; y < m; ++y) {
      if (x % p == 0 && y % p == 0) continue;
      const std::int64_t rhs = mod(mod(a, m) * (x * x % m) + mod(b, m) * (y * y % m), m);
      for (std::int64_t z = 0; z < m; ++z)
        if (z * z % m == rhs) return true;
    }
  return false;
}

}  // namespace oracle

#pragma once

// Exact arithmetic layer: integer factorization helpers, quadratic
// characters, binary-form class numbers and Hilbert symbols. Everything
// else in the library bottoms out here.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arith/types.hpp"

namespace arith {

// ---------------------------------------------------------------------------
// Integer helpers

bool is_prime(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
bool is_squarefree(std::int64_t n);

/// p-adic valuation; n must be nonzero.
int valuation(std::int64_t n, std::int64_t p);
int valuation(const BigInt& n, std::int64_t p);
int valuation(const Rational& q, std::int64_t p);

/// Integer power with overflow check.
std::int64_t ipow(std::int64_t base, int exp);

std::int64_t mod_pow(std::int64_t base, std::int64_t exp, std::int64_t mod);
std::int64_t mod_inverse(std::int64_t a, std::int64_t mod);

/// Reduces a p-integral rational to an integer in [0, p^k).
BigInt reduce_mod_ppow(const Rational& q, std::int64_t p, int k);

/// Legendre symbol (a | p) for an odd prime p.
int legendre(const BigInt& a, std::int64_t p);
int legendre(std::int64_t a, std::int64_t p);

/// Kronecker symbol (a | n), defined for all integers.
int kronecker(std::int64_t a, std::int64_t n);

std::string to_string(const Rational& q);
std::string to_string(const BigInt& n);

// ---------------------------------------------------------------------------
// Discriminants

/// 4t = n^2 d with -d a fundamental discriminant.
struct Discriminant {
  std::int64_t d = 0;
  std::int64_t n = 0;
  std::int64_t t = 0;
};

bool is_fundamental_discriminant(std::int64_t D);

Discriminant fundamental_decomposition(std::int64_t t);

/// Kronecker character of Q(sqrt(-d)) evaluated at m.
int chi(std::int64_t d, std::int64_t m);
inline int chi(const Discriminant& disc, std::int64_t m) { return chi(disc.d, m); }

// ---------------------------------------------------------------------------
// Binary quadratic forms

struct ReducedForm {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  friend bool operator==(const ReducedForm&, const ReducedForm&) = default;
};

/// All reduced forms of the negative discriminant D (|b| <= a <= c, b >= 0 on
/// the boundary), optionally only the primitive ones. Ordered by (a, b).
std::vector<ReducedForm> reduced_forms(std::int64_t D, bool primitive_only);

struct ClassNumber {
  std::int64_t h = 0;
  int w = 0;
};

/// Class number and unit count of the order of discriminant D < 0, by
/// exhaustive reduced-form enumeration.
ClassNumber class_number(std::int64_t D);

/// Hurwitz class number: weighted count of all reduced forms of
/// discriminant -N, weights 1/2 and 1/3 at the forms with extra
/// automorphisms. H(0) = -1/12.
Rational hurwitz_H(std::int64_t N);

// ---------------------------------------------------------------------------
// Hilbert symbols

/// (a, b)_v for nonzero rationals. Odd primes use the closed valuation /
/// Legendre formula; p = 2 uses brute-force solubility modulo 2^6; the real
/// place is a sign check.
int hilbert_symbol(const Rational& a, const Rational& b, Place v);

/// Closed formula at an odd prime.
int hilbert_symbol_odd_formula(const Rational& a, const Rational& b, std::int64_t p);

/// Brute-force solubility of z^2 = a x^2 + b y^2 with a primitive vector
/// modulo p^k (used at p = 2 and by tests as an oracle at odd p).
int hilbert_symbol_bruteforce(const Rational& a, const Rational& b, std::int64_t p, int k);

/// Places where (a, b)_v = -1; kInfinity included when applicable.
std::set<Place> ramified_places(const Rational& a, const Rational& b);

/// Primes dividing numerator or denominator of a rational (plus 2).
std::set<std::int64_t> bad_primes(const Rational& a, const Rational& b);

std::string place_name(Place v);

}  // namespace arith

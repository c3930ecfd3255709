#include <doctest.h>

#include <random>

#include "arith/errors.hpp"
#include "arith/exact.hpp"
#include "oracles.hpp"

using namespace arith;

TEST_CASE("factorization and divisors") {
  CHECK(factor(360) == std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}});
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(is_squarefree(30));
  CHECK_FALSE(is_squarefree(18));
  for (std::int64_t n = 1; n < 500; ++n) CHECK(is_prime(n) == oracle::is_prime(n));
  CHECK(valuation(Rational(9, 250), 5) == -3);
  CHECK(valuation(Rational(9, 250), 3) == 2);
}

TEST_CASE("fundamental decomposition") {
  auto f1 = fundamental_decomposition(1), f3 = fundamental_decomposition(3), f2 = fundamental_decomposition(2);
  CHECK(f1.d == 4);
  CHECK(f1.n == 1);
  CHECK(f3.d == 3);
  CHECK(f3.n == 2);
  CHECK(f2.d == 8);
  CHECK(f2.n == 1);
  for (std::int64_t t = 1; t <= 400; ++t) {
    const Discriminant d = fundamental_decomposition(t);
    const auto [od, on] = oracle::decompose(t);
    CHECK(d.n * d.n * d.d == 4 * t);
    CHECK(d.d == od);
    CHECK(d.n == on);
  }
}

TEST_CASE("quadratic character") {
  CHECK(chi(4, 3) == -1);
  CHECK(chi(3, 3) == 0);
  CHECK(chi(8, 3) == 1);
  for (std::int64_t t = 1; t <= 60; ++t) {
    const std::int64_t d = fundamental_decomposition(t).d;
    for (std::int64_t m = 1; m <= 60; ++m) CHECK(chi(d, m) == oracle::chi(d, m));
  }
}

TEST_CASE("class numbers and Hurwitz class numbers") {
  CHECK(class_number(-3).h == 1);
  CHECK(class_number(-3).w == 6);
  CHECK(class_number(-4).h == 1);
  CHECK(class_number(-4).w == 4);
  CHECK(class_number(-23).h == 3);
  CHECK(class_number(-23).w == 2);
  CHECK(hurwitz_H(0) == Rational(-1, 12));
  CHECK(hurwitz_H(3) == Rational(1, 3));
  CHECK(hurwitz_H(4) == Rational(1, 2));
  for (std::int64_t D = -3; D >= -400; --D) {
    if (oracle::mod(D, 4) != 0 && oracle::mod(D, 4) != 1) continue;
    const auto f = oracle::count_forms(D);
    CHECK(class_number(D).h == f.primitive);
    CHECK(class_number(D).w == oracle::units(D));
    CHECK(hurwitz_H(-D) == f.weighted);
  }
  CHECK_THROWS_AS(hurwitz_H(5), DomainError);
  CHECK_THROWS_AS(hurwitz_H(6), DomainError);
}

TEST_CASE("Hilbert symbols") {
  CHECK(hilbert_symbol(-1, -1, kInfinity) == -1);
  CHECK(hilbert_symbol(-1, -1, 2) == -1);
  CHECK(hilbert_symbol(5, 7, 3) == 1);
  std::vector<std::int64_t> sf;
  for (std::int64_t n = -15; n <= 15; ++n)
    if (n != 0 && is_squarefree(std::abs(n))) sf.push_back(n);
  for (std::int64_t p : {2, 3, 5, 7})
    for (std::int64_t a : sf)
      for (std::int64_t b : sf) {
        const int expected = p == 2 ? oracle::hilbert2(a, b) : (oracle::hilbert_solvable(a, b, p, 2) ? 1 : -1);
        CHECK_MESSAGE(hilbert_symbol(a, b, p) == expected, "(", a, ",", b, ")_", p);
      }
}

TEST_CASE("Hilbert symbol at odd primes: formula against bruteforce") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> U(-60, 60);
  for (int it = 0; it < 200; ++it) {
    const std::int64_t a = U(rng), b = U(rng);
    if (a == 0 || b == 0) continue;
    for (std::int64_t p : {3, 5})
      CHECK(hilbert_symbol_odd_formula(a, b, p) == hilbert_symbol_bruteforce(a, b, p, 4));
  }
}

TEST_CASE("ramified places have even cardinality") {
  for (std::int64_t a = -20; a <= 20; ++a)
    for (std::int64_t b = -20; b <= 20; ++b)
      if (a && b) CHECK(ramified_places(a, b).size() % 2 == 0);
}

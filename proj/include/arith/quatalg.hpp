#pragma once

// Rational quaternion algebras (a, b), maximal orders, the trace-zero
// ternary lattice O_B ∩ V with its trace pairing, short-vector enumeration
// and the Diff(T, B) set of a binary fundamental matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "arith/errors.hpp"
#include "arith/exact.hpp"
#include "arith/types.hpp"

namespace arith {

struct QuaternionAlgebra {
  std::int64_t a = 1;
  std::int64_t b = 1;
  std::set<Place> ramified;  // computed from Hilbert symbols
  std::int64_t D = 1;        // product of finite ramified primes

  bool indefinite() const { return !ramified.contains(kInfinity); }
};

/// Builds the algebra with i^2 = a, j^2 = b and computes its ramification.
QuaternionAlgebra make_algebra(std::int64_t a, std::int64_t b);

/// Element x0 + x1 i + x2 j + x3 ij.
using Quaternion = Vec4<Rational>;

Quaternion qmul(const QuaternionAlgebra& B, const Quaternion& x, const Quaternion& y);
Quaternion qconj(const Quaternion& x);
Rational qtrace(const Quaternion& x);
Rational qnorm(const QuaternionAlgebra& B, const Quaternion& x);
/// (x, y) = tr(x y^ι).
Rational qpair(const QuaternionAlgebra& B, const Quaternion& x, const Quaternion& y);

struct AlgebraSearch {
  std::int64_t max_coefficient = 200;
};

/// Indefinite presentation with finite ramification exactly the primes of D.
/// Candidates are scanned by increasing max(|a|, |b|) with a > 0.
QuaternionAlgebra algebra_from_disc(std::int64_t D, AlgebraSearch cfg = {});

/// Definite algebra with invariants flipped at p and infinity.
QuaternionAlgebra definite_twist(const QuaternionAlgebra& B, std::int64_t p,
                                 AlgebraSearch cfg = {});

struct Order {
  std::array<Quaternion, 4> basis;
};

/// |det(tr(e_k e_l))| of a rank-4 lattice; equals D(B)^2 for maximal orders.
Rational order_discriminant(const QuaternionAlgebra& B, const Order& O);

/// True when 1 ∈ O and all basis products lie in O.
bool is_order(const QuaternionAlgebra& B, const Order& O);

/// True when q lies in the Z-span of the order basis.
bool contains(const Order& O, const Quaternion& q);

struct TernaryLattice {
  std::array<Quaternion, 3> basis;
  Mat3<Rational> gram;  // (e_k, e_l) = tr(e_k e_l^ι)

  /// Q(x) = (x, x) / 2 for a coordinate vector.
  Rational Q(const Vec3<BigInt>& c) const;
  Quaternion element(const Vec3<BigInt>& c) const;
};

struct MaximalOrder {
  Order order;
  TernaryLattice trace_zero;
};

struct SaturationConfig {
  int max_rounds = 64;
  std::int64_t max_denominator = 1 << 20;
};

/// Saturates Z<i, j> to a maximal order and returns its trace-zero sublattice.
MaximalOrder maximal_order(const QuaternionAlgebra& B, SaturationConfig cfg = {});

/// Trace-zero sublattice O ∩ V of any order.
TernaryLattice trace_zero_lattice(const QuaternionAlgebra& B, const Order& O);

/// Rational positive-definite majorant of Q in lattice coordinates: the
/// diagonal form |a| x1^2 + |b| x2^2 + |ab| x3^2 pulled back to the basis.
Mat3<Rational> standard_majorant(const QuaternionAlgebra& B, const TernaryLattice& L);

// ---------------------------------------------------------------------------
// Short-vector enumeration

namespace detail {
template <class Scalar>
long double to_ld(const Scalar& s) {
  if constexpr (std::is_arithmetic_v<Scalar>)
    return static_cast<long double>(s);
  else
    return s.template convert_to<long double>();
}
}  // namespace detail

/// All integer vectors c with c^T G c <= bound, G positive definite.
/// Ranges come from a floating LDL^T walk with outward slack; every candidate
/// is then re-checked in Scalar arithmetic. Lexicographic output order.
template <class Scalar>
std::vector<Vec3<BigInt>> enumerate_short_vectors(const Mat3<Scalar>& G, const Scalar& bound) {
  Eigen::Matrix<long double, 3, 3> g;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g(r, c) = detail::to_ld(G(r, c));
  // x^T G x = sum_i d_i (x_i + sum_{j > i} u_ij x_j)^2
  Eigen::Matrix<long double, 3, 3> u = Eigen::Matrix<long double, 3, 3>::Zero();
  std::array<long double, 3> d{};
  Eigen::Matrix<long double, 3, 3> work = g;
  for (int i = 0; i < 3; ++i) {
    d[i] = work(i, i);
    if (!(d[i] > 0)) throw DomainError("enumerate_short_vectors: majorant not positive definite");
    for (int j = i + 1; j < 3; ++j) u(i, j) = work(i, j) / d[i];
    for (int j = i + 1; j < 3; ++j)
      for (int k = i + 1; k < 3; ++k) work(j, k) -= d[i] * u(i, j) * u(i, k);
  }
  const long double B = detail::to_ld(bound);
  if (B < 0) return {};
  const long double slack = 1e-9L * (1 + B);
  std::vector<Vec3<BigInt>> out;
  std::array<std::int64_t, 3> x{};
  // Walk x2, then x1, then x0.
  const long double r2 = std::sqrt((B + slack) / d[2]) + 1e-9L;
  for (x[2] = static_cast<std::int64_t>(std::ceil(-r2)); x[2] <= static_cast<std::int64_t>(std::floor(r2)); ++x[2]) {
    const long double rem2 = B + slack - d[2] * x[2] * x[2];
    if (rem2 < 0) continue;
    const long double c1 = -u(1, 2) * x[2];
    const long double r1 = std::sqrt(rem2 / d[1]) + 1e-9L;
    for (x[1] = static_cast<std::int64_t>(std::ceil(c1 - r1)); x[1] <= static_cast<std::int64_t>(std::floor(c1 + r1)); ++x[1]) {
      const long double t1 = x[1] - c1;
      const long double rem1 = rem2 - d[1] * t1 * t1;
      if (rem1 < 0) continue;
      const long double c0 = -u(0, 1) * x[1] - u(0, 2) * x[2];
      const long double r0 = std::sqrt(rem1 / d[0]) + 1e-9L;
      for (x[0] = static_cast<std::int64_t>(std::ceil(c0 - r0)); x[0] <= static_cast<std::int64_t>(std::floor(c0 + r0)); ++x[0]) {
        Scalar val = Scalar(0);
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) val += G(r, c) * Scalar(x[r]) * Scalar(x[c]);
        if (val <= bound) out.emplace_back(BigInt(x[0]), BigInt(x[1]), BigInt(x[2]));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Vec3<BigInt>& l, const Vec3<BigInt>& r) {
    return std::lexicographical_compare(l.data(), l.data() + 3, r.data(), r.data() + 3);
  });
  return out;
}

/// Lattice vectors with Q(x) = t and majorant value at most bound.
template <class Scalar>
std::vector<Vec3<BigInt>> enumerate_norm_t(const TernaryLattice& L, const Rational& t,
                                           const Mat3<Scalar>& majorant, const Scalar& bound) {
  std::vector<Vec3<BigInt>> out;
  for (auto& c : enumerate_short_vectors(majorant, bound))
    if (L.Q(c) == t) out.push_back(c);
  return out;
}

// ---------------------------------------------------------------------------
// Fundamental matrices

/// T = [[t1, m], [m, t2]] stored as (t1, 2m, t2).
struct FundamentalMatrix {
  std::int64_t t1 = 0;
  std::int64_t twom = 0;
  std::int64_t t2 = 0;

  Rational m() const { return Rational(twom, 2); }
  Rational det() const { return Rational(4 * t1 * t2 - twom * twom, 4); }
  bool positive_definite() const { return t1 > 0 && det() > 0; }
  /// U^T T U for an integral U.
  FundamentalMatrix transformed(const Mat2<std::int64_t>& U) const;
  friend bool operator==(const FundamentalMatrix&, const FundamentalMatrix&) = default;
};

/// Places where the algebra B_T attached to diag(T, det(T)^{-1}) has invariant
/// opposite to B.
std::set<Place> diff_set(const FundamentalMatrix& T, const QuaternionAlgebra& B);

/// Local invariant inv_v(B_T) as ±1.
int local_invariant_BT(const FundamentalMatrix& T, Place v);

}  // namespace arith

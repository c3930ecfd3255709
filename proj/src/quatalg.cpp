#include "arith/quatalg.hpp"

#include <cstdlib>
#include <numeric>
#include <optional>
#include <tuple>

namespace arith {

namespace {

using Row = std::vector<BigInt>;

// Row Hermite normal form over Z; returns the nonzero rows.
std::vector<Row> hnf_rows(std::vector<Row> A) {
  if (A.empty()) return {};
  const std::size_t n = A.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < A.size(); ++col) {
    while (true) {
      std::size_t pivot = A.size();
      for (std::size_t r = row; r < A.size(); ++r) {
        if (A[r][col] != 0 && (pivot == A.size() || abs(A[r][col]) < abs(A[pivot][col]))) pivot = r;
      }
      if (pivot == A.size()) break;
      std::swap(A[row], A[pivot]);
      bool clean = true;
      for (std::size_t r = row + 1; r < A.size(); ++r) {
        if (A[r][col] == 0) continue;
        const BigInt q = A[r][col] / A[row][col];
        for (std::size_t c = col; c < n; ++c) A[r][c] -= q * A[row][c];
        if (A[r][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (row >= A.size() || A[row][col] == 0) continue;
    if (A[row][col] < 0)
      for (auto& e : A[row]) e = -e;
    for (std::size_t r = 0; r < row; ++r) {
      BigInt q = A[r][col] / A[row][col];
      if (A[r][col] - q * A[row][col] < 0) q -= 1;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= q * A[row][c];
    }
    ++row;
  }
  A.resize(row);
  return A;
}

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / mp::gcd(a, b) * b; }

// Z-basis of the lattice spanned by rational generators (must have rank 4).
std::array<Quaternion, 4> lattice_basis(const std::vector<Quaternion>& gens) {
  BigInt L = 1;
  for (const auto& g : gens)
    for (int k = 0; k < 4; ++k) L = lcm_big(L, denominator(g(k)));
  std::vector<Row> rows;
  rows.reserve(gens.size());
  for (const auto& g : gens) {
    Row r(4);
    for (int k = 0; k < 4; ++k) r[k] = numerator(g(k) * Rational(L));
    rows.push_back(std::move(r));
  }
  auto h = hnf_rows(std::move(rows));
  if (h.size() != 4) throw DomainError("lattice_basis: generators do not span a rank-4 lattice");
  std::array<Quaternion, 4> out;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) out[i](k) = Rational(h[i][k]) / Rational(L);
  return out;
}

Eigen::Matrix<Rational, 4, 4> basis_matrix(const Order& O) {
  Eigen::Matrix<Rational, 4, 4> M;
  for (int i = 0; i < 4; ++i) M.col(i) = O.basis[i];
  return M;
}

Rational abs_det(const Order& O) {
  const Rational d = basis_matrix(O).determinant();
  return d < 0 ? Rational(-d) : d;
}

std::optional<Order> ring_closure(const QuaternionAlgebra& B, std::vector<Quaternion> gens,
                                  const SaturationConfig& cfg) {
  gens.push_back(Quaternion(Rational(1), Rational(0), Rational(0), Rational(0)));
  Order O{lattice_basis(gens)};
  for (int round = 0; round < cfg.max_rounds; ++round) {
    std::vector<Quaternion> next(O.basis.begin(), O.basis.end());
    for (const auto& x : O.basis)
      for (const auto& y : O.basis) next.push_back(qmul(B, x, y));
    Order grown{lattice_basis(next)};
    for (const auto& e : grown.basis)
      for (int k = 0; k < 4; ++k)
        if (denominator(e(k)) > cfg.max_denominator) return std::nullopt;
    if (abs_det(grown) == abs_det(O)) return grown;
    O = grown;
  }
  return std::nullopt;
}

bool is_integer(const Rational& q) { return denominator(q) == 1; }

std::int64_t to_i64(const Rational& q) { return numerator(q).convert_to<std::int64_t>(); }

}  // namespace

QuaternionAlgebra make_algebra(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) throw DomainError("make_algebra: a and b must be nonzero");
  QuaternionAlgebra B;
  B.a = a;
  B.b = b;
  B.ramified = ramified_places(Rational(a), Rational(b));
  B.D = 1;
  for (Place v : B.ramified)
    if (v != kInfinity) B.D *= v;
  return B;
}

Quaternion qmul(const QuaternionAlgebra& B, const Quaternion& x, const Quaternion& y) {
  const Rational a = B.a, b = B.b;
  Quaternion z;
  z(0) = x(0) * y(0) + a * x(1) * y(1) + b * x(2) * y(2) - a * b * x(3) * y(3);
  z(1) = x(0) * y(1) + x(1) * y(0) - b * x(2) * y(3) + b * x(3) * y(2);
  z(2) = x(0) * y(2) + x(2) * y(0) + a * x(1) * y(3) - a * x(3) * y(1);
  z(3) = x(0) * y(3) + x(3) * y(0) + x(1) * y(2) - x(2) * y(1);
  return z;
}

Quaternion qconj(const Quaternion& x) { return Quaternion(x(0), -x(1), -x(2), -x(3)); }

Rational qtrace(const Quaternion& x) { return 2 * x(0); }

Rational qnorm(const QuaternionAlgebra& B, const Quaternion& x) {
  const Rational a = B.a, b = B.b;
  return x(0) * x(0) - a * x(1) * x(1) - b * x(2) * x(2) + a * b * x(3) * x(3);
}

Rational qpair(const QuaternionAlgebra& B, const Quaternion& x, const Quaternion& y) {
  return qtrace(qmul(B, x, qconj(y)));
}

QuaternionAlgebra algebra_from_disc(std::int64_t D, AlgebraSearch cfg) {
  if (D <= 1 || !is_squarefree(D)) throw DomainError("algebra_from_disc: D must be squarefree and > 1");
  const auto primes = prime_divisors(D);
  if (primes.size() % 2 != 0)
    throw DomainError("algebra_from_disc: an indefinite algebra needs an even number of ramified primes");
  const std::set<Place> target(primes.begin(), primes.end());
  for (std::int64_t m = 1; m <= cfg.max_coefficient; ++m) {
    for (std::int64_t a = 1; a <= m; ++a) {
      for (std::int64_t b = -m; b <= m; ++b) {
        if (b == 0 || std::max<std::int64_t>(a, std::llabs(b)) != m) continue;
        if (ramified_places(Rational(a), Rational(b)) == target) return make_algebra(a, b);
      }
    }
  }
  throw SearchExhausted("algebra_from_disc: no presentation found within the coefficient bound");
}

QuaternionAlgebra definite_twist(const QuaternionAlgebra& B, std::int64_t p, AlgebraSearch cfg) {
  if (p == kInfinity || B.D % p != 0) throw DomainError("definite_twist: p must divide D(B)");
  std::set<Place> target = B.ramified;
  for (Place v : {Place{p}, kInfinity}) {
    if (target.contains(v))
      target.erase(v);
    else
      target.insert(v);
  }
  for (std::int64_t m = 1; m <= cfg.max_coefficient; ++m) {
    for (std::int64_t a = -m; a <= -1; ++a) {
      for (std::int64_t b = -m; b <= -1; ++b) {
        if (std::max<std::int64_t>(std::llabs(a), std::llabs(b)) != m) continue;
        if (ramified_places(Rational(a), Rational(b)) == target) return make_algebra(a, b);
      }
    }
  }
  throw SearchExhausted("definite_twist: no presentation found within the coefficient bound");
}

Rational order_discriminant(const QuaternionAlgebra& B, const Order& O) {
  Eigen::Matrix<Rational, 4, 4> tr;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) tr(i, j) = qtrace(qmul(B, O.basis[i], O.basis[j]));
  const Rational d = tr.determinant();
  return d < 0 ? Rational(-d) : d;
}

bool contains(const Order& O, const Quaternion& q) {
  const Eigen::Matrix<Rational, 4, 1> c = basis_matrix(O).fullPivLu().solve(q);
  for (int k = 0; k < 4; ++k)
    if (!is_integer(c(k))) return false;
  return true;
}

bool is_order(const QuaternionAlgebra& B, const Order& O) {
  if (!contains(O, Quaternion(Rational(1), Rational(0), Rational(0), Rational(0)))) return false;
  for (const auto& x : O.basis)
    for (const auto& y : O.basis)
      if (!contains(O, qmul(B, x, y))) return false;
  return true;
}

Rational TernaryLattice::Q(const Vec3<BigInt>& c) const {
  Rational s = 0;
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) s += gram(r, k) * Rational(c(r)) * Rational(c(k));
  return s / 2;
}

Quaternion TernaryLattice::element(const Vec3<BigInt>& c) const {
  Quaternion x = Quaternion::Zero();
  for (int k = 0; k < 3; ++k) x += basis[k] * Rational(c(k));
  return x;
}

TernaryLattice trace_zero_lattice(const QuaternionAlgebra& B, const Order& O) {
  std::array<std::int64_t, 4> t{};
  for (int k = 0; k < 4; ++k) {
    const Rational tk = qtrace(O.basis[k]);
    if (!is_integer(tk)) throw DomainError("trace_zero_lattice: basis has non-integral trace");
    t[k] = to_i64(tk);
  }
  Eigen::Matrix<std::int64_t, 4, 4> U = Eigen::Matrix<std::int64_t, 4, 4>::Identity();
  int lead = -1;
  for (int k = 0; k < 4; ++k) {
    if (t[k] == 0) continue;
    if (lead < 0) {
      lead = k;
      continue;
    }
    // Extended gcd between the lead column and column k.
    std::int64_t g0 = t[lead], g1 = t[k], x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (g1 != 0) {
      const std::int64_t q = g0 / g1;
      std::tie(g0, g1) = std::make_pair(g1, g0 - q * g1);
      std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
      std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
    }
    const std::int64_t a = t[lead] / g0, b = t[k] / g0;
    const Eigen::Matrix<std::int64_t, 4, 1> cl = U.col(lead), ck = U.col(k);
    U.col(lead) = x0 * cl + y0 * ck;
    U.col(k) = -b * cl + a * ck;
    t[lead] = g0;
    t[k] = 0;
  }
  TernaryLattice L;
  int slot = 0;
  for (int k = 0; k < 4; ++k) {
    if (k == lead) continue;
    Quaternion e = Quaternion::Zero();
    for (int i = 0; i < 4; ++i) e += O.basis[i] * Rational(U(i, k));
    L.basis[slot++] = e;
  }
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) L.gram(r, c) = qpair(B, L.basis[r], L.basis[c]);
  return L;
}

MaximalOrder maximal_order(const QuaternionAlgebra& B, SaturationConfig cfg) {
  const Rational one = 1, zero = 0;
  Order O{{Quaternion(one, zero, zero, zero), Quaternion(zero, one, zero, zero),
           Quaternion(zero, zero, one, zero), Quaternion(zero, zero, zero, one)}};
  const Rational target = Rational(B.D) * Rational(B.D);
  for (int round = 0; round < cfg.max_rounds; ++round) {
    const Rational disc = order_discriminant(B, O);
    if (disc == target) return {O, trace_zero_lattice(B, O)};
    const Rational ratio = disc / target;
    if (!is_integer(ratio)) throw SearchExhausted("maximal_order: discriminant below D^2");
    bool grown = false;
    for (std::int64_t q : prime_divisors(to_i64(ratio))) {
      // Candidates (sum c_k e_k) / q with c in [0, q)^4 \ {0}.
      const std::int64_t count = ipow(q, 4);
      for (std::int64_t code = 1; code < count && !grown; ++code) {
        Quaternion x = Quaternion::Zero();
        std::int64_t rem = code;
        for (int k = 0; k < 4; ++k) {
          x += O.basis[k] * Rational(rem % q);
          rem /= q;
        }
        x /= Rational(q);
        if (!is_integer(qtrace(x)) || !is_integer(qnorm(B, x))) continue;
        std::vector<Quaternion> gens(O.basis.begin(), O.basis.end());
        gens.push_back(x);
        auto closed = ring_closure(B, gens, cfg);
        if (!closed) continue;
        const Rational nd = order_discriminant(B, *closed);
        if (nd < disc && is_integer(nd)) {
          O = *closed;
          grown = true;
        }
      }
      if (grown) break;
    }
    if (!grown) throw SearchExhausted("maximal_order: no integral overorder found");
  }
  throw SearchExhausted("maximal_order: saturation did not terminate");
}

Mat3<Rational> standard_majorant(const QuaternionAlgebra& B, const TernaryLattice& L) {
  const std::array<Rational, 3> w{Rational(std::llabs(B.a)), Rational(std::llabs(B.b)),
                                  Rational(std::llabs(B.a * B.b))};
  Mat3<Rational> G;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      Rational s = 0;
      for (int m = 0; m < 3; ++m) s += w[m] * L.basis[r](m + 1) * L.basis[c](m + 1);
      G(r, c) = s;
    }
  return G;
}

// ---------------------------------------------------------------------------

FundamentalMatrix FundamentalMatrix::transformed(const Mat2<std::int64_t>& U) const {
  // Work with 2T, which is integral.
  Mat2<std::int64_t> twoT;
  twoT << 2 * t1, twom, twom, 2 * t2;
  const Mat2<std::int64_t> r = U.transpose() * twoT * U;
  return {r(0, 0) / 2, r(0, 1), r(1, 1) / 2};
}

namespace {

// A rational diagonalization diag(q1, q2) of the binary form T.
std::pair<Rational, Rational> rational_diagonal(const FundamentalMatrix& T) {
  const Rational det = T.det();
  if (det == 0) throw DomainError("diff_set: T must be nonsingular");
  Rational q1;
  if (T.t1 != 0)
    q1 = T.t1;
  else if (T.t2 != 0)
    q1 = T.t2;
  else
    q1 = Rational(T.twom);  // value at (1, 1)
  return {q1, det / q1};
}

}  // namespace

int local_invariant_BT(const FundamentalMatrix& T, Place v) {
  const auto [q1, q2] = rational_diagonal(T);
  return hilbert_symbol(-q1, -q2, v);
}

std::set<Place> diff_set(const FundamentalMatrix& T, const QuaternionAlgebra& B) {
  const auto [q1, q2] = rational_diagonal(T);
  std::set<Place> places = bad_primes(q1, q2);
  places.insert(kInfinity);
  for (Place v : B.ramified) places.insert(v);
  std::set<Place> out;
  for (Place v : places) {
    const int inv_BT = hilbert_symbol(-q1, -q2, v);
    const int inv_B = B.ramified.contains(v) ? -1 : 1;
    if (inv_BT != inv_B) out.insert(v);
  }
  return out;
}

}  // namespace arith

#include "arith/green.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace arith {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;
constexpr Real kEps = std::numeric_limits<Real>::epsilon();

Real to_real(const Rational& q) { return q.convert_to<Real>(); }

}  // namespace

UpperHalfPoint::UpperHalfPoint(Complex w) : z(w.imag() < 0 ? std::conj(w) : w) {
  if (w.imag() == 0) throw DomainError("UpperHalfPoint: Im(z) must be nonzero");
}

Mat2<Complex> w_of(const UpperHalfPoint& z) {
  Mat2<Complex> w;
  w << z.z, -z.z * z.z, Complex(1), -z.z;
  return w;
}

Real Q_real(const RealMat2& x) { return x.determinant(); }

Real pairing_real(const RealMat2& x, const RealMat2& y) { return -(x * y).trace(); }

Real R_value(const RealMat2& x, const UpperHalfPoint& z) {
  // (x, w) = -(2 x11 z + x12 - x21 z^2) and (w, w-bar) = -4 y^2. The factor 2
  // makes (x, x) + 2R the majorant attached to z.
  const Complex zz = z.z;
  const Complex xw = 2 * x(0, 0) * zz + x(0, 1) - x(1, 0) * zz * zz;
  return std::norm(xw) / (2 * z.y() * z.y());
}

Real majorant_value(const RealMat2& x, const UpperHalfPoint& z) {
  return pairing_real(x, x) + 2 * R_value(x, z);
}

UpperHalfPoint fixed_point(const RealMat2& x) {
  const Real q = Q_real(x);
  if (!(q > 0)) throw DomainError("fixed_point: need Q(x) > 0");
  return UpperHalfPoint(Complex(x(0, 0), std::sqrt(q)) / x(1, 0));
}

Real beta1_series(Real r) {
  if (!(r > 0)) throw DomainError("beta1: r must be positive");
  Real sum = 0, term = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -r / k;
    const Real add = term / k;
    sum += add;
    if (std::fabs(add) < kEps * std::fabs(sum)) break;
  }
  return -std::numbers::egamma_v<Real> - std::log(r) - sum;
}

Real beta1_continued_fraction(Real r) {
  if (!(r > 0)) throw DomainError("beta1: r must be positive");
  constexpr Real tiny = std::numeric_limits<Real>::min() / kEps;
  Real b = r + 1, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 20000; ++i) {
    const Real an = -static_cast<Real>(i) * i;
    b += 2;
    d = 1 / (an * d + b);
    c = b + an / c;
    const Real del = c * d;
    h *= del;
    if (std::fabs(del - 1) < kEps) return h * std::exp(-r);
  }
  throw PrecisionFailure("beta1: continued fraction did not converge");
}

Real beta1(Real r) { return r < 1 ? beta1_series(r) : beta1_continued_fraction(r); }

GreenEvaluation xi_and_phi0(const RealMat2& x, const UpperHalfPoint& z) {
  const Real q = Q_real(x);
  if (q == 0) throw DomainError("xi_and_phi0: Q(x) must be nonzero");
  GreenEvaluation g;
  g.R = R_value(x, z);
  g.min_R = g.R;
  g.terms = 1;
  g.singular = g.R < 1e-12L;
  g.xi = g.R > 0 ? beta1(2 * kPi * g.R) : std::numeric_limits<Real>::infinity();
  g.phi0 = (4 * kPi * (g.R + 2 * q) - 1) * std::exp(-2 * kPi * g.R);
  return g;
}

GreenResidual green_residual(const RealMat2& x, const UpperHalfPoint& z, Real h) {
  auto xi = [&](Real dx, Real dy) { return beta1(2 * kPi * R_value(x, UpperHalfPoint(z.z + Complex(dx, dy)))); };
  const Real y = z.y();
  h *= y;  // hyperbolic step
  auto lap = [&](Real s) { return (xi(s, 0) + xi(-s, 0) + xi(0, s) + xi(0, -s) - 4 * xi(0, 0)) / (s * s); };
  // One Richardson step removes the h^2 term of the five-point stencil.
  const Real lap_h = lap(h), lap_2h = lap(2 * h);
  const Real laplacian = (4 * lap_h - lap_2h) / 3;
  GreenResidual out;
  out.lhs = y * y * laplacian / 2;
  out.rhs = xi_and_phi0(x, z).phi0;
  out.relative_error = std::fabs(out.lhs - out.rhs) / std::fabs(out.rhs);
  return out;
}

RealMat2 embed(const QuaternionAlgebra& B, const Quaternion& q) {
  RealMat2 one = RealMat2::Identity(), I, J;
  if (B.a > 0) {
    const Real s = std::sqrt(static_cast<Real>(B.a));
    I << s, 0, 0, -s;
    J << 0, 1, static_cast<Real>(B.b), 0;
  } else if (B.b > 0) {
    const Real s = std::sqrt(static_cast<Real>(B.b));
    I << 0, 1, static_cast<Real>(B.a), 0;
    J << s, 0, 0, -s;
  } else {
    throw DomainError("embed: B is definite");
  }
  return to_real(q[0]) * one + to_real(q[1]) * I + to_real(q[2]) * J + to_real(q[3]) * (I * J);
}

Mat3<Real> majorant_gram(const QuaternionAlgebra& B, const TernaryLattice& L, const UpperHalfPoint& z) {
  std::array<RealMat2, 3> X;
  std::array<Complex, 3> ell;
  for (int k = 0; k < 3; ++k) {
    X[k] = embed(B, L.basis[k]);
    ell[k] = 2 * X[k](0, 0) * z.z + X[k](0, 1) - X[k](1, 0) * z.z * z.z;
  }
  const Real scale = z.y() * z.y();
  Mat3<Real> G;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      G(k, l) = to_real(L.gram(k, l)) + (ell[k] * std::conj(ell[l])).real() / scale;
  return G;
}

namespace {

// Lattice points with majorant at most s lie in a box with half-widths sqrt(s (G^-1)_ii).
Real count_bound(const Mat3<Real>& Ginv, Real s) {
  Real n = 1;
  for (int i = 0; i < 3; ++i) n *= 2 * std::sqrt(s * Ginv(i, i)) + 1;
  return n;
}

// Bound for the sum of beta1(pi v (M - 2t)) over points with majorant M > rho.
Real tail_bound(const Mat3<Real>& Ginv, Real rho, std::int64_t t, Real v) {
  const Real width = 1 / (kPi * v);
  Real total = 0;
  for (int k = 0; k < 100000; ++k) {
    const Real lo = rho + k * width;
    const Real r = kPi * v * (lo - 2 * static_cast<Real>(t));
    const Real term = count_bound(Ginv, lo + width) * std::exp(-r);
    total += term;
    const Real ratio = count_bound(Ginv, lo + 2 * width) / count_bound(Ginv, lo + width) * std::exp(Real(-1));
    if (ratio < 0.5L && term < kEps * total) return (total + 2 * term) * (1 + 64 * kEps);
  }
  return std::numeric_limits<Real>::infinity();
}

}  // namespace

GreenEvaluation Xi_sum(std::int64_t t, Real v, const UpperHalfPoint& z, const QuaternionAlgebra& B,
                       const TernaryLattice& L, Real tol, XiConfig cfg) {
  if (t == 0) throw DomainError("Xi_sum: t must be nonzero");
  if (!(v > 0)) throw DomainError("Xi_sum: v must be positive");
  if (!(tol > 0)) throw DomainError("Xi_sum: tol must be positive");
  if (!B.indefinite()) throw DomainError("Xi_sum: B must be indefinite");

  const Mat3<Real> G = majorant_gram(B, L, z);
  const Mat3<Real> Ginv = G.inverse();
  // beta1(r) <= e^{-r} needs r >= 1 on the whole tail.
  Real rho = std::max<Real>(0, 2 * static_cast<Real>(t)) + 1 / (kPi * v);
  Real tail = tail_bound(Ginv, rho, t, v);
  while (!(tail <= tol)) {
    rho += 1 / (kPi * v);
    if (count_bound(Ginv, rho) > static_cast<Real>(cfg.max_points))
      throw SearchExhausted("Xi_sum: tolerance unreachable within the enumeration cap");
    tail = tail_bound(Ginv, rho, t, v);
  }
  rho *= cfg.radius_scale;
  if (count_bound(Ginv, rho) > static_cast<Real>(cfg.max_points))
    throw SearchExhausted("Xi_sum: enumeration cap exceeded");
  tail = tail_bound(Ginv, rho, t, v);

  GreenEvaluation g;
  g.truncation_error = tail;
  g.min_R = std::numeric_limits<Real>::infinity();
  Real comp = 0;
  bool on_divisor = false;
  for (const auto& c : enumerate_norm_t(L, Rational(t), G, rho)) {
    const RealMat2 x = std::sqrt(v) * embed(B, L.element(c));
    const GreenEvaluation e = xi_and_phi0(x, z);
    ++g.terms;
    g.min_R = std::min(g.min_R, e.R);
    if (t > 0 && e.R < cfg.singular_threshold) g.singular = true;
    if (std::isinf(e.xi)) {
      on_divisor = true;
      continue;
    }
    const Real y = e.xi - comp;
    const Real s = g.xi + y;
    comp = (s - g.xi) - y;
    g.xi = s;
  }
  if (on_divisor) g.xi = std::numeric_limits<Real>::infinity();
  if (g.terms == 0) g.min_R = 0;
  g.R = g.min_R;
  return g;
}

}  // namespace arith

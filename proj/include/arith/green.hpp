#pragma once

// Archimedean Green functions on D = C \ R: R(x, z), beta_1, xi, phi0, the
// majorant (x, x)_z and truncated lattice sums Xi(t, v).

#include <complex>
#include <cstdint>

#include "arith/errors.hpp"
#include "arith/quatalg.hpp"
#include "arith/types.hpp"

namespace arith {

using Real = long double;
using Complex = std::complex<Real>;
using RealMat2 = Mat2<Real>;

/// A point of D, stored as its representative with Im(z) > 0.
struct UpperHalfPoint {
  Complex z;

  explicit UpperHalfPoint(Complex w);
  Real x() const { return z.real(); }
  Real y() const { return z.imag(); }
};

struct GreenEvaluation {
  Real R = 0;
  Real xi = 0;  // +inf on the divisor
  Real phi0 = 0;
  Real truncation_error = 0;
  bool singular = false;
  Real min_R = 0;  // smallest R over the summed vectors, a proxy for the distance to the divisor
  std::int64_t terms = 0;
};

/// w(z) = [[z, -z^2], [1, -z]].
Mat2<Complex> w_of(const UpperHalfPoint& z);

/// Q(x) = det(x) for trace-zero x.
Real Q_real(const RealMat2& x);

/// (x, y) = tr(x y^iota) = -tr(xy) on trace-zero matrices.
Real pairing_real(const RealMat2& x, const RealMat2& y);

/// 2 |(x, w)|^2 / |(w, w-bar)|, normalized so that (x, x)_z = (x, x) + 2R.
Real R_value(const RealMat2& x, const UpperHalfPoint& z);

/// (x, x)_z = (x, x) + 2 R(x, z).
Real majorant_value(const RealMat2& x, const UpperHalfPoint& z);

/// The point of D_x in the upper half plane, for Q(x) > 0.
UpperHalfPoint fixed_point(const RealMat2& x);

/// -Ei(-r) by its power series.
Real beta1_series(Real r);
/// -Ei(-r) by the continued fraction for E_1.
Real beta1_continued_fraction(Real r);
/// -Ei(-r); series below 1, continued fraction above.
Real beta1(Real r);

GreenEvaluation xi_and_phi0(const RealMat2& x, const UpperHalfPoint& z);

struct GreenResidual {
  Real lhs = 0;  // y^2 Delta xi / 2 by central differences at steps h and 2h, extrapolated
  Real rhs = 0;  // phi0
  Real relative_error = 0;
};

/// Compares the discrete dd^c xi with phi0 mu at z. The stencil step is h y,
/// i.e. h in the hyperbolic metric.
GreenResidual green_residual(const RealMat2& x, const UpperHalfPoint& z, Real h = 1e-3L);

/// Image of a quaternion under i -> diag(sqrt a, -sqrt a), j -> [[0, 1], [b, 0]]
/// (roles swapped when a < 0).
RealMat2 embed(const QuaternionAlgebra& B, const Quaternion& q);

/// Gram matrix of (x, x)_z in the coordinates of L.
Mat3<Real> majorant_gram(const QuaternionAlgebra& B, const TernaryLattice& L, const UpperHalfPoint& z);

struct XiConfig {
  std::int64_t max_points = 2'000'000;
  Real singular_threshold = 1e-6L;
  Real radius_scale = 1;  // enlarges the enumeration ellipsoid beyond what tol needs
};

/// Sum of xi(sqrt(v) x, z) over x in L with Q(x) = t. The reported
/// truncation_error bounds the omitted tail and is at most tol.
GreenEvaluation Xi_sum(std::int64_t t, Real v, const UpperHalfPoint& z, const QuaternionAlgebra& B,
                       const TernaryLattice& L, Real tol, XiConfig cfg = {});

}  // namespace arith

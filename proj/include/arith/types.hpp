#pragma once

#include <cstdint>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace arith {

namespace mp = boost::multiprecision;

/// Arbitrary-precision integer (GMP backed, no expression templates so it
/// composes cleanly with Eigen).
using BigInt = mp::number<mp::gmp_int, mp::et_off>;

/// Reduced fraction with positive denominator.
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <class Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <class Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <class Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;

/// A place of Q: a prime p > 1, or kInfinity for the real place.
using Place = std::int64_t;
inline constexpr Place kInfinity = 0;

}  // namespace arith

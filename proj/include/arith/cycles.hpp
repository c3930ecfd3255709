#pragma once

// Degrees of the special cycles Z(t), the vertical-component criterion,
// p-adic diagonalization of fundamental matrices and the two closed-form
// local multiplicities e_p(T).

#include <cstdint>

#include "arith/errors.hpp"
#include "arith/exact.hpp"
#include "arith/quatalg.hpp"
#include "arith/types.hpp"

namespace arith {

/// T ~ diag(eps1 p^alpha, eps2 p^beta) over Z_p with alpha <= beta. The
/// square classes are stored as flags (-eps_i | p).
struct GKInvariants {
  std::int64_t p = 3;
  int alpha = 0;
  int beta = 0;
  int eps1_class = 1;
  int eps2_class = 1;
  friend bool operator==(const GKInvariants&, const GKInvariants&) = default;
};

/// A unit eps with (-eps | p) equal to the given flag: -1 for flag +1 and
/// minus the least quadratic nonresidue for flag -1.
std::int64_t unit_for_class(int flag, std::int64_t p);

struct DegreeResult {
  std::int64_t t = 0;
  std::int64_t D = 1;
  std::int64_t delta = 0;
  Rational H0;
  Rational degree;
};

/// prod_{p | D} (1 - chi_d(p)).
std::int64_t delta_factor(const Discriminant& d, std::int64_t D);

/// Sum over c | n with (c, D) = 1 of h(c^2 d) / w(c^2 d), by class numbers.
Rational H0(std::int64_t t, std::int64_t D);

/// The same quantity through h(d)/w(d) and the conductor product.
Rational H0_product_form(std::int64_t t, std::int64_t D);

/// deg Z(t) = 2 delta H0.
DegreeResult degree_Z(std::int64_t t, std::int64_t D);

/// ord_p(t) >= 2 and no prime l != p dividing D splits in k_t.
bool vertical_criterion(std::int64_t t, std::int64_t p, std::int64_t D);

struct PadicDiagonalization {
  GKInvariants inv;
  Rational eps1;  // exact p-adic units
  Rational eps2;
  Mat2<Rational> U;  // p-integral, unit determinant; U^T T U = diag exactly
  Mat2<Rational> diagonal;
};

/// Exact rational pivoting over Z_(p). The pivot is an entry of minimal
/// valuation, diagonal entries first, then smallest index.
PadicDiagonalization diagonalize_padic(const FundamentalMatrix& T, std::int64_t p);

/// Gross-Keating multiplicity. Half-integral outside its intended regime.
Rational gross_keating_ep(const GKInvariants& inv);

/// Kudla-Rapoport closed form for p | D(B).
std::int64_t kr_ep_closed(const GKInvariants& inv);

}  // namespace arith

#pragma once

// Bruhat-Tits tree of PGL2(Q_p): lattice classes, special endomorphisms and
// their fixed loci, pure cycles, component pairings and the ball-sum
// intersection oracle for e_p(T).

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "arith/cycles.hpp"
#include "arith/errors.hpp"
#include "arith/exact.hpp"
#include "arith/types.hpp"

namespace arith {

/// Class of the lattice spanned by the columns of [[p^a, s], [0, p^b]],
/// scaled into Z_p^2 but not into p Z_p^2, with 0 <= s < p^a.
struct TreeVertex {
  int a = 0;
  int b = 0;
  BigInt s = 0;

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend std::strong_ordering operator<=>(const TreeVertex& l, const TreeVertex& r) {
    if (auto c = l.a <=> r.a; c != 0) return c;
    if (auto c = l.b <=> r.b; c != 0) return c;
    if (l.s < r.s) return std::strong_ordering::less;
    if (r.s < l.s) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
};

/// The class of Z_p^2.
inline TreeVertex origin_vertex() { return {}; }

Mat2<Rational> basis_matrix(const TreeVertex& v, std::int64_t p);

/// Canonical class of the Z_p-lattice spanned by the columns of M.
TreeVertex canonical_vertex(const Mat2<Rational>& M, std::int64_t p);

std::vector<TreeVertex> neighbors(const TreeVertex& v, std::int64_t p);

int distance(const TreeVertex& u, const TreeVertex& v, std::int64_t p);

std::string to_string(const TreeVertex& v);

/// Vertices within distance r of any of the given centers, with distances.
std::map<TreeVertex, int> ball(const std::vector<TreeVertex>& centers, int r, std::int64_t p);

// ---------------------------------------------------------------------------

enum class LocusKind { Apartment, SingleVertex, EdgeMidpoint };

/// Trace-zero j in M2(Q_p); Q(j) = det(j) = eps p^alpha.
struct SpecialEndo {
  std::int64_t p = 3;
  Mat2<Rational> j;
  int alpha = 0;
  Rational eps;
  LocusKind kind = LocusKind::SingleVertex;
};

SpecialEndo make_special_endo(const Mat2<Rational>& j, std::int64_t p);

struct FixedLocus {
  LocusKind kind = LocusKind::SingleVertex;
  TreeVertex v0;  // SingleVertex; first endpoint for EdgeMidpoint; a point of the apartment
  TreeVertex v1;  // second endpoint for EdgeMidpoint
  Vec2<Rational> e0, e1;  // eigenvectors mod p^precision for Apartment
  int precision = 0;
};

/// Square root of a p-adic unit modulo p^k, or nullopt for a nonresidue.
std::optional<BigInt> sqrt_mod_ppow(const Rational& a, std::int64_t p, int k);

/// v(L, j) = max{k : j L in p^k L}.
int lattice_valuation(const SpecialEndo& j, const TreeVertex& v);

/// mu = max(0, v(L, j)).
int multiplicity(const SpecialEndo& j, const TreeVertex& v);

FixedLocus fixed_locus(const SpecialEndo& j);

/// Vertex [<p^k e0, e1>] of an apartment.
TreeVertex apartment_vertex(const FixedLocus& L, int k, std::int64_t p);

/// d(v, B^j); half-integral for an edge midpoint.
Rational distance_to_locus(const FixedLocus& L, const TreeVertex& v, std::int64_t p);

/// mu by the distance rule max(0, alpha/2 - d(v, B^j)).
Rational multiplicity_by_distance(const SpecialEndo& j, const FixedLocus& L, const TreeVertex& v);

// ---------------------------------------------------------------------------

enum class HorizontalKind { None, TwoOrdinaryPoints, RamifiedPoint };

struct HorizontalPart {
  HorizontalKind kind = HorizontalKind::None;
  TreeVertex at;     // the vertex for TwoOrdinaryPoints, an endpoint otherwise
  TreeVertex other;  // second endpoint for RamifiedPoint
};

struct PureCycle {
  std::map<TreeVertex, int> vertical;
  HorizontalPart horizontal;
  int truncation_radius = 0;
};

HorizontalPart horizontal_part(const SpecialEndo& j, const FixedLocus& L);

/// Positive multiplicities within `radius` of the locus point nearest the origin.
PureCycle pure_cycle(const SpecialEndo& j, int radius);

/// A vertical component P_[L] or the horizontal part of a cycle.
struct Component {
  bool horizontal = false;
  TreeVertex vertex;
  HorizontalPart part;

  static Component vertical_at(const TreeVertex& v) { return {false, v, {}}; }
  static Component horizontal_of(const HorizontalPart& h) { return {true, {}, h}; }
};

int pair_components(const Component& c1, const Component& c2, std::int64_t p);

/// True when two ramified horizontal parts sit on the same edge.
bool horizontal_loci_coincide(const HorizontalPart& h1, const HorizontalPart& h2);

// ---------------------------------------------------------------------------

struct AnticommutingPair {
  SpecialEndo j1;
  SpecialEndo j2;
};

/// j2 = [[0, 1], [-eps2 p^beta, 0]], j1 = [[a, b], [b eps2 p^beta, -a]] with
/// det(j1) in the square class eps1 p^alpha. Throws NotLocallyRepresented
/// when (-eps1 p^alpha, -eps2 p^beta)_p = -1.
AnticommutingPair anticommuting_pair(const GKInvariants& inv, int precision = 40);

/// g j g^{-1}.
SpecialEndo conjugate(const SpecialEndo& j, const Mat2<Rational>& g);

/// Integral matrix with determinant prime to p and entries below p^k.
Mat2<Rational> random_gl2_zp(std::int64_t p, int k, std::mt19937_64& rng);

struct RegionalTallies {
  Rational region0;     // l = 0
  Rational region1;     // 1 <= l <= (beta - alpha) / 2
  Rational region2;     // l beyond, strictly inside the ball of j2
  Rational region3;     // boundary of the ball of j2
  Rational horizontal;  // (P_[L0], Z(j2)^h) weighted by mu
  Rational printed0, printed1, printed2, printed3;
  std::vector<std::string> discrepancies;
};

struct IntersectConfig {
  int r_max = -1;  // default alpha/2 + beta/2 + 4
};

struct IntersectionResult {
  std::int64_t e_p = 0;
  int radius = 0;
  std::vector<std::string> anomalies;
  std::optional<RegionalTallies> tallies;  // split/inert even-even only
};

IntersectionResult intersect(const SpecialEndo& j1, const SpecialEndo& j2, IntersectConfig cfg = {});

}  // namespace arith

#include <doctest.h>

#include <queue>
#include <random>

#include "arith/bttree.hpp"
#include "oracles.hpp"

using namespace arith;

namespace {

Mat2<Rational> special(std::int64_t p, int alpha, int flag) {
  Mat2<Rational> j;
  j << 0, 1, -Rational(unit_for_class(flag, p)) * Rational(mp::pow(BigInt(p), alpha)), 0;
  return j;
}

// Graph distances from u by breadth-first search over neighbors.
std::map<TreeVertex, int> bfs_distances(const TreeVertex& u, std::int64_t p, int cap) {
  std::map<TreeVertex, int> seen{{u, 0}};
  std::queue<TreeVertex> q;
  q.push(u);
  while (!q.empty()) {
    const TreeVertex x = q.front();
    q.pop();
    if (seen[x] == cap) continue;
    for (const auto& y : neighbors(x, p))
      if (seen.emplace(y, seen[x] + 1).second) q.push(y);
  }
  return seen;
}

// max k with M^{-1} j M in p^k M2(Z_p), from the entries directly.
int valuation_oracle(const Mat2<Rational>& j, const TreeVertex& v, std::int64_t p) {
  const Mat2<Rational> M = basis_matrix(v, p);
  const Mat2<Rational> N = M.inverse() * j * M;
  int k = INT32_MAX;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (N(r, c) != 0) k = std::min(k, valuation(N(r, c), p));
  return k;
}

}  // namespace

TEST_CASE("tree geometry") {
  for (std::int64_t p : {3, 5}) {
    const auto nb = neighbors(origin_vertex(), p);
    CHECK(nb.size() == static_cast<std::size_t>(p + 1));
    const auto b = ball({origin_vertex()}, 3, p);
    for (const auto& [v, d] : b) {
      CHECK(distance(origin_vertex(), v, p) == d);
      for (const auto& u : neighbors(v, p)) {
        CHECK(distance(u, v, p) == 1);
        const auto back = neighbors(u, p);
        CHECK(std::find(back.begin(), back.end(), v) != back.end());
      }
    }
    std::size_t expected = 1, shell = static_cast<std::size_t>(p + 1);
    for (int r = 1; r <= 3; ++r, shell *= static_cast<std::size_t>(p)) expected += shell;
    CHECK(b.size() == expected);
    std::vector<TreeVertex> vs;
    for (const auto& [v, d] : b) vs.push_back(v);
    for (std::size_t i = 0; i < vs.size(); i += 13) {
      const auto dist = bfs_distances(vs[i], p, 6);
      for (const auto& w : vs) CHECK(distance(vs[i], w, p) == dist.at(w));
    }
  }
}

TEST_CASE("canonical vertices are homothety invariant") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    const Mat2<Rational> g = random_gl2_zp(3, 4, rng);
    Mat2<Rational> M;
    M << 9, 2, 0, 1;
    const TreeVertex v = canonical_vertex(M, 3);
    CHECK(canonical_vertex(Rational(27) * M, 3) == v);
    CHECK(canonical_vertex(M * g, 3) == v);
  }
}

TEST_CASE("multiplicities") {
  for (std::int64_t p : {3, 5})
    for (int alpha = 0; alpha <= 4; ++alpha)
      for (int flag : {1, -1}) {
        const Mat2<Rational> jm = special(p, alpha, flag);
        const SpecialEndo j = make_special_endo(jm, p);
        const FixedLocus L = fixed_locus(j);
        for (const auto& [v, d] : ball({L.v0}, 3, p)) {
          CHECK(lattice_valuation(j, v) == valuation_oracle(jm, v, p));
          CHECK(Rational(multiplicity(j, v)) == multiplicity_by_distance(j, L, v));
        }
      }
  SUBCASE("split, alpha = 2") {
    const SpecialEndo j = make_special_endo(special(3, 2, 1), 3);
    const FixedLocus L = fixed_locus(j);
    CHECK(L.kind == LocusKind::Apartment);
    CHECK(multiplicity(j, L.v0) == 1);
    for (const auto& u : neighbors(L.v0, 3))
      if (distance_to_locus(L, u, 3) == 1) CHECK(multiplicity(j, u) == 0);
  }
  SUBCASE("inert, alpha = 4") {
    const SpecialEndo j = make_special_endo(special(3, 4, -1), 3);
    const FixedLocus L = fixed_locus(j);
    CHECK(L.kind == LocusKind::SingleVertex);
    CHECK(multiplicity(j, L.v0) == 2);
  }
  SUBCASE("odd alpha") {
    const SpecialEndo j = make_special_endo(special(5, 3, 1), 5);
    const FixedLocus L = fixed_locus(j);
    CHECK(L.kind == LocusKind::EdgeMidpoint);
    CHECK(multiplicity(j, L.v0) == 1);
    CHECK(multiplicity(j, L.v1) == 1);
    CHECK(distance(L.v0, L.v1, 5) == 1);
  }
}

TEST_CASE("pure cycles") {
  const PureCycle split0 = pure_cycle(make_special_endo(special(3, 0, 1), 3), 2);
  CHECK(split0.vertical.empty());
  CHECK(split0.horizontal.kind == HorizontalKind::None);

  const SpecialEndo inert = make_special_endo(special(3, 2, -1), 3);
  const PureCycle c = pure_cycle(inert, 3);
  CHECK(c.vertical.size() == 1);
  CHECK(c.vertical.begin()->second == 1);
  CHECK(c.vertical.begin()->first == fixed_locus(inert).v0);
  CHECK(c.horizontal.kind == HorizontalKind::TwoOrdinaryPoints);

  const SpecialEndo odd = make_special_endo(special(3, 1, 1), 3);
  const PureCycle c1 = pure_cycle(odd, 2);
  CHECK(c1.vertical.empty());
  CHECK(c1.horizontal.kind == HorizontalKind::RamifiedPoint);
  CHECK(distance(c1.horizontal.at, c1.horizontal.other, 3) == 1);
  CHECK_THROWS_AS(pure_cycle(make_special_endo(special(3, 4, 1), 3), 1), DomainError);
}

TEST_CASE("component pairings") {
  const TreeVertex o = origin_vertex();
  const TreeVertex u = neighbors(o, 3).front();
  CHECK(pair_components(Component::vertical_at(o), Component::vertical_at(o), 3) == -4);
  CHECK(pair_components(Component::vertical_at(o), Component::vertical_at(u), 3) == 1);
  const SpecialEndo inert = make_special_endo(special(3, 2, -1), 3);
  const HorizontalPart h = horizontal_part(inert, fixed_locus(inert));
  CHECK(pair_components(Component::horizontal_of(h), Component::vertical_at(h.at), 3) == 2);
  CHECK(pair_components(Component::vertical_at(h.at), Component::horizontal_of(h), 3) == 2);
}

TEST_CASE("anticommuting pairs and the intersection oracle") {
  for (std::int64_t p : {3, 5})
    for (int a = 0; a <= 3; ++a)
      for (int b = a; b <= 3; ++b)
        for (int f1 : {1, -1})
          for (int f2 : {1, -1}) {
            const GKInvariants inv{p, a, b, f1, f2};
            const Rational e1 = unit_for_class(f1, p), e2 = unit_for_class(f2, p);
            const bool local = hilbert_symbol(-e1 * Rational(mp::pow(BigInt(p), a)),
                                              -e2 * Rational(mp::pow(BigInt(p), b)), p) == 1;
            if (!local) {
              CHECK_THROWS_AS(anticommuting_pair(inv), NotLocallyRepresented);
              continue;
            }
            const AnticommutingPair pr = anticommuting_pair(inv);
            CHECK((pr.j1.j * pr.j2.j + pr.j2.j * pr.j1.j).isZero());
            CHECK(pr.j1.alpha == a);
            CHECK(pr.j2.alpha == b);
            CHECK(oracle::legendre(-static_cast<long long>((numerator(pr.j1.eps) * denominator(pr.j1.eps) % p)
                                                               .convert_to<long long>()),
                                   p) == f1);
            CHECK(intersect(pr.j1, pr.j2).e_p == kr_ep_closed(inv));
          }
  const AnticommutingPair pr = anticommuting_pair({3, 0, 2, -1, -1});
  CHECK(intersect(pr.j1, pr.j2).e_p == 2);
  const AnticommutingPair q = anticommuting_pair({3, 1, 1, -1, 1});
  CHECK(intersect(q.j1, q.j2).e_p == 1);
}

TEST_CASE("regional tallies in the worked case") {
  const AnticommutingPair pr = anticommuting_pair({3, 2, 4, 1, -1});
  const IntersectionResult r = intersect(pr.j1, pr.j2);
  REQUIRE(r.tallies.has_value());
  CHECK(r.tallies->region0 == 1 - 2 - 3);
  CHECK(r.e_p == kr_ep_closed({3, 2, 4, 1, -1}));
  CHECK(r.tallies->region0 + r.tallies->region1 + r.tallies->region2 + r.tallies->region3 + r.tallies->horizontal ==
        r.e_p);
}

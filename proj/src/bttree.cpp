#include "arith/bttree.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <functional>
#include <sstream>

namespace arith {

namespace {

Rational ppow(std::int64_t p, int k) {
  return k >= 0 ? Rational(mp::pow(BigInt(p), k)) : Rational(BigInt(1), mp::pow(BigInt(p), -k));
}

int val_or_max(const Rational& q, std::int64_t p) { return q == 0 ? INT_MAX : valuation(q, p); }

Mat2<Rational> inverse2(const Mat2<Rational>& M) {
  const Rational det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  if (det == 0) throw DomainError("singular lattice basis");
  Mat2<Rational> R;
  R << M(1, 1) / det, -M(0, 1) / det, -M(1, 0) / det, M(0, 0) / det;
  return R;
}

void check_odd_prime(std::int64_t p) {
  if (p == 2 || !is_prime(p)) throw DomainError("bttree: p must be an odd prime");
}

}  // namespace

Mat2<Rational> basis_matrix(const TreeVertex& v, std::int64_t p) {
  Mat2<Rational> M;
  M << ppow(p, v.a), Rational(v.s), Rational(0), ppow(p, v.b);
  return M;
}

TreeVertex canonical_vertex(const Mat2<Rational>& M, std::int64_t p) {
  Mat2<Rational> A = M;
  if (A.determinant() == 0) throw DomainError("canonical_vertex: singular basis");
  if (val_or_max(A(1, 0), p) < val_or_max(A(1, 1), p)) A.col(0).swap(A.col(1));
  if (A(1, 0) != 0) A.col(0) -= (A(1, 0) / A(1, 1)) * A.col(1);
  const int a0 = valuation(A(0, 0), p), b0 = valuation(A(1, 1), p);
  A.col(0) /= A(0, 0) / ppow(p, a0);
  A.col(1) /= A(1, 1) / ppow(p, b0);
  const int m = std::min({a0, b0, val_or_max(A(0, 1), p)});
  TreeVertex v;
  v.a = a0 - m;
  v.b = b0 - m;
  v.s = v.a == 0 ? BigInt(0) : reduce_mod_ppow(A(0, 1) * ppow(p, -m), p, v.a);
  return v;
}

std::vector<TreeVertex> neighbors(const TreeVertex& v, std::int64_t p) {
  check_odd_prime(p);
  const Mat2<Rational> M = basis_matrix(v, p);
  std::vector<TreeVertex> out;
  out.reserve(static_cast<std::size_t>(p + 1));
  for (std::int64_t i = 0; i < p; ++i) {
    Mat2<Rational> S;
    S << p, i, 0, 1;
    out.push_back(canonical_vertex(M * S, p));
  }
  Mat2<Rational> S;
  S << 1, 0, 0, p;
  out.push_back(canonical_vertex(M * S, p));
  return out;
}

int distance(const TreeVertex& u, const TreeVertex& v, std::int64_t p) {
  const Mat2<Rational> N = inverse2(basis_matrix(u, p)) * basis_matrix(v, p);
  int lo = INT_MAX;
  for (int k = 0; k < 4; ++k) lo = std::min(lo, val_or_max(N(k / 2, k % 2), p));
  const Rational det = N(0, 0) * N(1, 1) - N(0, 1) * N(1, 0);
  return valuation(det, p) - 2 * lo;
}

std::string to_string(const TreeVertex& v) {
  std::ostringstream os;
  os << "[" << v.a << "," << v.b << "," << v.s.str() << "]";
  return os.str();
}

std::map<TreeVertex, int> ball(const std::vector<TreeVertex>& centers, int r, std::int64_t p) {
  std::map<TreeVertex, int> seen;
  std::deque<TreeVertex> queue;
  for (const auto& c : centers)
    if (seen.emplace(c, 0).second) queue.push_back(c);
  while (!queue.empty()) {
    const TreeVertex v = queue.front();
    queue.pop_front();
    const int d = seen.at(v);
    if (d == r) continue;
    for (auto& n : neighbors(v, p))
      if (seen.emplace(n, d + 1).second) queue.push_back(std::move(n));
  }
  return seen;
}

// ---------------------------------------------------------------------------

SpecialEndo make_special_endo(const Mat2<Rational>& j, std::int64_t p) {
  check_odd_prime(p);
  if (j(0, 0) + j(1, 1) != 0) throw DomainError("make_special_endo: j must have trace zero");
  const Rational det = j.determinant();
  if (det == 0) throw DomainError("make_special_endo: Q(j) must be nonzero");
  SpecialEndo e;
  e.p = p;
  e.j = j;
  e.alpha = valuation(det, p);
  e.eps = det / ppow(p, e.alpha);
  if (e.alpha % 2 != 0)
    e.kind = LocusKind::EdgeMidpoint;
  else
    e.kind = legendre(BigInt(numerator(-e.eps) * denominator(e.eps)), p) == 1 ? LocusKind::Apartment
                                                                              : LocusKind::SingleVertex;
  return e;
}

std::optional<BigInt> sqrt_mod_ppow(const Rational& a, std::int64_t p, int k) {
  check_odd_prime(p);
  if (valuation(a, p) != 0) throw DomainError("sqrt_mod_ppow: argument must be a p-adic unit");
  const BigInt A = reduce_mod_ppow(a, p, k);
  const std::int64_t a0 = (A % p).convert_to<std::int64_t>();
  std::int64_t r0 = -1;
  for (std::int64_t r = 1; r < p; ++r)
    if ((r * r) % p == a0) {
      r0 = r;
      break;
    }
  if (r0 < 0) return std::nullopt;
  const std::int64_t inv2r = mod_inverse((2 * r0) % p, p);
  BigInt r = r0, pk = p;
  for (int i = 1; i < k; ++i) {
    const BigInt f = (r * r - A) / pk;
    BigInt t = (-f * inv2r) % p;
    if (t < 0) t += p;
    r += t * pk;
    pk *= p;
  }
  return r % pk;
}

int lattice_valuation(const SpecialEndo& j, const TreeVertex& v) {
  const std::int64_t p = j.p;
  const Rational& x = j.j(0, 0);
  const Rational& y = j.j(0, 1);
  const Rational& z = j.j(1, 0);
  const Rational P = ppow(p, v.a), Q = ppow(p, v.b), s = Rational(v.s);
  const Rational e11 = x - s * z / Q;
  const Rational e12 = (2 * x * s * Q + y * Q * Q - z * s * s) / (P * Q);
  const Rational e21 = z * P / Q;
  return std::min({val_or_max(e11, p), val_or_max(e12, p), val_or_max(e21, p)});
}

int multiplicity(const SpecialEndo& j, const TreeVertex& v) {
  return std::max(0, lattice_valuation(j, v));
}

namespace {

TreeVertex ascend(const std::function<int(const TreeVertex&)>& f, std::int64_t p) {
  TreeVertex cur = origin_vertex();
  int fc = f(cur);
  while (true) {
    std::optional<TreeVertex> best;
    int fb = fc;
    for (const auto& n : neighbors(cur, p)) {
      const int fn = f(n);
      if (fn > fb) {
        fb = fn;
        best = n;
      }
    }
    if (!best) return cur;
    cur = *best;
    fc = fb;
  }
}

Vec2<Rational> eigenvector(const Mat2<Rational>& j0, const Rational& lambda, std::int64_t p) {
  Vec2<Rational> u1(j0(0, 1), lambda - j0(0, 0));
  Vec2<Rational> u2(lambda + j0(0, 0), j0(1, 0));
  auto vmin = [p](const Vec2<Rational>& u) { return std::min(val_or_max(u(0), p), val_or_max(u(1), p)); };
  Vec2<Rational> u = vmin(u1) <= vmin(u2) ? u1 : u2;
  const int m = vmin(u);
  if (m == INT_MAX) throw DomainError("eigenvector: degenerate endomorphism");
  return u * ppow(p, -m);
}

}  // namespace

FixedLocus fixed_locus(const SpecialEndo& j) {
  const std::int64_t p = j.p;
  FixedLocus L;
  L.kind = j.kind;
  L.v0 = ascend([&](const TreeVertex& v) { return lattice_valuation(j, v); }, p);
  if (j.kind == LocusKind::EdgeMidpoint) {
    const int top = lattice_valuation(j, L.v0);
    for (const auto& n : neighbors(L.v0, p))
      if (lattice_valuation(j, n) == top) {
        L.v1 = n;
        break;
      }
    if (L.v1 < L.v0) std::swap(L.v0, L.v1);
  } else if (j.kind == LocusKind::Apartment) {
    L.precision = j.alpha + 60;
    const Mat2<Rational> j0 = j.j / ppow(p, j.alpha / 2);
    const auto s = sqrt_mod_ppow(-j.eps, p, L.precision);
    if (!s) throw DomainError("fixed_locus: -eps is not a square");
    L.e0 = eigenvector(j0, Rational(*s), p);
    L.e1 = eigenvector(j0, -Rational(*s), p);
  }
  return L;
}

TreeVertex apartment_vertex(const FixedLocus& L, int k, std::int64_t p) {
  if (L.kind != LocusKind::Apartment) throw DomainError("apartment_vertex: locus is not an apartment");
  Mat2<Rational> M;
  M.col(0) = L.e0 * ppow(p, k);
  M.col(1) = L.e1;
  return canonical_vertex(M, p);
}

Rational distance_to_locus(const FixedLocus& L, const TreeVertex& v, std::int64_t p) {
  switch (L.kind) {
    case LocusKind::SingleVertex:
      return distance(v, L.v0, p);
    case LocusKind::EdgeMidpoint:
      return Rational(std::min(distance(v, L.v0, p), distance(v, L.v1, p))) + Rational(1, 2);
    case LocusKind::Apartment: {
      const int d0 = distance(v, apartment_vertex(L, 0, p), p);
      if (d0 + 2 >= L.precision) throw PrecisionFailure("distance_to_locus: vertex beyond eigenvector precision");
      int best = d0;
      for (int k = -d0; k <= d0; ++k) best = std::min(best, distance(v, apartment_vertex(L, k, p), p));
      return best;
    }
  }
  return 0;
}

Rational multiplicity_by_distance(const SpecialEndo& j, const FixedLocus& L, const TreeVertex& v) {
  const Rational mu = Rational(j.alpha, 2) - distance_to_locus(L, v, j.p);
  return mu > 0 ? mu : Rational(0);
}

// ---------------------------------------------------------------------------

HorizontalPart horizontal_part(const SpecialEndo& j, const FixedLocus& L) {
  HorizontalPart h;
  switch (j.kind) {
    case LocusKind::Apartment:
      h.kind = HorizontalKind::None;
      break;
    case LocusKind::SingleVertex:
      h.kind = HorizontalKind::TwoOrdinaryPoints;
      h.at = L.v0;
      break;
    case LocusKind::EdgeMidpoint:
      h.kind = HorizontalKind::RamifiedPoint;
      h.at = L.v0;
      h.other = L.v1;
      break;
  }
  return h;
}

PureCycle pure_cycle(const SpecialEndo& j, int radius) {
  if (radius < (j.alpha + 1) / 2) throw DomainError("pure_cycle: radius below the tube radius");
  const FixedLocus L = fixed_locus(j);
  std::vector<TreeVertex> centers{L.v0};
  if (L.kind == LocusKind::EdgeMidpoint) centers.push_back(L.v1);
  PureCycle c;
  c.truncation_radius = radius;
  c.horizontal = horizontal_part(j, L);
  for (const auto& [v, d] : ball(centers, radius, j.p)) {
    const int mu = multiplicity(j, v);
    if (mu > 0) c.vertical.emplace(v, mu);
  }
  return c;
}

int pair_components(const Component& c1, const Component& c2, std::int64_t p) {
  if (!c1.horizontal && !c2.horizontal) {
    const int d = distance(c1.vertex, c2.vertex, p);
    return d == 0 ? -static_cast<int>(p + 1) : (d == 1 ? 1 : 0);
  }
  if (c1.horizontal && c2.horizontal)
    return c1.part.kind == HorizontalKind::RamifiedPoint && c2.part.kind == HorizontalKind::RamifiedPoint ? 1 : 0;
  const HorizontalPart& h = c1.horizontal ? c1.part : c2.part;
  const TreeVertex& v = c1.horizontal ? c2.vertex : c1.vertex;
  switch (h.kind) {
    case HorizontalKind::TwoOrdinaryPoints:
      return v == h.at ? 2 : 0;
    case HorizontalKind::RamifiedPoint:
      return (v == h.at || v == h.other) ? 1 : 0;
    case HorizontalKind::None:
      return 0;
  }
  return 0;
}

bool horizontal_loci_coincide(const HorizontalPart& h1, const HorizontalPart& h2) {
  if (h1.kind != HorizontalKind::RamifiedPoint || h2.kind != HorizontalKind::RamifiedPoint) return false;
  return (h1.at == h2.at && h1.other == h2.other) || (h1.at == h2.other && h1.other == h2.at);
}

// ---------------------------------------------------------------------------

AnticommutingPair anticommuting_pair(const GKInvariants& inv, int precision) {
  const std::int64_t p = inv.p;
  check_odd_prime(p);
  const int alpha = inv.alpha, beta = inv.beta;
  if (alpha < 0 || beta < 0) throw DomainError("anticommuting_pair: negative exponent");
  const Rational eps1 = unit_for_class(inv.eps1_class, p);
  const Rational eps2 = unit_for_class(inv.eps2_class, p);
  if (hilbert_symbol(-eps1 * ppow(p, alpha), -eps2 * ppow(p, beta), p) == -1)
    throw NotLocallyRepresented("anticommuting_pair: binary form not represented over Q_p");

  const Rational c = eps2 * ppow(p, beta);
  auto fits = [&](const Rational& x, const Rational& y) {
    const Rational det = -(x * x + c * y * y);
    if (det == 0 || valuation(det, p) != alpha) return false;
    const Rational unit = det / ppow(p, alpha);
    return legendre(BigInt(numerator(-unit) * denominator(unit)), p) == inv.eps1_class;
  };

  std::optional<std::pair<Rational, Rational>> found;
  for (int i = 0; i <= alpha && !found; ++i)
    for (int k = -beta; k <= alpha && !found; ++k)
      for (std::int64_t x0 = 0; x0 < p && !found; ++x0)
        for (std::int64_t y0 = 0; y0 < p && !found; ++y0) {
          const Rational x = Rational(x0) * ppow(p, i), y = Rational(y0) * ppow(p, k);
          if (fits(x, y)) found.emplace(x, y);
        }
  if (!found && beta % 2 == 0) {
    // x^2 + c y^2 is a hyperbolic plane when -eps2 is a square.
    if (auto s = sqrt_mod_ppow(-eps2, p, precision)) {
      const Rational e = eps1 * ppow(p, alpha);
      const Rational x = (1 - e) / 2, t = (-e - 1) / 2;
      const Rational y = t / (ppow(p, beta / 2) * Rational(*s));
      if (fits(x, y)) found.emplace(x, y);
    }
  }
  if (!found) throw SearchExhausted("anticommuting_pair: no solution found");

  const auto& [x, y] = *found;
  Mat2<Rational> m1, m2;
  m1 << x, y, y * c, -x;
  m2 << 0, 1, -c, 0;
  if ((m1 * m2 + m2 * m1) != Mat2<Rational>::Zero()) throw std::logic_error("anticommuting_pair: pair does not anticommute");
  return {make_special_endo(m1, p), make_special_endo(m2, p)};
}

SpecialEndo conjugate(const SpecialEndo& j, const Mat2<Rational>& g) {
  return make_special_endo(g * j.j * inverse2(g), j.p);
}

Mat2<Rational> random_gl2_zp(std::int64_t p, int k, std::mt19937_64& rng) {
  const std::int64_t bound = ipow(p, k);
  std::uniform_int_distribution<std::int64_t> dist(0, bound - 1);
  while (true) {
    Mat2<Rational> g;
    g << dist(rng), dist(rng), dist(rng), dist(rng);
    const Rational det = g.determinant();
    if (det != 0 && valuation(det, p) == 0) return g;
  }
}

// ---------------------------------------------------------------------------

namespace {

class MuCache {
 public:
  explicit MuCache(const SpecialEndo& j) : j_(j) {}
  int operator()(const TreeVertex& v) {
    auto it = cache_.find(v);
    if (it != cache_.end()) return it->second;
    const int mu = multiplicity(j_, v);
    cache_.emplace(v, mu);
    return mu;
  }

 private:
  const SpecialEndo& j_;
  std::map<TreeVertex, int> cache_;
};

int horizontal_weight(const HorizontalPart& h, const TreeVertex& v, std::int64_t p) {
  return pair_components(Component::horizontal_of(h), Component::vertical_at(v), p);
}

Rational printed_geom(std::int64_t p, int alpha) {
  return (ppow(p, alpha / 2 - 1) - 1) / Rational(p - 1);
}

}  // namespace

IntersectionResult intersect(const SpecialEndo& j1, const SpecialEndo& j2, IntersectConfig cfg) {
  if (j1.p != j2.p) throw DomainError("intersect: endomorphisms over different primes");
  const std::int64_t p = j1.p;
  const FixedLocus L1 = fixed_locus(j1), L2 = fixed_locus(j2);
  const HorizontalPart h1 = horizontal_part(j1, L1), h2 = horizontal_part(j2, L2);

  IntersectionResult res;
  const bool split1 = j1.kind == LocusKind::Apartment, split2 = j2.kind == LocusKind::Apartment;

  // The center endomorphism c has bounded support; o is the other one.
  bool center_is_2;
  std::vector<TreeVertex> centers;
  int r_start;
  if (!split1 || !split2) {
    center_is_2 = split1 || (!split2 && j2.alpha < j1.alpha);
    const FixedLocus& Lc = center_is_2 ? L2 : L1;
    const int ac = center_is_2 ? j2.alpha : j1.alpha;
    centers.push_back(Lc.v0);
    if (Lc.kind == LocusKind::EdgeMidpoint) centers.push_back(Lc.v1);
    r_start = (ac + 1) / 2 + 1;
  } else {
    center_is_2 = true;
    centers.push_back(ascend(
        [&](const TreeVertex& v) { return lattice_valuation(j1, v) + lattice_valuation(j2, v); }, p));
    r_start = (j1.alpha + 1) / 2 + (j2.alpha + 1) / 2 + 1;
  }
  const SpecialEndo& jc = center_is_2 ? j2 : j1;
  const SpecialEndo& jo = center_is_2 ? j1 : j2;
  const HorizontalPart& hc = center_is_2 ? h2 : h1;
  const HorizontalPart& ho = center_is_2 ? h1 : h2;
  MuCache muc(jc), muo(jo);

  int hh = 0;
  if (h1.kind == HorizontalKind::RamifiedPoint && h2.kind == HorizontalKind::RamifiedPoint) {
    hh = 1;
    if (!horizontal_loci_coincide(h1, h2))
      res.anomalies.push_back("horizontal parts of j1 and j2 sit on different edges: " + to_string(h1.at) + "-" +
                              to_string(h1.other) + " vs " + to_string(h2.at) + "-" + to_string(h2.other));
  }

  auto vertical_pairing = [&](const TreeVertex& v) {
    std::int64_t s = -(p + 1) * muc(v);
    for (const auto& n : neighbors(v, p)) s += muc(n);
    return s;
  };

  auto total = [&](int r) {
    std::int64_t sum = hh;
    for (const auto& [v, d] : ball(centers, r, p)) {
      const int mo = muo(v);
      if (mo != 0) sum += mo * vertical_pairing(v);
      sum += static_cast<std::int64_t>(muc(v)) * horizontal_weight(ho, v, p);
      sum += static_cast<std::int64_t>(mo) * horizontal_weight(hc, v, p);
    }
    return sum;
  };

  const int r_max = cfg.r_max >= 0 ? cfg.r_max : j1.alpha / 2 + j2.alpha / 2 + 4;
  std::optional<std::int64_t> prev;
  int accepted = -1;
  for (int r = r_start; r <= r_max; ++r) {
    const std::int64_t cur = total(r);
    if (prev && *prev == cur) {
      accepted = r - 1;
      break;
    }
    prev = cur;
  }
  if (accepted < 0) throw NonStabilizing("intersect: ball sums did not stabilize by r_max");
  res.e_p = *prev;
  res.radius = accepted;

  const bool even_even = j1.alpha % 2 == 0 && j2.alpha % 2 == 0;
  if (even_even && split1 != split2) {
    const SpecialEndo& js = split1 ? j1 : j2;
    const SpecialEndo& ji = split1 ? j2 : j1;
    const FixedLocus& Ls = split1 ? L1 : L2;
    const FixedLocus& Li = split1 ? L2 : L1;
    const int a = js.alpha, b = ji.alpha;
    if (a <= b) {
      RegionalTallies t;
      for (const auto& [v, d] : ball(centers, accepted, p)) {
        const int ms = muo(v);
        if (ms == 0) continue;
        const Rational contrib = Rational(ms) * Rational(vertical_pairing(v));
        const int dist0 = distance(v, Li.v0, p);
        const int rr = static_cast<int>(numerator(distance_to_locus(Ls, v, p)).convert_to<long>());
        const int ell = dist0 - rr;
        if (ell == 0)
          t.region0 += contrib;
        else if (ell <= (b - a) / 2)
          t.region1 += contrib;
        else if (2 * dist0 < b)
          t.region2 += contrib;
        else
          t.region3 += contrib;
      }
      t.horizontal = Rational(muo(Li.v0) * 2);
      t.printed0 = 1 - a - ppow(p, a / 2);
      t.printed1 = Rational(a - b) * (ppow(p, a / 2 - 1) - 1);
      t.printed2 = Rational(2 * a) - 4 * printed_geom(p, a);
      t.printed3 = 2 * printed_geom(p, a);
      const std::pair<const char*, std::pair<Rational, Rational>> rows[] = {
          {"l=0", {t.region0, t.printed0}},
          {"1<=l<=(b-a)/2", {t.region1, t.printed1}},
          {"interior beyond", {t.region2, t.printed2}},
          {"ball boundary", {t.region3, t.printed3}}};
      for (const auto& [name, vals] : rows)
        if (vals.first != vals.second)
          t.discrepancies.push_back(std::string(name) + ": oracle " + to_string(vals.first) + ", printed " +
                                    to_string(vals.second));
      res.tallies = std::move(t);
    }
  }
  return res;
}

}  // namespace arith

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arith/bttree.hpp"
#include "arith/cycles.hpp"
#include "arith/eis32.hpp"
#include "arith/exact.hpp"
#include "arith/green.hpp"
#include "arith/quatalg.hpp"

using namespace arith;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kDisagreement = 1, kRegime = 2, kNumeric = 3 };

struct Settings {
  int precision = 18;
  int r_max = -1;
  std::int64_t algebra_search = 200;
  std::int64_t xi_max_points = 2'000'000;
  long double j_tol = 1e-13L;
  long double l_tol = 1e-11L;
  unsigned workers = 0;

  json echo() const {
    return {{"precision", precision},         {"r_max", r_max},   {"algebra_search", algebra_search},
            {"xi_max_points", xi_max_points}, {"j_tol", "1e-13"}, {"l_tol", "1e-11"}};
  }
};

Settings settings;

class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class R>
std::string real(const R& x) {
  std::ostringstream os;
  os << std::setprecision(settings.precision) << x;
  return os.str();
}

std::string err(long double e) {
  std::ostringstream os;
  os << std::setprecision(3) << e;
  return os.str();
}

std::string places(const std::set<Place>& s) {
  std::string out;
  for (Place v : s) out += (out.empty() ? "" : ",") + place_name(v);
  return "{" + out + "}";
}

json record(const std::string& cmd, json inputs, json result, const std::string& provenance) {
  return {{"command", cmd}, {"inputs", std::move(inputs)}, {"result", std::move(result)}, {"provenance", provenance}};
}

// Runs f over [0, n) on a pool of threads; results keep index order.
std::vector<json> parallel_map(std::size_t n, const std::function<json(std::size_t)>& f) {
  std::vector<json> out(n);
  const unsigned w = settings.workers ? settings.workers : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (unsigned k = 0; k < w; ++k)
    jobs.push_back(std::async(std::launch::async, [&, k] {
      for (std::size_t i = k; i < n; i += w) out[i] = f(i);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

int emit(const std::vector<json>& lines) {
  int code = kOk;
  for (const auto& l : lines) {
    std::cout << l.dump() << '\n';
    if (l.contains("agree") && !l["agree"].get<bool>()) code = kDisagreement;
    if (l.contains("result") && l["result"].is_object() && l["result"].contains("agree") &&
        !l["result"]["agree"].get<bool>())
      code = kDisagreement;
  }
  return code;
}

std::vector<std::int64_t> range(std::int64_t t, std::int64_t tmax) {
  std::vector<std::int64_t> ts;
  if (tmax > 0)
    for (std::int64_t k = 1; k <= tmax; ++k) ts.push_back(k);
  else
    ts.push_back(t);
  return ts;
}

Complex parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw DomainError("point must be given as re,im");
  return {std::stold(s.substr(0, comma)), std::stold(s.substr(comma + 1))};
}

Vec3<BigInt> parse_coords(const std::string& s) {
  Vec3<BigInt> c;
  std::stringstream in(s);
  std::string part;
  for (int k = 0; k < 3; ++k) {
    if (!std::getline(in, part, ',')) throw DomainError("coordinates must be c0,c1,c2");
    c[k] = BigInt(std::stoll(part));
  }
  return c;
}

// ---------------------------------------------------------------------------

struct DegreeArgs {
  std::int64_t t = 1, tmax = 0, D = 6;
  bool check = false;
};

int run_degree(const DegreeArgs& a) {
  const auto ts = range(a.t, a.tmax);
  return emit(parallel_map(ts.size(), [&](std::size_t i) {
    const DegreeResult r = degree_Z(ts[i], a.D);
    json res = {{"delta", r.delta}, {"H0", to_string(r.H0)}, {"degree", to_string(r.degree)}};
    std::string prov = "formula";
    if (a.check) {
      const Rational alt = H0_product_form(ts[i], a.D);
      res["H0_product_form"] = to_string(alt);
      res["agree"] = alt == r.H0;
      prov = "both-agree";
    }
    return record("degree", {{"t", ts[i]}, {"D", a.D}}, res, prov);
  }));
}

struct HurwitzArgs {
  std::int64_t t = 1, tmax = 0;
};

int run_hurwitz(const HurwitzArgs& a) {
  const auto ts = range(a.t, a.tmax);
  return emit(parallel_map(ts.size(), [&](std::size_t i) {
    const Rational lhs = 2 * H0(ts[i], 1), rhs = hurwitz_H(4 * ts[i]);
    return record("hurwitz", {{"t", ts[i]}},
                  {{"two_H0", to_string(lhs)}, {"H_4t", to_string(rhs)}, {"agree", lhs == rhs}}, "both-agree");
  }));
}

struct DiffArgs {
  std::int64_t t1 = 1, twom = 0, t2 = 1, D = 6;
};

int run_diff(const DiffArgs& a) {
  const FundamentalMatrix T{a.t1, a.twom, a.t2};
  if (T.det() == 0) throw DomainError("diff: T must be nonsingular");
  const QuaternionAlgebra B = algebra_from_disc(a.D, {settings.algebra_search});
  const auto d = diff_set(T, B);
  return emit({record("diff", {{"T", {a.t1, to_string(T.m()), a.t2}}, {"D", a.D}},
                      {{"diff", places(d)}, {"size", d.size()}, {"algebra", {B.a, B.b}}}, "formula")});
}

struct EpArgs {
  std::int64_t p = 3, D = 0;
  int alpha = 0, beta = 0, eps1 = 1, eps2 = 1, sweep = -1;
  std::string method = "cross-check";
  std::vector<std::int64_t> T;
};

// Membership of p in Diff(T, B) from local invariants alone.
void check_regime(const GKInvariants& inv, std::int64_t D, const std::string& method) {
  if (D == 0) return;
  const bool bad = D % inv.p == 0;
  if (method == "gk" && bad) throw RegimeError("ep --method gk needs p not dividing D(B)");
  if (method != "gk" && !bad) throw RegimeError("ep --method " + method + " needs p dividing D(B)");
  const Rational e1 = unit_for_class(inv.eps1_class, inv.p), e2 = unit_for_class(inv.eps2_class, inv.p);
  const int inv_T = hilbert_symbol(-e1 * Rational(mp::pow(BigInt(inv.p), inv.alpha)),
                                   -e2 * Rational(mp::pow(BigInt(inv.p), inv.beta)), inv.p);
  const int inv_B = bad ? -1 : 1;
  if (inv_T == inv_B) throw RegimeError("ep: p is not in Diff(T, B)");
}

json ep_one(const GKInvariants& inv, const EpArgs& a) {
  check_regime(inv, a.D, a.method);
  json in = {{"p", inv.p},           {"alpha", inv.alpha},         {"beta", inv.beta},
             {"eps1", inv.eps1_class}, {"eps2", inv.eps2_class}, {"method", a.method}};
  if (a.D) in["D"] = a.D;
  json res;
  std::string prov = "formula";
  if (a.method == "gk") {
    res["e_p"] = to_string(gross_keating_ep(inv));
  } else if (a.method == "kr") {
    res["e_p"] = kr_ep_closed(inv);
  } else {
    const AnticommutingPair pr = anticommuting_pair(inv);
    IntersectConfig cfg;
    cfg.r_max = settings.r_max;
    const IntersectionResult r = intersect(pr.j1, pr.j2, cfg);
    res["tree"] = r.e_p;
    res["radius"] = r.radius;
    if (!r.anomalies.empty()) res["anomalies"] = r.anomalies;
    prov = "oracle";
    if (a.method == "cross-check") {
      const std::int64_t kr = kr_ep_closed(inv);
      res["kr"] = kr;
      res["agree"] = kr == r.e_p;
      prov = "both-agree";
    }
    if (r.tallies) {
      const RegionalTallies& t = *r.tallies;
      res["tallies"] = {{"region0", to_string(t.region0)},   {"region1", to_string(t.region1)},
                        {"region2", to_string(t.region2)},   {"region3", to_string(t.region3)},
                        {"horizontal", to_string(t.horizontal)}};
      if (!t.discrepancies.empty()) res["tally_discrepancies"] = t.discrepancies;
    }
  }
  return record("ep", in, res, prov);
}

int run_ep(EpArgs a) {
  if (a.method != "gk" && a.method != "kr" && a.method != "tree" && a.method != "cross-check")
    throw DomainError("ep: unknown method " + a.method);
  if (!a.T.empty()) {
    if (a.T.size() != 3) throw DomainError("ep: --T takes t1 2m t2");
    const FundamentalMatrix T{a.T[0], a.T[1], a.T[2]};
    const PadicDiagonalization pd = diagonalize_padic(T, a.p);
    if (a.D) {
      const QuaternionAlgebra B = algebra_from_disc(a.D, {settings.algebra_search});
      if (!diff_set(T, B).contains(a.p)) throw RegimeError("ep: p is not in Diff(T, B)");
    }
    a.alpha = pd.inv.alpha;
    a.beta = pd.inv.beta;
    a.eps1 = pd.inv.eps1_class;
    a.eps2 = pd.inv.eps2_class;
  }
  if (a.sweep < 0) return emit({ep_one({a.p, a.alpha, a.beta, a.eps1, a.eps2}, a)});

  std::vector<GKInvariants> configs;
  for (int al = 0; al <= a.sweep; ++al)
    for (int be = al; be <= a.sweep; ++be)
      for (int f1 : {1, -1})
        for (int f2 : {1, -1}) configs.push_back({a.p, al, be, f1, f2});
  return emit(parallel_map(configs.size(), [&](std::size_t i) {
    try {
      return ep_one(configs[i], a);
    } catch (const NotLocallyRepresented&) {
      return record("ep", {{"p", a.p}, {"alpha", configs[i].alpha}, {"beta", configs[i].beta},
                           {"eps1", configs[i].eps1_class}, {"eps2", configs[i].eps2_class}},
                    {{"skipped", "not locally represented"}}, "oracle");
    } catch (const RegimeError&) {
      return record("ep", {{"p", a.p}, {"alpha", configs[i].alpha}, {"beta", configs[i].beta},
                           {"eps1", configs[i].eps1_class}, {"eps2", configs[i].eps2_class}},
                    {{"skipped", "p not in Diff(T, B)"}}, "formula");
    }
  }));
}

struct EisArgs {
  std::int64_t t = 1, tmax = 0, D = 6;
  long double v = 1;
  bool unguarded = false;
};

int run_eis_central(const EisArgs& a) {
  const auto ts = range(a.t, a.tmax);
  return emit(parallel_map(ts.size(), [&](std::size_t i) {
    return record("eis-central", {{"t", ts[i]}, {"D", a.D}}, {{"coefficient", to_string(central_coeff(ts[i], a.D))}},
                  "formula");
  }));
}

int run_eis_deriv(const EisArgs& a) {
  const auto ts = range(a.t, a.tmax);
  return emit(parallel_map(ts.size(), [&](std::size_t i) {
    json in = {{"t", ts[i]}, {"v", real(a.v)}, {"D", a.D}};
    try {
      const QCoefficient q = a.unguarded ? deriv_coeff_unguarded(ts[i], a.v, a.D, settings.l_tol)
                                         : deriv_coeff(ts[i], a.v, a.D, settings.l_tol);
      json br = json::array();
      for (const auto& [name, value] : q.breakdown) br.push_back({{"term", name}, {"value", real(value)}});
      return record("eis-deriv", in,
                    {{"prefactor", to_string(q.exact_part)},
                     {"value", real(q.numeric_part)},
                     {"error_bound", err(q.error_bound)},
                     {"breakdown", br}},
                    "formula");
    } catch (const EmptyCycle& e) {
      return record("eis-deriv", in, {{"empty_cycle", e.what()}}, "formula");
    }
  }));
}

struct ZagierArgs {
  std::int64_t tmax = 50;
  long double v = 1;
  bool check = false, table = false;
};

int run_zagier(const ZagierArgs& a) {
  const SeriesTable z = zagier_series(a.v, 4 * a.tmax);
  std::vector<json> lines;
  if (a.table)
    for (const auto& [n, c] : z.coefficients)
      lines.push_back(record("zagier", {{"index", n}, {"v", real(a.v)}},
                             {{"exact", to_string(c.exact_part)},
                              {"nonholomorphic", real(c.numeric_part)},
                              {"error_bound", err(c.error_bound)}},
                             "formula"));
  if (a.check) {
    const SeriesTable e = eisenstein_series_D1(a.v, a.tmax);
    const SeriesComparison cmp = compare_positive_coefficients(e, z);
    lines.push_back(record("zagier", {{"tmax", a.tmax}, {"v", real(a.v)}, {"check_hurwitz", true}},
                           {{"compared", cmp.compared},
                            {"matched", cmp.matched},
                            {"mismatches", cmp.mismatches},
                            {"agree", cmp.matched == cmp.compared}},
                           "both-agree"));
  }
  return emit(lines);
}

int run_omega(std::int64_t D) {
  const HodgeValue h = hodge_pairing_value(D);
  return emit({record("omega-pairing", {{"D", D}},
                      {{"zeta_D_minus1", to_string(h.zeta_D_minus1)},
                       {"bracket", h.bracket.str(settings.precision)},
                       {"value", h.value.str(settings.precision)},
                       {"error_bound", err(h.error_bound)}},
                      "formula")});
}

struct GreenArgs {
  std::int64_t D = 6, t = 1;
  std::string coords, z = "0,1";
  long double v = 1, tol = 1e-10L, scale = 1;
};

int run_green(const GreenArgs& a) {
  const QuaternionAlgebra B = algebra_from_disc(a.D, {settings.algebra_search});
  const MaximalOrder O = maximal_order(B);
  const Vec3<BigInt> c = parse_coords(a.coords);
  const Rational q = O.trace_zero.Q(c);
  if (q == 0) throw DomainError("green: Q(x) must be nonzero");
  const RealMat2 x = embed(B, O.trace_zero.element(c));
  const UpperHalfPoint z(parse_point(a.z));
  const GreenEvaluation g = xi_and_phi0(x, z);
  const GreenResidual r = green_residual(x, z);
  const long double eps = std::numeric_limits<long double>::epsilon();
  return emit({record("green", {{"D", a.D}, {"coords", a.coords}, {"z", a.z}},
                      {{"Q", to_string(q)},
                       {"R", real(g.R)},
                       {"xi", real(g.xi)},
                       {"phi0", real(g.phi0)},
                       {"error_bound", err(64 * eps * (1 + std::fabs(g.xi)))},
                       {"singular", g.singular},
                       {"residual", err(r.relative_error)}},
                      "formula")});
}

int run_xi_sum(const GreenArgs& a) {
  const QuaternionAlgebra B = algebra_from_disc(a.D, {settings.algebra_search});
  const MaximalOrder O = maximal_order(B);
  XiConfig cfg;
  cfg.max_points = settings.xi_max_points;
  cfg.radius_scale = a.scale;
  const GreenEvaluation g = Xi_sum(a.t, a.v, UpperHalfPoint(parse_point(a.z)), B, O.trace_zero, a.tol, cfg);
  return emit({record("xi-sum", {{"D", a.D}, {"t", a.t}, {"v", real(a.v)}, {"z", a.z}, {"tol", err(a.tol)}},
                      {{"value", real(g.xi)},
                       {"error_bound", err(g.truncation_error)},
                       {"terms", g.terms},
                       {"min_R", real(g.min_R)},
                       {"singular", g.singular}},
                      "formula")});
}

struct TreeArgs {
  std::int64_t p = 3;
  int alpha = 0, eps = 1, radius = -1;
};

int run_tree_dump(const TreeArgs& a) {
  const std::int64_t e = unit_for_class(a.eps, a.p);
  Mat2<Rational> j;
  j << 0, 1, -Rational(e) * Rational(mp::pow(BigInt(a.p), a.alpha)), 0;
  const SpecialEndo s = make_special_endo(j, a.p);
  const int radius = a.radius >= 0 ? a.radius : (a.alpha + 1) / 2 + 1;
  const PureCycle c = pure_cycle(s, radius);
  json verts = json::array();
  for (const auto& [v, m] : c.vertical) verts.push_back({{"vertex", to_string(v)}, {"mu", m}});
  const char* kinds[] = {"none", "two-ordinary-points", "ramified-point"};
  json h = {{"kind", kinds[static_cast<int>(c.horizontal.kind)]}};
  if (c.horizontal.kind != HorizontalKind::None) h["at"] = to_string(c.horizontal.at);
  if (c.horizontal.kind == HorizontalKind::RamifiedPoint) h["other"] = to_string(c.horizontal.other);
  const char* locus[] = {"apartment", "vertex", "edge-midpoint"};
  return emit({record("tree-dump", {{"p", a.p}, {"alpha", a.alpha}, {"eps", a.eps}, {"radius", radius}},
                      {{"locus", locus[static_cast<int>(s.kind)]}, {"vertical", verts}, {"horizontal", h}},
                      "oracle")});
}

void load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path);
  const json c = json::parse(in);
  if (c.contains("precision")) settings.precision = c["precision"];
  if (c.contains("r_max")) settings.r_max = c["r_max"];
  if (c.contains("algebra_search")) settings.algebra_search = c["algebra_search"];
  if (c.contains("xi_max_points")) settings.xi_max_points = c["xi_max_points"];
  if (c.contains("workers")) settings.workers = c["workers"];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Special cycles, Eisenstein coefficients, Green functions and local intersection numbers"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  int precision = -1;
  app.add_option("--config", config, "JSON file with search bounds and precisions");
  app.add_option("--precision", precision, "significant digits for reals");

  DegreeArgs deg;
  auto* c_deg = app.add_subcommand("degree", "deg Z(t)");
  c_deg->add_option("--t", deg.t);
  c_deg->add_option("--tmax", deg.tmax, "sweep 1..tmax");
  c_deg->add_option("--D", deg.D);
  c_deg->add_flag("--check", deg.check, "compare with the product form of H0");

  HurwitzArgs hur;
  auto* c_hur = app.add_subcommand("hurwitz", "2 H0(t; 1) against H(4t)");
  c_hur->add_option("--t", hur.t);
  c_hur->add_option("--tmax", hur.tmax);

  DiffArgs dif;
  auto* c_dif = app.add_subcommand("diff", "Diff(T, B)");
  c_dif->add_option("--t1", dif.t1)->required();
  c_dif->add_option("--2m", dif.twom, "twice the off-diagonal entry");
  c_dif->add_option("--t2", dif.t2)->required();
  c_dif->add_option("--D", dif.D);

  EpArgs ep;
  auto* c_ep = app.add_subcommand("ep", "local intersection multiplicity e_p");
  c_ep->add_option("--p", ep.p)->required();
  c_ep->add_option("--alpha", ep.alpha);
  c_ep->add_option("--beta", ep.beta);
  c_ep->add_option("--eps1", ep.eps1, "square class of -eps1: +1 or -1");
  c_ep->add_option("--eps2", ep.eps2);
  c_ep->add_option("--T", ep.T, "t1 2m t2; invariants are read off by p-adic diagonalization")->expected(3);
  c_ep->add_option("--D", ep.D, "discriminant of B for regime checks");
  c_ep->add_option("--method", ep.method)->check(CLI::IsMember({"gk", "kr", "tree", "cross-check"}));
  c_ep->add_option("--sweep", ep.sweep, "all alpha <= beta <= N and both square classes");

  EisArgs ec, ed;
  auto* c_ec = app.add_subcommand("eis-central", "coefficients of E(tau, 1/2; B)");
  c_ec->add_option("--t", ec.t);
  c_ec->add_option("--tmax", ec.tmax);
  c_ec->add_option("--D", ec.D);
  auto* c_ed = app.add_subcommand("eis-deriv", "coefficients of the central derivative");
  c_ed->add_option("--t", ed.t);
  c_ed->add_option("--tmax", ed.tmax);
  c_ed->add_option("--D", ed.D);
  c_ed->add_option("--v", ed.v);
  c_ed->add_flag("--unguarded", ed.unguarded, "evaluate even when Z(t) is empty");

  ZagierArgs zag;
  auto* c_zag = app.add_subcommand("zagier", "Zagier's weight 3/2 series");
  c_zag->add_option("--tmax", zag.tmax);
  c_zag->add_option("--v", zag.v);
  c_zag->add_flag("--check-hurwitz", zag.check);
  c_zag->add_flag("--table", zag.table);

  std::int64_t omega_D = 6;
  auto* c_om = app.add_subcommand("omega-pairing", "conjectural value of <omega, omega>");
  c_om->add_option("--D", omega_D);

  GreenArgs gr, xs;
  auto* c_gr = app.add_subcommand("green", "R, xi and phi0 at one point");
  c_gr->add_option("--D", gr.D);
  c_gr->add_option("--x", gr.coords, "coordinates c0,c1,c2 in the trace-zero maximal order")->required();
  c_gr->add_option("--z", gr.z, "re,im");
  auto* c_xs = app.add_subcommand("xi-sum", "truncated sum Xi(t, v)(z)");
  c_xs->add_option("--D", xs.D);
  c_xs->add_option("--t", xs.t);
  c_xs->add_option("--v", xs.v);
  c_xs->add_option("--z", xs.z);
  c_xs->add_option("--tol", xs.tol);
  c_xs->add_option("--radius-scale", xs.scale);

  TreeArgs tr;
  auto* c_tr = app.add_subcommand("tree-dump", "pure cycle of a special endomorphism");
  c_tr->add_option("--p", tr.p);
  c_tr->add_option("--alpha", tr.alpha);
  c_tr->add_option("--eps", tr.eps);
  c_tr->add_option("--radius", tr.radius);

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (const char* env = std::getenv("ARITH_THETA_PRECISION")) settings.precision = std::stoi(env);
    if (!config.empty()) load_config(config);
    if (precision > 0) settings.precision = precision;

    if (*c_deg) code = run_degree(deg);
    else if (*c_hur) code = run_hurwitz(hur);
    else if (*c_dif) code = run_diff(dif);
    else if (*c_ep) code = run_ep(ep);
    else if (*c_ec) code = run_eis_central(ec);
    else if (*c_ed) code = run_eis_deriv(ed);
    else if (*c_zag) code = run_zagier(zag);
    else if (*c_om) code = run_omega(omega_D);
    else if (*c_gr) code = run_green(gr);
    else if (*c_xs) code = run_xi_sum(xs);
    else if (*c_tr) code = run_tree_dump(tr);
    std::cout << json{{"config", settings.echo()}}.dump() << '\n';
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    code = kRegime;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kRegime;
  } catch (const NotLocallyRepresented& e) {
    std::cerr << "regime error: " << e.what() << '\n';
    code = kRegime;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << '\n';
    code = kNumeric;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "elapsed_ms " << ms << '\n';
  return code;
}

// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "golden_runner.hpp"
#include "pfaff/charp.hpp"
#include "pfaff/gallery.hpp"
#include "pfaff/gv.hpp"
#include "pfaff/transverse.hpp"
#include "pfaff/zseries.hpp"
#include "support.hpp"

using namespace pfaff;
using pfaff::testing::Random;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

RatFn var(const ChartRef& c, std::size_t i) { return RatFn::variable(c, i); }
DiffForm d(const ChartRef& c, std::size_t i) { return DiffForm::differential(c, i); }
DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

Outcome hilbert() {
  std::ostringstream detail;
  bool pass = true;
  std::optional<mpq_class> shared;
  for (const char* name : {"hilbert-f2", "hilbert-f3"}) {
    auto start = Clock::now();
    FixtureReport r = fixture_verify(name);
    double t = seconds_since(start);
    HilbertFixture h = hilbert_triple(std::string(name) == "hilbert-f2" ? HilbertFoliation::F2 : HilbertFoliation::F3);
    bool c_ok = h.c && (*h.c == 1 || *h.c == 2) && (!shared || *shared == *h.c);
    if (h.c && !shared) shared = h.c;
    bool ok = r.passed() && h.report.holds() && c_ok && t < 60;
    pass = pass && ok;
    detail << name << " " << (ok ? "ok" : "bad") << " c=" << (h.c ? h.c->get_str() : "none") << " " << fmt(t) << "; ";
  }
  return {pass, detail.str()};
}

Outcome jouanolou_all() {
  auto start = Clock::now();
  bool pass = true;
  for (unsigned n = 2; n <= 5; ++n) {
    DiffForm w = jouanolou(n);
    RatFn euler(w.chart());
    for (std::size_t i = 0; i < 3; ++i) euler += var(w.chart(), i) * w.component(i);
    pass = pass && euler.is_zero() && wedge(w, ext_d(w)).is_zero();
  }
  bool pullbacks = jouanolou_pullback_check(2) && jouanolou_pullback_check(3);
  double t = seconds_since(start);
  pass = pass && pullbacks && t < 120;
  return {pass, "n=2..5 integrable and radial, pull-back n=2,3 " + std::string(pullbacks ? "holds" : "fails") +
                    ", " + fmt(t)};
}

Outcome gv_engine() {
  auto start = Clock::now();
  Random rng(3);
  ChartRef charts[2] = {make_chart({"x", "z"}), make_chart({"x", "y", "z"})};
  int good = 0, moves = 0;
  for (int i = 0; i < 100; ++i) {
    const ChartRef& c = charts[i % 2];
    VectorField pz = VectorField::partial(c, c->dim() - 1);
    GVSequence g = gv_from_field(rng.ode_form(c, 4), pz, 6);
    if (gv_verify(g).holds()) ++good;
    RatFn f = RatFn(rng.nonzero_poly(c, 2, 3));
    GVSequence r = gv_rescale(g, f);
    GVSequence s = gv_shift(g, f, 1 + static_cast<std::size_t>(i % 3));
    if (gv_verify(r).holds() && gv_verify(s).holds() && wedge(r[0], g[0]).is_zero() && wedge(s[0], g[0]).is_zero())
      ++moves;
  }
  double t = seconds_since(start);
  return {good == 100 && moves == 100 && t < 120,
          std::to_string(good) + "/100 sequences zero defect through order 6, " + std::to_string(moves) +
              "/100 rescale+shift preserve, " + fmt(t)};
}

Outcome expansion_line() {
  ChartRef c = make_chart({"x", "y", "z"}, 0, {"a", "b", "e"});
  Random rng(4);
  std::vector<DiffForm> w;
  for (std::size_t k = 0; k <= 5; ++k) {
    DiffForm f(c, 1);
    for (std::size_t i = 0; i < 3; ++i)
      f += (RatFn(rng.poly(c, 2, 3, 5, 3)) + var(c, 3 + (k + i) % 3) * var(c, i)) * d(c, i);
    w.push_back(f);
  }
  auto defect = integrability_defect(omega_assemble(w, 5));
  DiffForm rest = ext_d(w[3]) - wedge(w[0], w[4]) - defect[3];
  auto lambda = proportionality(rest, wedge(w[1], w[3]));
  bool two = lambda && lambda->is_constant() && lambda->constant_value() == 2;
  return {two, "dw3 - w0^w4 - defect_3 = " + (lambda ? lambda->to_string() : std::string("?")) + " * w1^w3"};
}

struct FiniteCase {
  std::string name;
  GVSequence s;
};

Outcome finite_structure() {
  std::vector<FiniteCase> cases;
  Random rng(5);
  ChartRef charts[2] = {make_chart({"x", "z"}), make_chart({"x", "y", "z"})};
  for (int i = 0; i < 12; ++i) {
    const ChartRef& c = charts[i % 2];
    std::size_t n = 2 + static_cast<std::size_t>(i % 4);
    GVSequence g = gv_from_field(rng.ode_form(c, n), VectorField::partial(c, c->dim() - 1), n + 2);
    cases.push_back({"ode-" + std::to_string(i), GVSequence(g.forms(), g.support_length())});
  }
  ChartRef t = make_chart({"u", "z"}), src = make_chart({"x", "y", "s"});
  RatFn u = var(t, 0), z = var(t, 1);
  GVSequence ode = gv_from_field(d(t, 1) + z.pow(3) * d(t, 0), VectorField::partial(t, 1), 4);
  ChartMap phi(src, t, {var(src, 0) * var(src, 1), var(src, 2) * var(src, 0) + var(src, 1)});
  std::vector<DiffForm> pulled;
  for (const auto& f : ode.forms()) pulled.push_back(pullback(phi, f));
  cases.push_back({"pulled-ode", GVSequence(pulled, 4)});
  int verified = 0, tangent = 0, rederived = 0, rederivable = 0;
  for (const auto& fc : cases) {
    if (!finite_gv_verify(fc.s).holds()) continue;
    ++verified;
    std::size_t n = *fc.s.declared_length() - 1;
    bool ok = true;
    for (std::size_t k = 2; k <= n; ++k)
      for (std::size_t l = 2; l <= n; ++l) ok = ok && wedge(fc.s[k], fc.s[l]).is_zero();
    tangent += ok;
    if (n >= 3 && !ext_d(fc.s[1]).is_zero()) {
      ++rederivable;
      auto again = finite_gv_rederive(fc.s[0], fc.s[1], fc.s[2], n);
      bool same = true;
      for (std::size_t k = 3; k <= n; ++k) same = same && again[k] == fc.s[k];
      rederived += same;
    }
  }
  int total = static_cast<int>(cases.size());
  return {verified == total && tangent == verified && rederived == rederivable && rederivable > 0,
          std::to_string(verified) + "/" + std::to_string(total) + " verified, tangency " + std::to_string(tangent) +
              ", re-derivation " + std::to_string(rederived) + "/" + std::to_string(rederivable)};
}

bool certified_input(const DiffForm& w1, const DiffForm& w2, const DiffForm& w3) {
  ReductionReport r = degree2_reduce(w1, w2, w3);
  return r.certified && r.coefficients.size() == 4;
}

RatFn homogeneous(Random& rng, const ChartRef& c, unsigned degree) {
  std::vector<Term> terms;
  for (int k = 0; k < 4; ++k) {
    Term t;
    for (unsigned b = 0; b < degree; ++b) t.exp[static_cast<std::size_t>(rng.integer(0, long(c->dim()) - 1))] += 1;
    t.coeff = rng.integer(-4, 4);
    terms.push_back(t);
  }
  MultiPoly p = MultiPoly::from_terms(c, std::move(terms));
  return p.is_zero() ? homogeneous(rng, c, degree) : RatFn(p);
}

Outcome reduction() {
  int certified = 0;
  FixtureReport f2 = fixture_verify("degree2-f2");
  certified += f2.passed();
  Random rng(6);
  ChartRef plane = make_chart({"x", "y"}), space = make_chart({"x", "y", "z"});
  for (int i = 0; i < 20; ++i) {
    const ChartRef& c = i % 2 ? space : plane;
    RatFn l = homogeneous(rng, c, 1), q = homogeneous(rng, c, 2), k = homogeneous(rng, c, 3);
    certified += certified_input(-exact(q), (q * exact(l)).scaled(3) - l * exact(q) - exact(k),
                                 (k * exact(l)).scaled(3) - l * exact(k));
  }
  ChartRef g = make_chart({"x", "y"}, 0, {"a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4", "b5", "b6"});
  RatFn x = var(g, 0), y = var(g, 1);
  auto p = [&](std::size_t i) { return var(g, 1 + i); };
  DiffForm w1 = (p(1) * x + p(2) * y) * d(g, 0) + (p(3) * x + p(4) * y) * d(g, 1);
  DiffForm w2 = (p(5) * x * x + p(6) * x * y + p(7) * y * y) * d(g, 0) +
                (p(8) * x * x + p(9) * x * y + p(10) * y * y) * d(g, 1);
  ReductionReport r = degree2_reduce(w1, w2, DiffForm(g, 1));
  std::vector<DiffForm> shown = displayed_moebius_coefficients(r);
  std::string matches;
  bool all_match = true;
  for (std::size_t k = 1; k <= 3; ++k) {
    bool same = r.coefficients[k] == shown[k];
    all_match = all_match && same;
    matches += " z~^" + std::to_string(k) + (same ? " match" : r.coefficients[k] == -shown[k] ? " negated" : " differ");
  }
  DiffForm shown_ode = d(r.output, 1);
  RatFn uu = var(r.output, 1);
  for (std::size_t k = 0; k <= 3; ++k) shown_ode += uu.pow(long(k)) * shown[k].transfer(r.output);
  bool shown_certified = wedge(pullback(r.composed, w1 + w2), shown_ode).is_zero();
  return {certified == 21 && r.certified && all_match,
          "certificates " + std::to_string(certified) + "/21, generic symbolic certified " +
              (r.certified ? "yes" : "no") + ";" + matches + "; displayed cubic certified " +
              (shown_certified ? "yes" : "no")};
}

Outcome sl2() {
  SL2Fixture f = sl2_triple();
  bool relations = triple_verify(f.triple).holds() && f.triple.convention() == Convention::Full;
  return {f.maurer_cartan && f.trace_free && relations && f.translation,
          std::string("Maurer-Cartan ") + (f.maurer_cartan ? "ok" : "bad") + ", FULL relations " +
              (relations ? "ok" : "bad") + ", translation " + (f.translation ? "ok" : "bad")};
}

Outcome characteristic_p() {
  auto start = Clock::now();
  int runs = 0, verified = 0, closed = 0;
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL})
    for (const auto& rec : charp_batch(p, 100 + p, 200)) {
      ++runs;
      verified += rec.verified;
      closed += rec.p_closed;
    }
  ChartRef c = make_chart({"x", "y"}, 2);
  RatFn x = var(c, 0), y = var(c, 1);
  IntegratingFactor f = integrating_factor(d(c, 0) + x * y * d(c, 1), std::vector<RatFn>{y});
  RatFn product = f.factor * x * (y + RatFn::constant(c, 1)).pow(2);
  bool worked = ext_d(DiffForm::function(product)).is_zero() && product.is_constant();
  double t = seconds_since(start);
  return {runs == 800 && verified == 800 && worked && t < 120,
          std::to_string(verified) + "/" + std::to_string(runs) + " verified (" + std::to_string(closed) +
              " p-closed), worked instance F*x(y+1)^2 = " + product.to_string() + ", " + fmt(t)};
}

Outcome kernel_laws() {
  Random rng(9);
  ChartRef c = make_chart({"x", "y", "z"});
  ChartRef cp = make_chart({"x", "y", "z"}, 3);
  int dd = 0, cartan = 0, anti = 0, leibniz = 0, pth = 0;
  const int n = 100;
  for (int i = 0; i < n; ++i) {
    int k = static_cast<int>(rng.integer(0, 2));
    DiffForm a = rng.form(c, k, 2, 3, i % 4 == 0);
    dd += ext_d(ext_d(a)).is_zero();
    VectorField x = rng.field(c, 2, 3);
    DiffForm homotopy = interior(x, ext_d(a));
    if (k > 0) homotopy += ext_d(interior(x, a));
    cartan += lie_derivative(x, a) == homotopy;
    int l = static_cast<int>(rng.integer(1, 2));
    DiffForm b = rng.form(c, l, 2, 3);
    DiffForm ab = wedge(a, b), ba = wedge(b, a);
    anti += ((k * l) % 2 ? ab == -ba : ab == ba);
    RatFn f = rng.ratfn(c, 2, 3), g = rng.ratfn(c, 2, 3);
    leibniz += x.apply(f * g) == x.apply(f) * g + f * x.apply(g);
    VectorField y = rng.field(cp, 2, 2);
    VectorField yp = vf_pth_power(y, 3);
    RatFn u = RatFn(rng.poly(cp, 2, 3)), v = RatFn(rng.poly(cp, 2, 3));
    pth += yp.apply(u * v) == yp.apply(u) * v + u * yp.apply(v);
  }
  return {dd == n && cartan == n && anti == n && leibniz == n && pth == n,
          "d^2 " + std::to_string(dd) + ", Cartan " + std::to_string(cartan) + ", anticommutativity " +
              std::to_string(anti) + ", Leibniz " + std::to_string(leibniz) + ", X^p Leibniz " + std::to_string(pth) +
              " of " + std::to_string(n)};
}

Outcome cli_contract() {
  auto results = pfaff::testing::run_golden(PFAFF_BINARY, GOLDEN_DIR);
  int codes = 0, stable = 0, snapshots = 0;
  for (const auto& r : results) {
    codes += r.code_ok();
    stable += r.deterministic();
    snapshots += r.matches_snapshot();
  }
  int n = static_cast<int>(results.size());
  return {n > 0 && codes == n && stable == n && snapshots == n,
          "exit codes " + std::to_string(codes) + "/" + std::to_string(n) + ", byte-identical reruns " +
              std::to_string(stable) + ", snapshots " + std::to_string(snapshots)};
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, hilbert},           {2, jouanolou_all}, {3, gv_engine}, {4, expansion_line},   {5, finite_structure},
      {6, reduction},         {7, sl2},           {8, characteristic_p}, {9, kernel_laws}, {10, cli_contract}};
  int failed = 0;
  for (const auto& [id, check] : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d: %s  %s [%s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                fmt(seconds_since(start)).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

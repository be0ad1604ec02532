// Decision tree for finite Godbillon-Vey sequences of length at least four
// and the pull-back description through a closed-kernel witness.

#include <map>
#include <numeric>

#include "pfaff/gv.hpp"

namespace pfaff {

namespace {

mpq_class factorial(std::size_t k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return mpq_class(r);
}

DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

DiffForm dlog(const RatFn& f) { return exact(f) * f.inverse(); }

RatFn constant(const ChartRef& c, const mpq_class& v) { return RatFn::constant(c, v); }

// The sequence after the rescale f_(N-1) = N and the shift z~ = z + 1, in
// plain coefficients: Omega = dz~ + sum_k c~_k z~^k.
struct Normalized {
  std::size_t n = 0;
  std::vector<DiffForm> lead;  // single entry: the rescaled w_0
  std::vector<DiffForm> c;
};

std::vector<DiffForm> plain(const GVSequence& s) {
  std::vector<DiffForm> out;
  for (std::size_t k = 0; k < s.size(); ++k) out.push_back(s[k].scaled(1 / factorial(k)));
  return out;
}

// Returns nullopt with a trace entry when w_1 turns out closed.
std::optional<Normalized> normalize(const GVSequence& s, std::vector<std::string>& trace) {
  std::size_t n = s.support_length() - 1;
  if (n < 3) fail(ErrorKind::SequenceTooShort, "classification needs length N+1 >= 4");
  auto c = plain(s);
  auto f = proportionality(c[n - 1], c[n]);
  if (!f) fail(ErrorKind::RelationsFail, "w_(N-1) is not proportional to w_N");
  trace.push_back("N = " + std::to_string(n));
  if (f->is_zero()) {
    trace.push_back("f_(N-1) = 0");
    return std::nullopt;
  }
  RatFn lambda = f->scaled(mpq_class(1, static_cast<long>(n)));
  GVSequence rescaled = lambda.is_one() ? s : gv_rescale(s, lambda);
  trace.push_back("rescale z = (" + lambda.to_string() + ") t so that f_(N-1) = N");
  FormalOmega shifted = substitute(rescaled.omega(n), Substitution::translation(constant(s.chart(), -1)));
  trace.push_back("shift z~ = z + 1");
  Normalized out;
  out.n = n;
  out.lead.push_back(rescaled[0]);
  for (std::size_t k = 0; k <= n; ++k) out.c.push_back(shifted[k].scaled(1 / factorial(k)));
  if (!out.c[n - 1].is_zero()) fail(ErrorKind::RelationsFail, "shifted coefficient of z~^(N-1) does not vanish");
  return out;
}

Classification affine_exit(Classification out, const AffineCertificate& cert, const DiffForm& w0, std::string branch) {
  out.trace.push_back(std::move(branch));
  if (verify_affine(cert, w0)) {
    out.kind = Classification::Kind::Affine;
    out.affine = cert;
  } else {
    out.kind = Classification::Kind::Inconclusive;
    out.reason = "affine certificate failed re-verification at " + out.trace.back();
  }
  return out;
}

Classification witness_exit(Classification out, const RatFn& g, const DiffForm& wn, std::string branch) {
  out.trace.push_back(std::move(branch));
  if (!exact(g).is_zero() && wedge(exact(g), wn).is_zero()) {
    out.kind = Classification::Kind::ClosedKernel;
    out.witness = g;
  } else {
    out.kind = Classification::Kind::Inconclusive;
    out.reason = "closed-kernel witness failed re-verification at " + out.trace.back();
  }
  return out;
}

Classification inconclusive(Classification out, std::string reason) {
  out.kind = Classification::Kind::Inconclusive;
  out.reason = std::move(reason);
  return out;
}

// Solves sum_j x_j columns[j] = rhs over the scalars of the chart.
std::optional<std::vector<mpq_class>> solve_scalars(const std::vector<MultiPoly>& columns, const MultiPoly& rhs) {
  unsigned long p = rhs.chart()->characteristic();
  std::map<Exponents, std::size_t> rows;
  auto row_of = [&](const Exponents& e) { return rows.emplace(e, rows.size()).first->second; };
  for (const auto& col : columns)
    for (const auto& t : col.terms()) row_of(t.exp);
  for (const auto& t : rhs.terms()) row_of(t.exp);
  std::size_t m = columns.size();
  std::vector<std::vector<mpq_class>> a(rows.size(), std::vector<mpq_class>(m + 1, 0));
  for (std::size_t j = 0; j < m; ++j)
    for (const auto& t : columns[j].terms()) a[rows[t.exp]][j] = t.coeff;
  for (const auto& t : rhs.terms()) a[rows[t.exp]][m] = t.coeff;

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t j = 0; j < m && r < a.size(); ++j) {
    std::size_t i = r;
    while (i < a.size() && a[i][j] == 0) ++i;
    if (i == a.size()) continue;
    std::swap(a[i], a[r]);
    mpq_class inv = scalar::inverse(a[r][j], p);
    for (auto& v : a[r]) {
      v *= inv;
      scalar::reduce(v, p);
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k == r || a[k][j] == 0) continue;
      mpq_class factor = a[k][j];
      for (std::size_t l = j; l <= m; ++l) {
        a[k][l] -= factor * a[r][l];
        scalar::reduce(a[k][l], p);
      }
    }
    pivots.push_back(j);
    ++r;
  }
  for (std::size_t i = r; i < a.size(); ++i)
    if (a[i][m] != 0) return std::nullopt;
  std::vector<mpq_class> x(m, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = a[i][m];
  return x;
}

RatFn polynomial_in(const std::vector<mpq_class>& coeffs, const RatFn& u) {
  RatFn out(u.chart());
  RatFn power = RatFn::constant(u.chart(), 1);
  for (const auto& c : coeffs) {
    if (c != 0) out += power.scaled(c);
    power *= u;
  }
  return out;
}

}  // namespace

bool verify_affine(const AffineCertificate& c, const DiffForm& w0) {
  if (c.form.is_zero()) return false;
  if (ext_d(c.form) != wedge(c.form, c.connection)) return false;
  if (!ext_d(c.connection).is_zero()) return false;
  return same_foliation(c.form, w0);
}

std::string_view to_string(Classification::Kind kind) {
  switch (kind) {
    case Classification::Kind::Affine: return "affine";
    case Classification::Kind::ClosedKernel: return "closed-kernel";
    case Classification::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Classification finite_gv_classify(const GVSequence& s) {
  Classification out;
  const ChartRef& chart = s.chart();
  DiffForm w0 = s[0];
  if (ext_d(s[1]).is_zero())
    return affine_exit(out, AffineCertificate{w0, s[1]}, w0, "w_1 is closed");

  auto norm = normalize(s, out.trace);
  if (!norm) return inconclusive(out, "f_(N-1) = 0 although w_1 is not closed");
  std::size_t n = norm->n;
  const auto& c = norm->c;
  const DiffForm& lead = norm->lead.front();
  const DiffForm& wn = c[n];
  long nl = static_cast<long>(n);

  // g_k with c~_k = g_k c~_N for k = 0, 2, ..., N-2.
  std::map<std::size_t, RatFn> g;
  for (std::size_t k = 0; k + 2 <= n; ++k) {
    if (k == 1) continue;
    auto gk = proportionality(c[k], wn);
    if (!gk) return inconclusive(out, "c~_" + std::to_string(k) + " is not proportional to w_N");
    if (!gk->is_zero()) g.emplace(k, *gk);
  }

  for (auto i = g.begin(); i != g.end(); ++i) {
    for (auto j = std::next(i); j != g.end(); ++j) {
      long k = static_cast<long>(i->first), l = static_cast<long>(j->first);
      DiffForm factor = dlog(j->second).scaled(nl - k) - dlog(i->second).scaled(nl - l);
      if (factor.is_zero()) continue;
      RatFn witness = j->second.pow(nl - k) / i->second.pow(nl - l);
      return witness_exit(out, witness, wn,
                          "pair (" + std::to_string(k) + ", " + std::to_string(l) + ") with independent logarithms");
    }
  }

  DiffForm c1 = c[1];
  if (g.empty()) {
    AffineCertificate cert{lead, c1.scaled(mpq_class(1 - nl))};
    return affine_exit(out, cert, w0, "case 1: all g_k vanish");
  }

  RatFn total = constant(chart, 1);
  for (const auto& [k, gk] : g) total += gk;
  const auto& [k0, g0] = *g.begin();
  DiffForm beta = c1 + dlog(g0).scaled(mpq_class(1, nl - static_cast<long>(k0)));
  out.trace.push_back("case 2: beta = " + beta.to_string());

  if (beta.is_zero()) {
    if (total.is_zero()) return affine_exit(out, AffineCertificate{lead, DiffForm(chart, 1)}, w0, "case 2.1 with g = 0");
    AffineCertificate cert{lead * total.inverse(), c1.scaled(mpq_class(1 - nl))};
    return affine_exit(out, cert, w0, "case 2.1");
  }

  auto h = proportionality(wn, beta);
  if (!h) return inconclusive(out, "case 2.2: w_N is not proportional to beta");
  DiffForm dlh = dlog(*h);
  for (const auto& [k, gk] : g) {
    DiffForm m = dlh - dlog(gk).scaled(mpq_class(nl - 1, nl - static_cast<long>(k)));
    if (m.is_zero()) continue;
    RatFn witness = h->pow(nl - static_cast<long>(k)) / gk.pow(nl - 1);
    return witness_exit(out, witness, wn, "case 2.2.2 at k = " + std::to_string(k));
  }
  RatFn unit = constant(chart, 1) + total * *h;
  if (unit.is_zero()) return affine_exit(out, AffineCertificate{lead, DiffForm(chart, 1)}, w0, "case 2.2.1 with 1 + gh = 0");
  return affine_exit(out, AffineCertificate{lead * unit.inverse(), DiffForm(chart, 1)}, w0, "case 2.2.1");
}

std::pair<long, std::vector<long>> bezout(const std::vector<long>& values) {
  if (values.empty()) fail(ErrorKind::InvalidArgument, "bezout of an empty list");
  // Invariant: sum coeffs[i] values[i] = g.
  long g = 0;
  std::vector<long> coeffs(values.size(), 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    long a = g, b = values[i];
    long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
      long q = a / b;
      long t = a - q * b;
      a = b;
      b = t;
      t = x0 - q * x1;
      x0 = x1;
      x1 = t;
      t = y0 - q * y1;
      y0 = y1;
      y1 = t;
    }
    if (a < 0) {
      a = -a;
      x0 = -x0;
      y0 = -y0;
    }
    for (std::size_t j = 0; j < i; ++j) coeffs[j] *= x0;
    coeffs[i] = y0;
    g = a;
  }
  if (g == 0) fail(ErrorKind::GcdDegenerate, "all values vanish");
  return {g, coeffs};
}

std::optional<std::vector<mpq_class>> express_in(const RatFn& f, const RatFn& g, std::size_t degree) {
  require_same_chart(f.chart(), g.chart());
  const MultiPoly& u = g.num();
  const MultiPoly& v = g.den();
  std::vector<MultiPoly> columns;
  for (std::size_t j = 0; j <= degree; ++j)
    columns.push_back(f.den() * u.pow(static_cast<unsigned>(j)) * v.pow(static_cast<unsigned>(degree - j)));
  return solve_scalars(columns, f.num() * v.pow(static_cast<unsigned>(degree)));
}

PullbackDescription finite_gv_pullback(const GVSequence& s, const RatFn& g, std::size_t degree) {
  require_same_chart(s.chart(), g.chart());
  const ChartRef& chart = s.chart();
  std::vector<std::string> trace;
  if (ext_d(s[1]).is_zero()) fail(ErrorKind::InvalidArgument, "w_1 is closed; the foliation is transversely affine");
  auto norm = normalize(s, trace);
  if (!norm) fail(ErrorKind::RelationsFail, "f_(N-1) = 0 although w_1 is not closed");
  std::size_t n = norm->n;
  const auto& c = norm->c;
  DiffForm dg = exact(g);
  if (dg.is_zero()) fail(ErrorKind::InvalidArgument, "g is constant");
  if (!wedge(dg, c[n]).is_zero()) fail(ErrorKind::VerificationFailed, "dg ^ w_N does not vanish");

  std::map<long, RatFn> hk;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k == 1 || k == n - 1) continue;
    auto h = proportionality(c[k], dg);
    if (!h) fail(ErrorKind::VerificationFailed, "c~_" + std::to_string(k) + " is not a multiple of dg");
    if (!h->is_zero()) hk.emplace(static_cast<long>(k), *h);
  }
  if (hk.empty()) fail(ErrorKind::GcdDegenerate, "all h_k vanish");
  std::vector<long> shifts;
  for (const auto& [k, h] : hk) shifts.push_back(k - 1);
  auto [r, exps] = bezout(shifts);
  RatFn h = constant(chart, 1);
  std::size_t i = 0;
  for (const auto& [k, hv] : hk) h *= hv.pow(exps[i++]);

  DiffForm rest = c[1] - dlog(h).scaled(mpq_class(1, r));
  RatFn f(chart);
  if (!rest.is_zero()) {
    auto fr = proportionality(rest, dg);
    if (!fr) fail(ErrorKind::VerificationFailed, "c~_1 - dh/(r h) is not a multiple of dg");
    f = *fr;
  }

  auto fc = express_in(f, g, degree);
  if (!fc) fail(ErrorKind::NotExpressible, "f is not a polynomial of degree <= " + std::to_string(degree) + " in g");
  std::map<long, std::vector<mpq_class>> hc;
  for (const auto& [k, hv] : hk) {
    RatFn under = hv / h.pow((k - 1) / r);
    auto coeffs = express_in(under, g, degree);
    if (!coeffs)
      fail(ErrorKind::NotExpressible,
           "h_" + std::to_string(k) + " / h^" + std::to_string((k - 1) / r) + " is not a polynomial in g");
    hc.emplace(k, *coeffs);
  }

  ChartRef target = make_chart({"u", "z"}, chart->characteristic(), chart->parameters());
  RatFn u = RatFn::variable(target, 0), z = RatFn::variable(target, 1);
  auto to_target = [&](const std::vector<mpq_class>& coeffs) { return polynomial_in(coeffs, u); };
  RatFn coeff = to_target(*fc) * z;
  for (const auto& [k, co] : hc) coeff += to_target(co) * z.pow((k - 1) / r + 1);
  DiffForm ode = DiffForm::differential(target, 1) + coeff.scaled(mpq_class(r)) * DiffForm::differential(target, 0);

  ChartMap phi(chart, target, {g, h});
  DiffForm pulled = pullback(phi, ode);
  DiffForm scaled = (h.scaled(mpq_class(r))) * norm->lead.front();
  bool verified = pulled == scaled && same_foliation(pulled, s[0]);
  return PullbackDescription{g, h, r, *fc, hc, target, ode, scaled, verified};
}

}  // namespace pfaff

#include "pfaff/gallery.hpp"

#include <algorithm>
#include <array>

#include "pfaff/document.hpp"

namespace pfaff {

namespace {

RatFn var(const ChartRef& c, std::size_t i) { return RatFn::variable(c, i); }
RatFn constant(const ChartRef& c, long v) { return RatFn::constant(c, v); }
DiffForm d(const ChartRef& c, std::size_t i) { return DiffForm::differential(c, i); }
DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

// det(dx dy dz; a b c; e f g) on a chart whose first coordinates are x, y, z.
DiffForm determinant_form(const ChartRef& ch, const std::array<RatFn, 3>& r2, const std::array<RatFn, 3>& r3) {
  return (r2[1] * r3[2] - r2[2] * r3[1]) * d(ch, 0) - (r2[0] * r3[2] - r2[2] * r3[0]) * d(ch, 1) +
         (r2[0] * r3[1] - r2[1] * r3[0]) * d(ch, 2);
}

VectorField radial(const ChartRef& c) {
  std::vector<RatFn> coeffs;
  for (std::size_t i = 0; i < c->dim(); ++i) coeffs.push_back(var(c, i));
  return VectorField(c, std::move(coeffs));
}

RatFn contract(const VectorField& x, const DiffForm& w) { return interior(x, w).as_function(); }

ChartRef xyz_chart() { return make_chart({"x", "y", "z"}); }

// Restriction to z = 1 of a form on (x, y, z), on the chart (x, y).
DiffForm affine_chart(const DiffForm& w) {
  ChartRef plane = make_chart({"x", "y"});
  return pullback(ChartMap(plane, w.chart(), {var(plane, 0), var(plane, 1), constant(plane, 1)}), w);
}

// Every coordinate monomial of the coefficient numerators has this degree
// and denominators are free of coordinates.
bool homogeneous(const DiffForm& w, unsigned degree) {
  const ChartRef& c = w.chart();
  for (const auto& [set, f] : w.terms()) {
    for (std::size_t i = 0; i < c->dim(); ++i)
      if (f.den().involves(i)) return false;
    for (const auto& t : f.num().terms()) {
      unsigned k = 0;
      for (std::size_t i = 0; i < c->dim(); ++i) k += t.exp[i];
      if (k != degree) return false;
    }
  }
  return true;
}

std::string fresh(const std::string& base, const std::vector<std::string>& taken) {
  std::string name = base;
  for (int k = 1; std::find(taken.begin(), taken.end(), name) != taken.end(); ++k) name = base + "_" + std::to_string(k);
  return name;
}

// Coefficients of f as a polynomial in v, if the denominator is free of v.
std::optional<std::vector<RatFn>> coefficients_in(const RatFn& f, std::size_t v) {
  if (f.den().involves(v)) return std::nullopt;
  std::vector<RatFn> out;
  for (const auto& c : f.num().coefficients_in(v)) out.push_back(RatFn(c) / RatFn(f.den()));
  return out;
}

}  // namespace

DiffForm jouanolou(unsigned n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "jouanolou needs n >= 2");
  ChartRef c = xyz_chart();
  RatFn x = var(c, 0), y = var(c, 1), z = var(c, 2);
  long e = static_cast<long>(n);
  DiffForm w = determinant_form(c, {x, y, z}, {y.pow(e), z.pow(e), x.pow(e)});
  if (!contract(radial(c), w).is_zero()) fail(ErrorKind::VerificationFailed, "i_R Omega_n does not vanish");
  if (!is_integrable(w)) fail(ErrorKind::VerificationFailed, "Omega_n is not integrable");
  return w;
}

DiffForm jouanolou_quotient(unsigned n) {
  ChartRef c = xyz_chart();
  RatFn x = var(c, 0), y = var(c, 1), z = var(c, 2);
  mpq_class m(static_cast<long>(n));
  return determinant_form(c, {x, y, z}, {x * (y.scaled(m) - x), y * (z.scaled(m) - y), z * (x.scaled(m) - z)});
}

bool jouanolou_pullback_check(unsigned n, bool swap) {
  DiffForm target = affine_chart(jouanolou(n));
  const ChartRef& plane = target.chart();
  RatFn x = var(plane, 0), y = var(plane, 1), one = constant(plane, 1);
  long e = static_cast<long>(n) + 1;
  std::array<RatFn, 3> phi{y.pow(e), one * x, x.pow(e) * y};
  if (swap) std::swap(phi[0], phi[1]);
  DiffForm w = jouanolou_quotient(n);
  DiffForm pulled = pullback(ChartMap(plane, w.chart(), {phi[0] / phi[2], phi[1] / phi[2], one}), w);
  return same_foliation(pulled, target);
}

std::string_view to_string(ReductionBranch b) {
  switch (b) {
    case ReductionBranch::Riccati:
      return "Riccati";
    case ReductionBranch::SectionAtInfinity:
      return "SectionAtInfinity";
    case ReductionBranch::MoebiusNormalized:
      return "MoebiusNormalized";
  }
  return "";
}

ReductionReport degree2_reduce(const DiffForm& w1, const DiffForm& w2, const DiffForm& w3) {
  const ChartRef& c = w1.chart();
  require_same_chart(c, w2.chart());
  require_same_chart(c, w3.chart());
  if (w1.degree() != 1 || w2.degree() != 1 || w3.degree() != 1)
    fail(ErrorKind::DegreeMismatch, "degree2_reduce needs 1-forms");
  std::size_t n = c->dim();
  if (n < 2) fail(ErrorKind::InvalidArgument, "degree2_reduce needs at least two coordinates");
  if (!homogeneous(w1, 1) || !homogeneous(w2, 2) || !homogeneous(w3, 3))
    fail(ErrorKind::InvalidArgument, "w_i must be homogeneous polynomial forms of degree i");
  VectorField r = radial(c);
  if (!contract(r, w3).is_zero()) fail(ErrorKind::NotRadialCubicPart, "i_R w3 does not vanish");
  if (w3.is_zero() && contract(r, w2).is_zero())
    fail(ErrorKind::InvalidArgument, "w3 = 0 and w2 radial: the foliation has degree < 2");
  DiffForm omega = w1 + w2 + w3;
  if (!is_integrable(omega)) fail(ErrorKind::NotIntegrable, "w1 + w2 + w3 is not integrable");
  if (contract(r, omega).is_zero()) fail(ErrorKind::RadialFoliation, "i_R Omega vanishes");

  std::vector<std::string> taken = c->parameters();
  std::vector<std::string> base_names;
  for (std::size_t i = 0; i + 1 < n; ++i) base_names.push_back(fresh("t" + std::to_string(i + 1), taken));
  taken.insert(taken.end(), base_names.begin(), base_names.end());
  std::string zname = fresh("z", taken), uname = fresh("u", taken);
  auto with = [&](const std::string& extra) {
    auto names = base_names;
    names.push_back(extra);
    return make_chart(names, c->characteristic(), c->parameters());
  };
  ChartRef base = make_chart(base_names, c->characteristic(), c->parameters());
  ChartRef blow = with(zname), out = with(uname);
  std::size_t zi = n - 1;

  // pi^* Omega / z on the blow-up chart.
  RatFn z = var(blow, zi);
  std::vector<RatFn> images;
  for (std::size_t i = 0; i + 1 < n; ++i) images.push_back(z * var(blow, i));
  images.push_back(z);
  DiffForm eta = pullback(ChartMap(blow, c, images), omega) * z.inverse();

  auto split = [&](const RatFn& f, std::size_t v, std::size_t max_degree) {
    auto cs = coefficients_in(f, v);
    if (!cs || cs->size() > max_degree + 1) fail(ErrorKind::VerificationFailed, "blow-up form has unexpected shape");
    cs->resize(max_degree + 1, RatFn(f.chart()));
    return *cs;
  };
  auto dz_part = split(eta.component(zi), zi, 1);
  RatFn f0 = dz_part[0].transfer(base), f1 = dz_part[1].transfer(base);
  std::array<DiffForm, 3> tilde{DiffForm(base, 1), DiffForm(base, 1), DiffForm(base, 1)};
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto cs = split(eta.component(j), zi, 3);
    if (!cs[0].is_zero()) fail(ErrorKind::VerificationFailed, "blow-up form has unexpected shape");
    for (std::size_t k = 1; k <= 3; ++k) tilde[k - 1] += cs[k].transfer(base) * d(base, j);
  }

  ReductionBranch branch = ReductionBranch::MoebiusNormalized;
  std::optional<RatFn> s;
  RatFn u = var(out, zi);
  RatFn zimage = u;
  if (f0.is_zero()) {
    branch = ReductionBranch::Riccati;
  } else if (f1.is_zero()) {
    branch = ReductionBranch::SectionAtInfinity;
  } else {
    s = -(f0 / f1);
    RatFn so = s->transfer(out);
    zimage = so * u / (u - constant(out, 1));
  }
  std::optional<MultiPoly> vertical;
  if (!f0.is_zero() && !f1.is_zero()) {
    MultiPoly g = gcd(f0.num(), f1.num());
    if (!g.is_constant()) vertical = g;
  }

  std::vector<RatFn> to_blow;
  for (std::size_t i = 0; i + 1 < n; ++i) to_blow.push_back(var(out, i));
  to_blow.push_back(zimage);
  DiffForm lifted = pullback(ChartMap(out, blow, to_blow), eta);
  RatFn lead = lifted.component(zi);
  if (lead.is_zero()) fail(ErrorKind::VerificationFailed, "reduced form has no du term");
  lifted *= lead.inverse();
  std::vector<DiffForm> coefficients(4, DiffForm(base, 1));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    auto cs = split(lifted.component(j), zi, 3);
    for (std::size_t k = 0; k <= 3; ++k) coefficients[k] += cs[k].transfer(base) * d(base, j);
  }
  DiffForm ode = d(out, zi);
  for (std::size_t k = 0; k <= 3; ++k) ode += u.pow(static_cast<long>(k)) * coefficients[k].transfer(out);

  std::vector<RatFn> composed_images;
  for (std::size_t i = 0; i + 1 < n; ++i) composed_images.push_back(zimage * var(out, i));
  composed_images.push_back(zimage);
  ChartMap composed(out, c, composed_images);
  bool certified = wedge(pullback(composed, omega), ode).is_zero();
  return ReductionReport{branch, base, out, f0, f1, s, tilde[0], tilde[1], tilde[2], vertical,
                         coefficients, ode, composed, certified};
}

std::vector<DiffForm> homogeneous_parts(const DiffForm& w) {
  const ChartRef& c = w.chart();
  if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "homogeneous_parts needs a 1-form");
  std::vector<DiffForm> parts{DiffForm(c, 1)};
  for (std::size_t j = 0; j < c->dim(); ++j) {
    RatFn f = w.component(j);
    for (std::size_t i = 0; i < c->dim(); ++i)
      if (f.den().involves(i)) fail(ErrorKind::InvalidArgument, "form has a denominator in the coordinates");
    for (const auto& t : f.num().terms()) {
      unsigned k = 0;
      for (std::size_t i = 0; i < c->dim(); ++i) k += t.exp[i];
      if (parts.size() <= k) parts.resize(k + 1, DiffForm(c, 1));
      parts[k] += RatFn(MultiPoly::monomial(c, t.exp, t.coeff)) / f.den() * d(c, j);
    }
  }
  return parts;
}

std::vector<DiffForm> displayed_moebius_coefficients(const ReductionReport& r) {
  if (!r.s) fail(ErrorKind::InvalidArgument, "not a Moebius reduction");
  const RatFn &f0 = r.f0, &f1 = r.f1;
  DiffForm a = r.w1 * f0.inverse();
  DiffForm b = r.w2 * f1.inverse();
  DiffForm second = a.scaled(2) - exact(f0) * (f0 * f1).inverse() + exact(f1) * f1.pow(-2) - b;
  DiffForm third = -(a - b + r.w3 * (f0 / f1.pow(2)));
  return {DiffForm(r.base, 1), -a, second, third};
}

ComponentExample component_example(const MultiPoly& p2, const MultiPoly& q2, const MultiPoly& r2) {
  ChartRef c = xyz_chart();
  auto lift = [&](const MultiPoly& a) {
    RatFn f = RatFn(a.transfer(c));
    if (!homogeneous(f * d(c, 0), 2) || f.num().involves(2))
      fail(ErrorKind::InvalidArgument, "P, Q, R must be homogeneous of degree 2 in x, y");
    return f;
  };
  RatFn p = lift(p2), q = lift(q2), r = lift(r2);
  RatFn x = var(c, 0), y = var(c, 1), z = var(c, 2);
  RatFn r3 = x * p + y * q;
  DiffForm rot = x * d(c, 1) - y * d(c, 0);
  DiffForm pq = p * d(c, 0) + q * d(c, 1);
  DiffForm w3 = z.pow(2) * rot + z * pq + r * rot - r3 * d(c, 2);
  DiffForm w4 = (z * x.pow(2)).scaled(2) * rot + x.pow(2) * pq - (x * r3).scaled(2) * d(c, 0);
  DiffForm w5 = x.pow(4) * rot;
  DiffForm omega = w3 + w4 + w5;
  VectorField e = radial(c);
  DiffForm twisted = pullback(ChartMap(c, c, {x, y, z + x.pow(2)}), w3);
  return ComponentExample{w3, w4, w5, omega, contract(e, w3), contract(e, w4), contract(e, w5), twisted == omega};
}

SL2Fixture sl2_triple() {
  ChartRef c = make_chart({"x", "u", "y"}, 0, {"z"});
  RatFn x = var(c, 0), u = var(c, 1), y = var(c, 2), z = var(c, 3), one = constant(c, 1);
  RatFn v = (one + u * y) / x;
  DiffForm dx = d(c, 0), du = d(c, 1), dy = d(c, 2), dv = exact(v);
  std::array<std::array<DiffForm, 2>, 2> m{{{v * dx - u * dy, v * du - u * dv}, {x * dy - y * dx, x * dv - y * du}}};
  bool mc = true;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      mc = mc && (ext_d(m[i][j]) + wedge(m[i][0], m[0][j]) + wedge(m[i][1], m[1][j])).is_zero();
  bool trace_free = (m[0][0] + m[1][1]).is_zero();
  Triple t(m[1][0], m[0][0].scaled(-2), -m[0][1], Convention::Full);
  ChartMap tz(c, c, {x * z + u, -x, y * z + v});
  bool translation = pullback(tz, t.w0()) == z.pow(2) * t.w0() + z * t.w1() + t.w2();
  return SL2Fixture{t, mc, trace_free, translation};
}

std::string hilbert_document(HilbertFoliation which) {
  std::string header =
      "chart x, y over Q;\n"
      "D = -720*x^3*y + 1728*x^5 + 80*x*y^2 - y^3 + 640*x^2*y - 1600*x^4 - 64*y^2;\n";
  if (which == HilbertFoliation::F2)
    return header +
           "w0 = ((80*y - 60*x*y - 80*x^2)*dx + (36*x^2 - y - 32*x)*dy)/D;\n"
           "w1 = 16/3*(24*y + 3*y^2 + 62*x*y - 24*x^2 - 108*x^2*y - 368*x^3 + 432*x^4)/D*dx\n"
           "   - 4/15*(150*y + 3*y^2 + 192*x - 172*x*y - 872*x^2 + 720*x^3)/D*dy;\n"
           "w2 = 32/45*(144*y + 84*y^2 + 3*y^3 + 852*x*y - 48*x*y^2 - 144*x^2 - 1472*x^2*y - 36*x^2*y^2\n"
           "            - 4416*x^3 + 336*x^3*y + 4928*x^4)/D*dx\n"
           "   - 32/225*(441*y + 288*x - 372*x*y + 12*x*y^2 - 2292*x^2 - 56*x^2*y + 1472*x^3 - 108*x^3*y\n"
           "             + 720*x^4)/D*dy;\n";
  return header +
         "w0 = ((-5/4*y^2 + 20*x*y - 60*x^3)*dx + (-y + 3/4*x*y + x^2)*dy)/D;\n"
         "w1 = 4*(-80*x^2*y + 3*y^2 - 208*x^3 + 288*x^4 + 48*x*y)/D*dx\n"
         "   - 2/5*(40*y + y^2 - 168*x^2 + 192*x^3 - 50*x*y)/D*dy;\n"
         "w2 = 32/5*(-9*y^2 + 80*x*y + 8*x*y^2 - 16*x^2*y - 368*x^3 - 48*x^3*y + 320*x^4)/D*dx\n"
         "   + 32/25*(-36*y + 63*x*y + 164*x^2 - 28*x^2*y - 304*x^3 + 144*x^4)/D*dy;\n";
}

HilbertFixture hilbert_triple(HilbertFoliation which) {
  Document doc = parse_document(hilbert_document(which));
  DiffForm w0 = as_form(*doc.find("w0"), "w0"), w1 = as_form(*doc.find("w1"), "w1"),
           w2 = as_form(*doc.find("w2"), "w2");
  std::optional<mpq_class> c;
  if (auto lambda = proportionality(ext_d(w1), wedge(w0, w2)); lambda && lambda->is_constant())
    c = lambda->constant_value();
  Convention conv = c && *c == 1 ? Convention::Half : Convention::Full;
  Triple t(w0, w1, w2, conv);
  return HilbertFixture{t, c, triple_verify(t)};
}

bool FixtureReport::passed() const {
  for (const auto& c : checks)
    if (!c.holds) return false;
  return true;
}

namespace {

struct Fixture {
  std::string name;
  std::function<void(FixtureReport&)> run;
};

void check(FixtureReport& r, const std::string& name, bool holds, const std::string& defect = "") {
  r.checks.push_back(FixtureCheck{name, holds, holds ? "" : defect});
}

void check_zero(FixtureReport& r, const std::string& name, const DiffForm& w) {
  check(r, name, w.is_zero(), w.to_string());
}

std::vector<Fixture> registry() {
  std::vector<Fixture> out;
  for (unsigned n = 2; n <= 5; ++n)
    out.push_back({"jouanolou-" + std::to_string(n), [n](FixtureReport& r) {
                     ChartRef c = xyz_chart();
                     RatFn x = var(c, 0), y = var(c, 1), z = var(c, 2);
                     long e = static_cast<long>(n);
                     DiffForm w = jouanolou(n);
                     check_zero(r, "i_R Omega = 0", interior(radial(w.chart()), w));
                     check_zero(r, "Omega ^ dOmega = 0", wedge(w, ext_d(w)));
                     RatFn expected = y * x.pow(e) - z.pow(e + 1);
                     check(r, "dx-coefficient y x^n - z^(n+1)", w.component(0).transfer(c) == expected,
                           w.component(0).to_string());
                     r.certificates.emplace_back("Omega", w.to_string());
                   }});
  for (unsigned n = 2; n <= 3; ++n)
    out.push_back({"jouanolou-pullback-" + std::to_string(n), [n](FixtureReport& r) {
                     check(r, "phi_n^* omega_n ^ Omega_n = 0", jouanolou_pullback_check(n));
                     check(r, "swapped map is rejected", !jouanolou_pullback_check(n, true));
                     r.certificates.emplace_back("omega", jouanolou_quotient(n).to_string());
                   }});
  out.push_back({"degree2-f2", [](FixtureReport& r) {
                   std::vector<DiffForm> parts = homogeneous_parts(affine_chart(jouanolou_quotient(2)));
                   if (parts.size() > 4) fail(ErrorKind::VerificationFailed, "affine form has degree > 3");
                   parts.resize(4, DiffForm(parts[0].chart(), 1));
                   check_zero(r, "singular at the origin", parts[0]);
                   ReductionReport rep = degree2_reduce(parts[1], parts[2], parts[3]);
                   check(r, "f0 != 0", !rep.f0.is_zero());
                   check(r, "f1 != 0", !rep.f1.is_zero());
                   check(r, "pullback proportional to Omega", rep.certified);
                   r.certificates.emplace_back("branch", std::string(to_string(rep.branch)));
                   r.certificates.emplace_back("ode", rep.ode.to_string());
                 }});
  out.push_back({"component", [](FixtureReport& r) {
                   ChartRef c = make_chart({"x", "y"});
                   MultiPoly x = MultiPoly::variable(c, 0), y = MultiPoly::variable(c, 1);
                   MultiPoly p = x * x + (x * y).scaled(2) - y * y, q = (x * y).scaled(3) + y * y,
                             rr = x * x - x * y + (y * y).scaled(2);
                   ComponentExample e = component_example(p, q, rr);
                   ChartRef xyz = e.omega.chart();
                   RatFn r3 = RatFn((x * p + y * q).transfer(xyz)), xx = var(xyz, 0);
                   check(r, "Omega_3(E) = 0", e.euler3.is_zero(), e.euler3.to_string());
                   check(r, "Omega_5(E) = 0", e.euler5.is_zero(), e.euler5.to_string());
                   check(r, "Omega_4(E) = -x^2 R_3", e.euler4 == -(xx * xx * r3), e.euler4.to_string());
                   check(r, "sigma^* Omega_3 = Omega", e.twist_holds);
                   r.certificates.emplace_back("Omega", e.omega.to_string());
                 }});
  out.push_back({"sl2", [](FixtureReport& r) {
                   SL2Fixture f = sl2_triple();
                   check(r, "trace M = 0", f.trace_free);
                   check(r, "dM + M ^ M = 0", f.maurer_cartan);
                   TripleReport t = triple_verify(f.triple);
                   check_zero(r, "dw0 - w0 ^ w1 = 0", t.defects[0]);
                   check_zero(r, "dw1 - 2 w0 ^ w2 = 0", t.defects[1]);
                   check_zero(r, "dw2 - w1 ^ w2 = 0", t.defects[2]);
                   check(r, "T_z^* w0 = z^2 w0 + z w1 + w2", f.translation);
                   r.certificates.emplace_back("triple", f.triple.to_string());
                 }});
  for (auto which : {HilbertFoliation::F2, HilbertFoliation::F3})
    out.push_back({which == HilbertFoliation::F2 ? "hilbert-f2" : "hilbert-f3", [which](FixtureReport& r) {
                     HilbertFixture h = hilbert_triple(which);
                     check(r, "dw1 = c w0 ^ w2 with constant c", h.c.has_value());
                     check(r, "c in {1, 2}", h.c && (*h.c == 1 || *h.c == 2));
                     check_zero(r, "dw0 - w0 ^ w1 = 0", h.report.defects[0]);
                     check_zero(r, "dw1 - c w0 ^ w2 = 0", h.report.defects[1]);
                     check_zero(r, "dw2 - w1 ^ w2 = 0", h.report.defects[2]);
                     r.certificates.emplace_back("c", h.c ? h.c->get_str() : "none");
                     r.certificates.emplace_back("convention", std::string(to_string(h.triple.convention())));
                   }});
  return out;
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& f : registry()) out.push_back(f.name);
  return out;
}

FixtureReport fixture_verify(const std::string& name) {
  for (const auto& f : registry()) {
    if (f.name != name) continue;
    FixtureReport r{name, {}, {}};
    try {
      f.run(r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::VerificationFailed) throw;
      check(r, "construction", false, e.what());
    }
    return r;
  }
  fail(ErrorKind::InvalidArgument, "unknown fixture '" + name + "'");
}

}  // namespace pfaff

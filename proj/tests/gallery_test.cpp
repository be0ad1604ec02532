#include <gtest/gtest.h>

#include "pfaff/document.hpp"
#include "pfaff/gallery.hpp"
#include "support.hpp"

using namespace pfaff;
using pfaff::testing::Random;

namespace {

RatFn var(const ChartRef& c, std::size_t i) { return RatFn::variable(c, i); }
DiffForm d(const ChartRef& c, std::size_t i) { return DiffForm::differential(c, i); }
DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

// Random homogeneous polynomial of the given degree in the coordinates.
RatFn homogeneous(Random& rng, const ChartRef& c, unsigned degree) {
  std::vector<Term> terms;
  for (int k = 0; k < 4; ++k) {
    Term t;
    for (unsigned b = 0; b < degree; ++b) t.exp[static_cast<std::size_t>(rng.integer(0, long(c->dim()) - 1))] += 1;
    t.coeff = rng.integer(-4, 4);
    terms.push_back(t);
  }
  MultiPoly p = MultiPoly::from_terms(c, std::move(terms));
  if (p.is_zero()) return homogeneous(rng, c, degree);
  return RatFn(p);
}

DiffForm homogeneous_form(Random& rng, const ChartRef& c, unsigned degree) {
  DiffForm w(c, 1);
  for (std::size_t i = 0; i < c->dim(); ++i) w += homogeneous(rng, c, degree) * d(c, i);
  return w;
}

RatFn euler(const DiffForm& w) {
  const ChartRef& c = w.chart();
  RatFn out(c);
  for (std::size_t i = 0; i < c->dim(); ++i) out += var(c, i) * w.component(i);
  return out;
}

DiffForm rotation(const ChartRef& c) { return var(c, 1) * d(c, 0) - var(c, 0) * d(c, 1); }

struct Input {
  DiffForm w1, w2, w3;
};

// 3 G dF - F dG with F = 1 + l and G = q + k: integrable with a radial cubic part.
Input first_integral_input(Random& rng, const ChartRef& c) {
  RatFn l = homogeneous(rng, c, 1), q = homogeneous(rng, c, 2), k = homogeneous(rng, c, 3);
  return {-exact(q), (q * exact(l)).scaled(3) - l * exact(q) - exact(k), (k * exact(l)).scaled(3) - l * exact(k)};
}

// Any planar 1-form is integrable.
Input planar_input(Random& rng, const ChartRef& c) {
  return {homogeneous_form(rng, c, 1), homogeneous_form(rng, c, 2), homogeneous(rng, c, 2) * rotation(c)};
}

void expect_certified(const Input& in) {
  ReductionReport r = degree2_reduce(in.w1, in.w2, in.w3);
  EXPECT_TRUE(r.certified) << r.ode.to_string();
  EXPECT_TRUE(is_integrable(r.ode));
  EXPECT_EQ(r.output->dim(), in.w1.chart()->dim());
  EXPECT_TRUE(wedge(pullback(r.composed, in.w1 + in.w2 + in.w3), r.ode).is_zero());
}

ErrorKind reduce_error(const Input& in) {
  try {
    degree2_reduce(in.w1, in.w2, in.w3);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::Parse;
}

}  // namespace

TEST(Jouanolou, RadialAndIntegrable) {
  for (unsigned n = 2; n <= 5; ++n) {
    DiffForm w = jouanolou(n);
    EXPECT_TRUE(euler(w).is_zero());
    EXPECT_TRUE(is_integrable(w));
    ChartRef c = w.chart();
    EXPECT_EQ(w.component(2), var(c, 0) * var(c, 2).pow(long(n)) - var(c, 1).pow(long(n) + 1));
  }
  EXPECT_THROW(jouanolou(1), Error);
}

TEST(Jouanolou, QuotientPullback) {
  for (unsigned n = 2; n <= 3; ++n) {
    EXPECT_TRUE(is_integrable(jouanolou_quotient(n)));
    EXPECT_TRUE(jouanolou_pullback_check(n));
    EXPECT_FALSE(jouanolou_pullback_check(n, true));
  }
}

TEST(Degree2, QuotientChart) {
  ChartRef c = make_chart({"x", "y"});
  RatFn x = var(c, 0), y = var(c, 1);
  Input in{y.scaled(-3) * d(c, 0) + x * d(c, 1),
           (x * y.scaled(2) + y * y) * d(c, 0) + ((x * x).scaled(-3) + x * y.scaled(2)) * d(c, 1), DiffForm(c, 1)};
  ReductionReport r = degree2_reduce(in.w1, in.w2, in.w3);
  EXPECT_EQ(r.branch, ReductionBranch::MoebiusNormalized);
  EXPECT_TRUE(r.certified);
  EXPECT_TRUE(r.coefficients[0].is_zero());
  EXPECT_EQ(r.base->names(), std::vector<std::string>{"t1"});
}

TEST(Degree2, RandomInputsCertified) {
  Random rng(2024);
  ChartRef plane = make_chart({"x", "y"}), space = make_chart({"x", "y", "z"});
  int moebius = 0;
  for (int i = 0; i < 10; ++i) {
    Input in = first_integral_input(rng, i % 2 ? space : plane);
    expect_certified(in);
    moebius += degree2_reduce(in.w1, in.w2, in.w3).branch == ReductionBranch::MoebiusNormalized;
  }
  for (int i = 0; i < 10; ++i) expect_certified(planar_input(rng, plane));
  EXPECT_GE(moebius, 8);
}

TEST(Degree2, MoebiusClosedForm) {
  ChartRef c = make_chart({"x", "y"}, 0, {"a", "b", "k"});
  RatFn x = var(c, 0), y = var(c, 1), a = var(c, 2), b = var(c, 3), k = var(c, 4);
  Input in{(a * x + y) * d(c, 0) + (x + b * y) * d(c, 1), y * y * d(c, 0) + k * x * x * d(c, 1),
           x * y * rotation(c)};
  ReductionReport r = degree2_reduce(in.w1, in.w2, in.w3);
  ASSERT_EQ(r.branch, ReductionBranch::MoebiusNormalized);
  EXPECT_TRUE(r.certified);
  const RatFn &f0 = r.f0, &f1 = r.f1;
  DiffForm p = r.w1 * f0.inverse(), q = r.w2 * f1.inverse(), s = r.w3 * (f0 / f1.pow(2));
  DiffForm dlog0 = exact(f0) * f0.inverse(), dlog1 = exact(f1) * f1.inverse();
  EXPECT_TRUE(r.coefficients[0].is_zero());
  EXPECT_EQ(r.coefficients[1], dlog0 - dlog1 + p);
  EXPECT_EQ(r.coefficients[2], dlog1 - dlog0 - p.scaled(2) + q);
  EXPECT_EQ(r.coefficients[3], p - q + s);
  std::vector<DiffForm> shown = displayed_moebius_coefficients(r);
  EXPECT_EQ(r.coefficients[3], -shown[3]);
}

TEST(Degree2, RiccatiAndSectionBranches) {
  Random rng(8);
  ChartRef c = make_chart({"x", "y"});
  Input riccati{rotation(c), homogeneous_form(rng, c, 2), homogeneous(rng, c, 2) * rotation(c)};
  ReductionReport r = degree2_reduce(riccati.w1, riccati.w2, riccati.w3);
  EXPECT_EQ(r.branch, ReductionBranch::Riccati);
  EXPECT_TRUE(r.certified);
  Input section{homogeneous_form(rng, c, 1), homogeneous(rng, c, 1) * rotation(c),
                homogeneous(rng, c, 2) * rotation(c)};
  r = degree2_reduce(section.w1, section.w2, section.w3);
  EXPECT_EQ(r.branch, ReductionBranch::SectionAtInfinity);
  EXPECT_FALSE(r.s.has_value());
  EXPECT_TRUE(r.certified);
  EXPECT_THROW(displayed_moebius_coefficients(r), Error);
}

TEST(Degree2, RejectsBadInput) {
  Random rng(9);
  ChartRef c = make_chart({"x", "y"}), s = make_chart({"x", "y", "z"});
  DiffForm rot = rotation(c);
  DiffForm w1 = homogeneous_form(rng, c, 1), w2 = homogeneous_form(rng, c, 2);
  EXPECT_EQ(reduce_error({w2, w2, DiffForm(c, 1)}), ErrorKind::InvalidArgument);
  EXPECT_EQ(reduce_error({w1, w2, homogeneous_form(rng, c, 3)}), ErrorKind::NotRadialCubicPart);
  EXPECT_EQ(reduce_error({w1, var(c, 0) * rot, DiffForm(c, 1)}), ErrorKind::InvalidArgument);
  EXPECT_EQ(reduce_error({rot, var(c, 0) * rot, var(c, 1) * var(c, 1) * rot}), ErrorKind::RadialFoliation);
  RatFn x = var(s, 0), y = var(s, 1), z = var(s, 2);
  EXPECT_EQ(reduce_error({x * d(s, 1) + y * d(s, 2), x * x * d(s, 2), DiffForm(s, 1)}), ErrorKind::NotIntegrable);
  EXPECT_EQ(reduce_error({DiffForm(c, 2), DiffForm(c, 1), DiffForm(c, 1)}), ErrorKind::DegreeMismatch);
}

TEST(Component, RandomQuadrics) {
  Random rng(31);
  ChartRef plane = make_chart({"x", "y"});
  for (int i = 0; i < 5; ++i) {
    MultiPoly p = homogeneous(rng, plane, 2).num(), q = homogeneous(rng, plane, 2).num(),
              r = homogeneous(rng, plane, 2).num();
    ComponentExample e = component_example(p, q, r);
    ChartRef c = e.omega.chart();
    RatFn x = var(c, 0), y = var(c, 1);
    RatFn r3 = x * RatFn(p.transfer(c)) + y * RatFn(q.transfer(c));
    EXPECT_TRUE(e.euler3.is_zero());
    EXPECT_TRUE(e.euler5.is_zero());
    EXPECT_EQ(e.euler4, -(x * x * r3));
    EXPECT_TRUE(e.twist_holds);
    EXPECT_TRUE(is_integrable(e.omega3));
  }
  ChartRef plane3 = make_chart({"x", "y"});
  MultiPoly cubic = MultiPoly::variable(plane3, 0).pow(3);
  EXPECT_THROW(component_example(cubic, cubic, cubic), Error);
}

TEST(SL2, MaurerCartanTriple) {
  SL2Fixture f = sl2_triple();
  EXPECT_TRUE(f.maurer_cartan);
  EXPECT_TRUE(f.trace_free);
  EXPECT_TRUE(f.translation);
  EXPECT_EQ(f.triple.convention(), Convention::Full);
  EXPECT_TRUE(triple_verify(f.triple).holds());
}

TEST(Hilbert, TablesAreHalfTriples) {
  for (HilbertFoliation which : {HilbertFoliation::F2, HilbertFoliation::F3}) {
    HilbertFixture h = hilbert_triple(which);
    ASSERT_TRUE(h.c.has_value());
    EXPECT_EQ(*h.c, 1);
    EXPECT_EQ(h.triple.convention(), Convention::Half);
    EXPECT_TRUE(h.report.holds());
    EXPECT_TRUE(is_integrable(h.triple.w0()));
  }
}

TEST(Hilbert, DocumentRoundTrip) {
  Document doc = parse_document(hilbert_document(HilbertFoliation::F2));
  std::string text = print_document(doc);
  Document back = parse_document(text);
  EXPECT_TRUE(back == doc);
  EXPECT_EQ(print_document(back), text);
}

TEST(Registry, AllFixturesPass) {
  std::vector<std::string> names = fixture_names();
  EXPECT_GE(names.size(), 11U);
  for (const auto& name : names) {
    FixtureReport r = fixture_verify(name);
    EXPECT_EQ(r.name, name);
    EXPECT_FALSE(r.checks.empty());
    for (const auto& c : r.checks) EXPECT_TRUE(c.holds) << name << ": " << c.name << " " << c.defect;
  }
  EXPECT_THROW(fixture_verify("no-such-fixture"), Error);
}

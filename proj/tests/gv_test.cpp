#include <gtest/gtest.h>

#include "pfaff/gv.hpp"
#include "support.hpp"

using namespace pfaff;
using pfaff::testing::Random;

namespace {

struct Xyz {
  ChartRef c = make_chart({"x", "y", "z"});
  RatFn x = RatFn::variable(c, 0), y = RatFn::variable(c, 1), z = RatFn::variable(c, 2);
  DiffForm dx = DiffForm::differential(c, 0), dy = DiffForm::differential(c, 1), dz = DiffForm::differential(c, 2);
  DiffForm zero = DiffForm(c, 1);
  VectorField pz = VectorField::partial(c, 2);
  RatFn one = RatFn::constant(c, 1);
};

DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

std::vector<DiffForm> random_forms(Random& rng, const ChartRef& c, std::size_t n) {
  std::vector<DiffForm> out;
  for (std::size_t k = 0; k < n; ++k) {
    DiffForm w = rng.form(c, 1, 2, 2);
    if (k == 0 && w.is_zero()) w = DiffForm::differential(c, 0);
    out.push_back(w);
  }
  return out;
}

// Sequence of dz + sum_k z^k/k! a_k(x) dx on (x, z) for X = d/dz.
GVSequence ode_sequence(const ChartRef& c, const std::vector<MultiPoly>& a, std::size_t order) {
  RatFn z = RatFn::variable(c, 1);
  DiffForm w = DiffForm::differential(c, 1);
  mpq_class fact = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) fact *= static_cast<long>(k);
    w += (z.pow(static_cast<long>(k)) * RatFn(a[k])).scaled(1 / fact) * DiffForm::differential(c, 0);
  }
  return gv_from_field(w, VectorField::partial(c, 1), order);
}

}  // namespace

TEST(GVFromField, HandExample) {
  Xyz s;
  GVSequence g = gv_from_field(s.dz + s.z * s.dx, s.pz, 3);
  EXPECT_EQ(g.size(), 4U);
  EXPECT_EQ(g[1], s.dx);
  EXPECT_TRUE(g[2].is_zero());
  EXPECT_EQ(g.support_length(), 2U);
  EXPECT_TRUE(gv_verify(g).holds());
  GVSequence closed = gv_from_field(s.dz, s.pz, 2);
  EXPECT_EQ(closed.support_length(), 1U);
}

TEST(GVFromField, RejectsBadInput) {
  Xyz s;
  try {
    gv_from_field(s.dz + s.x * s.dy, s.pz, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotIntegrable);
  }
  try {
    gv_from_field(s.dz.scaled(2), s.pz, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalized);
  }
  EXPECT_THROW(GVSequence({s.zero, s.dx}), Error);
}

TEST(GVFromField, RandomOdeFormsHaveZeroDefect) {
  Random rng(41);
  Xyz s;
  for (int i = 0; i < 6; ++i) {
    DiffForm w = rng.ode_form(s.c, 4);
    GVSequence g = gv_from_field(w, s.pz, 6);
    EXPECT_TRUE(gv_verify(g).holds());
    for (std::size_t k = 1; k < g.size(); ++k) EXPECT_TRUE(interior(s.pz, g[k]).as_function().is_zero());
  }
}

TEST(GVVerify, DetectsHandDefect) {
  Xyz s;
  DefectReport r = gv_verify(GVSequence({s.dx, s.zero, s.dy}));
  EXPECT_FALSE(r.holds());
  EXPECT_EQ(r.defects[1], -wedge(s.dx, s.dy));
}

TEST(GVVerify, DeclaredLengthChecksHigherRelations) {
  Xyz s;
  // (dz, 0, dx, dy) satisfies the relations through stored order 3 only
  // when w_4 could absorb them; declared finite it must fail.
  GVSequence g({s.dz + s.z * s.dx, s.dx}, 2);
  EXPECT_TRUE(gv_verify(g).holds());
  EXPECT_EQ(g.size(), 2U);
  EXPECT_THROW(GVSequence({s.dx, s.dy, s.dz}, 2), Error);
  GVSequence bad({s.dx, s.zero, s.dx, s.dy}, 4);
  EXPECT_FALSE(gv_verify(bad).holds());
}

TEST(GVRescale, HandExample) {
  Xyz s;
  GVSequence g = gv_from_field(s.dz + s.z * s.dx, s.pz, 2);
  GVSequence r = gv_rescale(g, s.x);
  EXPECT_EQ(r[0], (s.dz + s.z * s.dx) * s.x.inverse());
  EXPECT_EQ(r[1], s.dx + s.dx * s.x.inverse());
  EXPECT_TRUE(r[2].is_zero());
  EXPECT_TRUE(gv_verify(r).holds());
  EXPECT_EQ(gv_rescale(g, s.one), g);
  EXPECT_THROW(gv_rescale(g, RatFn(s.c)), Error);
}

TEST(GVRescale, GroupLawAndValidity) {
  Random rng(42);
  Xyz s;
  for (int i = 0; i < 4; ++i) {
    GVSequence g = gv_from_field(rng.ode_form(s.c, 3), s.pz, 4);
    RatFn f = rng.ratfn(s.c, 1, 2);
    if (f.is_zero()) continue;
    GVSequence r = gv_rescale(g, f);
    EXPECT_TRUE(gv_verify(r).holds());
    EXPECT_TRUE(same_foliation(r[0], g[0]));
    EXPECT_EQ(gv_rescale(r, f.inverse()), g);
  }
}

TEST(GVShift, FirstOrderColumns) {
  Random rng(43);
  Xyz s;
  auto w = random_forms(rng, s.c, 4);
  RatFn f = s.x * s.z - s.y;
  GVSequence t = gv_shift(GVSequence(w), f, 1);
  EXPECT_EQ(t[0], w[0]);
  EXPECT_EQ(t[1], w[1] + f * w[0]);
  EXPECT_EQ(t[2], w[2] + f * w[1] - exact(f));
}

TEST(GVShift, HigherOrderColumns) {
  Random rng(44);
  Xyz s;
  auto w = random_forms(rng, s.c, 5);
  RatFn f = s.x + s.y * s.y;
  GVSequence t2 = gv_shift(GVSequence(w), f, 2);
  EXPECT_EQ(t2[0], w[0]);
  EXPECT_EQ(t2[1], w[1]);
  EXPECT_EQ(t2[2], w[2] + f * w[0]);
  GVSequence t3 = gv_shift(GVSequence(w), f, 3);
  EXPECT_EQ(t3[2], w[2]);
  EXPECT_EQ(t3[3], w[3] + f * w[0]);
  EXPECT_EQ(gv_shift(GVSequence(w), RatFn(s.c), 2), GVSequence(w));
}

TEST(GVShift, PreservesValidity) {
  Random rng(45);
  Xyz s;
  for (int i = 0; i < 4; ++i) {
    GVSequence g = gv_from_field(rng.ode_form(s.c, 3), s.pz, 4);
    RatFn f = RatFn(rng.poly(s.c, 2, 3));
    for (std::size_t k : {1, 2, 3}) {
      GVSequence t = gv_shift(g, f, k);
      EXPECT_TRUE(gv_verify(t).holds()) << "k = " << k;
      EXPECT_TRUE(wedge(t[0], g[0]).is_zero());
    }
  }
}

TEST(FlagForms, SmallExamples) {
  Xyz s;
  FlagReport a = flag_forms(GVSequence({s.dz, s.zero, s.zero}));
  EXPECT_EQ(a.n, 1U);
  EXPECT_EQ(a.theta(), s.dz);
  FlagReport b = flag_forms(gv_from_field(s.dz + s.z * s.dx, s.pz, 2));
  EXPECT_EQ(b.n, 2U);
  EXPECT_EQ(b.theta(), wedge(s.dz, s.dx));
  EXPECT_TRUE(b.all_closed());
  EXPECT_THROW(flag_forms(GVSequence({s.dz, s.dx})), Error);
}

// A rational foliation g df with X = d/dz / (g f_z) gives a three-step flag.
TEST(FlagForms, ThetasAreClosedOnValidSequences) {
  Xyz s;
  RatFn f = s.x * s.y + s.z * s.z * s.x + s.y;
  RatFn g = s.one + s.x * s.z;
  DiffForm w = g * exact(f);
  RatFn fz = RatFn(f.num().derivative(2));
  VectorField x = (g * fz).inverse() * s.pz;
  GVSequence seq = gv_from_field(w, x, 4);
  ASSERT_TRUE(gv_verify(seq).holds());
  FlagReport flag = flag_forms(seq);
  EXPECT_EQ(flag.n, 3U);
  EXPECT_TRUE(flag.all_closed());
  Decomposition d = flag_decompose(seq, flag);
  EXPECT_TRUE(d.all_first_integrals());
  DiffForm sum(s.c, 1);
  for (std::size_t k = 0; k < d.a.size(); ++k) sum += d.a[k] * seq[k];
  EXPECT_EQ(sum, seq[flag.n]);
}

TEST(FlagDecompose, RecoversPlantedCoefficient) {
  Xyz s;
  RatFn g = s.x * s.y + s.z;
  GVSequence seq({s.dz + s.y * s.dx, s.dx, g * s.dx});
  FlagReport flag = flag_forms(seq);
  ASSERT_EQ(flag.n, 2U);
  Decomposition d = flag_decompose(seq, flag);
  EXPECT_TRUE(d.a[0].is_zero());
  EXPECT_EQ(d.a[1], g);
  GVSequence finite({s.dz + s.z * s.dx, s.dx, s.zero});
  Decomposition z = flag_decompose(finite, flag_forms(finite));
  for (const auto& a : z.a) EXPECT_TRUE(a.is_zero());
}

TEST(GVInvariant, AffineAndGeneric) {
  Xyz s;
  InvariantReport a = gv_invariant(gv_from_field(s.dz + s.z * s.dx, s.pz, 2));
  EXPECT_TRUE(a.vanishes());
  EXPECT_TRUE(a.matches_curvature);
  RatFn f = s.x * s.y + s.z * s.z * s.x + s.y;
  RatFn g = s.one + s.x * s.z;
  RatFn fz = RatFn(f.num().derivative(2));
  GVSequence seq = gv_from_field(g * exact(f), (g * fz).inverse() * s.pz, 3);
  InvariantReport b = gv_invariant(seq);
  EXPECT_FALSE(b.vanishes());
  EXPECT_TRUE(b.matches_curvature);
  EXPECT_TRUE(b.closed);
  auto plane = make_chart({"x", "z"});
  GVSequence p = ode_sequence(plane, {MultiPoly::variable(plane, 0), MultiPoly::constant(plane, 1),
                                      MultiPoly::variable(plane, 0)}, 3);
  EXPECT_TRUE(gv_invariant(p).vanishes());
  EXPECT_THROW(gv_invariant(GVSequence({s.dz, s.dx})), Error);
}

TEST(FiniteGV, OdeSequencesPassAndRederive) {
  auto plane = make_chart({"x", "z"});
  MultiPoly x = MultiPoly::variable(plane, 0), one = MultiPoly::constant(plane, 1);
  GVSequence g = ode_sequence(plane, {x, one, x * x, x + one, x}, 6);
  ASSERT_EQ(g.support_length(), 5U);
  GVSequence finite(g.forms(), 5);
  FiniteReport r = finite_gv_verify(finite);
  EXPECT_EQ(r.n, 4U);
  EXPECT_TRUE(r.holds());
  EXPECT_TRUE(gv_verify(finite).holds());
  auto again = finite_gv_rederive(finite[0], finite[1], finite[2], 4);
  for (std::size_t k = 3; k <= 4; ++k) EXPECT_EQ(again[k], finite[k]);
}

TEST(FiniteGV, RiccatiTriplePasses) {
  auto plane = make_chart({"x", "z"});
  MultiPoly x = MultiPoly::variable(plane, 0), one = MultiPoly::constant(plane, 1);
  GVSequence g(ode_sequence(plane, {x, one, one + one}, 3).forms(), 3);
  ASSERT_TRUE(gv_verify(g).holds());
  EXPECT_TRUE(finite_gv_verify(g).holds());
}

TEST(FiniteGV, PlantedTangencyViolation) {
  Xyz s;
  GVSequence g({s.dz, s.zero, s.dx, s.dy}, 4);
  FiniteReport r = finite_gv_verify(g);
  ASSERT_EQ(r.tangency_failures.size(), 1U);
  EXPECT_EQ(r.tangency_failures[0], std::make_pair(std::size_t{2}, std::size_t{3}));
  EXPECT_FALSE(r.holds());
}

TEST(Bezout, CombinesShifts) {
  auto [r, n] = bezout({2, 4});
  EXPECT_EQ(r, 2);
  EXPECT_EQ(n[0] * 2 + n[1] * 4, 2);
  auto [r2, n2] = bezout({-1, 1, 3});
  EXPECT_EQ(r2, 1);
  EXPECT_EQ(-n2[0] + n2[1] + 3 * n2[2], 1);
  auto [r3, n3] = bezout({6, 9, 15});
  EXPECT_EQ(r3, 3);
  EXPECT_EQ(6 * n3[0] + 9 * n3[1] + 15 * n3[2], 3);
}

TEST(ExpressIn, SolvesForPolynomialCoefficients) {
  Xyz s;
  RatFn g = s.x / (s.y + s.one);
  auto c = express_in(g * g + RatFn::constant(s.c, 3), g, 2);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ((*c)[0], 3);
  EXPECT_EQ((*c)[1], 0);
  EXPECT_EQ((*c)[2], 1);
  EXPECT_FALSE(express_in(g * g, g, 1).has_value());
  EXPECT_FALSE(express_in(g.inverse(), g, 3).has_value());
}

TEST(Classify, ClosedFirstFormIsAffine) {
  Xyz s;
  GVSequence g({s.dz + s.z * s.dx, s.dx, s.zero, s.zero}, 4);
  Classification c = finite_gv_classify(g);
  EXPECT_EQ(c.kind, Classification::Kind::Affine);
  ASSERT_TRUE(c.affine.has_value());
  EXPECT_EQ(c.affine->form, g[0]);
  EXPECT_EQ(c.affine->connection, g[1]);
}

TEST(Classify, OdeSequenceGivesClosedKernelWitness) {
  auto plane = make_chart({"x", "z"});
  MultiPoly x = MultiPoly::variable(plane, 0), one = MultiPoly::constant(plane, 1);
  GVSequence g(ode_sequence(plane, {x, one, x * x, x + one, x}, 4).forms(), 5);
  Classification c = finite_gv_classify(g);
  ASSERT_EQ(c.kind, Classification::Kind::ClosedKernel) << c.reason;
  RatFn w = *c.witness;
  EXPECT_FALSE(ext_d(DiffForm::function(w)).is_zero());
  EXPECT_TRUE(w.num().degree_in(1) == 0 && w.den().degree_in(1) == 0);
}

// Built in the shifted normalization: c~_1 = du/u, c~_N = u^(N-1) dF,
// c~_k = a_k u^(k-1) dF, so beta = 0.  Shifting back gives the input.
TEST(Classify, PlantedCaseTwoOneIsAffine) {
  Xyz s;
  const std::size_t n = 4;
  RatFn u = s.x + s.y * s.y;
  DiffForm df = exact(s.x * s.z);
  std::vector<DiffForm> c(n + 1, s.zero);
  c[1] = exact(u) * u.inverse();
  c[n] = u.pow(n - 1) * df;
  c[0] = RatFn::constant(s.c, 2) * u.inverse() * df;
  c[2] = RatFn::constant(s.c, -3) * u * df;
  std::vector<DiffForm> w;
  mpq_class fact = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) fact *= static_cast<long>(k);
    w.push_back(c[k].scaled(fact));
  }
  FormalOmega back = substitute(omega_assemble(w, n), Substitution::translation(s.one));
  GVSequence g(back.coefficients(), n + 1);
  ASSERT_TRUE(gv_verify(g).holds());
  ASSERT_TRUE(finite_gv_verify(g).holds());
  Classification cl = finite_gv_classify(g);
  ASSERT_EQ(cl.kind, Classification::Kind::Affine) << cl.reason;
  EXPECT_TRUE(verify_affine(*cl.affine, g[0]));
  EXPECT_NE(std::find(cl.trace.begin(), cl.trace.end(), "case 2.1"), cl.trace.end());
}

// dz + z^3 du pulled back along (x, y, s) -> (u, z) = (x y, s x + y).
TEST(Pullback, RoundTripThroughOde) {
  auto target = make_chart({"u", "z"});
  RatFn u = RatFn::variable(target, 0), z = RatFn::variable(target, 1);
  DiffForm du = DiffForm::differential(target, 0), dz = DiffForm::differential(target, 1);
  GVSequence ode = gv_from_field(dz + z.pow(3) * du, VectorField::partial(target, 1), 4);
  auto src = make_chart({"x", "y", "s"});
  RatFn x = RatFn::variable(src, 0), y = RatFn::variable(src, 1), sv = RatFn::variable(src, 2);
  ChartMap phi(src, target, {x * y, sv * x + y});
  std::vector<DiffForm> forms;
  for (const auto& w : ode.forms()) forms.push_back(pullback(phi, w));
  GVSequence g(forms, 4);
  ASSERT_TRUE(gv_verify(g).holds());
  PullbackDescription d = finite_gv_pullback(g, x * y, 3);
  EXPECT_TRUE(d.verified);
  EXPECT_TRUE(same_foliation(pullback(ChartMap(src, d.target_chart, {d.g, d.h}), d.target), g[0]));
  EXPECT_EQ(d.r, 2);
  EXPECT_EQ(d.h, (sv * x + y).pow(2));
  for (const auto& q : d.f_coefficients) EXPECT_EQ(q, 0);
  ASSERT_EQ(d.h_coefficients.count(3), 1U);
  EXPECT_EQ(d.h_coefficients.at(3)[0], 1);
}

TEST(Pullback, RejectsNonPolynomialCoefficients) {
  auto target = make_chart({"u", "z"});
  RatFn u = RatFn::variable(target, 0), z = RatFn::variable(target, 1);
  DiffForm du = DiffForm::differential(target, 0), dz = DiffForm::differential(target, 1);
  GVSequence ode = gv_from_field(dz + z.pow(3) * u * du, VectorField::partial(target, 1), 4);
  auto src = make_chart({"x", "y", "s"});
  RatFn x = RatFn::variable(src, 0), y = RatFn::variable(src, 1), sv = RatFn::variable(src, 2);
  ChartMap phi(src, target, {x * y, sv * x + y});
  std::vector<DiffForm> forms;
  for (const auto& w : ode.forms()) forms.push_back(pullback(phi, w));
  GVSequence g(forms, 4);
  try {
    finite_gv_pullback(g, x * y, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotExpressible);
  }
}

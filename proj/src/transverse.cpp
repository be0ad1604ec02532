#include "pfaff/transverse.hpp"

#include <sstream>

namespace pfaff {

namespace {

DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

mpq_class middle_factor(Convention c) { return c == Convention::Full ? 2 : 1; }

void require_one_form(const DiffForm& w) {
  if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "triple entries must be 1-forms");
}

}  // namespace

std::string_view to_string(Convention c) { return c == Convention::Full ? "FULL" : "HALF"; }

Triple::Triple(DiffForm w0, DiffForm w1, DiffForm w2, Convention convention)
    : w0_(std::move(w0)), w1_(std::move(w1)), w2_(std::move(w2)), convention_(convention) {
  require_same_chart(w0_.chart(), w1_.chart());
  require_same_chart(w0_.chart(), w2_.chart());
  require_one_form(w0_);
  require_one_form(w1_);
  require_one_form(w2_);
  if (w0_.is_zero()) fail(ErrorKind::ZeroForm, "w0 of a triple is zero");
}

const DiffForm& Triple::operator[](std::size_t k) const {
  switch (k) {
    case 0: return w0_;
    case 1: return w1_;
    case 2: return w2_;
  }
  fail(ErrorKind::InvalidArgument, "triple index out of range");
}

Triple Triple::converted(Convention target) const {
  if (target == convention_) return *this;
  mpq_class factor = target == Convention::Full ? mpq_class(1, 2) : mpq_class(2);
  return Triple(w0_, w1_, w2_.scaled(factor), target);
}

bool Triple::operator==(const Triple& other) const {
  return convention_ == other.convention_ && w0_ == other.w0_ && w1_ == other.w1_ && w2_ == other.w2_;
}

std::string Triple::to_string() const {
  std::ostringstream out;
  out << "triple " << (convention_ == Convention::Full ? "full" : "half") << " (" << w0_.to_string() << ", "
      << w1_.to_string() << ", " << w2_.to_string() << ")";
  return out.str();
}

bool TripleReport::holds() const {
  for (const auto& d : defects)
    if (!d.is_zero()) return false;
  return true;
}

TripleReport triple_verify(const Triple& t) {
  return TripleReport{{ext_d(t.w0()) - wedge(t.w0(), t.w1()),
                       ext_d(t.w1()) - wedge(t.w0(), t.w2()).scaled(middle_factor(t.convention())),
                       ext_d(t.w2()) - wedge(t.w1(), t.w2())}};
}

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::Euclidean: return "euclidean";
    case Structure::Affine: return "affine";
    case Structure::Projective: return "projective";
    case Structure::None: return "none";
  }
  return "none";
}

Structure classify_structure(const DiffForm& w0, const std::optional<DiffForm>& w1,
                             const std::optional<DiffForm>& w2, Convention convention) {
  if (w0.is_zero()) fail(ErrorKind::ZeroForm, "w0 is zero");
  if (ext_d(w0).is_zero()) return Structure::Euclidean;
  if (!w1) return Structure::None;
  require_same_chart(w0.chart(), w1->chart());
  bool first = ext_d(w0) == wedge(w0, *w1);
  if (first && ext_d(*w1).is_zero()) return Structure::Affine;
  if (!w2) return Structure::None;
  if (triple_verify(Triple(w0, *w1, *w2, convention)).holds()) return Structure::Projective;
  return Structure::None;
}

Structure classify_structure(const Triple& t) {
  return classify_structure(t.w0(), t.w1(), t.w2(), t.convention());
}

GaugeMove GaugeMove::f_move(const RatFn& f, Convention c) { return GaugeMove{Kind::F, f, c}; }

GaugeMove GaugeMove::g_move(const RatFn& g, Convention c) { return GaugeMove{Kind::G, g, c}; }

Triple triple_gauge(const Triple& t, const GaugeMove& move) {
  require_same_chart(t.chart(), move.function.chart());
  if (move.convention != t.convention())
    fail(ErrorKind::GaugeBreaksRelations, std::string("gauge move written for ") +
                                              std::string(to_string(move.convention)) + " applied to a " +
                                              std::string(to_string(t.convention())) + " triple");
  const RatFn& f = move.function;
  std::optional<Triple> out;
  if (move.kind == GaugeMove::Kind::F) {
    if (f.is_zero()) fail(ErrorKind::ZeroFunction, "F-move with f = 0");
    out.emplace(t.w0() * f.inverse(), t.w1() + exact(f) * f.inverse(), f * t.w2(), t.convention());
  } else {
    bool full = t.convention() == Convention::Full;
    mpq_class h = full ? mpq_class(1, 2) : mpq_class(1);
    mpq_class q = full ? mpq_class(1, 4) : mpq_class(1, 2);
    DiffForm w2 = t.w2() + f.scaled(h) * t.w1() + (f * f).scaled(q) * t.w0() - exact(f).scaled(h);
    out.emplace(t.w0(), t.w1() + f * t.w0(), w2, t.convention());
  }
  if (triple_verify(t).holds() && !triple_verify(*out).holds())
    fail(ErrorKind::GaugeBreaksRelations, "gauge move output fails the triple relations");
  return *out;
}

Triple triple_gauge_regular(const Triple& t, const RatFn& f0, const RatFn& f1) {
  require_same_chart(t.chart(), f0.chart());
  require_same_chart(t.chart(), f1.chart());
  if (f0.is_zero()) fail(ErrorKind::ZeroFunction, "regular gauge with f0 = 0");
  if (t.convention() != Convention::Full)
    fail(ErrorKind::GaugeBreaksRelations, "regular gauge is written for FULL triples");
  RatFn inv = f0.inverse();
  Triple out(f0 * t.w0(), t.w1() - (f1 * t.w0()).scaled(2) - exact(f0) * inv,
             inv * (t.w2() - f1 * t.w1() + (f1 * f1) * t.w0() + exact(f1)), Convention::Full);
  if (triple_verify(t).holds() && !triple_verify(out).holds())
    fail(ErrorKind::GaugeBreaksRelations, "regular gauge output fails the triple relations");
  return out;
}

ChartRef extend_chart(const ChartRef& chart, const std::string& base) {
  std::string name = base;
  for (int k = 1; chart->index_of(name); ++k) name = base + std::to_string(k);
  auto coords = chart->coordinates();
  coords.push_back(name);
  return make_chart(std::move(coords), chart->characteristic(), chart->parameters());
}

Triple riccati_triple(const DiffForm& alpha, const DiffForm& beta, const DiffForm& gamma) {
  require_same_chart(alpha.chart(), beta.chart());
  require_same_chart(alpha.chart(), gamma.chart());
  require_one_form(alpha);
  require_one_form(beta);
  require_one_form(gamma);
  ChartRef product = extend_chart(alpha.chart(), "z");
  std::size_t zi = product->dim() - 1;
  RatFn z = RatFn::variable(product, zi);
  DiffForm a = alpha.transfer(product), b = beta.transfer(product), c = gamma.transfer(product);
  DiffForm w0 = DiffForm::differential(product, zi) + a + z * b + (z * z) * c;
  return Triple(w0, b + (z * c).scaled(2), c, Convention::Full);
}

Triple riccati_infinity(const Triple& riccati) {
  if (riccati.convention() != Convention::Full) fail(ErrorKind::InvalidArgument, "expected a FULL Riccati triple");
  const ChartRef& product = riccati.chart();
  std::size_t zi = product->dim() - 1;
  auto coords = product->coordinates();
  coords.pop_back();
  ChartRef base = make_chart(coords, product->characteristic(), product->parameters());
  ChartRef inf = extend_chart(base, "w");
  RatFn w = RatFn::variable(inf, inf->dim() - 1);
  std::vector<RatFn> images;
  for (std::size_t i = 0; i < zi; ++i) images.push_back(RatFn::variable(inf, i));
  images.push_back(w.inverse());
  ChartMap change(inf, product, images);
  Triple pulled(pullback(change, riccati.w0()), pullback(change, riccati.w1()), pullback(change, riccati.w2()),
                Convention::Full);
  Triple f = triple_gauge(pulled, GaugeMove::f_move((w * w).inverse(), Convention::Full));
  return triple_gauge(f, GaugeMove::g_move(w.inverse().scaled(-2), Convention::Full));
}

Suspension suspension_form(const Triple& t) {
  if (t.convention() != Convention::Full) fail(ErrorKind::InvalidArgument, "suspension needs a FULL triple");
  if (!triple_verify(t).holds()) fail(ErrorKind::RelationsFail, "triple relations fail");
  ChartRef ext = extend_chart(t.chart(), "t");
  std::size_t ti = ext->dim() - 1;
  RatFn s = RatFn::variable(ext, ti);
  DiffForm form = DiffForm::differential(ext, ti) + t.w0().transfer(ext) + s * t.w1().transfer(ext) +
                  (s * s) * t.w2().transfer(ext);
  FormalOmega omega({t.w0(), t.w1(), t.w2().scaled(2)}, 2);
  return Suspension{omega, ext, form, is_integrable(form)};
}

}  // namespace pfaff

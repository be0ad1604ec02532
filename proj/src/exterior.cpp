#include "pfaff/exterior.hpp"

#include <bit>

namespace pfaff {

namespace {

// Parity of the number of pairs (i in a, j in b) with i > j.
bool wedge_sign_negative(IndexSet a, IndexSet b) {
  int count = 0;
  for (IndexSet rest = b; rest != 0; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    IndexSet above = j >= 31 ? 0 : (a >> (j + 1));
    count += std::popcount(above);
  }
  return (count & 1) != 0;
}

std::string basis_string(const Chart& chart, IndexSet set) {
  std::string out;
  for (auto i : indices_of(set)) {
    if (!out.empty()) out += "/\\";
    out += "d" + chart.name(i);
  }
  return out;
}

// Appends "coeff*basis" with single-term coefficients printed bare and a
// leading sign folded into the separator.
void append_term(std::string& out, const RatFn& coeff, const std::string& basis) {
  bool negative = false;
  std::string body;
  if (coeff.is_polynomial() && coeff.num().size() == 1) {
    RatFn c = coeff;
    if (c.num().terms()[0].coeff < 0) {
      negative = true;
      c = -c;
    }
    body = c.is_one() ? basis : c.to_string() + "*" + basis;
  } else {
    body = "(" + coeff.to_string() + ")*" + basis;
  }
  if (out.empty())
    out = negative ? "-" + body : body;
  else
    out += (negative ? " - " : " + ") + body;
}

}  // namespace

std::vector<std::size_t> indices_of(IndexSet set) {
  std::vector<std::size_t> out;
  for (; set != 0; set &= set - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(set)));
  return out;
}

bool BasisLess::operator()(IndexSet a, IndexSet b) const {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  while (a != 0 && b != 0) {
    int la = std::countr_zero(a), lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

// ---------------------------------------------------------------- DiffForm

DiffForm::DiffForm(ChartRef chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) fail(ErrorKind::DegreeMismatch, "negative form degree");
}

DiffForm DiffForm::function(const RatFn& f) {
  DiffForm r(f.chart(), 0);
  r.add_term(0, f);
  return r;
}

DiffForm DiffForm::differential(ChartRef chart, std::size_t coordinate) {
  if (coordinate >= chart->dim()) fail(ErrorKind::UnknownVariable, "differential of a non-coordinate");
  DiffForm r(chart, 1);
  r.add_term(IndexSet(1) << coordinate, RatFn::constant(chart, 1));
  return r;
}

DiffForm DiffForm::one_form(ChartRef chart, const std::vector<RatFn>& coefficients) {
  if (coefficients.size() != chart->dim()) fail(ErrorKind::InvalidArgument, "one coefficient per coordinate expected");
  DiffForm r(chart, 1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) r.add_term(IndexSet(1) << i, coefficients[i]);
  return r;
}

RatFn DiffForm::coefficient(IndexSet set) const {
  auto it = terms_.find(set);
  return it == terms_.end() ? RatFn(chart_) : it->second;
}

RatFn DiffForm::component(std::size_t i) const {
  if (degree_ != 1) fail(ErrorKind::DegreeMismatch, "component of a form that is not a 1-form");
  return coefficient(IndexSet(1) << i);
}

std::vector<RatFn> DiffForm::components() const {
  std::vector<RatFn> out;
  for (std::size_t i = 0; i < chart_->dim(); ++i) out.push_back(component(i));
  return out;
}

RatFn DiffForm::as_function() const {
  if (degree_ != 0) fail(ErrorKind::DegreeMismatch, "form is not a function");
  return coefficient(0);
}

void DiffForm::add_term(IndexSet set, const RatFn& coeff) {
  require_same_chart(chart_, coeff.chart());
  if (std::popcount(set) != degree_) fail(ErrorKind::DegreeMismatch, "index tuple does not match form degree");
  if (coeff.is_zero()) return;
  auto it = terms_.find(set);
  if (it == terms_.end()) {
    terms_.emplace(set, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

void DiffForm::check(const DiffForm& other) const {
  require_same_chart(chart_, other.chart_);
  if (degree_ != other.degree_) fail(ErrorKind::DegreeMismatch, "forms of different degrees");
}

DiffForm DiffForm::operator-() const {
  DiffForm r(*this);
  for (auto& [k, v] : r.terms_) v = -v;
  return r;
}

DiffForm& DiffForm::operator+=(const DiffForm& other) {
  check(other);
  for (const auto& [k, v] : other.terms_) add_term(k, v);
  return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& other) {
  check(other);
  for (const auto& [k, v] : other.terms_) add_term(k, -v);
  return *this;
}

DiffForm& DiffForm::operator*=(const RatFn& f) {
  require_same_chart(chart_, f.chart());
  if (f.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= f;
  return *this;
}

DiffForm DiffForm::scaled(const mpq_class& c) const {
  DiffForm r(chart_, degree_);
  for (const auto& [k, v] : terms_) r.add_term(k, v.scaled(c));
  return r;
}

DiffForm DiffForm::transfer(const ChartRef& target) const {
  DiffForm r(target, degree_);
  std::vector<std::size_t> map(chart_->dim());
  for (std::size_t i = 0; i < chart_->dim(); ++i) {
    auto j = target->index_of(chart_->name(i));
    if (!j || *j >= target->dim()) fail(ErrorKind::UnknownVariable, "coordinate '" + chart_->name(i) + "' missing on target chart");
    map[i] = *j;
  }
  for (const auto& [k, v] : terms_) {
    // Re-index and restore increasing order with the induced sign.
    std::vector<std::size_t> idx;
    for (auto i : indices_of(k)) idx.push_back(map[i]);
    bool negative = false;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (idx[a] > idx[b]) negative = !negative;
    IndexSet set = 0;
    for (auto i : idx) set |= IndexSet(1) << i;
    RatFn c = v.transfer(target);
    r.add_term(set, negative ? -c : c);
  }
  return r;
}

bool DiffForm::operator==(const DiffForm& other) const {
  if (!same_chart(chart_, other.chart_) || degree_ != other.degree_) return false;
  if (terms_.size() != other.terms_.size()) return false;
  auto a = terms_.begin();
  for (auto b = other.terms_.begin(); b != other.terms_.end(); ++a, ++b)
    if (a->first != b->first || a->second != b->second) return false;
  return true;
}

std::string DiffForm::to_string() const {
  if (terms_.empty()) return "0";
  if (degree_ == 0) return terms_.begin()->second.to_string();
  std::string out;
  for (const auto& [k, v] : terms_) append_term(out, v, basis_string(*chart_, k));
  return out;
}

DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
DiffForm operator*(const RatFn& f, DiffForm a) { return a *= f; }
DiffForm operator*(DiffForm a, const RatFn& f) { return a *= f; }

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  require_same_chart(a.chart(), b.chart());
  DiffForm r(a.chart(), a.degree() + b.degree());
  if (r.degree() > static_cast<int>(a.chart()->dim())) return r;
  for (const auto& [ka, va] : a.terms())
    for (const auto& [kb, vb] : b.terms()) {
      if ((ka & kb) != 0) continue;
      RatFn c = va * vb;
      r.add_term(ka | kb, wedge_sign_negative(ka, kb) ? -c : c);
    }
  return r;
}

DiffForm wedge(std::initializer_list<DiffForm> forms) {
  if (forms.size() == 0) fail(ErrorKind::InvalidArgument, "empty wedge product");
  auto it = forms.begin();
  DiffForm r = *it;
  for (++it; it != forms.end(); ++it) r = wedge(r, *it);
  return r;
}

DiffForm ext_d(const DiffForm& a) {
  DiffForm r(a.chart(), a.degree() + 1);
  std::size_t n = a.chart()->dim();
  for (const auto& [k, v] : a.terms())
    for (std::size_t j = 0; j < n; ++j) {
      IndexSet bit = IndexSet(1) << j;
      if ((k & bit) != 0) continue;
      RatFn c = v.derivative(j);
      if (c.is_zero()) continue;
      bool negative = (std::popcount(k & (bit - 1)) & 1) != 0;
      r.add_term(k | bit, negative ? -c : c);
    }
  return r;
}

// ---------------------------------------------------------------- VectorField

VectorField::VectorField(ChartRef chart) : chart_(chart), coeffs_(chart->dim(), RatFn(chart)) {}

VectorField::VectorField(ChartRef chart, std::vector<RatFn> coefficients)
    : chart_(std::move(chart)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != chart_->dim()) fail(ErrorKind::InvalidArgument, "one coefficient per coordinate expected");
  for (const auto& c : coeffs_) require_same_chart(chart_, c.chart());
}

VectorField VectorField::partial(ChartRef chart, std::size_t coordinate) {
  if (coordinate >= chart->dim()) fail(ErrorKind::UnknownVariable, "partial derivative along a non-coordinate");
  VectorField r(chart);
  r.coeffs_[coordinate] = RatFn::constant(chart, 1);
  return r;
}

bool VectorField::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

RatFn VectorField::apply(const RatFn& f) const {
  require_same_chart(chart_, f.chart());
  RatFn r(chart_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!coeffs_[i].is_zero()) r += coeffs_[i] * f.derivative(i);
  return r;
}

VectorField VectorField::operator-() const {
  VectorField r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  require_same_chart(chart_, other.chart_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  require_same_chart(chart_, other.chart_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

VectorField& VectorField::operator*=(const RatFn& f) {
  for (auto& c : coeffs_) c *= f;
  return *this;
}

bool VectorField::operator==(const VectorField& other) const {
  return same_chart(chart_, other.chart_) && coeffs_ == other.coeffs_;
}

std::string VectorField::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i].is_zero()) append_term(out, coeffs_[i], "@" + chart_->name(i));
  }
  return out.empty() ? "0" : out;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(const RatFn& f, VectorField a) { return a *= f; }

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_chart(x.chart(), y.chart());
  std::vector<RatFn> c;
  for (std::size_t i = 0; i < x.chart()->dim(); ++i) c.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VectorField(x.chart(), std::move(c));
}

DiffForm interior(const VectorField& x, const DiffForm& a) {
  require_same_chart(x.chart(), a.chart());
  if (a.degree() == 0) fail(ErrorKind::DegreeMismatch, "contraction of a function");
  DiffForm r(a.chart(), a.degree() - 1);
  for (const auto& [k, v] : a.terms()) {
    auto idx = indices_of(k);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const RatFn& xi = x[idx[pos]];
      if (xi.is_zero()) continue;
      RatFn c = xi * v;
      r.add_term(k & ~(IndexSet(1) << idx[pos]), (pos & 1U) != 0 ? -c : c);
    }
  }
  return r;
}

DiffForm lie_derivative(const VectorField& x, const DiffForm& a) {
  if (a.degree() == 0) return DiffForm::function(x.apply(a.as_function()));
  return ext_d(interior(x, a)) + interior(x, ext_d(a));
}

bool is_integrable(const DiffForm& w) {
  if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "integrability is defined for 1-forms");
  return wedge(w, ext_d(w)).is_zero();
}

bool same_foliation(const DiffForm& a, const DiffForm& b) {
  if (a.degree() != 1 || b.degree() != 1) fail(ErrorKind::DegreeMismatch, "foliations are given by 1-forms");
  if (a.is_zero() || b.is_zero()) fail(ErrorKind::ZeroForm, "zero form does not define a foliation");
  return wedge(a, b).is_zero();
}

std::optional<RatFn> proportionality(const DiffForm& a, const DiffForm& b) {
  require_same_chart(a.chart(), b.chart());
  if (b.is_zero()) fail(ErrorKind::ZeroForm, "proportionality to the zero form");
  if (a.degree() != b.degree()) return std::nullopt;
  const auto& [k, v] = *b.terms().begin();
  RatFn lambda = a.coefficient(k) / v;
  DiffForm diff = a - lambda * b;
  if (!diff.is_zero()) return std::nullopt;
  return lambda;
}

// ---------------------------------------------------------------- pullback

ChartMap::ChartMap(ChartRef source, ChartRef target, std::vector<RatFn> coordinate_images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(coordinate_images)) {
  if (source_->characteristic() != target_->characteristic())
    fail(ErrorKind::CharacteristicMismatch, "map between charts of different characteristic");
  if (images_.size() == target_->dim()) {
    for (std::size_t i = target_->dim(); i < target_->nvars(); ++i) {
      auto j = source_->index_of(target_->name(i));
      if (!j) fail(ErrorKind::UnknownVariable, "parameter '" + target_->name(i) + "' missing on source chart");
      images_.push_back(RatFn::variable(source_, *j));
    }
  }
  if (images_.size() != target_->nvars()) fail(ErrorKind::InvalidArgument, "map needs one image per target variable");
  for (const auto& f : images_) require_same_chart(source_, f.chart());
}

RatFn pullback(const ChartMap& map, const RatFn& f) {
  require_same_chart(map.target(), f.chart());
  return f.compose(map.images());
}

DiffForm pullback(const ChartMap& map, const DiffForm& a) {
  require_same_chart(map.target(), a.chart());
  std::vector<DiffForm> dimg;
  for (std::size_t i = 0; i < map.target()->dim(); ++i) dimg.push_back(ext_d(DiffForm::function(map.images()[i])));
  DiffForm r(map.source(), a.degree());
  for (const auto& [k, v] : a.terms()) {
    DiffForm term = DiffForm::function(v.compose(map.images()));
    for (auto i : indices_of(k)) term = wedge(term, dimg[i]);
    r += term;
  }
  return r;
}

}  // namespace pfaff

#include "pfaff/gv.hpp"

#include <sstream>

namespace pfaff {

namespace {

mpq_class factorial(std::size_t k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return mpq_class(r);
}

DiffForm wedge_all(const std::vector<DiffForm>& forms, const ChartRef& chart) {
  DiffForm out = DiffForm::function(RatFn::constant(chart, 1));
  for (const auto& f : forms) out = wedge(out, f);
  return out;
}

}  // namespace

GVSequence::GVSequence(std::vector<DiffForm> forms, std::optional<std::size_t> declared_length)
    : forms_(std::move(forms)), declared_(declared_length) {
  if (forms_.empty()) fail(ErrorKind::InvalidArgument, "empty sequence");
  for (const auto& w : forms_) {
    require_same_chart(forms_.front().chart(), w.chart());
    if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "sequence entries must be 1-forms");
  }
  if (forms_.front().is_zero()) fail(ErrorKind::ZeroForm, "leading form of a sequence is zero");
  if (declared_) {
    if (*declared_ == 0) fail(ErrorKind::InvalidArgument, "declared length must be positive");
    for (std::size_t k = *declared_; k < forms_.size(); ++k)
      if (!forms_[k].is_zero()) fail(ErrorKind::NotFinite, "nonzero form beyond the declared length");
    if (forms_.size() < *declared_) forms_.resize(*declared_, DiffForm(chart(), 1));
  }
}

std::size_t GVSequence::support_length() const {
  std::size_t n = forms_.size();
  while (n > 0 && forms_[n - 1].is_zero()) --n;
  return n;
}

FormalOmega GVSequence::omega(std::size_t order) const {
  std::vector<DiffForm> c = forms_;
  if (c.size() > order + 1) c.resize(order + 1, DiffForm(chart(), 1));
  return FormalOmega(std::move(c), order);
}

std::string GVSequence::to_string() const {
  std::ostringstream out;
  out << (declared_ ? "gv finite [" : "gv [");
  std::size_t n = declared_ ? *declared_ : forms_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) out << ", ";
    out << forms_[k].to_string();
  }
  out << "]";
  return out.str();
}

GVSequence gv_from_field(const DiffForm& w, const VectorField& x, std::size_t order) {
  require_same_chart(w.chart(), x.chart());
  if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "gv_from_field needs a 1-form");
  if (!is_integrable(w)) fail(ErrorKind::NotIntegrable, "form is not integrable");
  if (!interior(x, w).as_function().is_one()) fail(ErrorKind::NotNormalized, "w(X) is not 1");
  std::vector<DiffForm> out{w};
  for (std::size_t k = 1; k <= order; ++k) out.push_back(lie_derivative(x, out.back()));
  return GVSequence(std::move(out));
}

DefectReport gv_verify(const GVSequence& s) {
  std::size_t order = s.size() - 1;
  if (auto len = s.declared_length()) order = std::max(s.size() + 2, 2 * (*len - 1));
  return DefectReport{integrability_defect(s.omega(order))};
}

GVSequence gv_rescale(const GVSequence& s, const RatFn& f) {
  if (f.is_zero()) fail(ErrorKind::ZeroFunction, "rescaling by zero");
  FormalOmega t = substitute(s.omega(s.size() - 1), Substitution::scaling(f));
  return GVSequence(t.coefficients(), s.declared_length());
}

Substitution shift_substitution(const RatFn& f, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "shift index must be at least 1");
  if (k == 1) {
    const ChartRef& c = f.chart();
    return Substitution({RatFn(c), RatFn::constant(c, 1), f.scaled(mpq_class(-1, 2)), (f * f).scaled(mpq_class(1, 3))});
  }
  return Substitution::monomial(f.scaled(-1 / factorial(k + 1)), k);
}

GVSequence gv_shift(const GVSequence& s, const RatFn& f, std::size_t k) {
  require_same_chart(s.chart(), f.chart());
  if (f.is_zero()) return s;
  FormalOmega t = substitute(s.omega(s.size() - 1), shift_substitution(f, k));
  return GVSequence(t.coefficients());
}

bool FlagReport::all_closed() const {
  for (std::size_t k = 1; k < closed.size(); ++k)
    if (!closed[k]) return false;
  return true;
}

FlagReport flag_forms(const GVSequence& s) {
  FlagReport out;
  out.thetas.push_back(s[0]);
  out.closed.push_back(ext_d(s[0]).is_zero());
  for (std::size_t k = 1; k < s.size(); ++k) {
    DiffForm next = wedge(out.thetas.back(), s[k]);
    if (next.is_zero()) {
      out.n = k;
      break;
    }
    out.thetas.push_back(next);
    out.closed.push_back(ext_d(next).is_zero());
  }
  if (out.n == 0) fail(ErrorKind::SequenceTooShort, "flag does not degenerate within the stored order");
  for (std::size_t k = 0; k < out.n; ++k) {
    std::vector<DiffForm> rest;
    for (std::size_t j = 0; j < out.n; ++j)
      if (j != k) rest.push_back(s[j]);
    out.theta_hats.push_back(wedge_all(rest, s.chart()));
  }
  return out;
}

bool Decomposition::all_first_integrals() const {
  for (bool b : first_integral)
    if (!b) return false;
  return true;
}

Decomposition flag_decompose(const GVSequence& s, const FlagReport& flag) {
  std::size_t n = flag.n;
  if (n >= s.size()) fail(ErrorKind::SequenceTooShort, "w_n is beyond the stored order");
  Decomposition out;
  DiffForm sum(s.chart(), 1);
  for (std::size_t k = 0; k < n; ++k) {
    DiffForm num = wedge(s[n], flag.theta_hats[k]);
    DiffForm den = wedge(s[k], flag.theta_hats[k]);
    auto a = proportionality(num, den);
    if (!a) fail(ErrorKind::DecompositionFails, "w_n is not in the span of the flag");
    sum += *a * s[k];
    out.a.push_back(*a);
  }
  if (sum != s[n]) fail(ErrorKind::DecompositionFails, "w_n is not in the span of the flag");
  for (std::size_t k = 1; k < n; ++k)
    out.first_integral.push_back(wedge(flag.theta(), ext_d(DiffForm::function(out.a[k]))).is_zero());
  return out;
}

InvariantReport gv_invariant(const GVSequence& s) {
  if (s.size() < 3) fail(ErrorKind::SequenceTooShort, "the invariant needs three forms");
  DiffForm form = wedge({s[0], s[1], s[2]});
  bool matches = form == -wedge(s[1], ext_d(s[1]));
  bool closed = ext_d(form).is_zero();
  return InvariantReport{form, matches, closed};
}

FiniteReport finite_gv_verify(const GVSequence& s) {
  std::size_t len = s.declared_length().value_or(s.support_length());
  if (len < 3) fail(ErrorKind::SequenceTooShort, "finite verification needs N >= 2");
  std::size_t n = len - 1;
  FiniteReport out;
  out.n = n;
  for (std::size_t k = 2; k <= n; ++k)
    for (std::size_t l = k + 1; l <= n; ++l)
      if (!wedge(s[k], s[l]).is_zero()) out.tangency_failures.emplace_back(k, l);
  auto at = [&](std::size_t k) { return k < s.size() ? s[k] : DiffForm(s.chart(), 1); };
  for (std::size_t k = 0; k <= n; ++k) {
    DiffForm defect = ext_d(at(k)) - wedge(at(0), at(k + 1));
    if (k >= 1) defect -= wedge(at(1), at(k)).scaled(mpq_class(static_cast<long>(k) - 1));
    out.relation_defects.push_back(defect);
  }
  return out;
}

std::vector<DiffForm> finite_gv_rederive(const DiffForm& w0, const DiffForm& w1, const DiffForm& w2, std::size_t n) {
  if (ext_d(w1).is_zero()) fail(ErrorKind::InvalidArgument, "re-derivation needs dw_1 != 0");
  DiffForm base = wedge(w0, w2);
  if (base.is_zero()) fail(ErrorKind::RelationsFail, "w_0 ^ w_2 vanishes");
  std::vector<DiffForm> out{w0, w1, w2};
  for (std::size_t k = 2; k < n; ++k) {
    DiffForm r = ext_d(out[k]) - wedge(w1, out[k]).scaled(mpq_class(static_cast<long>(k) - 1));
    auto mu = proportionality(r, base);
    if (!mu) fail(ErrorKind::RelationsFail, "relation " + std::to_string(k) + " has no solution tangent to w_2");
    out.push_back(*mu * w2);
  }
  out.resize(n + 1, DiffForm(w0.chart(), 1));
  return out;
}

}  // namespace pfaff

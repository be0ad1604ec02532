#include "pfaff/zseries.hpp"

#include <sstream>

namespace pfaff {

namespace {

using Series = std::vector<RatFn>;
using FormSeries = std::vector<DiffForm>;

mpq_class factorial(std::size_t k) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return mpq_class(r);
}

Series zeros(const ChartRef& chart, std::size_t n) { return Series(n + 1, RatFn(chart)); }

Series multiply(const Series& a, const Series& b, std::size_t n) {
  Series out = zeros(a.front().chart(), n);
  for (std::size_t i = 0; i < a.size() && i <= n; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size() && i + j <= n; ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series inverse(const Series& a, std::size_t n) {
  if (a.front().is_zero()) fail(ErrorKind::VanishingLeadCoefficient, "series with zero constant term");
  RatFn lead = a.front().inverse();
  Series out = zeros(a.front().chart(), n);
  out[0] = lead;
  for (std::size_t k = 1; k <= n; ++k) {
    RatFn acc(a.front().chart());
    for (std::size_t j = 1; j <= k && j < a.size(); ++j)
      if (!a[j].is_zero()) acc += a[j] * out[k - j];
    out[k] = -(acc * lead);
  }
  return out;
}

FormSeries scale(const Series& s, const FormSeries& w, std::size_t n) {
  FormSeries out(n + 1, DiffForm(w.front().chart(), w.front().degree()));
  for (std::size_t i = 0; i < s.size() && i <= n; ++i) {
    if (s[i].is_zero()) continue;
    for (std::size_t j = 0; j < w.size() && i + j <= n; ++j)
      if (!w[j].is_zero()) out[i + j] += s[i] * w[j];
  }
  return out;
}

}  // namespace

FormalOmega::FormalOmega(std::vector<DiffForm> coefficients, std::size_t order)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) fail(ErrorKind::InvalidArgument, "empty coefficient list");
  chart_ = coefficients_.front().chart();
  for (const auto& w : coefficients_) {
    require_same_chart(chart_, w.chart());
    if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "coefficients of Omega must be 1-forms");
  }
  if (coefficients_.size() > order + 1) fail(ErrorKind::InvalidArgument, "more coefficients than the order allows");
  coefficients_.resize(order + 1, DiffForm(chart_, 1));
}

bool FormalOmega::operator==(const FormalOmega& other) const { return coefficients_ == other.coefficients_; }

std::string FormalOmega::to_string() const {
  std::ostringstream out;
  out << "dz";
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    if (coefficients_[k].is_zero()) continue;
    out << " + ";
    if (k == 1) out << "z*";
    if (k > 1) out << "z^" << k << "/" << factorial(k).get_str() << "*";
    out << "(" << coefficients_[k].to_string() << ")";
  }
  return out.str();
}

FormalOmega omega_assemble(std::vector<DiffForm> sequence, std::size_t order) {
  return FormalOmega(std::move(sequence), order);
}

std::vector<DiffForm> integrability_defect(const FormalOmega& omega) {
  const ChartRef& chart = omega.chart();
  std::size_t n = omega.order();
  // W = sum w_k z^k with w_k = omega_k / k!; Q = dW/dz; P = d_M W.
  FormSeries w;
  for (std::size_t k = 0; k <= n; ++k) w.push_back(omega[k].scaled(1 / factorial(k)));
  std::vector<DiffForm> out;
  for (std::size_t k = 0; k < n; ++k) {
    DiffForm acc = ext_d(w[k]);
    for (std::size_t a = 0; a <= k; ++a) {
      std::size_t b = k - a;
      acc -= wedge(w[a], w[b + 1].scaled(mpq_class(static_cast<unsigned long>(b + 1))));
    }
    out.push_back(acc.scaled(factorial(k)));
  }
  if (out.empty()) out.emplace_back(chart, 2);
  return out;
}

bool all_zero(const std::vector<DiffForm>& forms) {
  for (const auto& f : forms)
    if (!f.is_zero()) return false;
  return true;
}

Substitution::Substitution(std::vector<RatFn> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.size() < 2) fail(ErrorKind::InvalidArgument, "substitution needs a linear coefficient");
  for (const auto& f : coeffs_) require_same_chart(coeffs_.front().chart(), f.chart());
  if (coeffs_[1].is_zero()) fail(ErrorKind::VanishingLeadCoefficient, "substitution with f_1 = 0");
}

Substitution Substitution::identity(const ChartRef& chart) {
  return Substitution({RatFn(chart), RatFn::constant(chart, 1)});
}

Substitution Substitution::scaling(const RatFn& f) { return Substitution({RatFn(f.chart()), f}); }

Substitution Substitution::translation(const RatFn& c) {
  return Substitution({c, RatFn::constant(c.chart(), 1)});
}

Substitution Substitution::monomial(const RatFn& f, std::size_t k) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "monomial substitution needs k >= 1");
  std::vector<RatFn> c(k + 2, RatFn(f.chart()));
  c[1] = RatFn::constant(f.chart(), 1);
  c[k + 1] += f;
  return Substitution(std::move(c));
}

Substitution Substitution::mobius(const RatFn& g, std::size_t order) {
  std::vector<RatFn> c(order + 2, RatFn(g.chart()));
  RatFn term = RatFn::constant(g.chart(), 1);
  for (std::size_t k = 1; k < c.size(); ++k) {
    c[k] = term;
    term *= -g;
  }
  return Substitution(std::move(c));
}

RatFn Substitution::operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : RatFn(chart()); }

std::string Substitution::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << coeffs_[k].to_string() << ")";
    if (k == 1) out << "*t";
    if (k > 1) out << "*t^" << k;
  }
  return out.str();
}

FormalOmega substitute(const FormalOmega& omega, const Substitution& s) {
  const ChartRef& chart = omega.chart();
  require_same_chart(chart, s.chart());
  std::size_t n = omega.order();
  Series z = zeros(chart, n);
  for (std::size_t k = 0; k <= n; ++k) z[k] = s[k];
  Series dz_dt = zeros(chart, n);
  for (std::size_t k = 0; k <= n; ++k)
    dz_dt[k] = s[k + 1].scaled(mpq_class(static_cast<unsigned long>(k + 1)));

  // Numerator: sum_k t^k df_k + sum_k w_k z(t)^k.
  FormSeries num(n + 1, DiffForm(chart, 1));
  for (std::size_t k = 0; k <= n; ++k) num[k] += ext_d(DiffForm::function(s[k]));
  Series power = zeros(chart, n);
  power[0] = RatFn::constant(chart, 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) power = multiply(power, z, n);
    if (omega[k].is_zero()) continue;
    FormSeries single{omega[k].scaled(1 / factorial(k))};
    FormSeries term = scale(power, single, n);
    for (std::size_t j = 0; j <= n; ++j) num[j] += term[j];
  }
  FormSeries result = scale(inverse(dz_dt, n), num, n);
  for (std::size_t j = 0; j <= n; ++j) result[j] = result[j].scaled(factorial(j));
  FormalOmega out(std::move(result), n);
  if (!s.fixes_origin() || omega.shifted_origin()) out.mark_shifted_origin();
  return out;
}

Substitution compose(const Substitution& first, const Substitution& second, std::size_t order) {
  require_same_chart(first.chart(), second.chart());
  const ChartRef& chart = first.chart();
  order = std::max<std::size_t>(order, 1);
  Series inner = zeros(chart, order);
  for (std::size_t k = 0; k <= order; ++k) inner[k] = second[k];
  Series out = zeros(chart, order);
  Series power = zeros(chart, order);
  power[0] = RatFn::constant(chart, 1);
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) power = multiply(power, inner, order);
    RatFn f = first[k];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j <= order; ++j) out[j] += f * power[j];
  }
  return Substitution(std::move(out));
}

}  // namespace pfaff

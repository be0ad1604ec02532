#include <algorithm>

#include "pfaff/field.hpp"

namespace pfaff {

namespace {

// Scales num and den so that den has leading coefficient 1.
void make_den_monic(MultiPoly& num, MultiPoly& den) {
  const mpq_class& lc = den.leading_coefficient();
  if (lc == 1) return;
  mpq_class inv = scalar::inverse(lc, den.chart()->characteristic());
  num = num.scaled(inv);
  den = den.scaled(inv);
}

}  // namespace

RatFn::RatFn(ChartRef chart) : num_(chart), den_(MultiPoly::constant(chart, 1)) {}

RatFn::RatFn(const MultiPoly& poly) : num_(poly), den_(MultiPoly::constant(poly.chart(), 1)) {}

RatFn::RatFn(MultiPoly num, MultiPoly den, bool) : num_(std::move(num)), den_(std::move(den)) {}

RatFn RatFn::constant(ChartRef chart, const mpq_class& c) { return RatFn(MultiPoly::constant(std::move(chart), c)); }

RatFn RatFn::constant(ChartRef chart, long c) { return RatFn(MultiPoly::constant(std::move(chart), c)); }

RatFn RatFn::variable(ChartRef chart, std::size_t index) { return RatFn(MultiPoly::variable(std::move(chart), index)); }

RatFn RatFn::normalize(const MultiPoly& num, const MultiPoly& den) {
  require_same_chart(num.chart(), den.chart());
  if (den.is_zero()) fail(ErrorKind::ZeroDenominator, "rational function with zero denominator");
  if (num.is_zero()) return RatFn(num.chart());
  MultiPoly n = num, d = den;
  if (!d.is_constant()) {
    MultiPoly g = gcd(n, d);
    if (!g.is_one()) {
      n = n.exact_div(g);
      d = d.exact_div(g);
    }
  }
  make_den_monic(n, d);
  return RatFn(std::move(n), std::move(d), true);
}

mpq_class RatFn::constant_value() const {
  if (!is_constant()) fail(ErrorKind::InvalidArgument, "rational function is not constant");
  return num_.constant_value();
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_, true); }

RatFn& RatFn::operator+=(const RatFn& other) {
  require_same_chart(chart(), other.chart());
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_ == other.den_) {
    MultiPoly n = num_ + other.num_;
    if (den_.is_one() || n.is_zero()) {
      if (n.is_zero()) return *this = RatFn(chart());
      num_ = std::move(n);
      return *this;
    }
    return *this = normalize(n, den_);
  }
  MultiPoly g = gcd(den_, other.den_);
  MultiPoly b1 = den_.exact_div(g), d1 = other.den_.exact_div(g);
  MultiPoly n = num_ * d1 + other.num_ * b1;
  if (n.is_zero()) return *this = RatFn(chart());
  MultiPoly g2 = g.is_one() ? g : gcd(n, g);
  MultiPoly den = b1 * (g2.is_one() ? other.den_ : other.den_.exact_div(g2));
  if (!g2.is_one()) n = n.exact_div(g2);
  make_den_monic(n, den);
  num_ = std::move(n);
  den_ = std::move(den);
  return *this;
}

RatFn& RatFn::operator-=(const RatFn& other) { return *this += -other; }

RatFn& RatFn::operator*=(const RatFn& other) {
  require_same_chart(chart(), other.chart());
  if (is_zero()) return *this;
  if (other.is_zero()) return *this = RatFn(chart());
  if (den_.is_one() && other.den_.is_one()) {
    num_ *= other.num_;
    return *this;
  }
  MultiPoly g1 = gcd(num_, other.den_);
  MultiPoly g2 = gcd(other.num_, den_);
  MultiPoly n = (g1.is_one() ? num_ : num_.exact_div(g1)) * (g2.is_one() ? other.num_ : other.num_.exact_div(g2));
  MultiPoly d = (g2.is_one() ? den_ : den_.exact_div(g2)) * (g1.is_one() ? other.den_ : other.den_.exact_div(g1));
  make_den_monic(n, d);
  num_ = std::move(n);
  den_ = std::move(d);
  return *this;
}

RatFn& RatFn::operator/=(const RatFn& other) { return *this *= other.inverse(); }

RatFn RatFn::inverse() const {
  if (is_zero()) fail(ErrorKind::DivisionByZero, "division by the zero function");
  MultiPoly n = den_, d = num_;
  make_den_monic(n, d);
  return RatFn(std::move(n), std::move(d), true);
}

RatFn RatFn::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  if (n == 0) return constant(chart(), 1);
  return RatFn(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)), true);
}

RatFn RatFn::scaled(const mpq_class& c) const {
  mpq_class v = c;
  scalar::reduce(v, chart()->characteristic());
  if (v == 0) return RatFn(chart());
  return RatFn(num_.scaled(v), den_, true);
}

RatFn RatFn::derivative(std::size_t var) const {
  if (den_.is_constant()) return RatFn(num_.derivative(var).scaled(scalar::inverse(den_.constant_value(), chart()->characteristic())));
  MultiPoly dn = num_.derivative(var), dd = den_.derivative(var);
  if (dd.is_zero()) return normalize(dn, den_);
  return normalize(dn * den_ - num_ * dd, den_ * den_);
}

RatFn RatFn::compose(std::span<const RatFn> values) const {
  const ChartRef& src = chart();
  if (values.size() != src->nvars()) fail(ErrorKind::InvalidArgument, "substitution needs one value per variable");
  ChartRef target = values.empty() ? src : values[0].chart();
  for (const auto& v : values) require_same_chart(target, v.chart());
  if (target->characteristic() != src->characteristic())
    fail(ErrorKind::CharacteristicMismatch, "substitution changes characteristic");

  std::size_t n = src->nvars();
  std::vector<unsigned> top(n, 0);
  for (std::size_t i = 0; i < n; ++i) top[i] = std::max(num_.degree_in(i), den_.degree_in(i));

  // Powers of numerators and denominators of the substituted values.
  std::vector<std::vector<MultiPoly>> npow(n), dpow(n);
  for (std::size_t i = 0; i < n; ++i) {
    npow[i].push_back(MultiPoly::constant(target, 1));
    dpow[i].push_back(MultiPoly::constant(target, 1));
    for (unsigned k = 1; k <= top[i]; ++k) {
      npow[i].push_back(npow[i].back() * values[i].num());
      dpow[i].push_back(dpow[i].back() * values[i].den());
    }
  }
  auto eval = [&](const MultiPoly& p) {
    MultiPoly acc(target);
    for (const auto& t : p.terms()) {
      MultiPoly term = MultiPoly::constant(target, t.coeff);
      for (std::size_t i = 0; i < n; ++i) {
        if (top[i] == 0) continue;
        unsigned e = t.exp[i];
        if (e > 0) term *= npow[i][e];
        if (top[i] - e > 0) term *= dpow[i][top[i] - e];
      }
      acc += term;
    }
    return acc;
  };
  MultiPoly num = eval(num_);
  MultiPoly den = eval(den_);
  if (den.is_zero()) fail(ErrorKind::DivisionByZero, "substitution makes the denominator vanish");
  return normalize(num, den);
}

RatFn RatFn::transfer(const ChartRef& target) const {
  return RatFn(num_.transfer(target), den_.transfer(target), true);
}

bool RatFn::operator==(const RatFn& other) const { return num_ == other.num_ && den_ == other.den_; }

std::string RatFn::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

RatFn operator+(RatFn a, const RatFn& b) { return a += b; }
RatFn operator-(RatFn a, const RatFn& b) { return a -= b; }
RatFn operator*(RatFn a, const RatFn& b) { return a *= b; }
RatFn operator/(RatFn a, const RatFn& b) { return a /= b; }

}  // namespace pfaff

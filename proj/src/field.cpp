#include "pfaff/field.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <sstream>

namespace pfaff {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::CharacteristicMismatch: return "CharacteristicMismatch";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotExact: return "NotExact";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::ZeroForm: return "ZeroForm";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotIntegrable: return "NotIntegrable";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::VanishingLeadCoefficient: return "VanishingLeadCoefficient";
    case ErrorKind::ZeroFunction: return "ZeroFunction";
    case ErrorKind::DecompositionFails: return "DecompositionFails";
    case ErrorKind::SequenceTooShort: return "SequenceTooShort";
    case ErrorKind::RelationsFail: return "RelationsFail";
    case ErrorKind::GaugeBreaksRelations: return "GaugeBreaksRelations";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::PClosedCase: return "PClosedCase";
    case ErrorKind::NotExpressible: return "NotExpressible";
    case ErrorKind::GcdDegenerate: return "GcdDegenerate";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::RadialFoliation: return "RadialFoliation";
    case ErrorKind::NotRadialCubicPart: return "NotRadialCubicPart";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Usage: return "UsageError";
  }
  return "Error";
}

// ---------------------------------------------------------------- Chart

Chart::Chart(std::vector<std::string> coordinates, unsigned long characteristic,
             std::vector<std::string> parameters)
    : names_(std::move(coordinates)), ncoords_(names_.size()), p_(characteristic) {
  names_.insert(names_.end(), parameters.begin(), parameters.end());
  if (names_.size() > kMaxVariables)
    fail(ErrorKind::InvalidArgument, "chart has more than 16 variables");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) fail(ErrorKind::InvalidArgument, "empty variable name");
    if (!seen.insert(n).second) fail(ErrorKind::InvalidArgument, "duplicate variable name '" + n + "'");
  }
  if (p_ != 0) {
    mpz_class pz(p_);
    if (p_ < 2 || mpz_probab_prime_p(pz.get_mpz_t(), 30) == 0)
      fail(ErrorKind::InvalidArgument, "characteristic " + std::to_string(p_) + " is not a prime");
    if (p_ >= (1UL << 31)) fail(ErrorKind::InvalidArgument, "characteristic must be below 2^31");
  }
}

std::vector<std::string> Chart::coordinates() const {
  return {names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(ncoords_)};
}

std::vector<std::string> Chart::parameters() const {
  return {names_.begin() + static_cast<std::ptrdiff_t>(ncoords_), names_.end()};
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

bool Chart::operator==(const Chart& other) const {
  return p_ == other.p_ && ncoords_ == other.ncoords_ && names_ == other.names_;
}

ChartRef make_chart(std::vector<std::string> coordinates, unsigned long characteristic,
                    std::vector<std::string> parameters) {
  return std::make_shared<const Chart>(std::move(coordinates), characteristic, std::move(parameters));
}

bool same_chart(const ChartRef& a, const ChartRef& b) { return a == b || *a == *b; }

void require_same_chart(const ChartRef& a, const ChartRef& b) {
  if (same_chart(a, b)) return;
  if (a->characteristic() != b->characteristic())
    fail(ErrorKind::CharacteristicMismatch, "operands live over different characteristics");
  fail(ErrorKind::ChartMismatch, "operands live on different charts");
}

// ---------------------------------------------------------------- scalars

namespace scalar {

void reduce(mpq_class& q, unsigned long p) {
  if (p == 0) return;
  mpz_class pz(p);
  mpz_class num = q.get_num() % pz;
  if (q.get_den() != 1) {
    mpz_class den = q.get_den() % pz;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
      fail(ErrorKind::DivisionByZero, "denominator vanishes modulo " + std::to_string(p));
    num = (num * inv) % pz;
  }
  if (num < 0) num += pz;
  q = mpq_class(num);
}

mpq_class from_int(long v, unsigned long p) {
  mpq_class q(v);
  reduce(q, p);
  return q;
}

mpq_class inverse(const mpq_class& q, unsigned long p) {
  if (q == 0) fail(ErrorKind::DivisionByZero, "inverse of zero scalar");
  mpq_class r = 1 / q;
  reduce(r, p);
  return r;
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace scalar

// ---------------------------------------------------------------- monomials

unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (auto v : e) d += v;
  return d;
}

int grlex_compare(const Exponents& a, const Exponents& b) {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

namespace {

bool grlex_greater(const Term& a, const Term& b) { return grlex_compare(a.exp, b.exp) > 0; }

Exponents add_exponents(const Exponents& a, const Exponents& b) {
  Exponents r{};
  for (std::size_t i = 0; i < r.size(); ++i) {
    unsigned s = unsigned(a[i]) + b[i];
    if (s > 0xFFFF) fail(ErrorKind::InvalidArgument, "exponent overflow");
    r[i] = static_cast<std::uint16_t>(s);
  }
  return r;
}

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exponents sub_exponents(const Exponents& a, const Exponents& b) {
  Exponents r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint16_t>(a[i] - b[i]);
  return r;
}

// Merge two sorted term lists, b scaled by sign.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract,
                              unsigned long p) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c = i == a.size() ? -1 : j == b.size() ? 1 : grlex_compare(a[i].exp, b[j].exp);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if (subtract) {
        out.back().coeff = -out.back().coeff;
        scalar::reduce(out.back().coeff, p);
      }
    } else {
      mpq_class s = subtract ? mpq_class(a[i].coeff - b[j].coeff) : mpq_class(a[i].coeff + b[j].coeff);
      scalar::reduce(s, p);
      if (s != 0) out.push_back(Term{a[i].exp, s});
      ++i;
      ++j;
    }
  }
  return out;
}

std::string monomial_string(const Chart& chart, const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < chart.nvars(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += chart.name(i);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

namespace {

// Product with monomials packed into mixed-radix integers; earlier variables
// are more significant so integer order is lex order within a degree.
std::optional<std::vector<Term>> packed_product(const MultiPoly& a, const MultiPoly& b) {
  std::size_t n = a.chart()->nvars();
  std::vector<std::uint64_t> radix(n), weight(n);
  unsigned __int128 span = 1;
  for (std::size_t i = 0; i < n; ++i) {
    radix[i] = std::uint64_t(a.degree_in(i)) + b.degree_in(i) + 1;
    span *= radix[i];
    if (span > (static_cast<unsigned __int128>(1) << 62)) return std::nullopt;
  }
  std::uint64_t w = 1;
  for (std::size_t i = n; i-- > 0;) {
    weight[i] = w;
    w *= radix[i];
  }
  auto encode = [&](const Exponents& e) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < n; ++i) k += e[i] * weight[i];
    return k;
  };
  std::vector<std::uint64_t> ka, kb;
  for (const auto& t : a.terms()) ka.push_back(encode(t.exp));
  for (const auto& t : b.terms()) kb.push_back(encode(t.exp));
  std::unordered_map<std::uint64_t, mpq_class> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1U << 20));
  mpq_class prod;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    const mpq_class& ca = a.terms()[i].coeff;
    for (std::size_t j = 0; j < kb.size(); ++j) {
      mpq_mul(prod.get_mpq_t(), ca.get_mpq_t(), b.terms()[j].coeff.get_mpq_t());
      auto [it, inserted] = acc.try_emplace(ka[i] + kb[j]);
      if (inserted)
        it->second = prod;
      else
        it->second += prod;
    }
  }
  unsigned long p = a.chart()->characteristic();
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [key, c] : acc) {
    scalar::reduce(c, p);
    if (c == 0) continue;
    Term t;
    std::uint64_t k = key;
    for (std::size_t i = 0; i < n; ++i) {
      t.exp[i] = static_cast<std::uint16_t>(k / weight[i]);
      k %= weight[i];
    }
    t.coeff = std::move(c);
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(), grlex_greater);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(ChartRef chart) : chart_(std::move(chart)) {}

MultiPoly MultiPoly::constant(ChartRef chart, const mpq_class& c) {
  MultiPoly r(std::move(chart));
  mpq_class v = c;
  scalar::reduce(v, r.chart_->characteristic());
  if (v != 0) r.terms_.push_back(Term{Exponents{}, v});
  return r;
}

MultiPoly MultiPoly::constant(ChartRef chart, long c) { return constant(std::move(chart), mpq_class(c)); }

MultiPoly MultiPoly::variable(ChartRef chart, std::size_t index) {
  if (index >= chart->nvars()) fail(ErrorKind::UnknownVariable, "variable index out of range");
  Exponents e{};
  e[index] = 1;
  return monomial(std::move(chart), e, 1);
}

MultiPoly MultiPoly::monomial(ChartRef chart, const Exponents& exp, const mpq_class& c) {
  MultiPoly r(std::move(chart));
  mpq_class v = c;
  scalar::reduce(v, r.chart_->characteristic());
  if (v != 0) r.terms_.push_back(Term{exp, v});
  return r;
}

MultiPoly MultiPoly::from_terms(ChartRef chart, std::vector<Term> terms) {
  MultiPoly r(std::move(chart));
  unsigned long p = r.chart_->characteristic();
  std::sort(terms.begin(), terms.end(), grlex_greater);
  for (auto& t : terms) {
    if (!r.terms_.empty() && r.terms_.back().exp == t.exp) {
      r.terms_.back().coeff += t.coeff;
    } else {
      if (!r.terms_.empty()) {
        scalar::reduce(r.terms_.back().coeff, p);
        if (r.terms_.back().coeff == 0) r.terms_.pop_back();
      }
      r.terms_.push_back(std::move(t));
    }
  }
  if (!r.terms_.empty()) {
    scalar::reduce(r.terms_.back().coeff, p);
    if (r.terms_.back().coeff == 0) r.terms_.pop_back();
  }
  return r;
}

bool MultiPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && ::pfaff::total_degree(terms_[0].exp) == 0); }

bool MultiPoly::is_one() const { return terms_.size() == 1 && terms_[0].coeff == 1 && ::pfaff::total_degree(terms_[0].exp) == 0; }

mpq_class MultiPoly::constant_value() const {
  if (!is_constant()) fail(ErrorKind::InvalidArgument, "polynomial is not constant");
  return terms_.empty() ? mpq_class(0) : terms_[0].coeff;
}

const mpq_class& MultiPoly::leading_coefficient() const {
  if (terms_.empty()) fail(ErrorKind::InvalidArgument, "leading coefficient of zero polynomial");
  return terms_[0].coeff;
}

const Exponents& MultiPoly::leading_exponents() const {
  if (terms_.empty()) fail(ErrorKind::InvalidArgument, "leading monomial of zero polynomial");
  return terms_[0].exp;
}

unsigned MultiPoly::total_degree() const { return terms_.empty() ? 0 : ::pfaff::total_degree(terms_[0].exp); }

unsigned MultiPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max<unsigned>(d, t.exp[var]);
  return d;
}

bool MultiPoly::involves(std::size_t var) const {
  for (const auto& t : terms_)
    if (t.exp[var] != 0) return true;
  return false;
}

Exponents MultiPoly::min_exponents() const {
  Exponents m{};
  if (terms_.empty()) return m;
  m = terms_[0].exp;
  for (const auto& t : terms_)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], t.exp[i]);
  return m;
}

void MultiPoly::check(const MultiPoly& other) const { require_same_chart(chart_, other.chart_); }

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) {
    t.coeff = -t.coeff;
    scalar::reduce(t.coeff, chart_->characteristic());
  }
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check(other);
  terms_ = merge_terms(terms_, other.terms_, false, chart_->characteristic());
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  check(other);
  terms_ = merge_terms(terms_, other.terms_, true, chart_->characteristic());
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
  check(other);
  if (terms_.empty() || other.terms_.empty()) {
    terms_.clear();
    return *this;
  }
  if (other.terms_.size() == 1) {
    unsigned long p = chart_->characteristic();
    const Term& m = other.terms_[0];
    for (auto& t : terms_) {
      t.exp = add_exponents(t.exp, m.exp);
      t.coeff *= m.coeff;
      scalar::reduce(t.coeff, p);
    }
    return *this;
  }
  if (terms_.size() == 1) {
    MultiPoly r = other;
    r *= *this;
    *this = std::move(r);
    return *this;
  }
  if (auto packed = packed_product(*this, other)) {
    terms_ = std::move(*packed);
    return *this;
  }
  std::vector<Term> prod;
  prod.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) prod.push_back(Term{add_exponents(a.exp, b.exp), a.coeff * b.coeff});
  *this = from_terms(chart_, std::move(prod));
  return *this;
}

MultiPoly MultiPoly::scaled(const mpq_class& c) const {
  mpq_class v = c;
  scalar::reduce(v, chart_->characteristic());
  if (v == 0) return MultiPoly(chart_);
  MultiPoly r(*this);
  for (auto& t : r.terms_) {
    t.coeff *= v;
    scalar::reduce(t.coeff, chart_->characteristic());
  }
  return r;
}

MultiPoly MultiPoly::shifted(const Exponents& exp) const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.exp = add_exponents(t.exp, exp);
  return r;
}

MultiPoly MultiPoly::pow(unsigned n) const {
  MultiPoly result = constant(chart_, 1);
  MultiPoly base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::monic() const {
  if (terms_.empty() || terms_[0].coeff == 1) return *this;
  return scaled(scalar::inverse(terms_[0].coeff, chart_->characteristic()));
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  std::vector<Term> out;
  unsigned long p = chart_->characteristic();
  for (const auto& t : terms_) {
    if (t.exp[var] == 0) continue;
    Term d{t.exp, t.coeff * t.exp[var]};
    d.exp[var] -= 1;
    scalar::reduce(d.coeff, p);
    if (d.coeff != 0) out.push_back(std::move(d));
  }
  MultiPoly r(chart_);
  r.terms_ = std::move(out);
  return r;
}

std::optional<MultiPoly> MultiPoly::try_div(const MultiPoly& other) const {
  check(other);
  if (other.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  if (is_zero()) return MultiPoly(chart_);
  unsigned long p = chart_->characteristic();
  const Term& lead = other.terms_[0];
  mpq_class lead_inv = scalar::inverse(lead.coeff, p);
  if (other.terms_.size() == 1) {
    MultiPoly q(chart_);
    q.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!divides(lead.exp, t.exp)) return std::nullopt;
      mpq_class c = t.coeff * lead_inv;
      scalar::reduce(c, p);
      q.terms_.push_back(Term{sub_exponents(t.exp, lead.exp), c});
    }
    return q;
  }
  // Heap division: entry (i, j) stands for divisor term i times quotient term j.
  const auto& g = other.terms_;
  std::vector<Term> quotient;
  auto product = [&](const std::pair<std::size_t, std::size_t>& e) { return add_exponents(g[e.first].exp, quotient[e.second].exp); };
  using Entry = std::pair<Exponents, std::pair<std::size_t, std::size_t>>;
  auto lower = [](const Entry& a, const Entry& b) { return grlex_compare(a.first, b.first) < 0; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  std::size_t k = 0;
  while (k < terms_.size() || !heap.empty()) {
    Exponents m;
    if (heap.empty() || (k < terms_.size() && grlex_compare(terms_[k].exp, heap.top().first) >= 0))
      m = terms_[k].exp;
    else
      m = heap.top().first;
    mpq_class c = 0;
    if (k < terms_.size() && terms_[k].exp == m) c = terms_[k++].coeff;
    while (!heap.empty() && heap.top().first == m) {
      auto [i, j] = heap.top().second;
      heap.pop();
      c -= g[i].coeff * quotient[j].coeff;
      if (i + 1 < g.size()) heap.emplace(product({i + 1, j}), std::make_pair(i + 1, j));
    }
    scalar::reduce(c, p);
    if (c == 0) continue;
    if (!divides(lead.exp, m)) return std::nullopt;
    Term q{sub_exponents(m, lead.exp), c * lead_inv};
    scalar::reduce(q.coeff, p);
    quotient.push_back(std::move(q));
    heap.emplace(product({1, quotient.size() - 1}), std::make_pair(std::size_t{1}, quotient.size() - 1));
  }
  MultiPoly r(chart_);
  r.terms_ = std::move(quotient);
  return r;
}

MultiPoly MultiPoly::exact_div(const MultiPoly& other) const {
  auto q = try_div(other);
  if (!q) fail(ErrorKind::NotExact, "polynomial division is not exact");
  return std::move(*q);
}

MultiPoly MultiPoly::divide_monomial(const Exponents& exp) const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) {
    if (!divides(exp, t.exp)) fail(ErrorKind::NotExact, "monomial does not divide polynomial");
    t.exp = sub_exponents(t.exp, exp);
  }
  return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(std::size_t var) const {
  std::vector<std::vector<Term>> buckets(degree_in(var) + 1);
  for (const auto& t : terms_) {
    Term c = t;
    c.exp[var] = 0;
    buckets[t.exp[var]].push_back(std::move(c));
  }
  std::vector<MultiPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) {
    MultiPoly m(chart_);
    m.terms_ = std::move(b);
    std::sort(m.terms_.begin(), m.terms_.end(), grlex_greater);
    out.push_back(std::move(m));
  }
  return out;
}

MultiPoly MultiPoly::from_coefficients_in(ChartRef chart, std::size_t var, const std::vector<MultiPoly>& coeffs) {
  std::vector<Term> all;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    for (const auto& t : coeffs[k].terms_) {
      Term c = t;
      c.exp[var] = static_cast<std::uint16_t>(c.exp[var] + k);
      all.push_back(std::move(c));
    }
  return from_terms(std::move(chart), std::move(all));
}

MultiPoly MultiPoly::transfer(const ChartRef& target) const {
  if (same_chart(chart_, target)) {
    MultiPoly r(*this);
    r.chart_ = target;
    return r;
  }
  if (target->characteristic() != chart_->characteristic())
    fail(ErrorKind::CharacteristicMismatch, "cannot transfer between characteristics");
  std::vector<std::size_t> map(chart_->nvars());
  for (std::size_t i = 0; i < chart_->nvars(); ++i) {
    auto j = target->index_of(chart_->name(i));
    if (!j) {
      if (involves(i)) fail(ErrorKind::UnknownVariable, "variable '" + chart_->name(i) + "' missing on target chart");
      map[i] = Chart::kMaxVariables;
    } else {
      map[i] = *j;
    }
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term n{Exponents{}, t.coeff};
    for (std::size_t i = 0; i < chart_->nvars(); ++i)
      if (t.exp[i] != 0) n.exp[map[i]] = t.exp[i];
    out.push_back(std::move(n));
  }
  return from_terms(target, std::move(out));
}

bool MultiPoly::operator==(const MultiPoly& other) const {
  if (!same_chart(chart_, other.chart_)) return false;
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exp != other.terms_[i].exp || terms_[i].coeff != other.terms_[i].coeff) return false;
  return true;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coeff;
    bool negative = c < 0;
    if (negative) c = -c;
    std::string mono = monomial_string(*chart_, t.exp);
    std::string body;
    if (mono.empty())
      body = scalar::to_string(c);
    else if (c == 1)
      body = mono;
    else
      body = scalar::to_string(c) + "*" + mono;
    if (first)
      out = negative ? "-" + body : body;
    else
      out += (negative ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly r = a;
  r *= b;
  return r;
}

}  // namespace pfaff

#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfaff/error.hpp"

namespace pfaff {

// Ordered coordinate names plus optional constant parameters.  Parameters
// behave like polynomial variables but are never differentiated.
class Chart {
 public:
  static constexpr std::size_t kMaxVariables = 16;

  Chart(std::vector<std::string> coordinates, unsigned long characteristic = 0,
        std::vector<std::string> parameters = {});

  std::size_t dim() const { return ncoords_; }
  std::size_t nvars() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::vector<std::string> coordinates() const;
  std::vector<std::string> parameters() const;
  bool is_parameter(std::size_t i) const { return i >= ncoords_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  unsigned long characteristic() const { return p_; }

  bool operator==(const Chart& other) const;

 private:
  std::vector<std::string> names_;
  std::size_t ncoords_;
  unsigned long p_;
};

using ChartRef = std::shared_ptr<const Chart>;

ChartRef make_chart(std::vector<std::string> coordinates, unsigned long characteristic = 0,
                    std::vector<std::string> parameters = {});

bool same_chart(const ChartRef& a, const ChartRef& b);
void require_same_chart(const ChartRef& a, const ChartRef& b);

// Scalar arithmetic.  Over F_p every scalar is an integer in [0, p).
namespace scalar {
void reduce(mpq_class& q, unsigned long p);
mpq_class from_int(long v, unsigned long p);
mpq_class inverse(const mpq_class& q, unsigned long p);
std::string to_string(const mpq_class& q);
}  // namespace scalar

using Exponents = std::array<std::uint16_t, Chart::kMaxVariables>;

struct Term {
  Exponents exp{};
  mpq_class coeff;
};

unsigned total_degree(const Exponents& e);
// Graded-lex comparison; earlier chart variables rank higher.
int grlex_compare(const Exponents& a, const Exponents& b);

class MultiPoly {
 public:
  explicit MultiPoly(ChartRef chart);

  static MultiPoly constant(ChartRef chart, const mpq_class& c);
  static MultiPoly constant(ChartRef chart, long c);
  static MultiPoly variable(ChartRef chart, std::size_t index);
  static MultiPoly monomial(ChartRef chart, const Exponents& exp, const mpq_class& c);
  static MultiPoly from_terms(ChartRef chart, std::vector<Term> terms);

  const ChartRef& chart() const { return chart_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  mpq_class constant_value() const;
  const mpq_class& leading_coefficient() const;
  const Exponents& leading_exponents() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t var) const;
  bool involves(std::size_t var) const;
  Exponents min_exponents() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly scaled(const mpq_class& c) const;
  MultiPoly shifted(const Exponents& exp) const;
  MultiPoly pow(unsigned n) const;
  MultiPoly monic() const;
  MultiPoly derivative(std::size_t var) const;

  // Exact quotient; throws NotExact when other does not divide *this.
  MultiPoly exact_div(const MultiPoly& other) const;
  std::optional<MultiPoly> try_div(const MultiPoly& other) const;
  MultiPoly divide_monomial(const Exponents& exp) const;

  // Coefficients of powers of var, index = power.
  std::vector<MultiPoly> coefficients_in(std::size_t var) const;
  static MultiPoly from_coefficients_in(ChartRef chart, std::size_t var,
                                        const std::vector<MultiPoly>& coeffs);

  // Re-express on another chart; variables are matched by name.
  MultiPoly transfer(const ChartRef& target) const;

  bool operator==(const MultiPoly& other) const;
  bool operator!=(const MultiPoly& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  void check(const MultiPoly& other) const;

  ChartRef chart_;
  std::vector<Term> terms_;
};

MultiPoly operator+(MultiPoly a, const MultiPoly& b);
MultiPoly operator-(MultiPoly a, const MultiPoly& b);
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

// Canonical gcd: zero or leading coefficient 1.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

class RatFn {
 public:
  explicit RatFn(ChartRef chart);
  RatFn(const MultiPoly& poly);  // NOLINT: polynomials are rational functions

  static RatFn constant(ChartRef chart, const mpq_class& c);
  static RatFn constant(ChartRef chart, long c);
  static RatFn variable(ChartRef chart, std::size_t index);
  // Divides out the gcd and makes the denominator monic.
  static RatFn normalize(const MultiPoly& num, const MultiPoly& den);

  const ChartRef& chart() const { return num_.chart(); }
  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_constant(); }
  mpq_class constant_value() const;

  RatFn operator-() const;
  RatFn& operator+=(const RatFn& other);
  RatFn& operator-=(const RatFn& other);
  RatFn& operator*=(const RatFn& other);
  RatFn& operator/=(const RatFn& other);
  RatFn inverse() const;
  RatFn pow(long n) const;
  RatFn scaled(const mpq_class& c) const;
  RatFn derivative(std::size_t var) const;

  // f(values[0], ..., values[n-1]); values live on a common chart and
  // cover every variable of this chart, parameters included.
  RatFn compose(std::span<const RatFn> values) const;
  RatFn transfer(const ChartRef& target) const;

  bool operator==(const RatFn& other) const;
  bool operator!=(const RatFn& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  RatFn(MultiPoly num, MultiPoly den, bool);

  MultiPoly num_;
  MultiPoly den_;
};

RatFn operator+(RatFn a, const RatFn& b);
RatFn operator-(RatFn a, const RatFn& b);
RatFn operator*(RatFn a, const RatFn& b);
RatFn operator/(RatFn a, const RatFn& b);

}  // namespace pfaff

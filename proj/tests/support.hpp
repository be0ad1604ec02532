#pragma once

#include <bit>
#include <ostream>
#include <random>

#include "pfaff/exterior.hpp"
#include "pfaff/field.hpp"
#include "pfaff/zseries.hpp"

namespace pfaff {

inline void PrintTo(const MultiPoly& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const RatFn& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const DiffForm& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const VectorField& a, std::ostream* os) { *os << a.to_string(); }
inline void PrintTo(const FormalOmega& a, std::ostream* os) { *os << a.to_string(); }

}  // namespace pfaff

namespace pfaff::testing {

// Deterministic generator shared by the randomized tests.
class Random {
 public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  long integer(long lo, long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  bool chance(int percent) { return integer(0, 99) < percent; }

  // Random polynomial in the coordinates (and parameters) of chart.
  MultiPoly poly(const ChartRef& chart, unsigned max_degree, int terms, long range = 5,
                 std::size_t nvars = 0) {
    if (nvars == 0) nvars = chart->dim();
    std::vector<Term> out;
    for (int k = 0; k < terms; ++k) {
      Term t;
      unsigned budget = static_cast<unsigned>(integer(0, max_degree));
      for (unsigned b = 0; b < budget; ++b) t.exp[static_cast<std::size_t>(integer(0, long(nvars) - 1))] += 1;
      long c = 0;
      while (c == 0) c = integer(-range, range);
      t.coeff = c;
      out.push_back(t);
    }
    return MultiPoly::from_terms(chart, std::move(out));
  }

  MultiPoly nonzero_poly(const ChartRef& chart, unsigned max_degree, int terms, long range = 5) {
    while (true) {
      MultiPoly p = poly(chart, max_degree, terms, range);
      if (!p.is_zero()) return p;
    }
  }

  RatFn ratfn(const ChartRef& chart, unsigned max_degree, int terms) {
    MultiPoly den = nonzero_poly(chart, max_degree, terms);
    return RatFn::normalize(poly(chart, max_degree, terms), den);
  }

  DiffForm form(const ChartRef& chart, int degree, unsigned max_degree, int terms, bool rational = false) {
    DiffForm out(chart, degree);
    std::size_t n = chart->dim();
    for (IndexSet set = 0; set < (IndexSet(1) << n); ++set) {
      if (std::popcount(set) != degree) continue;
      if (!chance(70)) continue;
      out.add_term(set, rational ? ratfn(chart, max_degree, terms) : RatFn(poly(chart, max_degree, terms)));
    }
    return out;
  }

  VectorField field(const ChartRef& chart, unsigned max_degree, int terms) {
    std::vector<RatFn> c;
    for (std::size_t i = 0; i < chart->dim(); ++i) c.push_back(RatFn(poly(chart, max_degree, terms)));
    return VectorField(chart, std::move(c));
  }

  // dz + sum_{k<=order} z^k/k! a_k(phi) dphi, with z the last coordinate of
  // chart and phi a random polynomial in the others.  Integrable.
  DiffForm ode_form(const ChartRef& chart, std::size_t order, unsigned phi_degree = 2) {
    std::size_t n = chart->dim();
    std::size_t zi = n - 1;
    MultiPoly phi = poly(chart, phi_degree, 3, 3, n - 1);
    while (phi.is_constant()) phi = poly(chart, phi_degree, 3, 3, n - 1);
    DiffForm dphi = ext_d(DiffForm::function(RatFn(phi)));
    RatFn z = RatFn::variable(chart, zi);
    DiffForm out = DiffForm::differential(chart, zi);
    mpq_class fact = 1;
    RatFn zk = RatFn::constant(chart, 1);
    for (std::size_t k = 0; k <= order; ++k) {
      if (k > 0) {
        fact *= static_cast<long>(k);
        zk *= z;
      }
      MultiPoly a = MultiPoly::constant(chart, integer(-3, 3));
      a += MultiPoly::constant(chart, integer(-2, 2)) * phi;
      if (k == order && a.is_zero()) a = MultiPoly::constant(chart, 1);
      out += (zk * RatFn(a)).scaled(1 / fact) * dphi;
    }
    return out;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pfaff::testing

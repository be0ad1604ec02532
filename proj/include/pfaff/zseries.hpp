#pragma once

#include <string>
#include <vector>

#include "pfaff/exterior.hpp"

namespace pfaff {

// Truncated development dz + sum_k z^k/k! w_k in a transverse variable z
// that is not a chart coordinate.
class FormalOmega {
 public:
  // Pads coefficients with zero forms up to order.
  FormalOmega(std::vector<DiffForm> coefficients, std::size_t order);

  const ChartRef& chart() const { return chart_; }
  std::size_t order() const { return coefficients_.size() - 1; }
  const std::vector<DiffForm>& coefficients() const { return coefficients_; }
  const DiffForm& operator[](std::size_t k) const { return coefficients_.at(k); }

  // Set when an affine shift moved the origin of z; the leading form then
  // defines a different foliation.
  bool shifted_origin() const { return shifted_origin_; }
  void mark_shifted_origin() { shifted_origin_ = true; }

  bool operator==(const FormalOmega& other) const;
  std::string to_string() const;

 private:
  ChartRef chart_;
  std::vector<DiffForm> coefficients_;
  bool shifted_origin_ = false;
};

FormalOmega omega_assemble(std::vector<DiffForm> sequence, std::size_t order);

// Entry k is k! times the z^k coefficient of the dz-part of Omega ^ dOmega,
// for k = 0 .. order - 1.
std::vector<DiffForm> integrability_defect(const FormalOmega& omega);
bool all_zero(const std::vector<DiffForm>& forms);

// z = f_0 + f_1 t + f_2 t^2 + ...  with f_1 != 0.
class Substitution {
 public:
  explicit Substitution(std::vector<RatFn> coefficients);

  static Substitution identity(const ChartRef& chart);
  // z = f t
  static Substitution scaling(const RatFn& f);
  // z = t + c
  static Substitution translation(const RatFn& c);
  // z = t + f t^(k+1)
  static Substitution monomial(const RatFn& f, std::size_t k);
  // z = t / (1 + g t), expanded far enough for substitute at this order.
  static Substitution mobius(const RatFn& g, std::size_t order);

  const ChartRef& chart() const { return coeffs_.front().chart(); }
  const std::vector<RatFn>& coefficients() const { return coeffs_; }
  // f_k, zero beyond the stored terms.
  RatFn operator[](std::size_t k) const;
  bool fixes_origin() const { return coeffs_.front().is_zero(); }

  std::string to_string() const;

 private:
  std::vector<RatFn> coeffs_;
};

// Rewrites Omega in the variable t and divides by the dt coefficient.
// Reads f_k for k <= order + 1.
FormalOmega substitute(const FormalOmega& omega, const Substitution& s);

// The series of first followed by second: z = first(second(u)).
Substitution compose(const Substitution& first, const Substitution& second, std::size_t order);

}  // namespace pfaff

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfaff/exterior.hpp"
#include "pfaff/zseries.hpp"

namespace pfaff {

// Forms (w_0, ..., w_K) read as the z-jet of dz + sum_k z^k/k! w_k.
class GVSequence {
 public:
  // A declared length N+1 asserts w_k = 0 for k > N; the stored list is
  // padded with zero forms up to index N.
  explicit GVSequence(std::vector<DiffForm> forms, std::optional<std::size_t> declared_length = std::nullopt);

  const ChartRef& chart() const { return forms_.front().chart(); }
  const std::vector<DiffForm>& forms() const { return forms_; }
  std::size_t size() const { return forms_.size(); }
  const DiffForm& operator[](std::size_t k) const { return forms_.at(k); }
  std::optional<std::size_t> declared_length() const { return declared_; }
  // One past the last nonzero form.
  std::size_t support_length() const;

  FormalOmega omega(std::size_t order) const;
  bool operator==(const GVSequence& other) const { return forms_ == other.forms_ && declared_ == other.declared_; }
  std::string to_string() const;

 private:
  std::vector<DiffForm> forms_;
  std::optional<std::size_t> declared_;
};

// w_k = (L_X)^k w for k = 0 .. order.
GVSequence gv_from_field(const DiffForm& w, const VectorField& x, std::size_t order);

struct DefectReport {
  std::vector<DiffForm> defects;
  bool holds() const { return all_zero(defects); }
};

// Undeclared sequences are checked through their stored order; declared
// finite ones through order max(size + 2, 2N), which covers every relation.
DefectReport gv_verify(const GVSequence& s);

// z = f t: (w_0/f, w_1 + df/f, f w_2, ..., f^(k-1) w_k).
GVSequence gv_rescale(const GVSequence& s, const RatFn& f);

// The change z = t + O(t^(k+1)) whose first affected columns are
// k = 1: (w_0, w_1 + f w_0, w_2 + f w_1 - df, ...)
// k >= 2: w_k + f w_0 at index k, lower indices unchanged.
Substitution shift_substitution(const RatFn& f, std::size_t k);
GVSequence gv_shift(const GVSequence& s, const RatFn& f, std::size_t k);

struct FlagReport {
  std::size_t n = 0;
  // thetas[k - 1] = w_0 ^ ... ^ w_(k-1) for k = 1 .. n.
  std::vector<DiffForm> thetas;
  std::vector<bool> closed;
  // theta_hats[k] omits w_k from w_0 ^ ... ^ w_(n-1), k = 0 .. n-1.
  std::vector<DiffForm> theta_hats;
  const DiffForm& theta() const { return thetas.back(); }
  bool all_closed() const;
};

FlagReport flag_forms(const GVSequence& s);

struct Decomposition {
  // w_n = sum_k a[k] w_k for k = 0 .. n-1.
  std::vector<RatFn> a;
  // Theta ^ da_k = 0 for k = 1 .. n-1.
  std::vector<bool> first_integral;
  bool all_first_integrals() const;
};

Decomposition flag_decompose(const GVSequence& s, const FlagReport& flag);

struct InvariantReport {
  DiffForm form;
  bool matches_curvature = false;  // form = -w_1 ^ dw_1
  bool closed = false;
  bool vanishes() const { return form.is_zero(); }
};

InvariantReport gv_invariant(const GVSequence& s);

struct FiniteReport {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> tangency_failures;
  // relation_defects[k] = dw_k - w_0 ^ w_(k+1) - (k-1) w_1 ^ w_k for k >= 1,
  // and dw_0 - w_0 ^ w_1 for k = 0.
  std::vector<DiffForm> relation_defects;
  bool holds() const { return tangency_failures.empty() && all_zero(relation_defects); }
};

FiniteReport finite_gv_verify(const GVSequence& s);

// Rebuilds w_3 .. w_N of a finite sequence from w_0, w_1, w_2 using the
// reduced relations and tangency to w_2.  Requires dw_1 != 0.
std::vector<DiffForm> finite_gv_rederive(const DiffForm& w0, const DiffForm& w1, const DiffForm& w2, std::size_t n);

struct AffineCertificate {
  DiffForm form;        // defines the same foliation as w_0
  DiffForm connection;  // d form = form ^ connection, d connection = 0
};

bool verify_affine(const AffineCertificate& c, const DiffForm& w0);

struct Classification {
  enum class Kind { Affine, ClosedKernel, Inconclusive };
  Kind kind = Kind::Inconclusive;
  std::vector<std::string> trace;
  std::optional<AffineCertificate> affine;
  std::optional<RatFn> witness;  // dg ^ w_N = 0, g nonconstant
  std::string reason;
};

std::string_view to_string(Classification::Kind kind);

Classification finite_gv_classify(const GVSequence& s);

// Integers n_k with sum n_k v_k = gcd(v); the gcd is positive.
std::pair<long, std::vector<long>> bezout(const std::vector<long>& values);

// Coefficients p_0 .. p_D with f = sum p_j g^j, if they exist.
std::optional<std::vector<mpq_class>> express_in(const RatFn& f, const RatFn& g, std::size_t degree);

struct PullbackDescription {
  RatFn g;
  RatFn h;
  long r = 1;
  // Target dz + r (F(u) z + sum_k H_k(u) z^((k-1)/r + 1)) du on chart (u, z).
  std::vector<mpq_class> f_coefficients;
  std::map<long, std::vector<mpq_class>> h_coefficients;
  ChartRef target_chart;
  DiffForm target;
  // r h w_0' with w_0' the normalized leading form.
  DiffForm scaled_leading;
  bool verified = false;
};

PullbackDescription finite_gv_pullback(const GVSequence& s, const RatFn& g, std::size_t degree);

}  // namespace pfaff

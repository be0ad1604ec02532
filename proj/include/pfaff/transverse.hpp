#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "pfaff/exterior.hpp"
#include "pfaff/zseries.hpp"

namespace pfaff {

// HALF: dz + w0 + z w1 + z^2/2 w2 with dw1 = w0 ^ w2.
// FULL: dz + w0 + z w1 + z^2 w2 with dw1 = 2 w0 ^ w2.
enum class Convention { Half, Full };

std::string_view to_string(Convention c);

class Triple {
 public:
  Triple(DiffForm w0, DiffForm w1, DiffForm w2, Convention convention);

  const ChartRef& chart() const { return w0_.chart(); }
  const DiffForm& w0() const { return w0_; }
  const DiffForm& w1() const { return w1_; }
  const DiffForm& w2() const { return w2_; }
  const DiffForm& operator[](std::size_t k) const;
  Convention convention() const { return convention_; }

  // w2 -> w2/2 (HALF -> FULL) or 2 w2 (FULL -> HALF).
  Triple converted(Convention target) const;

  bool operator==(const Triple& other) const;
  std::string to_string() const;

 private:
  DiffForm w0_, w1_, w2_;
  Convention convention_;
};

struct TripleReport {
  // dw0 - w0^w1, dw1 - c w0^w2, dw2 - w1^w2.
  std::array<DiffForm, 3> defects;
  bool holds() const;
};

TripleReport triple_verify(const Triple& t);

enum class Structure { Euclidean, Affine, Projective, None };

std::string_view to_string(Structure s);

// Classifies the supplied certificate, most special structure first.
Structure classify_structure(const DiffForm& w0, const std::optional<DiffForm>& w1 = std::nullopt,
                             const std::optional<DiffForm>& w2 = std::nullopt,
                             Convention convention = Convention::Full);
Structure classify_structure(const Triple& t);

struct GaugeMove {
  enum class Kind { F, G };
  Kind kind;
  RatFn function;
  Convention convention;

  // (w0/f, w1 + df/f, f w2) under either convention.
  static GaugeMove f_move(const RatFn& f, Convention c);
  // HALF: (w0, w1 + g w0, w2 + g w1 + g^2/2 w0 - dg).
  // FULL: (w0, w1 + g w0, w2 + g/2 w1 + g^2/4 w0 - dg/2).
  static GaugeMove g_move(const RatFn& g, Convention c);
};

Triple triple_gauge(const Triple& t, const GaugeMove& move);

// FULL convention; the change z = t / (f0 - f1 t):
// (f0 w0, w1 - 2 f1 w0 - df0/f0, (w2 - f1 w1 + f1^2 w0 + df1)/f0).
Triple triple_gauge_regular(const Triple& t, const RatFn& f0, const RatFn& f1);

// FULL triple (dz + a + b z + c z^2, b + 2 c z, c) on the base chart
// extended by a coordinate z.
Triple riccati_triple(const DiffForm& alpha, const DiffForm& beta, const DiffForm& gamma);

// The same foliation in the chart w = 1/z: pull back, then F(1/w^2) and
// G(-2/w).  Result on the base chart extended by w.
Triple riccati_infinity(const Triple& riccati);

struct Suspension {
  FormalOmega omega;  // order 2, coefficients (w0, w1, 2 w2)
  ChartRef extended;  // base chart plus the fibre coordinate
  DiffForm form;      // dt + w0 + t w1 + t^2 w2 on the extended chart
  bool integrable = false;
};

// Needs a FULL triple whose relations hold.
Suspension suspension_form(const Triple& t);

// Base chart plus one coordinate named from base, base1, base2, ...
ChartRef extend_chart(const ChartRef& chart, const std::string& base);

}  // namespace pfaff

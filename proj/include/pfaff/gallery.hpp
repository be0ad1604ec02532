#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfaff/exterior.hpp"
#include "pfaff/transverse.hpp"

namespace pfaff {

// det(dx dy dz; x y z; y^n z^n x^n) on the chart (x, y, z).  Checks
// i_R = 0 and integrability, throwing VerificationFailed otherwise.
DiffForm jouanolou(unsigned n);

// det(dx dy dz; x y z; x(-x+ny) y(-y+nz) z(-z+nx)).
DiffForm jouanolou_quotient(unsigned n);

// Whether phi_n = (y^(n+1) z : z^(n+1) x : x^(n+1) y) pulls the quotient
// foliation back to the Jouanolou foliation, compared in the chart z = 1.
// swap exchanges the first two components of phi_n.
bool jouanolou_pullback_check(unsigned n, bool swap = false);

enum class ReductionBranch { Riccati, SectionAtInfinity, MoebiusNormalized };

std::string_view to_string(ReductionBranch b);

struct ReductionReport {
  ReductionBranch branch;
  ChartRef base;    // (t1 .. t_(n-1)), parameters kept
  ChartRef output;  // base plus the fibre coordinate u
  // pi^* Omega = z((f0 + z f1) dz + z w1 + z^2 w2 + z^3 w3) on the blow-up chart
  RatFn f0, f1;
  std::optional<RatFn> s;  // -f0/f1
  DiffForm w1, w2, w3;     // the tilde forms, on base
  std::optional<MultiPoly> vertical;  // common factor of f0 and f1
  // du + sum_k coefficients[k] u^k; coefficients live on base
  std::vector<DiffForm> coefficients;
  DiffForm ode;     // on output
  ChartMap composed;  // output -> input chart
  bool certified;   // pullback(composed, Omega) ^ ode = 0
};

// Degree <= 2 foliation Omega = w1 + w2 + w3 with w_i homogeneous of degree
// i and w3 radial, centred at a singular point.
ReductionReport degree2_reduce(const DiffForm& w1, const DiffForm& w2, const DiffForm& w3);

// Polynomial 1-form split into homogeneous parts; parts[k] has coefficients
// of degree k in the coordinates.
std::vector<DiffForm> homogeneous_parts(const DiffForm& w);

// The cubic u-coefficients 0..3 printed for the Moebius branch, built from
// the intermediates of a report.
std::vector<DiffForm> displayed_moebius_coefficients(const ReductionReport& r);

struct ComponentExample {
  DiffForm omega3, omega4, omega5, omega;
  RatFn euler3, euler4, euler5;  // contractions with the Euler field
  bool twist_holds;              // sigma^* omega3 = omega
};

// Omega_3 + Omega_4 + Omega_5 on the chart (x, y, z) from degree-2
// homogeneous P, Q, R in x, y; sigma(x, y, z) = (x, y, z + x^2).
ComponentExample component_example(const MultiPoly& p, const MultiPoly& q, const MultiPoly& r);

struct SL2Fixture {
  Triple triple;         // FULL, on the chart (x, u, y) with parameter z
  bool maurer_cartan;    // dM + M ^ M = 0 entrywise
  bool trace_free;
  bool translation;      // T_z^* w0 = z^2 w0 + z w1 + w2
};

SL2Fixture sl2_triple();

enum class HilbertFoliation { F2, F3 };

struct HilbertFixture {
  Triple triple;
  std::optional<mpq_class> c;  // dw1 = c w0 ^ w2
  TripleReport report;         // relations under the convention given by c
};

// Transcribed tables on the chart (x, y); the convention follows from the
// computed constant c (1 HALF, 2 FULL).
HilbertFixture hilbert_triple(HilbertFoliation which);
std::string hilbert_document(HilbertFoliation which);

struct FixtureCheck {
  std::string name;
  bool holds;
  std::string defect;  // printed when the check fails
};

struct FixtureReport {
  std::string name;
  std::vector<FixtureCheck> checks;
  std::vector<std::pair<std::string, std::string>> certificates;
  bool passed() const;
};

std::vector<std::string> fixture_names();
// Throws InvalidArgument for an unknown name.
FixtureReport fixture_verify(const std::string& name);

}  // namespace pfaff

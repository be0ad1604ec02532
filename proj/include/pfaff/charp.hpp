#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfaff/exterior.hpp"

namespace pfaff {

// Fields X_1 .. X_m with basis[i](X_j) = delta_ij for the basis
// (df_1, ..., df_(m-1), w).
struct DualFrame {
  std::vector<VectorField> fields;
  std::vector<DiffForm> basis;
};

// True when all m^2 contractions give the identity matrix.
bool contracts_to_identity(const DualFrame& frame);

// Coordinates x_j, in order, whose differentials keep w ^ dx_j1 ^ ... nonzero.
std::vector<RatFn> default_frame_functions(const DiffForm& w);

// Needs characteristic p > 0 and w ^ df_1 ^ ... ^ df_(m-1) != 0.  When w is
// integrable the brackets [X_i, X_j], i, j < m, are checked to vanish.
DualFrame dual_frame(const DiffForm& w, const std::vector<RatFn>& fs);

// X applied p times to every coordinate function.
VectorField vf_pth_power(const VectorField& x, unsigned long p);

struct IntegratingFactor {
  RatFn factor;       // d(factor * w) = 0
  std::size_t index;  // 0-based i with w(X_i^p) != 0
  DualFrame frame;
};

// F = w(X_i^p)^(-1) for the first i < m with w(X_i^p) != 0.  Throws
// PClosedCase when every such contraction vanishes.
IntegratingFactor integrating_factor(const DiffForm& w, const std::optional<std::vector<RatFn>>& fs = std::nullopt);

struct HypersurfaceCandidate {
  MultiPoly factor;
  long multiplicity;  // negative for factors of the denominator
  bool verified;      // restriction of w to {factor = 0} vanishes
};

// Squarefree, pairwise coprime factors of F paired with their exponents.
std::vector<std::pair<MultiPoly, long>> coprime_factors(const RatFn& f);

struct CandidateReport {
  bool p_power = false;  // dF = 0
  std::vector<HypersurfaceCandidate> candidates;
};

// Factors whose multiplicity is prime to p; those linear in some variable
// are checked by substituting the graph into w.
CandidateReport invariant_hypersurface_candidates(const RatFn& f, const DiffForm& w);

struct BatchRecord {
  std::size_t instance;
  DiffForm form;
  bool p_closed;
  std::optional<RatFn> factor;
  bool verified;  // d(F w) = 0, or every w(X_i^p) = 0
};

// Random integrable 1-forms on the chart (x, y) over F_p.
std::vector<BatchRecord> charp_batch(unsigned long p, std::uint64_t seed, std::size_t count, unsigned degree = 3);

}  // namespace pfaff

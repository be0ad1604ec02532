#include "pfaff/charp.hpp"

#include <random>

namespace pfaff {

namespace {

DiffForm exact(const RatFn& f) { return ext_d(DiffForm::function(f)); }

void require_positive_characteristic(const ChartRef& chart) {
  if (chart->characteristic() == 0) fail(ErrorKind::CharacteristicMismatch, "needs a chart of positive characteristic");
}

// Inverse of a square matrix over the rational functions, if invertible.
std::optional<std::vector<std::vector<RatFn>>> invert(std::vector<std::vector<RatFn>> a, const ChartRef& chart) {
  std::size_t n = a.size();
  std::vector<std::vector<RatFn>> inv(n, std::vector<RatFn>(n, RatFn(chart)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RatFn::constant(chart, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    RatFn scale = a[col][col].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= scale;
      inv[col][j] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      RatFn f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// p-th root of a polynomial all of whose exponents are divisible by p.
MultiPoly pth_root(const MultiPoly& a, unsigned long p) {
  std::vector<Term> out;
  for (const auto& t : a.terms()) {
    Term r = t;
    for (auto& e : r.exp) e = static_cast<std::uint16_t>(e / p);
    out.push_back(r);
  }
  return MultiPoly::from_terms(a.chart(), std::move(out));
}

bool all_derivatives_vanish(const MultiPoly& a) {
  for (std::size_t v = 0; v < a.chart()->nvars(); ++v)
    if (!a.derivative(v).is_zero()) return false;
  return true;
}

// Restriction of w to {factor = 0} when factor is linear in some coordinate.
std::optional<bool> restriction_vanishes(const MultiPoly& factor, const DiffForm& w) {
  const ChartRef& chart = w.chart();
  for (std::size_t v = 0; v < chart->dim(); ++v) {
    if (factor.degree_in(v) != 1) continue;
    auto coeffs = factor.coefficients_in(v);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < chart->dim(); ++i)
      if (i != v) names.push_back(chart->name(i));
    ChartRef sub = make_chart(names, chart->characteristic(), chart->parameters());
    RatFn graph = -(RatFn(coeffs[0]) / RatFn(coeffs[1])).transfer(sub);
    std::vector<RatFn> images;
    for (std::size_t i = 0, k = 0; i < chart->dim(); ++i) images.push_back(i == v ? graph : RatFn::variable(sub, k++));
    return pullback(ChartMap(sub, chart, images), w).is_zero();
  }
  return std::nullopt;
}

}  // namespace

bool contracts_to_identity(const DualFrame& frame) {
  for (std::size_t i = 0; i < frame.basis.size(); ++i)
    for (std::size_t j = 0; j < frame.fields.size(); ++j) {
      RatFn c = interior(frame.fields[j], frame.basis[i]).as_function();
      if (i == j ? !c.is_one() : !c.is_zero()) return false;
    }
  return true;
}

std::vector<RatFn> default_frame_functions(const DiffForm& w) {
  const ChartRef& chart = w.chart();
  std::vector<RatFn> out;
  DiffForm acc = w;
  for (std::size_t j = 0; j < chart->dim() && out.size() + 1 < chart->dim(); ++j) {
    DiffForm next = wedge(acc, DiffForm::differential(chart, j));
    if (next.is_zero()) continue;
    acc = next;
    out.push_back(RatFn::variable(chart, j));
  }
  if (out.size() + 1 != chart->dim()) fail(ErrorKind::DegenerateFrame, "no coordinate frame completes w");
  return out;
}

DualFrame dual_frame(const DiffForm& w, const std::vector<RatFn>& fs) {
  const ChartRef& chart = w.chart();
  require_positive_characteristic(chart);
  if (w.degree() != 1) fail(ErrorKind::DegreeMismatch, "dual frame needs a 1-form");
  std::size_t m = chart->dim();
  if (fs.size() + 1 != m) fail(ErrorKind::InvalidArgument, "dual frame needs m - 1 functions");
  DualFrame out;
  for (const auto& f : fs) {
    require_same_chart(chart, f.chart());
    out.basis.push_back(exact(f));
  }
  out.basis.push_back(w);
  std::vector<std::vector<RatFn>> a;
  for (const auto& b : out.basis) a.push_back(b.components());
  auto inv = invert(a, chart);
  if (!inv) fail(ErrorKind::DegenerateFrame, "w ^ df_1 ^ ... ^ df_(m-1) vanishes");
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<RatFn> column;
    for (std::size_t k = 0; k < m; ++k) column.push_back((*inv)[k][j]);
    out.fields.emplace_back(chart, std::move(column));
  }
  if (!contracts_to_identity(out)) fail(ErrorKind::VerificationFailed, "dual frame contraction is not the identity");
  if (is_integrable(w))
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j + 1 < m; ++j)
        if (!lie_bracket(out.fields[i], out.fields[j]).is_zero())
          fail(ErrorKind::VerificationFailed, "frame fields tangent to w do not commute");
  return out;
}

VectorField vf_pth_power(const VectorField& x, unsigned long p) {
  if (x.chart()->characteristic() != p) fail(ErrorKind::CharacteristicMismatch, "chart characteristic differs from p");
  std::vector<RatFn> coeffs;
  for (std::size_t i = 0; i < x.chart()->dim(); ++i) {
    RatFn f = RatFn::variable(x.chart(), i);
    for (unsigned long k = 0; k < p; ++k) f = x.apply(f);
    coeffs.push_back(f);
  }
  return VectorField(x.chart(), std::move(coeffs));
}

IntegratingFactor integrating_factor(const DiffForm& w, const std::optional<std::vector<RatFn>>& fs) {
  const ChartRef& chart = w.chart();
  require_positive_characteristic(chart);
  if (w.is_zero()) fail(ErrorKind::ZeroForm, "integrating factor of the zero form");
  if (!is_integrable(w)) fail(ErrorKind::NotIntegrable, "form is not integrable");
  DualFrame frame = dual_frame(w, fs ? *fs : default_frame_functions(w));
  unsigned long p = chart->characteristic();
  for (std::size_t i = 0; i + 1 < chart->dim(); ++i) {
    RatFn c = interior(vf_pth_power(frame.fields[i], p), w).as_function();
    if (c.is_zero()) continue;
    RatFn f = c.inverse();
    if (!ext_d(f * w).is_zero()) fail(ErrorKind::VerificationFailed, "d(F w) does not vanish");
    return IntegratingFactor{f, i, frame};
  }
  fail(ErrorKind::PClosedCase, "w(X_i^p) = 0 for every frame field tangent to w");
}

std::vector<std::pair<MultiPoly, long>> coprime_factors(const RatFn& f) {
  const ChartRef& chart = f.chart();
  unsigned long p = chart->characteristic();
  std::vector<std::pair<MultiPoly, long>> work;
  if (!f.num().is_constant()) work.emplace_back(f.num().monic(), 1);
  if (!f.den().is_constant()) work.emplace_back(f.den().monic(), -1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < work.size() && !changed; ++i) {
      auto [a, e] = work[i];
      if (p != 0 && all_derivatives_vanish(a)) {
        work[i] = {pth_root(a, p).monic(), e * static_cast<long>(p)};
        changed = true;
        break;
      }
      for (std::size_t v = 0; v < chart->nvars() && !changed; ++v) {
        MultiPoly d = a.derivative(v);
        if (d.is_zero()) continue;
        MultiPoly g = gcd(a, d);
        if (g.is_constant()) continue;
        work[i] = {g, e};
        work.emplace_back(a.exact_div(g).monic(), e);
        changed = true;
      }
      for (std::size_t j = i + 1; j < work.size() && !changed; ++j) {
        MultiPoly g = gcd(a, work[j].first);
        if (g.is_constant()) continue;
        MultiPoly b = work[j].first;
        long eb = work[j].second;
        work[i] = {a.exact_div(g).monic(), e};
        work[j] = {b.exact_div(g).monic(), eb};
        work.emplace_back(g, e + eb);
        changed = true;
      }
    }
    std::vector<std::pair<MultiPoly, long>> kept;
    for (auto& entry : work)
      if (!entry.first.is_constant() && entry.second != 0) kept.push_back(std::move(entry));
    work = std::move(kept);
  }
  return work;
}

CandidateReport invariant_hypersurface_candidates(const RatFn& f, const DiffForm& w) {
  require_same_chart(f.chart(), w.chart());
  CandidateReport out;
  if (exact(f).is_zero()) {
    out.p_power = true;
    return out;
  }
  unsigned long p = f.chart()->characteristic();
  for (const auto& [factor, e] : coprime_factors(f)) {
    if (p != 0 && e % static_cast<long>(p) == 0) continue;
    auto v = restriction_vanishes(factor, w);
    out.candidates.push_back(HypersurfaceCandidate{factor, e, v.value_or(false)});
  }
  return out;
}

std::vector<BatchRecord> charp_batch(unsigned long p, std::uint64_t seed, std::size_t count, unsigned degree) {
  ChartRef chart = make_chart({"x", "y"}, p);
  std::mt19937_64 rng(seed);
  auto random_poly = [&] {
    std::vector<Term> terms;
    for (unsigned i = 0; i <= degree; ++i)
      for (unsigned j = 0; i + j <= degree; ++j) {
        if (rng() % 3 == 0) continue;
        Term t;
        t.exp[0] = static_cast<std::uint16_t>(i);
        t.exp[1] = static_cast<std::uint16_t>(j);
        t.coeff = static_cast<long>(rng() % p);
        terms.push_back(t);
      }
    return RatFn(MultiPoly::from_terms(chart, std::move(terms)));
  };
  std::vector<BatchRecord> out;
  for (std::size_t k = 0; k < count; ++k) {
    DiffForm w(chart, 1);
    while (w.is_zero()) w = DiffForm::one_form(chart, {random_poly(), random_poly()});
    try {
      IntegratingFactor f = integrating_factor(w);
      out.push_back(BatchRecord{k, w, false, f.factor, ext_d(f.factor * w).is_zero()});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PClosedCase) throw;
      DualFrame frame = dual_frame(w, default_frame_functions(w));
      bool closed = true;
      for (std::size_t i = 0; i + 1 < frame.fields.size(); ++i)
        closed = closed && interior(vf_pth_power(frame.fields[i], p), w).as_function().is_zero();
      out.push_back(BatchRecord{k, w, true, std::nullopt, closed});
    }
  }
  return out;
}

}  // namespace pfaff

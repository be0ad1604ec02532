#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pfaff/field.hpp"

namespace pfaff {

// Strictly increasing coordinate index tuple, stored as a bit set.
using IndexSet = std::uint32_t;

std::vector<std::size_t> indices_of(IndexSet set);

// Orders index sets by size, then lexicographically as increasing tuples.
struct BasisLess {
  bool operator()(IndexSet a, IndexSet b) const;
};

class DiffForm {
 public:
  using TermMap = std::map<IndexSet, RatFn, BasisLess>;

  DiffForm(ChartRef chart, int degree);
  static DiffForm function(const RatFn& f);
  static DiffForm differential(ChartRef chart, std::size_t coordinate);
  static DiffForm one_form(ChartRef chart, const std::vector<RatFn>& coefficients);

  const ChartRef& chart() const { return chart_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  RatFn coefficient(IndexSet set) const;
  // Coefficient of dx_i in a 1-form.
  RatFn component(std::size_t i) const;
  std::vector<RatFn> components() const;
  RatFn as_function() const;
  void add_term(IndexSet set, const RatFn& coeff);

  DiffForm operator-() const;
  DiffForm& operator+=(const DiffForm& other);
  DiffForm& operator-=(const DiffForm& other);
  DiffForm& operator*=(const RatFn& f);
  DiffForm scaled(const mpq_class& c) const;

  // Moves the form to a chart containing the same coordinate names.
  DiffForm transfer(const ChartRef& target) const;

  bool operator==(const DiffForm& other) const;
  bool operator!=(const DiffForm& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  void check(const DiffForm& other) const;

  ChartRef chart_;
  int degree_;
  TermMap terms_;
};

DiffForm operator+(DiffForm a, const DiffForm& b);
DiffForm operator-(DiffForm a, const DiffForm& b);
DiffForm operator*(const RatFn& f, DiffForm a);
DiffForm operator*(DiffForm a, const RatFn& f);

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm wedge(std::initializer_list<DiffForm> forms);
DiffForm ext_d(const DiffForm& a);

class VectorField {
 public:
  explicit VectorField(ChartRef chart);
  VectorField(ChartRef chart, std::vector<RatFn> coefficients);
  static VectorField partial(ChartRef chart, std::size_t coordinate);

  const ChartRef& chart() const { return chart_; }
  const std::vector<RatFn>& coefficients() const { return coeffs_; }
  const RatFn& operator[](std::size_t i) const { return coeffs_.at(i); }
  bool is_zero() const;

  // Derivation X(f).
  RatFn apply(const RatFn& f) const;

  VectorField operator-() const;
  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(const RatFn& f);

  bool operator==(const VectorField& other) const;
  std::string to_string() const;

 private:
  ChartRef chart_;
  std::vector<RatFn> coeffs_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(const RatFn& f, VectorField a);

VectorField lie_bracket(const VectorField& x, const VectorField& y);

// Contraction into the first slot.
DiffForm interior(const VectorField& x, const DiffForm& a);
DiffForm lie_derivative(const VectorField& x, const DiffForm& a);

bool is_integrable(const DiffForm& w);
bool same_foliation(const DiffForm& a, const DiffForm& b);

// lambda with a = lambda * b, when a and b are proportional and b != 0.
std::optional<RatFn> proportionality(const DiffForm& a, const DiffForm& b);

// A rational map source -> target given by the images of the target
// variables.  Target parameters default to the same-named source ones.
class ChartMap {
 public:
  ChartMap(ChartRef source, ChartRef target, std::vector<RatFn> coordinate_images);

  const ChartRef& source() const { return source_; }
  const ChartRef& target() const { return target_; }
  const std::vector<RatFn>& images() const { return images_; }

 private:
  ChartRef source_;
  ChartRef target_;
  std::vector<RatFn> images_;
};

RatFn pullback(const ChartMap& map, const RatFn& f);
DiffForm pullback(const ChartMap& map, const DiffForm& a);

}  // namespace pfaff

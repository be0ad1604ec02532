#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pfaff/exterior.hpp"
#include "pfaff/gv.hpp"
#include "pfaff/transverse.hpp"

namespace pfaff {

// Functions are 0-forms.
using Value = std::variant<DiffForm, VectorField, GVSequence, Triple>;

std::string_view kind_name(const Value& v);
std::string print_value(const Value& v);

struct Binding {
  std::string name;
  Value value;
};

// Header `chart x, y [params a, b] over Q|F_p;` followed by `name = expr;`
// statements.  `#` starts a comment.
class Document {
 public:
  explicit Document(ChartRef chart) : chart_(std::move(chart)) {}

  const ChartRef& chart() const { return chart_; }
  const std::vector<Binding>& bindings() const { return bindings_; }
  const Value* find(std::string_view name) const;
  // Replaces an existing binding of the same name.
  void bind(std::string name, Value value);

  bool operator==(const Document& other) const;

 private:
  ChartRef chart_;
  std::vector<Binding> bindings_;
};

// Grammar: + - * / with integer powers ^, wedge /\, d(expr) and dx for
// coordinates, @x for coordinate fields, i(X, w), L(X, w), [X, Y],
// gv [w0, w1, ...], gv finite [...], triple full|half (w0, w1, w2).
// Errors are Parse errors carrying "line:column".
Document parse_document(std::string_view text);
Value parse_expression(std::string_view text, const Document& scope);
std::string print_document(const Document& doc);

// Typed accessors; throw Parse on a kind mismatch.
DiffForm as_form(const Value& v, std::string_view what);
RatFn as_function(const Value& v, std::string_view what);
VectorField as_field(const Value& v, std::string_view what);
GVSequence as_sequence(const Value& v, std::string_view what);
Triple as_triple(const Value& v, std::string_view what);

}  // namespace pfaff

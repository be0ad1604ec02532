#include "pfaff/document.hpp"

#include <cctype>
#include <sstream>

namespace pfaff {

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1, column = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back(Token{Tok::Ident, std::string(s.substr(i, j - i)), line, column});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back(Token{Tok::Number, std::string(s.substr(i, j - i)), line, column});
      advance(j - i);
    } else if (c == '/' && i + 1 < s.size() && s[i + 1] == '\\') {
      out.push_back(Token{Tok::Symbol, "/\\", line, column});
      advance(2);
    } else if (std::string_view("+-*/^()[],;=@").find(c) != std::string_view::npos) {
      out.push_back(Token{Tok::Symbol, std::string(1, c), line, column});
      advance(1);
    } else {
      std::ostringstream msg;
      msg << line << ":" << column << ": unexpected character '" << c << "'";
      fail(ErrorKind::Parse, msg.str());
    }
  }
  out.push_back(Token{Tok::End, "", line, column});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Document* scope) : tokens_(std::move(tokens)), scope_(scope) {}

  [[noreturn]] void error(const Token& t, const std::string& message) const {
    std::ostringstream msg;
    msg << t.line << ":" << t.column << ": " << message;
    fail(ErrorKind::Parse, msg.str());
  }

  void set_scope(const Document* scope) { scope_ = scope; }

  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at_symbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool at_ident(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool at_end() const { return peek().kind == Tok::End; }

  void expect(std::string_view s) {
    if (!at_symbol(s)) error(peek(), "expected '" + std::string(s) + "'" + found());
    next();
  }

  std::string found() const {
    if (at_end()) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  std::string identifier() {
    if (peek().kind != Tok::Ident) error(peek(), "expected an identifier" + found());
    return next().text;
  }

  Document header() {
    if (!at_ident("chart")) error(peek(), "expected 'chart' header" + found());
    next();
    std::vector<std::string> coords{identifier()};
    while (at_symbol(",")) {
      next();
      coords.push_back(identifier());
    }
    std::vector<std::string> params;
    if (at_ident("params")) {
      next();
      params.push_back(identifier());
      while (at_symbol(",")) {
        next();
        params.push_back(identifier());
      }
    }
    if (!at_ident("over")) error(peek(), "expected 'over'" + found());
    next();
    const Token& field = peek();
    std::string f = identifier();
    unsigned long p = 0;
    if (f.rfind("F_", 0) == 0) {
      std::string digits = f.substr(2);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 18)
        error(field, "expected F_p with a prime p");
      p = std::stoul(digits);
    } else if (f != "Q") {
      error(field, "expected Q or F_p");
    }
    expect(";");
    try {
      return Document(make_chart(coords, p, params));
    } catch (const Error& e) {
      error(field, e.what());
    }
  }

  void statements(Document& doc) {
    while (!at_end()) {
      const Token& t = peek();
      std::string name = identifier();
      if (doc.chart()->index_of(name)) error(t, "'" + name + "' is a chart variable");
      expect("=");
      Value v = expression();
      expect(";");
      doc.bind(name, std::move(v));
    }
  }

  Value expression() {
    Value lhs = term();
    while (at_symbol("+") || at_symbol("-")) {
      const Token& op = next();
      Value rhs = term();
      lhs = combine(op, lhs, rhs, op.text == "+");
    }
    return lhs;
  }

  Value term() {
    Value lhs = unary();
    while (at_symbol("*") || at_symbol("/") || at_symbol("/\\")) {
      const Token& op = next();
      Value rhs = unary();
      if (op.text == "*")
        lhs = multiply(op, lhs, rhs);
      else if (op.text == "/")
        lhs = divide(op, lhs, rhs);
      else
        lhs = wedge_values(op, lhs, rhs);
    }
    return lhs;
  }

  Value unary() {
    if (at_symbol("-")) {
      const Token& op = next();
      Value v = unary();
      return negate(op, v);
    }
    if (at_symbol("+")) {
      next();
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = primary();
    if (!at_symbol("^")) return base;
    const Token& op = next();
    bool negative = false;
    if (at_symbol("-")) {
      next();
      negative = true;
    }
    if (peek().kind != Tok::Number) error(peek(), "expected an integer exponent" + found());
    const Token& e = next();
    if (e.text.size() > 6) error(e, "exponent too large");
    long n = std::stol(e.text);
    RatFn f = function_of(op, base, "base of '^'");
    if (negative && f.is_zero()) error(op, "negative power of zero");
    return DiffForm::function(f.pow(negative ? -n : n));
  }

  Value primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return DiffForm::function(RatFn::constant(chart(), mpq_class(mpz_class(t.text))));
    }
    if (at_symbol("(")) {
      next();
      Value v = expression();
      expect(")");
      return v;
    }
    if (at_symbol("[")) {
      next();
      const Token& a = peek();
      VectorField x = field_of(a, expression(), "bracket argument");
      expect(",");
      const Token& b = peek();
      VectorField y = field_of(b, expression(), "bracket argument");
      expect("]");
      return lie_bracket(x, y);
    }
    if (at_symbol("@")) {
      next();
      const Token& v = peek();
      std::string name = identifier();
      auto index = chart()->index_of(name);
      if (!index || chart()->is_parameter(*index)) error(v, "'" + name + "' is not a coordinate");
      return VectorField::partial(chart(), *index);
    }
    if (t.kind != Tok::Ident) error(t, "expected an expression" + found());
    std::string name = next().text;
    if (at_symbol("(") && (name == "d" || name == "i" || name == "L")) return call(t, name);
    if (name == "gv") return sequence(t);
    if (name == "triple") return triple(t);
    if (scope_)
      if (const Value* v = scope_->find(name)) return *v;
    if (auto index = chart()->index_of(name)) return DiffForm::function(RatFn::variable(chart(), *index));
    if (name.size() > 1 && name[0] == 'd') {
      if (auto index = chart()->index_of(name.substr(1))) {
        if (chart()->is_parameter(*index)) error(t, "parameter '" + name.substr(1) + "' has no differential");
        return DiffForm::differential(chart(), *index);
      }
    }
    error(t, "unknown identifier '" + name + "'");
  }

  Value call(const Token& t, const std::string& name) {
    expect("(");
    if (name == "d") {
      const Token& a = peek();
      Value v = expression();
      expect(")");
      return ext_d(form_of(a, v, "argument of d"));
    }
    const Token& a = peek();
    VectorField x = field_of(a, expression(), "first argument");
    expect(",");
    const Token& b = peek();
    DiffForm w = form_of(b, expression(), "second argument");
    expect(")");
    if (name == "i") {
      if (w.degree() == 0) error(t, "interior product of a function");
      return interior(x, w);
    }
    return lie_derivative(x, w);
  }

  std::vector<Value> list(std::string_view open, std::string_view close) {
    expect(open);
    std::vector<Value> out{expression()};
    while (at_symbol(",")) {
      next();
      out.push_back(expression());
    }
    expect(close);
    return out;
  }

  Value sequence(const Token& t) {
    bool finite = false;
    if (at_ident("finite")) {
      next();
      finite = true;
    }
    std::vector<DiffForm> forms;
    for (auto& v : list("[", "]")) forms.push_back(one_form_of(t, v));
    std::size_t n = forms.size();
    return guarded(t, [&] { return Value(GVSequence(std::move(forms), finite ? std::optional(n) : std::nullopt)); });
  }

  Value triple(const Token& t) {
    const Token& c = peek();
    std::string conv = identifier();
    Convention convention;
    if (conv == "full")
      convention = Convention::Full;
    else if (conv == "half")
      convention = Convention::Half;
    else
      error(c, "expected 'full' or 'half'");
    auto items = list("(", ")");
    if (items.size() != 3) error(t, "a triple has three forms");
    return guarded(t, [&] {
      return Value(Triple(one_form_of(t, items[0]), one_form_of(t, items[1]), one_form_of(t, items[2]), convention));
    });
  }

  template <class F>
  Value guarded(const Token& t, F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse) throw;
      error(t, e.what());
    }
  }

  const ChartRef& chart() const { return scope_->chart(); }

  DiffForm form_of(const Token& t, const Value& v, std::string_view what) const {
    if (auto f = std::get_if<DiffForm>(&v)) return *f;
    error(t, std::string(what) + " must be a form, found a " + std::string(kind_name(v)));
  }

  DiffForm one_form_of(const Token& t, const Value& v) const {
    DiffForm w = form_of(t, v, "entry");
    if (w.degree() == 0 && w.is_zero()) return DiffForm(w.chart(), 1);
    if (w.degree() != 1) error(t, "entries must be 1-forms");
    return w;
  }

  RatFn function_of(const Token& t, const Value& v, std::string_view what) const {
    DiffForm f = form_of(t, v, what);
    if (f.degree() != 0) error(t, std::string(what) + " must be a function");
    return f.as_function();
  }

  VectorField field_of(const Token& t, const Value& v, std::string_view what) const {
    if (auto x = std::get_if<VectorField>(&v)) return *x;
    error(t, std::string(what) + " must be a vector field");
  }

  static bool is_function(const Value& v) {
    auto f = std::get_if<DiffForm>(&v);
    return f && f->degree() == 0;
  }

  Value combine(const Token& op, const Value& a, const Value& b, bool add) const {
    if (auto x = std::get_if<DiffForm>(&a)) {
      if (auto y = std::get_if<DiffForm>(&b)) {
        DiffForm l = *x, r = *y;
        if (l.is_zero() && l.degree() == 0) l = DiffForm(r.chart(), r.degree());
        if (r.is_zero() && r.degree() == 0) r = DiffForm(l.chart(), l.degree());
        if (l.degree() != r.degree()) error(op, "sum of forms of different degrees");
        return add ? l + r : l - r;
      }
    }
    if (auto x = std::get_if<VectorField>(&a))
      if (auto y = std::get_if<VectorField>(&b)) return add ? *x + *y : *x - *y;
    error(op, std::string("cannot add a ") + std::string(kind_name(a)) + " and a " + std::string(kind_name(b)));
  }

  Value negate(const Token& op, const Value& v) const {
    if (auto x = std::get_if<DiffForm>(&v)) return -*x;
    if (auto x = std::get_if<VectorField>(&v)) return -*x;
    error(op, "cannot negate a " + std::string(kind_name(v)));
  }

  Value multiply(const Token& op, const Value& a, const Value& b) const {
    if (is_function(a)) {
      RatFn f = function_of(op, a, "factor");
      if (auto x = std::get_if<DiffForm>(&b)) return f * *x;
      if (auto x = std::get_if<VectorField>(&b)) return f * *x;
    }
    if (is_function(b)) {
      RatFn f = function_of(op, b, "factor");
      if (auto x = std::get_if<DiffForm>(&a)) return *x * f;
      if (auto x = std::get_if<VectorField>(&a)) return f * *x;
    }
    error(op, "'*' needs a function factor; use /\\ for the wedge product");
  }

  Value divide(const Token& op, const Value& a, const Value& b) const {
    RatFn f = function_of(op, b, "divisor");
    if (f.is_zero()) error(op, "division by zero");
    return multiply(op, a, DiffForm::function(f.inverse()));
  }

  Value wedge_values(const Token& op, const Value& a, const Value& b) const {
    DiffForm x = form_of(op, a, "wedge factor"), y = form_of(op, b, "wedge factor");
    return wedge(x, y);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Document* scope_;
};

}  // namespace

std::string_view kind_name(const Value& v) {
  if (auto f = std::get_if<DiffForm>(&v)) return f->degree() == 0 ? "function" : "form";
  if (std::holds_alternative<VectorField>(v)) return "vector field";
  if (std::holds_alternative<GVSequence>(v)) return "sequence";
  return "triple";
}

// Zero forms and fields keep their degree through an explicit basis.
std::string print_value(const Value& v) {
  if (auto f = std::get_if<DiffForm>(&v); f && f->is_zero() && f->degree() > 0) {
    std::string out = "0*";
    for (int i = 0; i < f->degree(); ++i) out += (i ? "/\\d" : "d") + f->chart()->name(static_cast<std::size_t>(i));
    return out;
  }
  if (auto x = std::get_if<VectorField>(&v); x && x->is_zero()) return "0*@" + x->chart()->name(0);
  return std::visit([](const auto& x) { return x.to_string(); }, v);
}

const Value* Document::find(std::string_view name) const {
  for (const auto& b : bindings_)
    if (b.name == name) return &b.value;
  return nullptr;
}

void Document::bind(std::string name, Value value) {
  for (auto& b : bindings_)
    if (b.name == name) {
      b.value = std::move(value);
      return;
    }
  bindings_.push_back(Binding{std::move(name), std::move(value)});
}

bool Document::operator==(const Document& other) const {
  if (!same_chart(chart_, other.chart_) || bindings_.size() != other.bindings_.size()) return false;
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    if (bindings_[i].name != other.bindings_[i].name || !(bindings_[i].value == other.bindings_[i].value))
      return false;
  return true;
}

Document parse_document(std::string_view text) {
  Parser parser(tokenize(text), nullptr);
  Document doc = parser.header();
  parser.set_scope(&doc);
  parser.statements(doc);
  return doc;
}

Value parse_expression(std::string_view text, const Document& scope) {
  Parser parser(tokenize(text), &scope);
  Value v = parser.expression();
  if (!parser.at_end()) parser.error(parser.peek(), "unexpected trailing input");
  return v;
}

std::string print_document(const Document& doc) {
  const Chart& c = *doc.chart();
  std::ostringstream out;
  out << "chart ";
  auto coords = c.coordinates(), params = c.parameters();
  for (std::size_t i = 0; i < coords.size(); ++i) out << (i ? ", " : "") << coords[i];
  if (!params.empty()) {
    out << " params ";
    for (std::size_t i = 0; i < params.size(); ++i) out << (i ? ", " : "") << params[i];
  }
  out << " over ";
  if (c.characteristic() == 0)
    out << "Q";
  else
    out << "F_" << c.characteristic();
  out << ";\n";
  for (const auto& b : doc.bindings()) out << b.name << " = " << print_value(b.value) << ";\n";
  return out.str();
}

DiffForm as_form(const Value& v, std::string_view what) {
  if (auto f = std::get_if<DiffForm>(&v)) return *f;
  fail(ErrorKind::Parse, std::string(what) + " must be a form");
}

RatFn as_function(const Value& v, std::string_view what) {
  DiffForm f = as_form(v, what);
  if (f.degree() != 0) fail(ErrorKind::Parse, std::string(what) + " must be a function");
  return f.as_function();
}

VectorField as_field(const Value& v, std::string_view what) {
  if (auto x = std::get_if<VectorField>(&v)) return *x;
  fail(ErrorKind::Parse, std::string(what) + " must be a vector field");
}

GVSequence as_sequence(const Value& v, std::string_view what) {
  if (auto s = std::get_if<GVSequence>(&v)) return *s;
  if (auto f = std::get_if<DiffForm>(&v))
    if (f->degree() == 1) return GVSequence({*f});
  fail(ErrorKind::Parse, std::string(what) + " must be a sequence");
}

Triple as_triple(const Value& v, std::string_view what) {
  if (auto t = std::get_if<Triple>(&v)) return *t;
  fail(ErrorKind::Parse, std::string(what) + " must be a triple");
}

}  // namespace pfaff

// Multivariate gcd by Brown's dense modular algorithm.  Over Q the images
// live modulo word-size primes; over F_p they live in F_p itself for large p
// and in an extension field GF(p^k) for small p.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "pfaff/field.hpp"

namespace pfaff {

namespace {

using UPoly = std::vector<MultiPoly>;

MultiPoly gcd_core(const MultiPoly& a, const MultiPoly& b);

// Associate normal form: primitive with integer coefficients and positive
// leading coefficient over Q, monic over F_p.
MultiPoly unit_normal(const MultiPoly& a) {
  if (a.is_zero()) return a;
  if (a.chart()->characteristic() != 0) return a.monic();
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& t : a.terms()) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  mpq_class factor(den_lcm, num_gcd);
  factor.canonicalize();
  if (a.leading_coefficient() < 0) factor = -factor;
  return factor == 1 ? a : a.scaled(factor);
}

std::vector<mpq_class> dense_univariate(const MultiPoly& a, std::size_t var) {
  std::vector<mpq_class> out(a.degree_in(var) + 1);
  for (const auto& t : a.terms()) out[t.exp[var]] = t.coeff;
  return out;
}

MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b, std::size_t var) {
  unsigned long p = a.chart()->characteristic();
  auto x = dense_univariate(a, var);
  auto y = dense_univariate(b, var);
  auto strip = [](std::vector<mpq_class>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  strip(x);
  strip(y);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    mpq_class inv = scalar::inverse(y.back(), p);
    for (auto& c : y) {
      c *= inv;
      scalar::reduce(c, p);
    }
    while (x.size() >= y.size()) {
      mpq_class t = x.back();
      std::size_t s = x.size() - y.size();
      for (std::size_t i = 0; i < y.size(); ++i) {
        x[i + s] -= t * y[i];
        scalar::reduce(x[i + s], p);
      }
      x.pop_back();
      strip(x);
      if (x.empty()) break;
    }
    std::swap(x, y);
  }
  std::vector<Term> terms;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0) continue;
    Term t;
    t.exp[var] = static_cast<std::uint16_t>(k);
    t.coeff = x[k];
    terms.push_back(std::move(t));
  }
  return MultiPoly::from_terms(a.chart(), std::move(terms)).monic();
}

// Arithmetic modulo a word-size prime for the image tests.
struct Modular {
  std::uint64_t p;

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    while (e > 0) {
      if (e & 1U) r = mul(r, a);
      a = mul(a, a);
      e >>= 1U;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const { return pow(a, p - 2); }

  std::optional<std::uint64_t> image(const mpq_class& q) const {
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class d = q.get_den() % pz;
    if (d == 0) return std::nullopt;
    mpz_class n = q.get_num() % pz;
    if (n < 0) n += pz;
    return mul(n.get_ui(), inv(d.get_ui()));
  }

  std::uint64_t salt = 0;
  std::uint64_t size() const { return p; }
  std::uint64_t embed(std::uint64_t c) const { return c % p; }
  std::optional<std::uint64_t> extract(std::uint64_t e) const { return e; }
  template <class Rng>
  std::uint64_t random(Rng& rng) const {
    return rng() % p;
  }
};

// GF(p^k) with p^k >= 2^16, for gcds over small prime fields.  An element
// is stored as 1 + its discrete logarithm, zero as 0; the element whose
// base-p digits are c_0, c_1, ... is c_0 + c_1 t + ... modulo a primitive
// polynomial.
struct GaloisTables {
  std::uint64_t p = 0, q = 0;
  std::vector<std::uint32_t> log_of;
  std::vector<std::uint32_t> antilog;
  std::vector<std::int64_t> zech;  // log(1 + g^n), -1 when 1 + g^n = 0
};

std::shared_ptr<const GaloisTables> build_galois(std::uint64_t p) {
  std::size_t k = 1;
  std::uint64_t q = p;
  while (q < 65536) {
    q *= p;
    ++k;
  }
  auto out = std::make_shared<GaloisTables>();
  out->p = p;
  out->q = q;
  std::vector<std::uint64_t> digits(k), f(k);
  auto encode = [&](const std::vector<std::uint64_t>& d) {
    std::uint64_t e = 0;
    for (std::size_t i = k; i-- > 0;) e = e * p + d[i];
    return e;
  };
  for (std::uint64_t candidate = 1; candidate < q; ++candidate) {
    std::uint64_t c = candidate;
    for (auto& x : f) {
      x = c % p;
      c /= p;
    }
    if (f[0] == 0) continue;
    std::fill(digits.begin(), digits.end(), 0);
    digits[0] = 1;
    out->antilog.assign(q - 1, 0);
    std::uint64_t order = 0;
    do {
      out->antilog[order++] = static_cast<std::uint32_t>(encode(digits));
      std::uint64_t top = digits[k - 1];
      for (std::size_t i = k; i-- > 1;) digits[i] = (digits[i - 1] + (p - f[i]) * top) % p;
      digits[0] = (p - f[0]) * top % p;
    } while (order < q - 1 && encode(digits) != 1);
    if (order == q - 1 && encode(digits) == 1) break;
  }
  out->log_of.assign(q, 0);
  for (std::uint64_t n = 0; n + 1 < q; ++n) out->log_of[out->antilog[n]] = static_cast<std::uint32_t>(n);
  out->zech.assign(q - 1, -1);
  for (std::uint64_t n = 0; n + 1 < q; ++n) {
    std::uint64_t e = out->antilog[n];
    std::uint64_t plus = e - e % p + (e % p + 1) % p;
    if (plus != 0) out->zech[n] = out->log_of[plus];
  }
  return out;
}

std::shared_ptr<const GaloisTables> galois_tables(std::uint64_t p) {
  static std::mutex mutex;
  static std::map<std::uint64_t, std::shared_ptr<const GaloisTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[p];
  if (!slot) slot = build_galois(p);
  return slot;
}

struct Galois {
  std::shared_ptr<const GaloisTables> t;
  std::uint64_t salt = 0;

  std::uint64_t order() const { return t->q - 1; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (a == 0 || b == 0) return 0;
    return (a - 1 + b - 1) % order() + 1;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint64_t n = (b + order() - a) % order();
    std::int64_t z = t->zech[n];
    if (z < 0) return 0;
    return (a - 1 + static_cast<std::uint64_t>(z)) % order() + 1;
  }
  std::uint64_t neg(std::uint64_t a) const { return t->p == 2 ? a : mul(a, order() / 2 + 1); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a - 1) * e) % order()) + 1;
  }
  std::uint64_t inv(std::uint64_t a) const { return (order() - (a - 1)) % order() + 1; }
  std::uint64_t embed(std::uint64_t c) const {
    c %= t->p;
    return c == 0 ? 0 : t->log_of[c] + 1;
  }
  std::optional<std::uint64_t> extract(std::uint64_t e) const {
    if (e == 0) return 0;
    std::uint64_t v = t->antilog[e - 1];
    if (v >= t->p) return std::nullopt;
    return v;
  }
  std::optional<std::uint64_t> image(const mpq_class& q) const {
    Modular base{t->p};
    auto v = base.image(q);
    if (!v) return std::nullopt;
    return embed(*v);
  }
  std::uint64_t size() const { return t->q; }
  template <class Rng>
  std::uint64_t random(Rng& rng) const {
    return rng() % t->q;
  }
};

using Dense = std::vector<std::uint64_t>;

void strip(Dense& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

template <class F>
std::optional<Dense> evaluate_image(const MultiPoly& a, std::size_t var, const std::vector<std::uint64_t>& point,
                                    const F& m) {
  Dense out(a.degree_in(var) + 1, 0);
  for (const auto& t : a.terms()) {
    auto c = m.image(t.coeff);
    if (!c) return std::nullopt;
    std::uint64_t v = *c;
    for (std::size_t i = 0; i < point.size(); ++i)
      if (i != var && t.exp[i] != 0) v = m.mul(v, m.pow(point[i], t.exp[i]));
    out[t.exp[var]] = m.add(out[t.exp[var]], v);
  }
  return out;
}

template <class F>
Dense dense_gcd(Dense x, Dense y, const F& m) {
  strip(x);
  strip(y);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    std::uint64_t inv = m.inv(y.back());
    while (x.size() >= y.size()) {
      std::uint64_t t = m.mul(x.back(), inv);
      std::size_t s = x.size() - y.size();
      for (std::size_t i = 0; i < y.size(); ++i) x[i + s] = m.sub(x[i + s], m.mul(t, y[i]));
      x.pop_back();
      strip(x);
      if (x.empty()) break;
    }
    std::swap(x, y);
  }
  if (!x.empty()) {
    std::uint64_t inv = m.inv(x.back());
    for (auto& c : x) c = m.mul(c, inv);
  }
  return x;
}

template <class F>
std::size_t dense_gcd_degree(Dense x, Dense y, const F& m) {
  Dense g = dense_gcd(std::move(x), std::move(y), m);
  return g.empty() ? 0 : g.size() - 1;
}

template <class F>
std::uint64_t dense_eval(const Dense& d, std::uint64_t at, const F& m) {
  std::uint64_t r = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) r = m.add(m.mul(r, at), *it);
  return r;
}

template <class F>
Dense dense_mul(const Dense& a, const Dense& b, const F& m) {
  if (a.empty() || b.empty()) return {};
  Dense out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = m.add(out[i + j], m.mul(a[i], b[j]));
  return out;
}

// Quotient of an exact division by a monic divisor.
template <class F>
Dense dense_div(Dense a, const Dense& b, const F& m) {
  strip(a);
  if (a.size() < b.size()) return {};
  Dense q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    std::uint64_t t = a[k + b.size() - 1];
    q[k] = t;
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] = m.sub(a[k + i], m.mul(t, b[i]));
  }
  return q;
}

template <class F>
std::optional<bool> image_coprime(const MultiPoly& a, const MultiPoly& b, std::size_t var, std::mt19937_64& rng,
                                  const F& m) {
  std::vector<std::uint64_t> point(a.chart()->nvars());
  for (auto& v : point) v = m.random(rng);
  auto ia = evaluate_image(a, var, point, m);
  auto ib = evaluate_image(b, var, point, m);
  if (!ia || !ib) return std::nullopt;
  strip(*ia);
  strip(*ib);
  if (ia->size() != a.degree_in(var) + 1 || ib->size() != b.degree_in(var) + 1) return std::nullopt;
  return dense_gcd_degree(std::move(*ia), std::move(*ib), m) == 0;
}

// True when the gcd of a and b provably does not involve var.  An image
// with full leading coefficients and trivial gcd certifies this.
bool gcd_free_of(const MultiPoly& a, const MultiPoly& b, std::size_t var) {
  unsigned long p = a.chart()->characteristic();
  static const std::uint64_t kPrimes[] = {2147483629ULL, 2147483587ULL, 2147483579ULL};
  std::mt19937_64 rng(0x9E3779B97F4A7C15ULL + var);
  for (int attempt = 0; attempt < 3; ++attempt) {
    std::optional<bool> r;
    if (p == 0)
      r = image_coprime(a, b, var, rng, Modular{kPrimes[attempt]});
    else if (p > 65536)
      r = image_coprime(a, b, var, rng, Modular{p});
    else
      r = image_coprime(a, b, var, rng, Galois{galois_tables(p)});
    if (r) return *r;
  }
  return false;
}

struct ModTerm {
  Exponents exp;
  std::uint64_t coeff;
};
using ModPoly = std::vector<ModTerm>;

// Lexicographic "greater than" on the first count variables of vars.
struct LexGreater {
  const std::vector<std::size_t>* vars;
  std::size_t count;
  bool operator()(const Exponents& a, const Exponents& b) const {
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t v = (*vars)[i];
      if (a[v] != b[v]) return a[v] > b[v];
    }
    return false;
  }
};

// Coefficients as dense polynomials in the last active variable.
using Recursive = std::map<Exponents, Dense, LexGreater>;

template <class F>
ModPoly monic(ModPoly a, const F& m) {
  if (a.empty()) return a;
  std::uint64_t inv = m.inv(a.front().coeff);
  for (auto& t : a) t.coeff = m.mul(t.coeff, inv);
  return a;
}

template <class F>
Dense recursive_content(const Recursive& r, const F& m) {
  Dense g;
  for (const auto& [key, d] : r) {
    g = dense_gcd(g, d, m);
    if (g.size() == 1) break;
  }
  return g;
}

template <class F>
ModPoly modular_gcd(const ModPoly& a, const ModPoly& b, const std::vector<std::size_t>& vars, std::size_t k,
                    const F& m) {
  if (a.empty()) return monic(b, m);
  if (b.empty()) return monic(a, m);
  if (k == 0) return ModPoly{ModTerm{Exponents{}, 1}};

  std::size_t last = vars[k - 1];
  LexGreater order{&vars, k - 1};
  auto to_recursive = [&](const ModPoly& p) {
    Recursive r(order);
    for (const auto& t : p) {
      Exponents key = t.exp;
      key[last] = 0;
      Dense& d = r[key];
      if (d.size() <= t.exp[last]) d.resize(t.exp[last] + 1, 0);
      d[t.exp[last]] = t.coeff;
    }
    return r;
  };
  auto to_flat = [&](const Recursive& r) {
    ModPoly out;
    for (const auto& [key, d] : r)
      for (std::size_t j = d.size(); j-- > 0;) {
        if (d[j] == 0) continue;
        ModTerm t{key, d[j]};
        t.exp[last] = static_cast<std::uint16_t>(j);
        out.push_back(t);
      }
    return out;
  };
  auto max_degree = [](const Recursive& r) {
    std::size_t d = 0;
    for (const auto& [key, v] : r) d = std::max(d, v.size() - 1);
    return d;
  };

  Recursive ra = to_recursive(a), rb = to_recursive(b);
  Dense ca = recursive_content(ra, m), cb = recursive_content(rb, m);
  for (auto& [key, d] : ra) d = dense_div(d, ca, m);
  for (auto& [key, d] : rb) d = dense_div(d, cb, m);
  Dense cont = dense_gcd(ca, cb, m);
  auto constant_part = [&] {
    Recursive r(order);
    r[Exponents{}] = cont;
    return to_flat(r);
  };
  if (k == 1) return constant_part();

  Dense lc = dense_gcd(ra.begin()->second, rb.begin()->second, m);
  std::size_t bound = std::min(max_degree(ra), max_degree(rb)) + lc.size() - 1;

  std::optional<Exponents> lead;
  Recursive h(order);
  Dense q{1};
  std::mt19937_64 rng(m.size() * 31 + k + m.salt * 7919);
  for (std::size_t attempt = 0; attempt < 4 * (bound + 8); ++attempt) {
    std::uint64_t at = m.random(rng);
    std::uint64_t lc_at = dense_eval(lc, at, m);
    if (lc_at == 0 || dense_eval(q, at, m) == 0) continue;
    auto evaluate = [&](const Recursive& r) {
      ModPoly out;
      for (const auto& [key, d] : r) {
        std::uint64_t v = dense_eval(d, at, m);
        if (v != 0) out.push_back(ModTerm{key, v});
      }
      return out;
    };
    ModPoly image = modular_gcd(evaluate(ra), evaluate(rb), vars, k - 1, m);
    const Exponents& lm = image.front().exp;
    if (total_degree(lm) == 0) return constant_part();
    if (!lead || order(*lead, lm)) {
      lead = lm;
      h.clear();
      q = Dense{1};
    } else if (order(lm, *lead)) {
      continue;
    }
    std::uint64_t scale = m.mul(lc_at, m.inv(image.front().coeff));
    std::uint64_t inv_q = m.inv(dense_eval(q, at, m));
    bool changed = false;
    auto update = [&](Dense& d, std::uint64_t target) {
      std::uint64_t diff = m.mul(m.sub(target, dense_eval(d, at, m)), inv_q);
      if (diff == 0) return;
      changed = true;
      if (d.size() < q.size()) d.resize(q.size(), 0);
      for (std::size_t i = 0; i < q.size(); ++i) d[i] = m.add(d[i], m.mul(diff, q[i]));
      strip(d);
    };
    std::map<Exponents, std::uint64_t, LexGreater> values(order);
    for (const auto& t : image) values[t.exp] = m.mul(t.coeff, scale);
    for (auto it = h.begin(); it != h.end();) {
      auto found = values.find(it->first);
      std::uint64_t target = 0;
      if (found != values.end()) {
        target = found->second;
        values.erase(found);
      }
      update(it->second, target);
      it = it->second.empty() ? h.erase(it) : std::next(it);
    }
    for (const auto& [key, v] : values) {
      Dense d;
      update(d, v);
      h[key] = std::move(d);
    }
    q = dense_mul(q, Dense{m.sub(0, at), 1}, m);
    // One point beyond the degree bound must agree with the interpolant.
    if (q.size() > bound + 2 && !changed) {
      Dense c = recursive_content(h, m);
      for (auto& [key, d] : h) d = dense_mul(dense_div(d, c, m), cont, m);
      return to_flat(h);
    }
  }
  fail(ErrorKind::InvalidArgument, "modular gcd ran out of evaluation points");
}

std::uint64_t word_prime(std::size_t index) {
  static std::mutex mutex;
  static std::vector<std::uint64_t> primes;
  std::lock_guard<std::mutex> lock(mutex);
  mpz_class candidate = primes.empty() ? mpz_class(2147483647UL) : mpz_class(primes.back() - 2);
  while (primes.size() <= index) {
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 25) > 0) primes.push_back(candidate.get_ui());
    candidate -= 2;
  }
  return primes[index];
}

Exponents lex_leading(const MultiPoly& a, const LexGreater& order, mpq_class* coeff) {
  const Term* best = &a.terms().front();
  for (const auto& t : a.terms())
    if (order(t.exp, best->exp)) best = &t;
  *coeff = best->coeff;
  return best->exp;
}

// Gcd of integer primitive polynomials over Q involving exactly vars.
MultiPoly rational_gcd(const MultiPoly& a, const MultiPoly& b, const std::vector<std::size_t>& vars) {
  const ChartRef& chart = a.chart();
  LexGreater order{&vars, vars.size()};
  mpq_class lca, lcb;
  lex_leading(a, order, &lca);
  lex_leading(b, order, &lcb);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), lca.get_num_mpz_t(), lcb.get_num_mpz_t());

  auto reduce = [&](const MultiPoly& x, const Modular& m) {
    ModPoly out;
    mpz_class pz(static_cast<unsigned long>(m.p));
    for (const auto& t : x.terms()) {
      mpz_class r = t.coeff.get_num() % pz;
      if (r < 0) r += pz;
      if (r != 0) out.push_back(ModTerm{t.exp, r.get_ui()});
    }
    std::sort(out.begin(), out.end(), [&](const ModTerm& u, const ModTerm& v) { return order(u.exp, v.exp); });
    return out;
  };
  using Lifted = std::map<Exponents, mpz_class, LexGreater>;
  auto symmetric = [](const Lifted& h, const mpz_class& modulus) {
    Lifted out(h.key_comp());
    mpz_class half = modulus / 2;
    for (const auto& [key, v] : h) out.emplace(key, v > half ? mpz_class(v - modulus) : v);
    return out;
  };

  std::optional<Exponents> lead;
  Lifted h(order);
  mpz_class modulus = 1;
  for (std::size_t index = 0;; ++index) {
    Modular m{word_prime(index)};
    mpz_class pz(static_cast<unsigned long>(m.p));
    if (mpz_divisible_p(g.get_mpz_t(), pz.get_mpz_t())) continue;
    ModPoly image = modular_gcd(reduce(a, m), reduce(b, m), vars, vars.size(), m);
    if (total_degree(image.front().exp) == 0) return MultiPoly::constant(chart, 1);
    const Exponents& lm = image.front().exp;
    if (!lead || order(*lead, lm)) {
      lead = lm;
      h.clear();
      modulus = 1;
    } else if (order(lm, *lead)) {
      continue;
    }
    mpz_class gp = g % pz;
    if (gp < 0) gp += pz;
    std::uint64_t scale = m.mul(gp.get_ui(), m.inv(image.front().coeff));
    std::map<Exponents, std::uint64_t, LexGreater> values(order);
    for (const auto& t : image) values[t.exp] = m.mul(t.coeff, scale);

    Lifted before = symmetric(h, modulus);
    mpz_class mod_p = modulus % pz;
    std::uint64_t inv_modulus = m.inv(mod_p.get_ui());
    for (const auto& [key, v] : values) h.emplace(key, 0);
    for (auto& [key, v] : h) {
      auto found = values.find(key);
      std::uint64_t target = found == values.end() ? 0 : found->second;
      mpz_class r = v % pz;
      std::uint64_t diff = m.mul(m.sub(target, r.get_ui()), inv_modulus);
      v += modulus * static_cast<unsigned long>(diff);
    }
    modulus *= pz;
    for (auto it = h.begin(); it != h.end();) it = it->second == 0 ? h.erase(it) : std::next(it);
    Lifted after = symmetric(h, modulus);
    if (before != after) continue;

    std::vector<Term> terms;
    mpz_class content = 0;
    for (const auto& [key, v] : after) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    for (const auto& [key, v] : after) terms.push_back(Term{key, mpq_class(mpz_class(v / content))});
    MultiPoly candidate = MultiPoly::from_terms(chart, std::move(terms));
    if (a.try_div(candidate) && b.try_div(candidate)) return candidate;
    lead.reset();
    h.clear();
    modulus = 1;
  }
}

template <class F>
std::optional<MultiPoly> finite_image_gcd(const MultiPoly& a, const MultiPoly& b, const std::vector<std::size_t>& vars,
                                          const F& m) {
  LexGreater order{&vars, vars.size()};
  auto embed = [&](const MultiPoly& x) {
    ModPoly out;
    for (const auto& t : x.terms()) out.push_back(ModTerm{t.exp, m.embed(t.coeff.get_num().get_ui())});
    std::sort(out.begin(), out.end(), [&](const ModTerm& u, const ModTerm& v) { return order(u.exp, v.exp); });
    return out;
  };
  ModPoly g = monic(modular_gcd(embed(a), embed(b), vars, vars.size(), m), m);
  std::vector<Term> terms;
  for (const auto& t : g) {
    auto c = m.extract(t.coeff);
    if (!c) return std::nullopt;
    terms.push_back(Term{t.exp, mpq_class(static_cast<unsigned long>(*c))});
  }
  MultiPoly candidate = MultiPoly::from_terms(a.chart(), std::move(terms));
  if (!a.try_div(candidate) || !b.try_div(candidate)) return std::nullopt;
  return candidate;
}

// Gcd over F_p of polynomials involving exactly vars.
MultiPoly finite_gcd(const MultiPoly& a, const MultiPoly& b, const std::vector<std::size_t>& vars) {
  unsigned long p = a.chart()->characteristic();
  for (std::uint64_t salt = 0; salt < 16; ++salt) {
    std::optional<MultiPoly> g;
    if (p > 65536)
      g = finite_image_gcd(a, b, vars, Modular{p, salt});
    else
      g = finite_image_gcd(a, b, vars, Galois{galois_tables(p), salt});
    if (g) return *g;
  }
  fail(ErrorKind::InvalidArgument, "gcd over F_p did not verify");
}

std::vector<std::size_t> variables_of(const MultiPoly& a) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < a.chart()->nvars(); ++i)
    if (a.involves(i)) vars.push_back(i);
  return vars;
}

MultiPoly gcd_with_coefficients(const MultiPoly& other, const MultiPoly& a, std::size_t var) {
  UPoly coeffs = a.coefficients_in(var);
  std::sort(coeffs.begin(), coeffs.end(), [](const MultiPoly& x, const MultiPoly& y) {
    return x.size() < y.size();
  });
  MultiPoly g = other;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = gcd_core(g, c);
    if (g.is_constant()) break;
  }
  return g;
}

MultiPoly gcd_core(const MultiPoly& a, const MultiPoly& b) {
  const ChartRef& chart = a.chart();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() || b.is_constant()) return MultiPoly::constant(chart, 1);
  if (a == b) return a;

  Exponents ma = a.min_exponents(), mb = b.min_exponents();
  if (total_degree(ma) > 0 || total_degree(mb) > 0) {
    Exponents mg{};
    for (std::size_t i = 0; i < mg.size(); ++i) mg[i] = std::min(ma[i], mb[i]);
    MultiPoly g = gcd_core(a.divide_monomial(ma), b.divide_monomial(mb));
    return g.shifted(mg);
  }

  auto va = variables_of(a), vb = variables_of(b);
  for (auto v : va)
    if (!b.involves(v)) return gcd_with_coefficients(b, a, v);
  for (auto v : vb)
    if (!a.involves(v)) return gcd_with_coefficients(a, b, v);

  if (va.size() == 1 && chart->characteristic() != 0) return univariate_gcd(a, b, va[0]);

  std::vector<std::size_t> bound;
  for (auto v : va)
    if (!gcd_free_of(a, b, v)) bound.push_back(v);
  if (bound.empty()) return MultiPoly::constant(chart, 1);
  if (bound.size() < va.size()) {
    std::size_t v = 0;
    for (auto u : va)
      if (std::find(bound.begin(), bound.end(), u) == bound.end()) v = u;
    return gcd_with_coefficients(b, a, v);
  }
  if (chart->characteristic() == 0) return unit_normal(rational_gcd(a, b, va));
  return finite_gcd(a, b, va);
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  require_same_chart(a.chart(), b.chart());
  if (a.is_zero() && b.is_zero()) return a;
  return gcd_core(unit_normal(a), unit_normal(b)).monic();
}

}  // namespace pfaff

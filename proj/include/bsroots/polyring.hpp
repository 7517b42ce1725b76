#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace bsroots {

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<unsigned> e) : exps_(std::move(e)) {
    degree_ = std::accumulate(exps_.begin(), exps_.end(), 0u);
  }
  static ExponentVector zero(std::size_t n) { return ExponentVector(std::vector<unsigned>(n, 0)); }
  static ExponentVector unit(std::size_t n, std::size_t i) {
    std::vector<unsigned> e(n, 0);
    e[i] = 1;
    return ExponentVector(std::move(e));
  }

  std::size_t size() const { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  unsigned total_degree() const { return degree_; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  ExponentVector operator*(const ExponentVector& o) const {
    std::vector<unsigned> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
    return ExponentVector(std::move(e));
  }
  ExponentVector times_var(std::size_t i) const {
    ExponentVector r(*this);
    ++r.exps_[i];
    ++r.degree_;
    return r;
  }
  ExponentVector div_var(std::size_t i) const {
    ExponentVector r(*this);
    --r.exps_[i];
    --r.degree_;
    return r;
  }
  // Index of the first variable that divides the monomial, or size() for 1.
  std::size_t first_var() const {
    std::size_t i = 0;
    while (i < exps_.size() && exps_[i] == 0) ++i;
    return i;
  }

  bool operator==(const ExponentVector& o) const { return exps_ == o.exps_; }
  bool operator<(const ExponentVector& o) const { return exps_ < o.exps_; }

  // Injective for n <= 8 and exponents < 256, which covers everything here.
  std::uint64_t pack() const {
    std::uint64_t h = 0;
    for (unsigned e : exps_) h = (h << 8) | e;
    return h;
  }

 private:
  std::vector<unsigned> exps_;
  unsigned degree_ = 0;
};

// Graded reverse lexicographic order, x_1 > x_2 > ... > x_n.
struct GrevlexGreater {
  bool operator()(const ExponentVector& a, const ExponentVector& b) const {
    if (a.total_degree() != b.total_degree()) return a.total_degree() > b.total_degree();
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

inline Integer binomial(long n, long k) {
  if (k < 0 || n < k) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Dimension of R_k for R = Q[x_1..x_n].
inline std::size_t monomial_count(std::size_t n, long k) {
  if (k < 0) return 0;
  return binomial(k + static_cast<long>(n) - 1, static_cast<long>(n) - 1).get_ui();
}

// All exponent vectors of total degree k, grevlex-descending.
inline std::vector<ExponentVector> monomials_of_degree(std::size_t n, long k) {
  std::vector<ExponentVector> out;
  if (k < 0 || n == 0) return out;
  std::vector<unsigned> e(n, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == n) {
      e[i] = left;
      out.emplace_back(e);
      return;
    }
    for (unsigned a = 0; a <= left; ++a) {
      e[i] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, static_cast<unsigned>(k));
  std::sort(out.begin(), out.end(), GrevlexGreater{});
  return out;
}

// Monomial basis of one graded piece with reverse lookup.
class MonomialBasis {
 public:
  MonomialBasis() = default;
  MonomialBasis(std::size_t n, long k) : n_(n), degree_(k), monos_(monomials_of_degree(n, k)) {
    index_.reserve(monos_.size());
    for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i].pack(), i);
  }
  std::size_t size() const { return monos_.size(); }
  long degree() const { return degree_; }
  const ExponentVector& operator[](std::size_t i) const { return monos_[i]; }
  const std::vector<ExponentVector>& monomials() const { return monos_; }
  std::size_t index(const ExponentVector& m) const { return index_.at(m.pack()); }

 private:
  std::size_t n_ = 0;
  long degree_ = 0;
  std::vector<ExponentVector> monos_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

// General sparse polynomial; used while parsing and for identities in tests.
class Polynomial {
 public:
  using Terms = std::map<ExponentVector, Rational>;

  explicit Polynomial(std::size_t n = 0) : n_(n) {}
  static Polynomial constant(std::size_t n, const Rational& c) {
    Polynomial p(n);
    if (c != 0) p.terms_[ExponentVector::zero(n)] = c;
    return p;
  }
  static Polynomial variable(std::size_t n, std::size_t i) {
    Polynomial p(n);
    p.terms_[ExponentVector::unit(n, i)] = 1;
    return p;
  }

  std::size_t n_vars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const ExponentVector& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial r(n_);
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
  }
  Polynomial pow(unsigned e) const {
    Polynomial r = constant(n_, 1), b(*this);
    for (; e; e >>= 1) {
      if (e & 1) r = r * b;
      if (e > 1) b = b * b;
    }
    return r;
  }
  Polynomial derivative(std::size_t i) const {
    Polynomial r(n_);
    for (const auto& [m, c] : terms_)
      if (m[i] > 0) r.add_term(m.div_var(i), c * m[i]);
    return r;
  }
  Polynomial times_var(std::size_t i) const {
    Polynomial r(n_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m.times_var(i), c);
    return r;
  }
  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  std::size_t n_;
  Terms terms_;
};

class HomogPoly {
 public:
  using Terms = std::map<ExponentVector, Rational, GrevlexGreater>;

  HomogPoly() = default;
  // Validates homogeneity; the zero polynomial is rejected.
  explicit HomogPoly(const Polynomial& p) : n_(p.n_vars()) {
    if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "polynomial is zero");
    degree_ = p.terms().begin()->first.total_degree();
    for (const auto& [m, c] : p.terms()) {
      if (m.total_degree() != degree_)
        fail(ErrorCode::NotHomogeneous, "monomials of degrees " + std::to_string(degree_) + " and " +
                                            std::to_string(m.total_degree()));
      terms_.emplace(m, c);
    }
  }

  std::size_t n_vars() const { return n_; }
  unsigned degree() const { return degree_; }
  const Terms& terms() const { return terms_; }

  Polynomial to_polynomial() const {
    Polynomial p(n_);
    for (const auto& [m, c] : terms_) p.add_term(m, c);
    return p;
  }
  HomogPoly scaled(const Rational& s) const {
    HomogPoly r(*this);
    for (auto& [m, c] : r.terms_) c *= s;
    return r;
  }
  // Substitutes x_i -> x_{perm[i]}.
  HomogPoly permuted(const std::vector<std::size_t>& perm) const {
    Polynomial p(n_);
    for (const auto& [m, c] : terms_) {
      std::vector<unsigned> e(n_);
      for (std::size_t i = 0; i < n_; ++i) e[perm[i]] = m[i];
      p.add_term(ExponentVector(std::move(e)), c);
    }
    return HomogPoly(p);
  }
  bool operator==(const HomogPoly& o) const {
    return n_ == o.n_ && degree_ == o.degree_ && terms_ == o.terms_;
  }

 private:
  std::size_t n_ = 0;
  unsigned degree_ = 0;
  Terms terms_;
};

// Coefficients of a homogeneous polynomial of degree k in the grevlex basis of R_k.
inline std::vector<std::pair<std::size_t, Rational>> coordinates(const Polynomial& p, const MonomialBasis& basis) {
  std::vector<std::pair<std::size_t, Rational>> out;
  for (const auto& [m, c] : p.terms()) out.emplace_back(basis.index(m), c);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

inline std::vector<Polynomial> partials(const HomogPoly& f) {
  std::vector<Polynomial> out;
  Polynomial p = f.to_polynomial();
  for (std::size_t i = 0; i < f.n_vars(); ++i) out.push_back(p.derivative(i));
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::SyntaxError, msg + " at position " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected a number");
    return text_.substr(start, pos_ - start);
  }

  Polynomial expr() {
    Polynomial acc(vars_.size());
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    Polynomial t = term();
    acc = negate ? -t : t;
    for (;;) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }
  Polynomial term() {
    Polynomial acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        Integer den(digits());
        if (den == 0) error("zero denominator");
        acc = acc * Polynomial::constant(vars_.size(), Rational(Integer(1), den));
      } else {
        return acc;
      }
    }
  }
  Polynomial factor() {
    Polynomial base = primary();
    if (accept('^')) {
      Integer e(digits());
      if (e > 1000) error("exponent too large");
      return base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }
  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer num(digits());
      Integer den = 1;
      if (accept('/')) {
        den = Integer(digits());
        if (den == 0) error("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return Polynomial::constant(vars_.size(), r);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) {
        pos_ = start;
        error("unknown variable '" + name + "'");
      }
      return Polynomial::variable(vars_.size(), static_cast<std::size_t>(it - vars_.begin()));
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline void check_variables(const std::vector<std::string>& vars) {
  if (vars.empty()) fail(ErrorCode::InvalidInput, "no variables declared");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].empty()) fail(ErrorCode::InvalidInput, "empty variable name");
    for (std::size_t j = 0; j < i; ++j)
      if (vars[i] == vars[j]) fail(ErrorCode::InvalidInput, "duplicate variable '" + vars[i] + "'");
  }
}

}  // namespace detail

// Accepts sums of products of rational numbers, variables and parenthesised
// subexpressions, each optionally raised to a natural power. A product may
// also be divided by a positive integer.
inline Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars) {
  detail::check_variables(vars);
  return detail::PolyParser(text, vars).parse();
}

inline HomogPoly parse_poly(const std::string& text, const std::vector<std::string>& vars) {
  if (vars.size() < 2) fail(ErrorCode::InvalidInput, "need at least two variables");
  HomogPoly f(parse_polynomial(text, vars));
  if (f.degree() < 1) fail(ErrorCode::InvalidInput, "constant polynomial");
  return f;
}

inline std::vector<std::string> default_variables(std::size_t n) {
  static const char* names3[] = {"x", "y", "z"};
  static const char* names4[] = {"x", "y", "z", "w"};
  static const char* names5[] = {"u", "v", "x", "y", "z"};
  std::vector<std::string> out;
  if (n == 3) out.assign(names3, names3 + 3);
  else if (n == 4) out.assign(names4, names4 + 4);
  else if (n == 5) out.assign(names5, names5 + 5);
  else
    for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i + 1));
  return out;
}

template <class Terms>
std::string format_terms(const Terms& terms, const std::vector<std::string>& vars) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Rational a = abs(c);
    if (c < 0)
      os << "-";
    else if (!first)
      os << "+";
    first = false;
    bool constant = m.total_degree() == 0;
    bool wrote = false;
    if (a != 1 || constant) {
      os << a.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (wrote) os << "*";
      os << vars[i];
      if (m[i] > 1) os << "^" << m[i];
      wrote = true;
    }
  }
  if (first) os << "0";
  return os.str();
}

inline std::string to_string(const HomogPoly& f, const std::vector<std::string>& vars) {
  return format_terms(f.terms(), vars);
}

inline std::string to_string(const Polynomial& p, const std::vector<std::string>& vars) {
  std::map<ExponentVector, Rational, GrevlexGreater> sorted(p.terms().begin(), p.terms().end());
  return format_terms(sorted, vars);
}

// For curves: the support lies on one line of the slice i+j+k=d whose
// defining plane through the origin has at least two nonzero coefficients.
inline bool is_extremely_degenerated(const HomogPoly& f) {
  if (f.n_vars() != 3) fail(ErrorCode::InvalidInput, "extreme degeneracy is defined for three variables");
  std::vector<std::array<long, 3>> pts;
  for (const auto& [m, c] : f.terms()) pts.push_back({long(m[0]), long(m[1]), long(m[2])});
  if (pts.size() < 2) return true;
  auto cross = [](const std::array<long, 3>& a, const std::array<long, 3>& b) {
    return std::array<long, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  // Distinct points of the slice are never proportional, so the normal is nonzero.
  std::array<long, 3> normal = cross(pts[0], pts[1]);
  for (const auto& p : pts)
    if (normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2] != 0) return false;
  int nonzero = (normal[0] != 0) + (normal[1] != 0) + (normal[2] != 0);
  return nonzero >= 2;
}

}  // namespace bsroots

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "gradedla.hpp"
#include "polyring.hpp"
#include "rational.hpp"

namespace bsroots {

using Weights = std::vector<Rational>;

inline long long milnor_number(const Weights& w) {
  Rational mu = 1;
  for (const auto& x : w) {
    if (x <= 0 || x >= 1) fail(ErrorCode::InvalidInput, "weight " + to_string(x) + " outside (0, 1)");
    mu *= 1 / x - 1;
  }
  if (!is_integer(mu) || mu <= 0) fail(ErrorCode::NonIntegerMilnor, "prod(1/w - 1) = " + to_string(mu));
  return mu.get_num().get_si();
}

struct LocalSingularity {
  Weights weights;
  long long count = 1;
  std::string label;  // how the point was specified, for messages

  LocalSingularity() = default;
  LocalSingularity(Weights w, long long c, std::string l = {}) : weights(std::move(w)), count(c), label(std::move(l)) {
    if (weights.empty()) fail(ErrorCode::InvalidInput, "empty weight list");
    if (count < 1) fail(ErrorCode::InvalidInput, "singularity count must be positive");
    milnor_number(weights);
  }
  long long milnor() const { return milnor_number(weights); }
  bool is_odp() const {
    return std::all_of(weights.begin(), weights.end(), [](const Rational& w) { return w == Rational(1, 2); });
  }
};

struct SpectrumMultiset {
  std::vector<Rational> entries;  // ascending
  unsigned long m = 1;            // T = t^{1/m}
  std::map<long, long long> poly;  // exponent of T -> multiplicity
};

// Expands prod_j (T^{a_j} - T^m) / (1 - T^{a_j}) with a_j = m w_j.
inline SpectrumMultiset spectrum(const Weights& w) {
  long long mu = milnor_number(w);
  Integer m = 1;
  for (const auto& x : w) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), x.get_den_mpz_t());
  const long M = m.get_si();
  std::vector<long> a;
  for (const auto& x : w) a.push_back(Rational(x * m).get_num().get_si());

  std::vector<Integer> num{1};
  for (long aj : a) {
    // multiply by T^{a_j} - T^M
    std::vector<Integer> next(num.size() + static_cast<std::size_t>(M));
    for (std::size_t i = 0; i < num.size(); ++i) {
      next[i + static_cast<std::size_t>(aj)] += num[i];
      next[i + static_cast<std::size_t>(M)] -= num[i];
    }
    num = std::move(next);
  }
  for (long aj : a) {
    // exact division by 1 - T^{a_j}: q_i = p_i + q_{i-a}
    const std::size_t s = static_cast<std::size_t>(aj);
    if (num.size() <= s) fail(ErrorCode::NotPolynomial, "spectrum product does not reduce to a polynomial");
    std::vector<Integer> q(num.size() - s);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = num[i] + (i >= s ? q[i - s] : Integer(0));
    for (std::size_t i = q.size(); i < num.size(); ++i)
      if (num[i] + (i >= s ? q[i - s] : Integer(0)) != 0)
        fail(ErrorCode::NotPolynomial, "spectrum product does not reduce to a polynomial");
    num = std::move(q);
  }
  SpectrumMultiset sp;
  sp.m = static_cast<unsigned long>(M);
  long long total = 0;
  for (std::size_t e = 0; e < num.size(); ++e) {
    if (num[e] == 0) continue;
    if (num[e] < 0) fail(ErrorCode::NotPolynomial, "negative spectral multiplicity");
    long long c = num[e].get_si();
    sp.poly[static_cast<long>(e)] = c;
    total += c;
    for (long long i = 0; i < c; ++i) sp.entries.push_back(Rational(static_cast<long>(e), M));
  }
  for (auto& r : sp.entries) r.canonicalize();
  if (total != mu) fail(ErrorCode::NotPolynomial, "spectrum size differs from the Milnor number");
  return sp;
}

// "T^17+T^15+...+2T^11+...+T^5": descending exponents.
inline std::string spectrum_polynomial(const SpectrumMultiset& sp) {
  std::string s;
  for (auto it = sp.poly.rbegin(); it != sp.poly.rend(); ++it) {
    if (!s.empty()) s += "+";
    if (it->second != 1) s += std::to_string(it->second);
    s += it->first == 0 ? "1" : (it->first == 1 ? "T" : "T^" + std::to_string(it->first));
  }
  return s.empty() ? "0" : s;
}

struct LocalRoots {
  RationalSet full;
  RationalSet reduced;
};

inline LocalRoots local_bs_roots(const Weights& w) {
  LocalRoots r;
  for (const auto& x : spectrum(w).entries) r.reduced.insert(x);
  r.full = r.reduced;
  r.full.insert(Rational(1));
  return r;
}

inline Weights pad_weights(Weights w, unsigned ambient) {
  if (w.size() > ambient)
    fail(ErrorCode::InvalidInput, std::to_string(w.size()) + " weights for a " + std::to_string(ambient) +
                                      "-dimensional chart");
  while (w.size() < ambient) w.push_back(Rational(1, 2));
  return w;
}

// Standard two-variable weights, padded by 1/2 (squares in the extra variables).
inline Weights ade_weights(const std::string& type, unsigned ambient) {
  if (ambient < 2) fail(ErrorCode::InvalidInput, "ADE types need at least two variables");
  std::string t;
  for (char c : type)
    if (c != '_' && !std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::toupper(c)));
  if (t.size() < 2 || !std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(c); }))
    fail(ErrorCode::UnknownType, "'" + type + "'");
  long k = std::stol(t.substr(1));
  Weights w;
  if (t[0] == 'A' && k >= 1)
    w = {Rational(1, 2), Rational(1, k + 1)};
  else if (t[0] == 'D' && k >= 4)
    w = {Rational(1, k - 1), Rational(k - 2, 2 * (k - 1))};
  else if (t == "E6")
    w = {Rational(1, 3), Rational(1, 4)};
  else if (t == "E7")
    w = {Rational(1, 3), Rational(2, 9)};
  else if (t == "E8")
    w = {Rational(1, 3), Rational(1, 5)};
  else
    fail(ErrorCode::UnknownType, "'" + type + "'");
  for (auto& x : w) x.canonicalize();
  return pad_weights(std::move(w), ambient);
}

// Solves sum_i w_i a_i = 1 over the support; the solution must be unique.
inline Weights weights_from_local_poly(const std::string& text, const std::vector<std::string>& vars) {
  Polynomial h = parse_polynomial(text, vars);
  if (h.is_zero()) fail(ErrorCode::ZeroPolynomial, "local polynomial is zero");
  const std::size_t nv = vars.size();
  std::vector<std::vector<Rational>> a;
  for (const auto& [m, c] : h.terms()) {
    std::vector<Rational> row(nv + 1);
    for (std::size_t i = 0; i < nv; ++i) row[i] = m[i];
    row[nv] = 1;
    a.push_back(std::move(row));
  }
  auto pivots = rref(a, nv + 1);
  if (!pivots.empty() && pivots.back() == nv)
    fail(ErrorCode::NotWeightedHomogeneous, "'" + text + "' has no weights making it weighted homogeneous");
  if (pivots.size() != nv)
    fail(ErrorCode::NotWeightedHomogeneous, "the support of '" + text + "' does not determine the weights");
  Weights w(nv);
  for (std::size_t i = 0; i < nv; ++i) w[pivots[i]] = a[i][nv];
  for (const auto& x : w)
    if (x <= 0) fail(ErrorCode::NotWeightedHomogeneous, "non-positive weight " + to_string(x) + " for '" + text + "'");
  return w;
}

struct SingularityData {
  std::vector<LocalSingularity> singularities;
  RationalSet R_Z;
  RationalSet R_tilde;
  std::optional<Rational> alpha_Z;      // absent when Z is smooth (+infinity)
  std::optional<Rational> alpha_tilde;  // likewise
  long long mu_Z = 0;
  bool all_odp = false;
};

// An empty list describes a smooth hypersurface: R_Z is empty, alphas are +infinity.
inline SingularityData aggregate(const std::vector<LocalSingularity>& list) {
  SingularityData s;
  s.singularities = list;
  s.all_odp = !list.empty();
  for (const auto& p : list) {
    LocalRoots r = local_bs_roots(p.weights);
    s.R_tilde.insert(r.reduced.begin(), r.reduced.end());
    s.R_Z.insert(r.full.begin(), r.full.end());
    s.mu_Z += p.count * p.milnor();
    s.all_odp = s.all_odp && p.is_odp();
  }
  if (!s.R_tilde.empty()) {
    s.alpha_tilde = *s.R_tilde.begin();
    s.alpha_Z = std::min(*s.alpha_tilde, Rational(1));
  }
  return s;
}

}  // namespace bsroots

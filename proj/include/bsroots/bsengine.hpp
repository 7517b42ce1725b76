#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "koszul.hpp"
#include "localspec.hpp"
#include "rational.hpp"

namespace bsroots {

enum class RootStatusKind { root_r0, non_root, in_rz, undetermined };

inline const char* status_name(RootStatusKind s) {
  switch (s) {
    case RootStatusKind::root_r0: return "ROOT_R0";
    case RootStatusKind::non_root: return "NON_ROOT";
    case RootStatusKind::in_rz: return "IN_RZ";
    case RootStatusKind::undetermined: return "UNDETERMINED";
  }
  return "";
}

struct RootStatus {
  long k = 0;
  Rational value;  // k/d
  RootStatusKind status = RootStatusKind::non_root;
  long long delta = 0;
  bool condition2 = true;  // k/d not in R_Z + Z_{<0}
  bool below_alpha_f = false;
};

inline bool in_rz(const Rational& v, const SingularityData& s) { return s.R_Z.count(v) > 0; }

// Roots lie in (0, n-1), so shifts beyond n-1 can never land in R_Z.
inline bool in_shifted_rz(const Rational& v, const SingularityData& s, unsigned n) {
  for (unsigned m = 1; m + 1 <= n; ++m)
    if (s.R_Z.count(v + m)) return true;
  return false;
}

inline Rational alpha_f(const SingularityData& s, unsigned n, unsigned d) {
  Rational nd(n, d);
  nd.canonicalize();
  return s.alpha_Z ? std::min(*s.alpha_Z, nd) : nd;
}

// k with k/d in [alpha_Z, n-2-alpha_Z], k/d in (R_Z + Z_{<0}) \ R_Z.
inline std::set<long> critical_set(const SingularityData& s, unsigned n, unsigned d) {
  std::set<long> cs;
  if (!s.alpha_Z) return cs;
  const long lo = ceil(*s.alpha_Z * d).get_si();
  const long hi = floor((Rational(n) - 2 - *s.alpha_Z) * d).get_si();
  for (long k = std::max(lo, 1L); k <= hi; ++k) {
    Rational v(k, d);
    v.canonicalize();
    if (!in_rz(v, s) && in_shifted_rz(v, s, n)) cs.insert(k);
  }
  return cs;
}

inline std::vector<RootStatus> classify(const GradedTable& delta, const SingularityData& s, unsigned n, unsigned d) {
  const Rational af = alpha_f(s, n, d);
  std::vector<RootStatus> out;
  for (long k = 1; k < static_cast<long>(n) * d; ++k) {
    RootStatus r;
    r.k = k;
    r.value = Rational(k, d);
    r.value.canonicalize();
    r.delta = delta.at(k);
    r.condition2 = !in_shifted_rz(r.value, s, n);
    r.below_alpha_f = r.value < af;
    if (in_rz(r.value, s))
      r.status = RootStatusKind::in_rz;
    else if (r.delta > 0)
      r.status = RootStatusKind::root_r0;
    else if (r.below_alpha_f || r.condition2)
      r.status = RootStatusKind::non_root;
    else
      r.status = RootStatusKind::undetermined;
    out.push_back(r);
  }
  return out;
}

inline bool condition11(const GradedTable& delta, const std::set<long>& cs) {
  for (long k : cs)
    if (delta.at(k) <= 0) return false;
  return true;
}

struct Connectedness {
  bool connected_outside = true;
  std::optional<long> k_min, k_max;
  std::vector<long> support;  // Supp{delta} \ dR_Z
};

// Gaps inside [k_min, k_max] are tolerated only at integers of dR_Z.
inline Connectedness connectedness(const GradedTable& delta, const SingularityData& s, unsigned d) {
  Connectedness c;
  auto in_drz = [&](long k) {
    Rational v(k, d);
    v.canonicalize();
    return in_rz(v, s);
  };
  for (long k = delta.first(); k <= delta.last(); ++k)
    if (delta.at(k) != 0 && !in_drz(k)) c.support.push_back(k);
  if (c.support.empty()) return c;
  c.k_min = c.support.front();
  c.k_max = c.support.back();
  std::set<long> sup(c.support.begin(), c.support.end());
  for (long k = *c.k_min; k <= *c.k_max; ++k)
    if (!sup.count(k) && !in_drz(k)) c.connected_outside = false;
  return c;
}

struct Corollary3 {
  bool applicable = false;
  bool n3_variant = false;
  std::vector<long> d_roots;  // d R_f^0 when applicable
};

// With n3_variant (n = 3 only) the k_max bound becomes k_max >= d-1.
inline Corollary3 corollary3_check(const Connectedness& c, const SingularityData& s, unsigned n, unsigned d,
                                   bool n3_variant = false) {
  Corollary3 r;
  r.n3_variant = n3_variant && n == 3;
  if (!c.connected_outside || !c.k_min || *c.k_min != static_cast<long>(n)) return r;
  if (r.n3_variant) {
    if (*c.k_max < static_cast<long>(d) - 1) return r;
  } else {
    std::optional<long> top;
    for (const auto& v : s.R_Z) {
      Rational kv = v * d;
      if (is_integer(kv)) top = kv.get_num().get_si();
    }
    if (top && *c.k_max < *top - static_cast<long>(d)) return r;
  }
  r.applicable = true;
  for (long k = n; k <= *c.k_max; ++k) {
    Rational v(k, d);
    v.canonicalize();
    if (!in_rz(v, s)) r.d_roots.push_back(k);
  }
  return r;
}

// min{k : mu'_k != 0} - n; nullopt stands for +infinity.
inline std::optional<long> beta_f(const GradedTable& mu_prime) {
  for (long k = mu_prime.first(); k <= mu_prime.last(); ++k)
    if (mu_prime.at(k) != 0) return k - static_cast<long>(mu_prime.n);
  return std::nullopt;
}

struct Theorem5 {
  bool odp_case = false;
  // the simple form
  std::optional<long> m0_simple, m1_simple;
  bool simple_holds = false;
  // the refined thresholds; absent means the index set is empty
  std::optional<long> m0, m1, m2;
  bool m0_holds = true, m1_holds = true, m2_holds = true;
  bool applicable = false;
  long predicted_k_min = 0;
  long predicted_k_max = 0;
};

inline Theorem5 theorem5_check(long long tau, const GradedTable& gamma, const SingularityData& s, unsigned n,
                               unsigned d, const std::optional<long>& beta) {
  if (d < n)
    fail(ErrorCode::NotApplicable, "degree " + std::to_string(d) + " is below the variable count " + std::to_string(n));
  Theorem5 t;
  t.odp_case = s.all_odp;
  if (t.odp_case && n >= 3 && tau > arnold_number(n, d))
    fail(ErrorCode::InvalidInput, std::to_string(tau) + " ordinary double points exceed Arnold's bound " +
                                      std::to_string(arnold_number(n, d)) + " for degree " + std::to_string(d));
  auto not_drz = [&](long k) {
    Rational v(k, d);
    v.canonicalize();
    return !in_rz(v, s);
  };
  const Rational half_low = Rational(static_cast<long>((n - 1) * d), 2);
  const Rational half_high = Rational(static_cast<long>(n * d), 2);

  const long m1_base = ceil(half_low).get_si();
  if (s.alpha_tilde) {
    t.m0_simple = ceil(*s.alpha_tilde * d).get_si();
    t.m1_simple = std::min(m1_base, ceil((*s.alpha_tilde + 1) * d).get_si());
  } else {
    t.m1_simple = m1_base;
  }
  t.simple_holds = tau < gamma.at(*t.m1_simple) && (!t.m0_simple || tau < 2 * gamma.at(*t.m0_simple));

  if (s.alpha_tilde) {
    for (long k = ceil(*s.alpha_tilde * d).get_si(); k <= floor(half_low).get_si(); ++k)
      if (not_drz(k)) {
        t.m0 = k;
        break;
      }
    for (long k = floor(Rational(d) * (Rational(n) - 1 - *s.alpha_tilde)).get_si(); k >= ceil(half_high).get_si(); --k)
      if (not_drz(k)) {
        t.m2 = k;
        break;
      }
  }
  for (long k = floor(half_low).get_si() + 1; Rational(k) < half_high; ++k)
    if (not_drz(k)) {
      t.m1 = k;
      break;
    }
  if (t.m0) t.m0_holds = tau < 2 * gamma.at(*t.m0);
  if (t.m1) t.m1_holds = tau < gamma.at(*t.m1);
  if (t.m2) t.m2_holds = tau < gamma.at(*t.m2);

  t.applicable = t.odp_case || t.simple_holds || (t.m0_holds && t.m1_holds && t.m2_holds);
  t.predicted_k_min = n;
  t.predicted_k_max = static_cast<long>(n) * (d - 1) - (beta ? std::min<long>(d, *beta) : static_cast<long>(d));
  return t;
}

// chi(U) from the gamma sums; all residues 1..d-1 and the j*d form must agree,
// and for n = 3 the plane-curve genus formula as well.
inline long long euler_characteristic(const SingularityData& s, unsigned n, unsigned d) {
  const GradedTable gamma = gamma_table(n, d);
  const long long sign = n % 2 == 1 ? 1 : -1;  // (-1)^{n-1}
  std::optional<long long> chi;
  for (long k = 1; k < static_cast<long>(d); ++k) {
    long long sum = 0;
    for (long j = 0; j < static_cast<long>(n); ++j) sum += gamma.at(j * d + k);
    long long c = sign * (sum - s.mu_Z);
    if (chi && *chi != c) fail(ErrorCode::ChiMismatch, "gamma residue sums disagree at k=" + std::to_string(k));
    chi = c;
  }
  long long multiples = 0;
  for (long j = 1; j < static_cast<long>(n); ++j) multiples += gamma.at(j * d);
  long long alt = sign * (multiples - s.mu_Z - (n % 2 == 0 ? 1 : -1));
  if (alt != *chi)
    fail(ErrorCode::ChiMismatch, "chi(U) = " + std::to_string(*chi) + " from residues, " + std::to_string(alt) +
                                     " from multiples of d");
  if (n == 3) {
    long long genus_form = static_cast<long long>(d - 1) * (d - 2) + 1 - s.mu_Z;
    if (genus_form != *chi)
      fail(ErrorCode::ChiMismatch, "chi(U) = " + std::to_string(*chi) + " but the plane-curve formula gives " +
                                       std::to_string(genus_form));
  }
  return *chi;
}

// Sum of delta over each residue class mod d, indexed by the residue.
inline std::vector<long long> residue_sums(const GradedTable& delta, unsigned d) {
  std::vector<long long> sums(d, 0);
  for (long k = delta.first(); k <= delta.last(); ++k)
    sums[static_cast<std::size_t>(((k % static_cast<long>(d)) + d) % d)] += delta.at(k);
  return sums;
}

inline void check_euler_sums(const GradedTable& delta, long long chi, unsigned n, unsigned d) {
  const long long sign = n % 2 == 1 ? 1 : -1;
  auto sums = residue_sums(delta, d);
  for (unsigned r = 0; r < d; ++r) {
    long long expected = sign * (r == 0 ? chi - 1 : chi);
    if (sums[r] != expected)
      fail(ErrorCode::ChiMismatch, "delta sum over k = " + std::to_string(r) + " mod " + std::to_string(d) + " is " +
                                       std::to_string(sums[r]) + ", expected " + std::to_string(expected));
  }
}

inline void validate_W(long long tau_global, const SingularityData& s) {
  if (tau_global != s.mu_Z)
    fail(ErrorCode::WViolation,
         "total Tjurina number tau_Z = " + std::to_string(tau_global) + " vs total Milnor number mu_Z = " +
             std::to_string(s.mu_Z) + " of the supplied singularities (non weighted homogeneous point or "
             "incomplete list)");
}

struct RootReport {
  unsigned n = 0, d = 0;
  long long tau = 0;
  std::vector<RootStatus> statuses;
  std::set<long> cs_f;
  bool condition11_holds = true;
  Connectedness conn;
  std::optional<long> beta_f;
  long long chi_U = 0;
  std::optional<Theorem5> theorem5;  // absent when d < n
  Corollary3 corollary3;
  RationalSet R_Z, R0, undetermined, R_f;
  std::optional<bool> extremely_degenerated;  // n = 3 only
};

struct AnalyzeOptions {
  bool n3_kmax_variant = false;
};

// Runs the full decision pipeline on precomputed tables. (W) is validated
// first; Euler-sum failures abort since they point at broken input or arithmetic.
inline RootReport analyze(const HomogPoly& f, const KoszulTables& t, const SingularityData& s,
                          const AnalyzeOptions& opt = {}) {
  validate_W(t.tau, s);
  RootReport r;
  r.n = t.n;
  r.d = t.d;
  r.tau = t.tau;
  r.R_Z = s.R_Z;
  r.chi_U = euler_characteristic(s, t.n, t.d);
  check_euler_sums(t.delta, r.chi_U, t.n, t.d);
  r.statuses = classify(t.delta, s, t.n, t.d);
  r.cs_f = critical_set(s, t.n, t.d);
  r.condition11_holds = condition11(t.delta, r.cs_f);
  r.conn = connectedness(t.delta, s, t.d);
  r.beta_f = beta_f(t.mu_prime);
  if (t.d >= t.n) r.theorem5 = theorem5_check(t.tau, t.gamma, s, t.n, t.d, r.beta_f);
  r.corollary3 = corollary3_check(r.conn, s, t.n, t.d, opt.n3_kmax_variant);
  for (const auto& st : r.statuses) {
    if (st.status == RootStatusKind::root_r0) r.R0.insert(st.value);
    if (st.status == RootStatusKind::undetermined) r.undetermined.insert(st.value);
  }
  r.R_f = r.R_Z;
  r.R_f.insert(r.R0.begin(), r.R0.end());
  if (t.n == 3) r.extremely_degenerated = is_extremely_degenerated(f);
  return r;
}

}  // namespace bsroots

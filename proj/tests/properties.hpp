#pragma once

#include "common.hpp"

#include <sstream>

namespace testing_support {

struct PropertyOptions {
  bool koszul_oracle = true;   // nu against direct H^{n-1} ranks, vanishing below n-1
  bool e2 = true;              // delta = mu2 off dR_Z
  bool kernel_route = false;   // literal kernel-based E2 against the stacked route
  bool invariance = true;      // scaling and permuting variables
  LinAlgMode mode = LinAlgMode::exact;
};

class Failures {
 public:
  explicit Failures(std::string name) : name_(std::move(name)) {}
  template <class... A>
  void add(const A&... parts) {
    std::ostringstream os;
    os << name_ << ": ";
    (os << ... << parts);
    list_.push_back(os.str());
  }
  const std::vector<std::string>& list() const { return list_; }

 private:
  std::string name_;
  std::vector<std::string> list_;
};

inline bool below(long k, unsigned d, const Rational& bound) { return Rational(k, d) < bound; }

// Every invariant that can be asserted from f and its singularity data alone.
inline std::vector<std::string> check_properties(const Case& c, const PropertyOptions& opt = {}) {
  Failures fails(c.name);
  try {
    const HomogPoly& f = c.f;
    KoszulTables t = compute_tables(f, opt.mode);
    SingularityData s = aggregate(c.sing);
    const unsigned n = t.n, d = t.d;
    const long nd = static_cast<long>(n) * d;

    if (t.tau != s.mu_Z) fails.add("tau ", t.tau, " != mu_Z ", s.mu_Z);

    // mu'_k = mu'_{nd-k}; mu''_k = tau - nu_{nd-k}; delta'' symmetric about (n-1)d/2
    for (long k = 0; k <= nd; ++k) {
      if (t.mu_prime.at(k) != t.mu_prime.at(nd - k)) fails.add("mu' not symmetric at k=", k);
      if (t.mu_dblprime.at(k) != t.tau - t.nu.at(nd - k)) fails.add("mu'' differs from tau - nu at k=", k);
      long k2 = nd - d - k;
      long long a = t.mu_dblprime.at(k) - t.nu.at(k + d), b = t.mu_dblprime.at(k2) - t.nu.at(k2 + d);
      if (a != b) fails.add("delta'' not symmetric at k=", k);
    }
    for (long k = 0; k <= nd; ++k)
      if (t.gamma.at(k) != t.gamma.at(nd - k)) fails.add("gamma not symmetric at k=", k);

    // nu vanishes while k/d < alpha~ + 1
    for (long k = 0; k <= nd + static_cast<long>(d); ++k)
      if ((!s.alpha_tilde || below(k, d, *s.alpha_tilde + 1)) && t.nu.at(k) != 0)
        fails.add("nu_", k, " = ", t.nu.at(k), " below the vanishing bound");

    // Euler characteristic and residue sums of delta
    long long chi = euler_characteristic(s, n, d);
    auto sums = residue_sums(t.delta, d);
    const long long sign = n % 2 == 1 ? 1 : -1;
    for (unsigned r = 0; r < d; ++r)
      if (sums[r] != sign * (r == 0 ? chi - 1 : chi))
        fails.add("delta residue sum ", r, " mod ", d, " = ", sums[r], ", chi = ", chi);

    if (opt.koszul_oracle) {
      const long lo = -static_cast<long>(d);
      auto h = koszul_h_table(f, lo, nd, opt.mode);
      for (long k = 0; k <= nd + static_cast<long>(d); ++k) {
        long long direct = h[n - 1][static_cast<std::size_t>(k - d - lo)];
        if (direct != t.nu.at(k)) fails.add("nu_", k, " = ", t.nu.at(k), " but H^{n-1} has dim ", direct);
      }
      for (unsigned j = 0; j + 2 <= n; ++j)
        for (long qd = 0; qd <= nd; ++qd)
          if (h[j][static_cast<std::size_t>(qd - lo)] != 0) fails.add("H^", j, " nonzero in degree ", qd);
    }

    if (opt.e2) {
      add_e2(t, f, opt.mode);
      for (long k = 0; k < nd; ++k) {
        long long m2 = t.e2->mu2.at(k), n2 = t.e2->nu2.at(k + d);
        if (m2 < 0 || n2 < 0) fails.add("negative E2 dimension at k=", k);
        if (m2 - n2 != t.delta.at(k)) fails.add("mu2 - nu2 != delta at k=", k);
        if (!in_rz(q(k, d), s) && m2 != t.delta.at(k))
          fails.add("delta_", k, " = ", t.delta.at(k), " but mu2 = ", m2, " off dR_Z");
      }
      if (opt.kernel_route)
        for (long k = n; k < nd; ++k) {
          auto lit = e2_by_kernels(f, k);
          if (lit[0] != t.e2->mu2.at(k) || lit[1] != t.e2->nu2.at(k + d))
            fails.add("kernel route (", lit[0], ", ", lit[1], ") vs stacked (", t.e2->mu2.at(k), ", ",
                      t.e2->nu2.at(k + d), ") at k=", k);
        }
    }

    // Classification soundness
    RootReport r = analyze(f, t, s);
    const Rational af = alpha_f(s, n, d);
    for (const auto& st : r.statuses) {
      switch (st.status) {
        case RootStatusKind::root_r0:
          if (st.delta <= 0 || in_rz(st.value, s)) fails.add("unsound ROOT_R0 at ", st.value);
          if (st.value < q(n, d) || st.value >= Rational(n)) fails.add("ROOT_R0 outside [n/d, n) at ", st.value);
          break;
        case RootStatusKind::non_root:
          if (!(st.value < af || (st.delta <= 0 && !in_shifted_rz(st.value, s, n))))
            fails.add("unsound NON_ROOT at ", st.value);
          break;
        case RootStatusKind::undetermined:
          if (st.delta > 0 || in_rz(st.value, s) || !in_shifted_rz(st.value, s, n) || st.value < af)
            fails.add("unsound UNDETERMINED at ", st.value);
          break;
        case RootStatusKind::in_rz:
          if (!in_rz(st.value, s)) fails.add("IN_RZ outside R_Z at ", st.value);
          break;
      }
      // [n/d, alpha_Z) always carries roots
      if (st.value >= q(n, d) && s.alpha_Z && st.value < *s.alpha_Z && st.status != RootStatusKind::root_r0)
        fails.add("k/d = ", st.value, " in [n/d, alpha_Z) is not ROOT_R0");
    }
    if (r.condition11_holds && r.undetermined.empty()) {
      RationalSet expected;
      for (long k = n; k < nd; ++k)
        if (!in_rz(q(k, d), s) && t.delta.at(k) > 0) expected.insert(q(k, d));
      if (expected != r.R0) fails.add("R0 differs from the delta-positive set");
    }

    if (opt.invariance) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = (i + 1) % n;
      HomogPoly g = f.scaled(q(-3, 2)).permuted(perm);
      KoszulTables tg = compute_tables(g, opt.mode);
      RootReport rg = analyze(g, tg, s);
      if (rg.R0 != r.R0 || rg.undetermined != r.undetermined) fails.add("classification changed under scaling/permutation");
      for (std::size_t i = 0; i < r.statuses.size(); ++i)
        if (rg.statuses[i].status != r.statuses[i].status) fails.add("status changed at k=", r.statuses[i].k);
    }
  } catch (const std::exception& e) {
    fails.add("exception: ", e.what());
  }
  return fails.list();
}

// gamma_{k-1} < gamma_k for n < k <= nd/2.
inline std::vector<std::string> check_gamma_monotone(unsigned max_n, unsigned max_d) {
  std::vector<std::string> out;
  for (unsigned n = 2; n <= max_n; ++n)
    for (unsigned d = 2; d <= max_d; ++d) {
      GradedTable g = gamma_table(n, d);
      for (long k = n + 1; 2 * k <= static_cast<long>(n * d); ++k)
        if (!(g.at(k - 1) < g.at(k)))
          out.push_back("gamma not increasing at n=" + std::to_string(n) + " d=" + std::to_string(d) +
                        " k=" + std::to_string(k));
    }
  return out;
}

}  // namespace testing_support

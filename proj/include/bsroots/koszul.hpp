#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "gradedla.hpp"
#include "parallel.hpp"
#include "polyring.hpp"

namespace bsroots {

enum class TableLabel { gamma, mu, nu, mu_prime, mu_dblprime, delta, mu2, nu2 };

inline const char* label_name(TableLabel l) {
  switch (l) {
    case TableLabel::gamma: return "gamma";
    case TableLabel::mu: return "mu";
    case TableLabel::nu: return "nu";
    case TableLabel::mu_prime: return "mu_prime";
    case TableLabel::mu_dblprime: return "mu_dblprime";
    case TableLabel::delta: return "delta";
    case TableLabel::mu2: return "mu2";
    case TableLabel::nu2: return "nu2";
  }
  return "";
}

// Integer sequence indexed by degree. Below the stored range every table is 0;
// above it the stable tail applies when present.
struct GradedTable {
  TableLabel label = TableLabel::mu;
  long offset = 0;
  std::vector<long long> values;
  unsigned n = 0, d = 0;
  std::optional<long long> stable_tail;

  long first() const { return offset; }
  long last() const { return offset + static_cast<long>(values.size()) - 1; }

  long long at(long k) const {
    if (k < offset) return 0;
    if (k <= last()) return values[static_cast<std::size_t>(k - offset)];
    if (stable_tail) return *stable_tail;
    fail(ErrorCode::InvalidInput, std::string(label_name(label)) + " table has no entry at k=" + std::to_string(k));
  }
  std::vector<long long> range(long lo, long hi) const {
    std::vector<long long> out;
    for (long k = lo; k <= hi; ++k) out.push_back(at(k));
    return out;
  }
};

// Coefficients of (t + ... + t^{d-1})^n, stored for k in [n, nd-n].
inline GradedTable gamma_table(unsigned n, unsigned d) {
  if (n < 2 || d < 2) fail(ErrorCode::InvalidInput, "gamma needs n >= 2 and d >= 2");
  std::vector<Integer> poly{1};
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Integer> next(poly.size() + d - 1);
    for (std::size_t a = 0; a < poly.size(); ++a)
      for (unsigned b = 1; b < d; ++b) next[a + b] += poly[a];
    poly = std::move(next);
  }
  GradedTable g{TableLabel::gamma, static_cast<long>(n), {}, n, d, 0};
  for (std::size_t k = n; k + n <= static_cast<std::size_t>(n) * d; ++k) g.values.push_back(poly[k].get_si());
  return g;
}

inline long long arnold_number(unsigned n, unsigned d) {
  if (n < 3 || d < 2) fail(ErrorCode::InvalidInput, "Arnold numbers need n >= 3 and d >= 2");
  return gamma_table(n, d).at(static_cast<long>((n - 1) * d / 2 + 1));
}

// Graded pieces A_j of the Milnor algebra A = R/(df), built degree by degree.
// For j >= 1, A_{j+1} is the cokernel of
//   Lambda^2 R_1 (x) A_{j-1} -> R_1 (x) A_j,  e_a^e_b (x) s -> e_a (x) x_b s - e_b (x) x_a s,
// with the partials adjoined as extra relations in degree d-1. Every basis
// element carries a monomial label; columns of R_1 (x) A_j are ordered by the
// grevlex order of x_a * label, so the surviving basis mimics standard monomials.
template <class F>
class MilnorAlgebra {
 public:
  using V = typename F::value_type;
  using Row = SparseRow<V>;

  MilnorAlgebra(const HomogPoly& f, const F& field) : f_(f), field_(field), n_(f.n_vars()), d_(f.degree()) {
    for (const auto& p : partials(f)) {
      std::vector<std::pair<ExponentVector, V>> terms;
      for (const auto& [m, c] : p.terms()) terms.emplace_back(m, field_.from(c));
      partials_.push_back(std::move(terms));
    }
    Level zero;
    zero.labels.push_back(ExponentVector::zero(n_));
    levels_.push_back(std::move(zero));
  }

  const F& field() const { return field_; }
  long top() const { return static_cast<long>(levels_.size()) - 1; }

  std::size_t dim(long j) {
    if (j < 0) return 0;
    extend_to(j);
    return levels_[static_cast<std::size_t>(j)].labels.size();
  }

  void extend_to(long j) {
    while (top() < j) build_next();
  }

  // Image of basis element t of A_j under multiplication by x_a.
  const Row& mult(long j, std::size_t a, std::size_t t) {
    extend_to(j + 1);
    return levels_[static_cast<std::size_t>(j)].mult[a][t];
  }

  const MonomialBasis& basis(long j) {
    auto it = bases_.find(j);
    if (it == bases_.end()) it = bases_.emplace(j, MonomialBasis(n_, j)).first;
    return it->second;
  }

  // Normal forms in A_j of all degree-j monomials, in grevlex basis order.
  const std::vector<Row>& normal_forms(long j) {
    auto it = nf_.find(j);
    if (it != nf_.end()) return it->second;
    extend_to(j);
    std::vector<Row> out;
    const MonomialBasis& B = basis(j);
    if (j == 0) {
      out.push_back(Row{{0}, {field_.one()}});
    } else {
      const auto& prev = normal_forms(j - 1);
      const MonomialBasis& P = basis(j - 1);
      for (const auto& m : B.monomials()) {
        std::size_t a = m.first_var();
        out.push_back(apply(j - 1, a, prev[P.index(m.div_var(a))]));
      }
    }
    return nf_.emplace(j, std::move(out)).first->second;
  }

 private:
  struct Level {
    std::vector<ExponentVector> labels;
    std::vector<std::vector<Row>> mult;  // mult[a][t], filled when the next level is built
  };

  Row apply(long j, std::size_t a, const Row& v) {
    Level& L = levels_[static_cast<std::size_t>(j)];
    std::map<std::uint32_t, V> acc;
    for (std::size_t s = 0; s < v.cols.size(); ++s) {
      const Row& img = L.mult[a][v.cols[s]];
      for (std::size_t t = 0; t < img.cols.size(); ++t) {
        auto [it, fresh] = acc.emplace(img.cols[t], field_.zero());
        V prod = field_.mul(v.vals[s], img.vals[t]);
        it->second = field_.add(it->second, prod);
      }
    }
    Row out;
    for (auto& [c, x] : acc)
      if (!field_.is_zero(x)) {
        out.cols.push_back(c);
        out.vals.push_back(x);
      }
    return out;
  }

  void build_next() {
    const long j = top();
    Level& cur = levels_[static_cast<std::size_t>(j)];
    const std::size_t dj = cur.labels.size();

    // Columns of R_1 (x) A_j.
    std::vector<std::pair<ExponentVector, std::size_t>> keyed;  // (label, a*dj+t)
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t t = 0; t < dj; ++t) keyed.emplace_back(cur.labels[t].times_var(a), a * dj + t);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
      if (GrevlexGreater{}(x.first, y.first)) return true;
      if (GrevlexGreater{}(y.first, x.first)) return false;
      return x.second < y.second;
    });
    std::vector<std::uint32_t> col_of(n_ * dj);
    for (std::size_t c = 0; c < keyed.size(); ++c) col_of[keyed[c].second] = static_cast<std::uint32_t>(c);

    SparseEchelon<F> ech(field_, keyed.size());
    if (j >= 1) {
      Level& prev = levels_[static_cast<std::size_t>(j - 1)];
      for (std::size_t s = 0; s < prev.labels.size(); ++s)
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = a + 1; b < n_; ++b) {
            std::vector<std::pair<std::uint32_t, V>> row;
            const Row& xb = prev.mult[b][s];
            const Row& xa = prev.mult[a][s];
            for (std::size_t t = 0; t < xb.cols.size(); ++t) row.emplace_back(col_of[a * dj + xb.cols[t]], xb.vals[t]);
            for (std::size_t t = 0; t < xa.cols.size(); ++t)
              row.emplace_back(col_of[b * dj + xa.cols[t]], field_.neg(xa.vals[t]));
            ech.insert(row);
          }
    }
    if (j + 1 == static_cast<long>(d_) - 1) {
      const auto& nf = normal_forms(j);
      const MonomialBasis& B = basis(j);
      for (const auto& terms : partials_) {
        std::vector<std::pair<std::uint32_t, V>> row;
        for (const auto& [u, c] : terms) {
          std::size_t a = u.first_var();
          const Row& v = nf[B.index(u.div_var(a))];
          for (std::size_t t = 0; t < v.cols.size(); ++t)
            row.emplace_back(col_of[a * dj + v.cols[t]], field_.mul(c, v.vals[t]));
        }
        ech.insert(row);
      }
    }
    ech.make_reduced();

    Level next;
    std::vector<std::int64_t> new_index(keyed.size(), -1);
    for (std::size_t c = 0; c < keyed.size(); ++c)
      if (!ech.is_pivot(c)) {
        new_index[c] = static_cast<std::int64_t>(next.labels.size());
        next.labels.push_back(keyed[c].first);
      }
    cur.mult.assign(n_, std::vector<Row>(dj));
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t t = 0; t < dj; ++t) {
        std::uint32_t c = col_of[a * dj + t];
        Row img;
        if (!ech.is_pivot(c)) {
          img.cols.push_back(static_cast<std::uint32_t>(new_index[c]));
          img.vals.push_back(field_.one());
        } else {
          const Row& p = ech.pivot_row(c);
          for (std::size_t s = 1; s < p.cols.size(); ++s) {
            img.cols.push_back(static_cast<std::uint32_t>(new_index[p.cols[s]]));
            img.vals.push_back(field_.neg(p.vals[s]));
          }
          sort_row(img);
        }
        cur.mult[a][t] = std::move(img);
      }
    levels_.push_back(std::move(next));
  }

  static void sort_row(Row& r) {
    std::vector<std::size_t> idx(r.cols.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return r.cols[x] < r.cols[y]; });
    Row s;
    for (auto i : idx) {
      s.cols.push_back(r.cols[i]);
      s.vals.push_back(r.vals[i]);
    }
    r = std::move(s);
  }

  HomogPoly f_;
  F field_;
  std::size_t n_;
  unsigned d_;
  std::vector<std::vector<std::pair<ExponentVector, V>>> partials_;
  std::vector<Level> levels_;
  std::map<long, MonomialBasis> bases_;
  std::map<long, std::vector<Row>> nf_;
};

namespace detail {

// dim A_j for j in [0, top].
template <class F>
std::vector<long long> milnor_dims(const HomogPoly& f, const F& field, long top) {
  MilnorAlgebra<F> A(f, field);
  std::vector<long long> out;
  for (long j = 0; j <= top; ++j) out.push_back(static_cast<long long>(A.dim(j)));
  return out;
}

// Basis of Omega^j_q: (j-subset of variables) x (monomial of degree q-j).
struct FormBasis {
  std::size_t n;
  std::vector<unsigned> subsets;  // bitmasks in lexicographic order
  std::map<unsigned, std::size_t> subset_index;
  MonomialBasis monos;

  FormBasis(std::size_t n_, unsigned j, long q) : n(n_), monos(n_, q - static_cast<long>(j)) {
    for (unsigned mask = 0; mask < (1u << n); ++mask)
      if (static_cast<unsigned>(__builtin_popcount(mask)) == j) subsets.push_back(mask);
    std::sort(subsets.begin(), subsets.end(), [](unsigned x, unsigned y) {
      for (unsigned b = 0; b < 32; ++b) {
        bool bx = x >> b & 1, by = y >> b & 1;
        if (bx != by) return bx;
      }
      return false;
    });
    for (std::size_t i = 0; i < subsets.size(); ++i) subset_index[subsets[i]] = i;
    if (q < static_cast<long>(j)) subsets.clear();
  }
  std::size_t size() const { return subsets.size() * monos.size(); }
  std::size_t index(unsigned mask, const ExponentVector& m) const {
    return subset_index.at(mask) * monos.size() + monos.index(m);
  }
};

// Images under df^ of the basis of Omega^j_q, as rows over Omega^{j+1}_{q+d}.
template <class F>
std::vector<std::vector<std::pair<std::uint32_t, typename F::value_type>>> wedge_df_rows(const HomogPoly& f,
                                                                                        const F& field,
                                                                                        unsigned j, long q) {
  using V = typename F::value_type;
  const std::size_t n = f.n_vars();
  const long d = f.degree();
  FormBasis src(n, j, q), dst(n, j + 1, q + d);
  std::vector<std::vector<std::pair<ExponentVector, V>>> parts;
  for (const auto& p : partials(f)) {
    std::vector<std::pair<ExponentVector, V>> t;
    for (const auto& [m, c] : p.terms()) t.emplace_back(m, field.from(c));
    parts.push_back(std::move(t));
  }
  std::vector<std::vector<std::pair<std::uint32_t, V>>> rows;
  for (unsigned mask : src.subsets)
    for (const auto& m : src.monos.monomials()) {
      std::vector<std::pair<std::uint32_t, V>> row;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) continue;
        // dx_i ^ dx_I = (-1)^{#{l in I : l < i}} dx_{I+i}
        bool odd = __builtin_popcount(mask & ((1u << i) - 1)) & 1;
        unsigned target = mask | (1u << i);
        for (const auto& [u, c] : parts[i]) {
          std::size_t col = dst.index(target, m * u);
          row.emplace_back(static_cast<std::uint32_t>(col), odd ? field.neg(c) : c);
        }
      }
      rows.push_back(std::move(row));
    }
  return rows;
}

template <class F>
std::size_t wedge_df_rank(const HomogPoly& f, const F& field, unsigned j, long q) {
  const std::size_t n = f.n_vars();
  if (j >= n || q < static_cast<long>(j)) return 0;
  FormBasis dst(n, j + 1, q + f.degree());
  auto rows = wedge_df_rows(f, field, j, q);
  // Monomial-major column order: pivots then follow the monomial order, which
  // cuts fill-in by about a quarter on dense inputs. Rank is unaffected.
  const std::size_t m = dst.monos.size(), s = dst.subsets.size();
  for (auto& row : rows)
    for (auto& [c, v] : row) c = static_cast<std::uint32_t>((c % m) * s + c / m);
  SparseEchelon<F> ech(field, dst.size());
  // Rows with small leading monomials first keeps the pivot rows short.
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) ech.insert(*it);
  return ech.rank();
}

}  // namespace detail

inline std::size_t form_dim(std::size_t n, unsigned j, long q) {
  if (j > n || q < static_cast<long>(j)) return 0;
  return binomial(static_cast<long>(n), j).get_ui() * monomial_count(n, q - static_cast<long>(j));
}

// Dimension of the internal-degree-q piece of H^j(Omega^., df^), from the ranks
// of the two adjacent differentials.
inline long long koszul_h_dim(const HomogPoly& f, unsigned j, long q, LinAlgMode mode = LinAlgMode::exact) {
  const std::size_t n = f.n_vars();
  if (j > n) fail(ErrorCode::InvalidInput, "form degree exceeds n");
  std::size_t dim = form_dim(n, j, q);
  if (dim == 0) return 0;
  auto ranks = run_in_mode(mode, [&](const auto& F) {
    std::size_t out = j < n ? detail::wedge_df_rank(f, F, j, q) : 0;
    std::size_t in = j > 0 ? detail::wedge_df_rank(f, F, j - 1, q - static_cast<long>(f.degree())) : 0;
    return std::array<std::size_t, 2>{out, in};
  });
  return static_cast<long long>(dim) - static_cast<long long>(ranks[0] + ranks[1]);
}

// Every H^j (0 <= j <= n) for q in [q_lo, q_hi], as rows indexed by j and
// columns by q - q_lo. Each rank of df^ is computed once and shared by the
// two cohomology groups it touches.
inline std::vector<std::vector<long long>> koszul_h_table(const HomogPoly& f, long q_lo, long q_hi,
                                                          LinAlgMode mode = LinAlgMode::exact) {
  const std::size_t n = f.n_vars();
  const long d = f.degree();
  if (q_hi < q_lo) return std::vector<std::vector<long long>>(n + 1);
  const long lo = q_lo - d, width = q_hi - lo + 1;
  // rank of df^ : Omega^j_q -> Omega^{j+1}_{q+d}, for q in [q_lo - d, q_hi]
  std::vector<std::vector<std::size_t>> rk(n, std::vector<std::size_t>(static_cast<std::size_t>(width), 0));
  std::vector<std::pair<unsigned, long>> jobs;
  for (unsigned j = 0; j < n; ++j)
    for (long q = lo; q <= q_hi; ++q)
      if (form_dim(n, j, q) > 0) jobs.emplace_back(j, q);
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto [j, q] = jobs[i];
    rk[j][static_cast<std::size_t>(q - lo)] =
        run_in_mode(mode, [&](const auto& F) { return detail::wedge_df_rank(f, F, j, q); });
  });
  std::vector<std::vector<long long>> h(n + 1);
  for (unsigned j = 0; j <= n; ++j)
    for (long q = q_lo; q <= q_hi; ++q) {
      long long v = static_cast<long long>(form_dim(n, j, q));
      if (j < n) v -= static_cast<long long>(rk[j][static_cast<std::size_t>(q - lo)]);
      if (j > 0) v -= static_cast<long long>(rk[j - 1][static_cast<std::size_t>(q - d - lo)]);
      h[j].push_back(v);
    }
  return h;
}

enum class MilnorRoute {
  propagate,  // cokernels of the small presentation maps of A_{j+1}
  macaulay,   // cokernel of the full matrix {m * df/dx_i} in each degree
};

namespace detail {

inline std::vector<long long> milnor_dims_macaulay(const HomogPoly& f, long top, LinAlgMode mode) {
  const std::size_t n = f.n_vars();
  std::vector<long long> out(static_cast<std::size_t>(top + 1));
  parallel_for(out.size(), [&](std::size_t j) {
    long k = static_cast<long>(j + n);
    out[j] = koszul_h_dim(f, static_cast<unsigned>(n), k, mode);
  });
  return out;
}

}  // namespace detail

// mu_k = dim (R/(df))_{k-n}, stored for k in [0, nd].
//
// Stabilisation: with isolated singularities mu'_k = mu'_{nd-k} vanishes for
// k > nd-n (it is zero below n), and nu_{nd-k} = 0 there as well because
// mu = gamma below n+d-1. Hence mu_k = mu''_k = tau for every k > nd-n. The
// constant tail is checked on [nd-n+1, nd+d]; tau itself is the value at nd,
// which is degree nd-n of the Milnor algebra.
inline GradedTable milnor_table(const HomogPoly& f, LinAlgMode mode = LinAlgMode::exact,
                                MilnorRoute route = MilnorRoute::propagate) {
  const long n = static_cast<long>(f.n_vars()), d = f.degree();
  if (n < 2 || d < 2) fail(ErrorCode::InvalidInput, "need n >= 2 and d >= 2");
  const long top = n * d + d - n;  // Milnor-algebra degree of k = nd+d
  std::vector<long long> dims =
      route == MilnorRoute::propagate
          ? run_in_mode(mode, [&](const auto& F) { return detail::milnor_dims(f, F, top); })
          : detail::milnor_dims_macaulay(f, top, mode);
  auto mu_at = [&](long k) { return k < n ? 0LL : dims[static_cast<std::size_t>(k - n)]; };
  const long long tau = mu_at(n * d);
  for (long k = n * d - n + 1; k <= n * d + d; ++k) {
    if (mu_at(k) != tau) {
      if (mu_at(n * d + d) != tau)
        fail(ErrorCode::NotIsolated, "Milnor algebra dimensions keep changing past degree nd (" +
                                         std::to_string(tau) + " at k=nd, " + std::to_string(mu_at(n * d + d)) +
                                         " at k=nd+d)");
      fail(ErrorCode::NotStabilized, "mu_" + std::to_string(k) + " = " + std::to_string(mu_at(k)) +
                                         " differs from mu_nd = " + std::to_string(tau));
    }
  }
  GradedTable mu{TableLabel::mu, 0, {}, static_cast<unsigned>(n), static_cast<unsigned>(d), tau};
  for (long k = 0; k <= n * d; ++k) mu.values.push_back(mu_at(k));
  return mu;
}

inline long long tau_from_mu(const GradedTable& mu) {
  const long n = mu.n, d = mu.d;
  long long tau = mu.at(n * d);
  for (long k = n * d - n + 1; k <= n * d; ++k)
    if (mu.at(k) != tau) fail(ErrorCode::NotStabilized, "mu is not constant on (nd-n, nd]");
  if (mu.stable_tail && *mu.stable_tail != tau) fail(ErrorCode::NotStabilized, "stable tail differs from mu_nd");
  return tau;
}

inline GradedTable nu_table(const GradedTable& mu, const GradedTable& gamma) {
  if (mu.n != gamma.n || mu.d != gamma.d) fail(ErrorCode::InvalidInput, "tables for different (n, d)");
  const long nd = static_cast<long>(mu.n) * mu.d;
  GradedTable nu{TableLabel::nu, 0, {}, mu.n, mu.d, tau_from_mu(mu)};
  for (long k = 0; k <= nd; ++k) {
    long long v = mu.at(k) - gamma.at(k);
    if (v < 0) fail(ErrorCode::NegativeNu, "nu_" + std::to_string(k) + " = " + std::to_string(v));
    nu.values.push_back(v);
  }
  return nu;
}

struct SplitTables {
  GradedTable mu_prime, mu_dblprime;
};

// mu''_k = tau - nu_{nd-k}, mu'_k = mu_k - mu''_k.
inline SplitTables split_table(const GradedTable& mu, const GradedTable& nu, long long tau) {
  const long nd = static_cast<long>(mu.n) * mu.d;
  SplitTables s{{TableLabel::mu_prime, 0, {}, mu.n, mu.d, 0}, {TableLabel::mu_dblprime, 0, {}, mu.n, mu.d, tau}};
  for (long k = 0; k <= nd; ++k) {
    long long dbl = tau - nu.at(nd - k);
    long long prime = mu.at(k) - dbl;
    if (dbl < 0 || prime < 0)
      fail(ErrorCode::NegativeSplit, "mu'_" + std::to_string(k) + " = " + std::to_string(prime) + ", mu''_" +
                                         std::to_string(k) + " = " + std::to_string(dbl));
    s.mu_dblprime.values.push_back(dbl);
    s.mu_prime.values.push_back(prime);
  }
  return s;
}

// delta_k = mu_k - nu_{k+d} for k in [0, nd); never clamped.
inline GradedTable delta_table(const GradedTable& mu, const GradedTable& nu) {
  const long nd = static_cast<long>(mu.n) * mu.d;
  GradedTable delta{TableLabel::delta, 0, {}, mu.n, mu.d, 0};
  for (long k = 0; k < nd; ++k) delta.values.push_back(mu.at(k) - nu.at(k + static_cast<long>(mu.d)));
  return delta;
}

struct E2Tables {
  GradedTable mu2;  // indexed by k
  GradedTable nu2;  // indexed by k + d
};

namespace detail {

// Rank data of the stacked map h -> (sum h_i df/dx_i, [div h]) on R_q^n,
// q = k-n+1, into R_{q+d-1} (+) A_{k-n}. Syzygies h correspond to df^-closed
// (n-1)-forms (up to the signs (-1)^{i-1}), and [div h] is the class of the
// exterior derivative in M_k, so rank d1 = total rank - rank of the first block.
struct StackedRank {
  std::size_t total = 0;
  std::size_t first_block = 0;
};

template <class F>
StackedRank stacked_rank(const HomogPoly& f, MilnorAlgebra<F>& A, long k) {
  using V = typename F::value_type;
  const F& field = A.field();
  const long n = static_cast<long>(f.n_vars()), d = f.degree();
  const long q = k - n + 1;
  StackedRank out;
  if (q < 1) return out;
  const MonomialBasis src(f.n_vars(), q), dst(f.n_vars(), q + d - 1);
  const MonomialBasis& low = A.basis(q - 1);
  const auto& nf = A.normal_forms(q - 1);
  const std::size_t offset = dst.size();
  std::vector<std::vector<std::pair<ExponentVector, V>>> parts;
  for (const auto& p : partials(f)) {
    std::vector<std::pair<ExponentVector, V>> t;
    for (const auto& [m, c] : p.terms()) t.emplace_back(m, field.from(c));
    parts.push_back(std::move(t));
  }
  SparseEchelon<F> ech(field, offset + A.dim(q - 1));
  for (std::size_t s = src.size(); s-- > 0;) {
    const ExponentVector& m = src[s];
    for (std::size_t i = 0; i < f.n_vars(); ++i) {
      std::vector<std::pair<std::uint32_t, V>> row;
      for (const auto& [u, c] : parts[i]) row.emplace_back(static_cast<std::uint32_t>(dst.index(m * u)), c);
      if (m[i] > 0) {
        const auto& v = nf[low.index(m.div_var(i))];
        V e = field.from(static_cast<long>(m[i]));
        for (std::size_t t = 0; t < v.cols.size(); ++t)
          row.emplace_back(static_cast<std::uint32_t>(offset + v.cols[t]), field.mul(e, v.vals[t]));
      }
      ech.insert(row);
    }
  }
  out.total = ech.rank();
  out.first_block = ech.pivots_before(offset);
  return out;
}

}  // namespace detail

// E2 dimensions through the stacked ranks. In exact mode each degree is first
// tried modulo a random prime: when the prime reproduces the exact dimensions
// of (df) in the two relevant degrees, the modular rank of d1 is a lower bound
// for the true rank, so reaching min(mu_k, nu_{k+d}) certifies it. Degrees that
// are not certified are recomputed over Q. In modular mode two primes must agree.
inline E2Tables e2_tables(const HomogPoly& f, const GradedTable& mu, const GradedTable& nu, long k_lo, long k_hi,
                          LinAlgMode mode = LinAlgMode::exact) {
  const long n = static_cast<long>(f.n_vars()), d = f.degree();
  k_lo = std::max(k_lo, 0L);
  E2Tables e{{TableLabel::mu2, k_lo, {}, mu.n, mu.d, std::nullopt},
             {TableLabel::nu2, k_lo + d, {}, mu.n, mu.d, std::nullopt}};
  if (k_hi < k_lo) return e;
  const std::size_t count = static_cast<std::size_t>(k_hi - k_lo + 1);
  std::vector<long long> rank_d1(count, 0);
  std::vector<bool> pending(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    long k = k_lo + static_cast<long>(i);
    pending[i] = mu.at(k) > 0 && nu.at(k + d) > 0;
  }
  auto expected_first_block = [&](long k) {
    long q = k - n + 1;
    return static_cast<long long>(monomial_count(f.n_vars(), q + d - 1)) - mu.at(k + d);
  };

  auto modular_pass = [&](std::vector<long long>& result, std::vector<bool>& trusted) {
    for (;;) {
      try {
        PrimeField F(PrimeSource::instance().next());
        MilnorAlgebra<PrimeField> A(f, F);
        A.extend_to(n * d);
        for (std::size_t i = 0; i < count; ++i) {
          long k = k_lo + static_cast<long>(i);
          if (!pending[i]) continue;
          A.normal_forms(k - n);
        }
        parallel_for(count, [&](std::size_t i) {
          if (!pending[i]) return;
          long k = k_lo + static_cast<long>(i);
          // Normal forms were precomputed above, so this only reads A.
          auto r = detail::stacked_rank(f, A, k);
          bool dims_ok = static_cast<long long>(A.dim(k - n)) == mu.at(k) &&
                         static_cast<long long>(r.first_block) == expected_first_block(k);
          result[i] = static_cast<long long>(r.total - r.first_block);
          trusted[i] = dims_ok;
        });
        return;
      } catch (const BadPrime&) {
      }
    }
  };

  std::vector<long long> r1(count, 0), r2(count, 0);
  std::vector<bool> t1(count, false), t2(count, false);
  modular_pass(r1, t1);
  std::vector<bool> need_exact(count, false);
  if (mode == LinAlgMode::exact) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!pending[i]) continue;
      long k = k_lo + static_cast<long>(i);
      long long bound = std::min(mu.at(k), nu.at(k + d));
      if (t1[i] && r1[i] == bound)
        rank_d1[i] = r1[i];
      else
        need_exact[i] = true;
    }
  } else {
    modular_pass(r2, t2);
    for (std::size_t i = 0; i < count; ++i) {
      if (!pending[i]) continue;
      if (t1[i] && t2[i] && r1[i] == r2[i])
        rank_d1[i] = r1[i];
      else
        need_exact[i] = true;
    }
  }
  if (std::find(need_exact.begin(), need_exact.end(), true) != need_exact.end()) {
    MilnorAlgebra<RationalField> A(f, RationalField{});
    A.extend_to(n * d);
    for (std::size_t i = 0; i < count; ++i)
      if (need_exact[i]) A.normal_forms(k_lo + static_cast<long>(i) - n);
    parallel_for(count, [&](std::size_t i) {
      if (!need_exact[i]) return;
      auto r = detail::stacked_rank(f, A, k_lo + static_cast<long>(i));
      rank_d1[i] = static_cast<long long>(r.total - r.first_block);
    });
  }

  for (std::size_t i = 0; i < count; ++i) {
    long k = k_lo + static_cast<long>(i);
    e.mu2.values.push_back(mu.at(k) - rank_d1[i]);
    e.nu2.values.push_back(nu.at(k + d) - rank_d1[i]);
  }
  return e;
}

// Literal route for small inputs: N_{k+d} from the kernel of df^ on
// Omega^{n-1}_k, d applied to every kernel vector, then the rank of the images
// in M_k = R_{k-n}/(df)_{k-n}. Dense exact arithmetic throughout.
inline std::array<long long, 2> e2_by_kernels(const HomogPoly& f, long k) {
  const std::size_t n = f.n_vars();
  const long d = f.degree();
  const unsigned j = static_cast<unsigned>(n - 1);
  // Integer coefficients: scaling f changes neither kernels nor images.
  Integer den = 1;
  for (const auto& [m, c] : f.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  HomogPoly g = f.scaled(Rational(den));
  detail::FormBasis src(n, j, k), dst(n, j + 1, k + d);
  auto rows = detail::wedge_df_rows(g, RationalField{}, j, k);
  ExactMatrix wedge(dst.size(), src.size());
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (const auto& [c, v] : rows[s]) wedge(c, s) += v.get_num();
  auto cycles = kernel_basis(wedge);

  // (df)_{k-n} as the image of Omega^{n-1}_{k-d}, then the images d(z).
  MonomialBasis top(n, k - static_cast<long>(n));
  std::vector<std::vector<Integer>> gens;
  if (k - d >= static_cast<long>(j)) {
    for (const auto& row : detail::wedge_df_rows(g, RationalField{}, j, k - d)) {
      std::vector<Integer> v(top.size());
      for (const auto& [c, x] : row) v[c] += x.get_num();
      gens.push_back(std::move(v));
    }
  }
  auto rank_of = [&](const std::vector<std::vector<Integer>>& vs) {
    ExactMatrix m(vs.size(), top.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t c = 0; c < top.size(); ++c) m(i, c) = vs[i][c];
    return static_cast<long long>(rank(m));
  };
  long long ideal_rank = rank_of(gens);
  auto all = gens;
  for (const auto& z : cycles) {
    std::vector<Integer> v(top.size());
    for (std::size_t s = 0; s < z.size(); ++s) {
      if (sgn(z[s]) == 0) continue;
      unsigned mask = src.subsets[s / src.monos.size()];
      const ExponentVector& m = src.monos[s % src.monos.size()];
      // The missing variable i of the (n-1)-subset; d(g dx^_i) = (-1)^i dg/dx_i vol (0-based i).
      std::size_t i = static_cast<std::size_t>(__builtin_ctz(~mask));
      if (m[i] == 0) continue;
      Integer c = z[s] * m[i];
      if (i & 1) c = -c;
      v[top.index(m.div_var(i))] += c;
    }
    all.push_back(std::move(v));
  }
  long long rank_d1 = rank_of(all) - ideal_rank;
  long long mu_k = static_cast<long long>(top.size()) - ideal_rank;
  long long nu = static_cast<long long>(cycles.size()) -
                 static_cast<long long>(detail::wedge_df_rank(g, RationalField{}, j - 1, k - d));
  return {mu_k - rank_d1, nu - rank_d1};
}

// Everything derived from f alone.
struct KoszulTables {
  unsigned n = 0, d = 0;
  long long tau = 0;
  GradedTable gamma, mu, nu, mu_prime, mu_dblprime, delta;
  std::optional<E2Tables> e2;
};

inline KoszulTables compute_tables(const HomogPoly& f, LinAlgMode mode = LinAlgMode::exact) {
  KoszulTables t;
  t.n = static_cast<unsigned>(f.n_vars());
  t.d = f.degree();
  t.gamma = gamma_table(t.n, t.d);
  t.mu = milnor_table(f, mode);
  t.tau = tau_from_mu(t.mu);
  t.nu = nu_table(t.mu, t.gamma);
  auto s = split_table(t.mu, t.nu, t.tau);
  t.mu_prime = std::move(s.mu_prime);
  t.mu_dblprime = std::move(s.mu_dblprime);
  t.delta = delta_table(t.mu, t.nu);
  return t;
}

// k in [0, k_hi]; k_hi defaults to nd-1, the last degree where delta can be nonzero.
inline void add_e2(KoszulTables& t, const HomogPoly& f, LinAlgMode mode = LinAlgMode::exact,
                   std::optional<long> k_hi = std::nullopt) {
  const long nd = static_cast<long>(t.n) * t.d;
  t.e2 = e2_tables(f, t.mu, t.nu, 0, k_hi ? std::max(*k_hi, nd - 1) : nd - 1, mode);
}

}  // namespace bsroots

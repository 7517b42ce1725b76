#pragma once

#include <gmpxx.h>

#include <bit>
#include <cassert>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "field.hpp"
#include "rational.hpp"

namespace bsroots {

enum class LinAlgMode { exact, modular };

// Dense integer matrix, row-major.
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  ExactMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& r : init) {
      assert(r.size() == cols_);
      for (long v : r) a_.emplace_back(v);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<Integer> apply(const std::vector<Integer>& v) const {
    std::vector<Integer> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Integer> a_;
};

// Fraction-free elimination (Bareiss). Pivot: nonzero entry of least magnitude
// in the current column, ties broken by row index.
inline std::size_t rank(const ExactMatrix& m) {
  ExactMatrix a(m);
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::optional<std::size_t> piv;
    for (std::size_t i = r; i < a.rows(); ++i)
      if (sgn(a(i, c)) != 0 && (!piv || mpz_cmpabs(a(i, c).get_mpz_t(), a(*piv, c).get_mpz_t()) < 0)) piv = i;
    if (!piv) continue;
    if (*piv != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(*piv, j));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      for (std::size_t j = c + 1; j < a.cols(); ++j) {
        a(i, j) = a(r, c) * a(i, j) - a(i, c) * a(r, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

inline std::size_t cokernel_dim(const ExactMatrix& m) { return m.rows() - rank(m); }

// Reduced row echelon form over Q; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t i = r;
    while (i < a.size() && sgn(a[i][c]) == 0) ++i;
    if (i == a.size()) continue;
    std::swap(a[r], a[i]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (k == r || sgn(a[k][c]) == 0) continue;
      Rational f = a[k][c];
      for (std::size_t j = c; j < cols; ++j) a[k][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Right null space. One vector per free column, read off the reduced echelon
// form, scaled to coprime integers with a positive free coordinate.
inline std::vector<std::vector<Integer>> kernel_basis(const ExactMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  std::vector<std::size_t> pivots = rref(a, m.cols());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<Integer>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
    Integer den = 1;
    for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> w(m.cols());
    Integer g = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      Rational s = v[j] * den;
      w[j] = s.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w[j].get_mpz_t());
    }
    for (auto& x : w) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    basis.push_back(std::move(w));
  }
  return basis;
}

// Process-wide source of random primes. Seedable for reproducible runs.
class PrimeSource {
 public:
  static PrimeSource& instance() {
    static PrimeSource s;
    return s;
  }
  void seed(std::uint64_t s) {
    std::lock_guard<std::mutex> lock(mutex_);
    rng_.seed(s);
  }
  std::uint64_t next() {
    std::lock_guard<std::mutex> lock(mutex_);
    return random_prime62(rng_);
  }

 private:
  PrimeSource() : rng_(std::random_device{}()) {}
  std::mutex mutex_;
  std::mt19937_64 rng_;
};

// Runs job(field) over two random primes; agreement is accepted, otherwise
// the job is rerun over Q. In exact mode the job runs over Q directly.
template <class Job>
auto run_in_mode(LinAlgMode mode, Job&& job) {
  if (mode == LinAlgMode::exact) return job(RationalField{});
  auto modular = [&]() {
    for (;;) {
      try {
        return job(PrimeField(PrimeSource::instance().next()));
      } catch (const BadPrime&) {
      }
    }
  };
  auto r1 = modular();
  auto r2 = modular();
  if (r1 == r2) return r1;
  return job(RationalField{});
}

inline std::size_t modular_rank(const ExactMatrix& m) {
  std::size_t r1 = 0, r2 = 0;
  for (std::size_t* r : {&r1, &r2}) {
    PrimeField F(PrimeSource::instance().next());
    std::vector<std::vector<std::uint64_t>> a(m.rows(), std::vector<std::uint64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = F.from(m(i, j));
    std::size_t rk = 0;
    for (std::size_t c = 0; c < m.cols() && rk < m.rows(); ++c) {
      std::size_t i = rk;
      while (i < m.rows() && a[i][c] == 0) ++i;
      if (i == m.rows()) continue;
      std::swap(a[rk], a[i]);
      auto inv = F.inv(a[rk][c]);
      for (std::size_t k = rk + 1; k < m.rows(); ++k) {
        if (a[k][c] == 0) continue;
        auto f = F.mul(a[k][c], inv);
        for (std::size_t j = c; j < m.cols(); ++j) F.sub_mul(a[k][j], f, a[rk][j]);
      }
      ++rk;
    }
    *r = rk;
  }
  return r1 == r2 ? r1 : rank(m);
}

inline std::size_t rank(const ExactMatrix& m, LinAlgMode mode) {
  return mode == LinAlgMode::exact ? rank(m) : modular_rank(m);
}

// Sparse vector: parallel column/value arrays, columns strictly increasing.
template <class V>
struct SparseRow {
  std::vector<std::uint32_t> cols;
  std::vector<V> vals;

  std::size_t size() const { return cols.size(); }
  bool empty() const { return cols.empty(); }
};

// Incremental row echelon form over a field. Column 0 is the most significant
// position: a pivot row's leading column is its smallest column index.
template <class F>
class SparseEchelon {
 public:
  using V = typename F::value_type;
  using Row = SparseRow<V>;

  SparseEchelon(const F& field, std::size_t ncols)
      : field_(field), ncols_(ncols), pivot_of_(ncols, -1), acc_(ncols, field.zero()), mark_((ncols + 63) / 64, 0) {}

  std::size_t cols() const { return ncols_; }
  std::size_t rank() const { return rows_.size(); }
  const F& field() const { return field_; }

  // Entries may be unsorted and may repeat a column (they are summed).
  bool insert(const std::vector<std::pair<std::uint32_t, V>>& entries) {
    Row r = reduce(entries);
    if (r.empty()) return false;
    V inv = field_.inv(r.vals[0]);
    for (auto& v : r.vals) v = field_.mul(v, inv);
    pivot_of_[r.cols[0]] = static_cast<std::int64_t>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  // Remainder of the vector after eliminating every pivot column.
  Row reduce(const std::vector<std::pair<std::uint32_t, V>>& entries) {
    std::size_t lo = ncols_;
    for (const auto& [c, v] : entries) {
      acc_[c] = field_.add(acc_[c], v);
      mark_[c >> 6] |= std::uint64_t(1) << (c & 63);
      lo = std::min<std::size_t>(lo, c);
    }
    Row out;
    for (std::size_t w = lo >> 6; w < mark_.size(); ++w) {
      while (mark_[w]) {
        std::uint32_t c = static_cast<std::uint32_t>(w * 64 + std::countr_zero(mark_[w]));
        mark_[w] &= mark_[w] - 1;
        if (field_.is_zero(acc_[c])) continue;
        std::int64_t p = pivot_of_[c];
        if (p < 0) {
          out.cols.push_back(c);
          continue;
        }
        V factor = acc_[c];
        acc_[c] = field_.zero();
        const Row& pr = rows_[static_cast<std::size_t>(p)];
        for (std::size_t t = 1; t < pr.cols.size(); ++t) {
          std::uint32_t j = pr.cols[t];
          field_.sub_mul(acc_[j], factor, pr.vals[t]);
          mark_[j >> 6] |= std::uint64_t(1) << (j & 63);
        }
      }
    }
    Row kept;
    for (std::uint32_t c : out.cols) {
      if (!field_.is_zero(acc_[c])) {
        kept.cols.push_back(c);
        kept.vals.push_back(acc_[c]);
      }
      acc_[c] = field_.zero();
    }
    return kept;
  }

  // Back-substitution: afterwards each pivot row is zero in every other pivot column.
  void make_reduced() {
    std::vector<std::uint32_t> leads;
    for (const auto& r : rows_) leads.push_back(r.cols[0]);
    std::sort(leads.begin(), leads.end());
    for (auto it = leads.rbegin(); it != leads.rend(); ++it) {
      Row& r = rows_[static_cast<std::size_t>(pivot_of_[*it])];
      bool dirty = false;
      for (std::size_t t = 1; t < r.cols.size() && !dirty; ++t) dirty = pivot_of_[r.cols[t]] >= 0;
      if (!dirty) continue;
      std::vector<std::pair<std::uint32_t, V>> tail;
      for (std::size_t t = 1; t < r.cols.size(); ++t) tail.emplace_back(r.cols[t], r.vals[t]);
      V lead = r.vals[0];
      // Pivots to the right of this one are already reduced, so eliminating
      // them only introduces free columns.
      Row reduced = reduce(tail);
      r.cols.assign(1, *it);
      r.vals.assign(1, lead);
      r.cols.insert(r.cols.end(), reduced.cols.begin(), reduced.cols.end());
      r.vals.insert(r.vals.end(), reduced.vals.begin(), reduced.vals.end());
    }
  }

  bool is_pivot(std::size_t c) const { return pivot_of_[c] >= 0; }
  // Monic row whose leading column is c; c must be a pivot column.
  const Row& pivot_row(std::size_t c) const { return rows_[static_cast<std::size_t>(pivot_of_[c])]; }

  std::size_t pivots_before(std::size_t c) const {
    std::size_t k = 0;
    for (std::size_t j = 0; j < c && j < ncols_; ++j) k += pivot_of_[j] >= 0;
    return k;
  }

 private:
  F field_;
  std::size_t ncols_;
  std::vector<std::int64_t> pivot_of_;
  std::vector<Row> rows_;
  std::vector<V> acc_;
  std::vector<std::uint64_t> mark_;
};

}  // namespace bsroots

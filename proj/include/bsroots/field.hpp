#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

#include "rational.hpp"

namespace bsroots {

// The rationals, exact.
struct RationalField {
  using value_type = Rational;

  static value_type zero() { return 0; }
  static value_type one() { return 1; }
  static bool is_zero(const value_type& a) { return sgn(a) == 0; }
  static value_type from(const Rational& r) { return r; }
  static value_type from(long v) { return v; }
  static value_type inv(const value_type& a) { return 1 / a; }
  static value_type neg(const value_type& a) { return -a; }
  static value_type add(const value_type& a, const value_type& b) { return a + b; }
  static value_type mul(const value_type& a, const value_type& b) { return a * b; }
  // a -= c * b
  static void sub_mul(value_type& a, const value_type& c, const value_type& b) {
    static thread_local mpq_class t;
    mpq_mul(t.get_mpq_t(), c.get_mpq_t(), b.get_mpq_t());
    mpq_sub(a.get_mpq_t(), a.get_mpq_t(), t.get_mpq_t());
  }
  static Rational to_rational(const value_type& a) { return a; }
  static constexpr bool exact = true;
};

// Thrown when a rational input has a denominator divisible by the modulus.
struct BadPrime {};

// Z/p for an odd prime p < 2^62, elements kept in Montgomery form.
class PrimeField {
 public:
  using value_type = std::uint64_t;
  static constexpr bool exact = false;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    std::uint64_t inv = p;  // Newton iteration for p^{-1} mod 2^64
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    pneg_inv_ = ~inv + 1;
    unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % p;
    r2_ = static_cast<std::uint64_t>((r * r) % p);
    one_ = to_mont(1);
  }

  std::uint64_t modulus() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return one_; }
  static bool is_zero(value_type a) { return a == 0; }

  value_type to_mont(std::uint64_t a) const { return redc(static_cast<unsigned __int128>(a % p_) * r2_); }
  std::uint64_t from_mont(value_type a) const { return redc(a); }

  value_type from(long v) const {
    std::uint64_t a = v >= 0 ? static_cast<std::uint64_t>(v) % p_ : p_ - (static_cast<std::uint64_t>(-v) % p_);
    return to_mont(a == p_ ? 0 : a);
  }
  value_type from(const Integer& z) const {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p_);
    return to_mont(r.get_ui());
  }
  value_type from(const Rational& q) const {
    if (divides(q.get_den())) throw BadPrime{};
    return mul(from(q.get_num()), inv(from(q.get_den())));
  }
  bool divides(const Integer& z) const { return mpz_divisible_ui_p(z.get_mpz_t(), p_) != 0; }

  value_type add(value_type a, value_type b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const { return redc(static_cast<unsigned __int128>(a) * b); }
  void sub_mul(value_type& a, value_type c, value_type b) const { a = sub(a, mul(c, b)); }
  value_type pow(value_type a, std::uint64_t e) const {
    value_type r = one_;
    for (; e; e >>= 1) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
    }
    return r;
  }
  value_type inv(value_type a) const { return pow(a, p_ - 2); }

 private:
  std::uint64_t redc(unsigned __int128 t) const {
    std::uint64_t m = static_cast<std::uint64_t>(t) * pneg_inv_;
    unsigned __int128 u = (t + static_cast<unsigned __int128>(m) * p_) >> 64;
    std::uint64_t r = static_cast<std::uint64_t>(u);
    return r >= p_ ? r - p_ : r;
  }

  std::uint64_t p_;
  std::uint64_t pneg_inv_;
  std::uint64_t r2_;
  value_type one_;
};

// A random prime in [2^61, 2^62).
inline std::uint64_t random_prime62(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(std::uint64_t(1) << 61, (std::uint64_t(1) << 62) - (1u << 20));
  Integer start(std::to_string(dist(rng))), p;
  mpz_nextprime(p.get_mpz_t(), start.get_mpz_t());
  return std::stoull(p.get_str());
}

}  // namespace bsroots

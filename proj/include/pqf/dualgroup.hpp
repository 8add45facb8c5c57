#pragma once

#include <compare>
#include <string>
#include <vector>

#include "base.hpp"

namespace pqf {

/// An element k/p^n of Z[1/p]/Z in lowest terms: 0 <= k < p^n and p does not
/// divide k when n > 0. Zero is (0, 0). Elements remember their prime and
/// refuse to combine with elements of a different prime.
class PHat {
 public:
  PHat() = default;

  static PHat zero(u64 p) { return make(p, 0, 0); }

  /// Canonical representative of k/p^n mod 1.
  static PHat make(u64 p, std::int64_t k, unsigned n) {
    u64 pn = ipow(p, n);
    std::int64_t r = k % static_cast<std::int64_t>(pn);
    if (r < 0) r += static_cast<std::int64_t>(pn);
    return make_reduced(p, static_cast<u64>(r), n);
  }

  /// Same as make() for an already nonnegative numerator.
  static PHat make_unsigned(u64 p, u64 k, unsigned n) { return make_reduced(p, k % ipow(p, n), n); }

  u64 prime() const { return p_; }
  u64 num() const { return k_; }
  unsigned denom_exp() const { return n_; }
  bool is_zero() const { return k_ == 0; }

  /// |t|_p = p^n, and 0 for t = 0.
  mpz_class abs() const { return is_zero() ? mpz_class(0) : mpz_pow(p_, n_); }

  /// True when |t|_p <= p^N.
  bool in_ball(unsigned N) const { return n_ <= N; }

  /// Numerator of t written over p^N (requires |t|_p <= p^N).
  u64 num_at_level(unsigned N) const {
    if (n_ > N) throw error("PHat: element outside the requested ball");
    return k_ * ipow(p_, N - n_);
  }

  /// m * t for an integer m.
  PHat scaled(std::int64_t m) const {
    if (n_ == 0) return *this;
    u64 pn = ipow(p_, n_);
    std::int64_t mm = m % static_cast<std::int64_t>(pn);
    if (mm < 0) mm += static_cast<std::int64_t>(pn);
    return make_reduced(p_, static_cast<u64>(static_cast<u128>(k_) * static_cast<u64>(mm) % pn), n_);
  }

  friend PHat operator+(const PHat& a, const PHat& b) {
    check_same(a, b);
    unsigned n = std::max(a.n_, b.n_);
    u64 pn = ipow(a.p_, n);
    u128 s = static_cast<u128>(a.num_at_level(n)) + b.num_at_level(n);
    return make_reduced(a.p_, static_cast<u64>(s % pn), n);
  }

  friend PHat operator-(const PHat& a) {
    if (a.is_zero()) return a;
    return make_reduced(a.p_, ipow(a.p_, a.n_) - a.k_, a.n_);
  }

  friend PHat operator-(const PHat& a, const PHat& b) { return a + (-b); }

  friend bool operator==(const PHat& a, const PHat& b) = default;

  /// Ordered by rational value in [0, 1).
  friend std::strong_ordering operator<=>(const PHat& a, const PHat& b) {
    if (a.p_ != b.p_) return a.p_ <=> b.p_;
    u128 lhs = static_cast<u128>(a.k_) * ipow(a.p_, b.n_);
    u128 rhs = static_cast<u128>(b.k_) * ipow(b.p_, a.n_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// "k/p^n" with the denominator written out, e.g. "3/8"; zero is "0".
  std::string to_string() const {
    if (is_zero()) return "0";
    return std::to_string(k_) + "/" + std::to_string(ipow(p_, n_));
  }

  static PHat parse(u64 p, const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        std::size_t used = 0;
        long long k = std::stoll(s, &used);
        if (used != s.size()) throw error("");
        return make(p, k, 0);
      }
      std::size_t u1 = 0, u2 = 0;
      std::string ks = s.substr(0, slash), ds = s.substr(slash + 1);
      long long k = std::stoll(ks, &u1);
      unsigned long long d = std::stoull(ds, &u2);
      if (u1 != ks.size() || u2 != ds.size() || d == 0) throw error("");
      unsigned n = 0;
      while (d % p == 0) {
        d /= p;
        ++n;
      }
      if (d != 1) throw error("");
      return make(p, k, n);
    } catch (const std::exception&) {
      throw error("cannot parse '" + s + "' as a p-power fraction for p = " + std::to_string(p));
    }
  }

 private:
  static PHat make_reduced(u64 p, u64 k, unsigned n) {
    if (!is_prime(p)) throw config_error("PHat: p must be prime");
    if (k == 0) n = 0;
    while (n > 0 && k % p == 0) {
      k /= p;
      --n;
    }
    PHat t;
    t.p_ = p;
    t.k_ = k;
    t.n_ = n;
    return t;
  }

  static void check_same(const PHat& a, const PHat& b) {
    if (a.p_ != b.p_) throw config_error("PHat: elements belong to different primes");
  }

  u64 p_ = 2;
  u64 k_ = 0;
  unsigned n_ = 0;
};

inline PHat phat_make(u64 p, std::int64_t k, unsigned n) { return PHat::make(p, k, n); }
inline PHat phat_add(const PHat& a, const PHat& b) { return a + b; }
inline PHat phat_neg(const PHat& a) { return -a; }
inline mpz_class phat_abs(const PHat& t) { return t.abs(); }

/// [k/p^N for k = 0 .. p^N - 1], i.e. the ball |t|_p <= p^N in the fixed order.
inline std::vector<PHat> enumerate_ball(u64 p, unsigned N) {
  u64 pn = ipow(p, N);
  std::vector<PHat> out;
  out.reserve(pn);
  for (u64 k = 0; k < pn; ++k) out.push_back(PHat::make_unsigned(p, k, N));
  return out;
}

/// {t z}_p; only z mod p^n matters for t = k/p^n.
inline PHat frac_mul(const PHat& t, const ZpPoint& z) {
  if (t.prime() != z.prime()) throw config_error("frac_mul: mismatched primes");
  if (t.is_zero()) return t;
  unsigned n = t.denom_exp();
  u64 pn = ipow(t.prime(), n);
  u64 zr = truncate_point(z, n);
  return PHat::make_unsigned(t.prime(), static_cast<u64>(static_cast<u128>(t.num()) * zr % pn), n);
}

}  // namespace pqf

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pqf {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public error {
 public:
  using error::error;
};

/// A value lives in a larger cyclotomic field than the q-adic context covers.
class field_too_small : public error {
 public:
  explicit field_too_small(const std::string& what) : error(what) {}
};

class precision_exhausted : public error {
 public:
  explicit precision_exhausted(const std::string& what = "precision exhausted") : error(what) {}
};

class division_by_zero : public error {
 public:
  division_by_zero() : error("division by zero") {}
};

class hypothesis_violated : public error {
 public:
  using error::error;
};

class precondition_unverified : public error {
 public:
  using error::error;
};

// Deterministic trial division; the primes used here are small.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (u64 d = 3; d <= n / d; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// b^e, or nullopt when the result does not fit in 64 bits.
inline std::optional<u64> checked_pow(u64 b, unsigned e) {
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= b;
    if (r > ~u64{0}) return std::nullopt;
  }
  return static_cast<u64>(r);
}

inline u64 ipow(u64 b, unsigned e) {
  auto r = checked_pow(b, e);
  if (!r) throw error("integer power overflows 64 bits");
  return *r;
}

inline u64 mod_pow(u64 b, u64 e, u64 m) {
  u128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<u64>(r);
}

/// Multiplicative order of a modulo m (gcd(a, m) = 1, m >= 1).
inline u64 mult_order(u64 a, u64 m) {
  if (m == 1) return 1;
  u64 x = a % m, k = 1;
  while (x != 1) {
    x = static_cast<u64>(static_cast<u128>(x) * a % m);
    ++k;
    if (k > m) throw error("mult_order: element is not a unit");
  }
  return k;
}

/// q-adic valuation of a nonzero integer.
inline int valuation(const mpz_class& x, u64 q) {
  if (x == 0) throw error("valuation of zero");
  mpz_class y = x, r;
  int v = 0;
  while (true) {
    mpz_class quot;
    mpz_fdiv_qr_ui(quot.get_mpz_t(), r.get_mpz_t(), y.get_mpz_t(), static_cast<unsigned long>(q));
    if (r != 0) break;
    y = quot;
    ++v;
  }
  return v;
}

/// q-adic valuation of a nonzero rational.
inline int valuation(const mpq_class& x, u64 q) {
  return valuation(x.get_num(), q) - valuation(x.get_den(), q);
}

inline mpz_class mpz_pow(u64 b, unsigned e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
  return r;
}

inline mpq_class mpq_pow(const mpq_class& b, unsigned e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), b.get_den_mpz_t(), e);
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

/// Session parameters: the two primes, the q-adic working precision and the
/// largest conductor exponent used in one run.
struct Config {
  u64 p = 2;
  u64 q = 5;
  int precision = 64;
  unsigned max_level = 8;

  static Config make(u64 p, u64 q, int precision = 64, unsigned max_level = 8) {
    if (!is_prime(p)) throw config_error("p = " + std::to_string(p) + " is not prime");
    if (!is_prime(q)) throw config_error("q = " + std::to_string(q) + " is not prime");
    if (p == q) throw config_error("p and q must be distinct");
    if (precision < 1) throw config_error("precision must be positive");
    if (max_level < 1) throw config_error("max_level must be positive");
    if (!checked_pow(p, max_level) || *checked_pow(p, max_level) > (u64{1} << 62))
      throw config_error("p^max_level exceeds 2^62");
    if (q > (u64{1} << 31)) throw config_error("q must be below 2^31");
    return Config{p, q, precision, max_level};
  }
};

// Binary digit combinatorics used by the A_q example.

inline unsigned ones_count(u64 n) { return static_cast<unsigned>(std::popcount(n)); }

/// Number of binary digits; bit_length(0) = 0.
inline unsigned bit_length(u64 m) { return static_cast<unsigned>(std::bit_width(m)); }

/// Sum of base-b digits (ones_count when b = 2).
inline u64 digit_sum(u64 n, u64 b) {
  u64 s = 0;
  while (n) {
    s += n % b;
    n /= b;
  }
  return s;
}

/// A point of Z_p with an eventually periodic digit expansion (Z_p ∩ Q).
///
/// Digits are little-endian. Natural numbers are stored as their digits with
/// period {0}. Construction canonicalizes: the period is primitive and the
/// preperiod never ends with the digit that would rotate into the period, so
/// two equal points have identical representations.
class ZpPoint {
 public:
  ZpPoint() = default;

  static ZpPoint nat(u64 p, u64 m) {
    check_prime(p);
    std::vector<unsigned> pre;
    while (m) {
      pre.push_back(static_cast<unsigned>(m % p));
      m /= p;
    }
    return periodic(p, std::move(pre), {0});
  }

  /// Any 64-bit integer; negative values have period {p-1}.
  static ZpPoint integer(u64 p, std::int64_t m) {
    if (m >= 0) return nat(p, static_cast<u64>(m));
    check_prime(p);
    // -a = (p^k - a) + p^k * (-1) with p^k >= a.
    u128 a = static_cast<u128>(-(m + 1)) + 1;
    u128 pk = 1;
    unsigned k = 0;
    while (pk < a) {
      pk *= p;
      ++k;
    }
    u128 r = pk - a;
    std::vector<unsigned> pre(k, 0);
    for (unsigned i = 0; i < k; ++i) {
      pre[i] = static_cast<unsigned>(r % p);
      r /= p;
    }
    return periodic(p, std::move(pre), {static_cast<unsigned>(p - 1)});
  }

  static ZpPoint periodic(u64 p, std::vector<unsigned> pre, std::vector<unsigned> period) {
    check_prime(p);
    if (period.empty()) throw error("ZpPoint: period must be nonempty");
    for (unsigned d : pre)
      if (d >= p) throw error("ZpPoint: digit out of range");
    for (unsigned d : period)
      if (d >= p) throw error("ZpPoint: digit out of range");
    ZpPoint z;
    z.p_ = p;
    z.pre_ = std::move(pre);
    z.period_ = std::move(period);
    z.canonicalize();
    return z;
  }

  u64 prime() const { return p_; }
  const std::vector<unsigned>& preperiod() const { return pre_; }
  const std::vector<unsigned>& period() const { return period_; }
  bool is_nat() const { return period_.size() == 1 && period_[0] == 0; }

  u64 nat_value() const {
    if (!is_nat()) throw error("ZpPoint: not a natural number");
    u128 v = 0;
    for (auto it = pre_.rbegin(); it != pre_.rend(); ++it) {
      v = v * p_ + *it;
      if (v > ~u64{0}) throw error("ZpPoint: natural value exceeds 64 bits");
    }
    return static_cast<u64>(v);
  }

  unsigned digit(u64 i) const {
    if (i < pre_.size()) return pre_[i];
    return period_[(i - pre_.size()) % period_.size()];
  }

  /// Count of digits equal to `d` among the first n digits.
  u64 count_digit_in_prefix(unsigned d, u64 n) const {
    u64 c = 0;
    u64 head = std::min<u64>(n, pre_.size());
    for (u64 i = 0; i < head; ++i) c += (pre_[i] == d);
    if (n <= pre_.size()) return c;
    u64 rest = n - pre_.size();
    u64 L = period_.size();
    u64 per = static_cast<u64>(std::count(period_.begin(), period_.end(), d));
    c += (rest / L) * per;
    for (u64 i = 0; i < rest % L; ++i) c += (period_[i] == d);
    return c;
  }

  bool operator==(const ZpPoint&) const = default;

  /// "m" for naturals, otherwise "pre:period" little-endian digit strings
  /// (comma-separated digits when p > 10).
  std::string to_string() const {
    if (is_nat()) {
      try {
        return std::to_string(nat_value());
      } catch (const error&) {
      }
    }
    return digits_str(pre_) + ":" + digits_str(period_);
  }

  static ZpPoint parse(u64 p, const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(s, &used);
      } catch (const std::exception&) {
        throw error("cannot parse Z_p point '" + s + "'");
      }
      if (used != s.size()) throw error("cannot parse Z_p point '" + s + "'");
      return integer(p, v);
    }
    return periodic(p, parse_digits(p, s.substr(0, colon)), parse_digits(p, s.substr(colon + 1)));
  }

 private:
  static void check_prime(u64 p) {
    if (!is_prime(p)) throw config_error("ZpPoint: p must be prime");
  }

  std::string digits_str(const std::vector<unsigned>& ds) const {
    std::string out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (p_ > 10) {
        if (i) out += ',';
        out += std::to_string(ds[i]);
      } else {
        out += static_cast<char>('0' + ds[i]);
      }
    }
    return out;
  }

  static std::vector<unsigned> parse_digits(u64 p, const std::string& s) {
    std::vector<unsigned> ds;
    if (s.empty()) return ds;
    if (p > 10) {
      std::size_t pos = 0;
      while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
          ds.push_back(static_cast<unsigned>(std::stoul(tok)));
        } catch (const std::exception&) {
          throw error("bad digit '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      for (char c : s) {
        if (c < '0' || c > '9') throw error(std::string("bad digit '") + c + "'");
        ds.push_back(static_cast<unsigned>(c - '0'));
      }
    }
    return ds;
  }

  void canonicalize() {
    // Primitive period.
    std::size_t L = period_.size();
    for (std::size_t d = 1; d < L; ++d) {
      if (L % d) continue;
      bool rep = true;
      for (std::size_t i = d; i < L && rep; ++i) rep = period_[i] == period_[i - d];
      if (rep) {
        period_.resize(d);
        break;
      }
    }
    // Absorb preperiod digits that continue the periodic tail backwards.
    while (!pre_.empty() && pre_.back() == period_.back()) {
      std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
      pre_.pop_back();
    }
  }

  u64 p_ = 2;
  std::vector<unsigned> pre_;
  std::vector<unsigned> period_{0};
};

/// The unique integer in [0, p^N) congruent to z mod p^N.
inline u64 truncate_point(const ZpPoint& z, unsigned N) {
  const u64 p = z.prime();
  u128 pw = 1, r = 0;
  for (unsigned i = 0; i < N; ++i) {
    r += pw * z.digit(i);
    if (i + 1 < N) {
      pw *= p;
      if (pw > ~u64{0}) throw error("truncate_point: p^N exceeds 64 bits");
    }
  }
  if (r > ~u64{0}) throw error("truncate_point: p^N exceeds 64 bits");
  return static_cast<u64>(r);
}

}  // namespace pqf

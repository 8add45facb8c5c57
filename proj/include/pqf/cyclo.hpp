#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "base.hpp"

namespace pqf {

/// phi(p^n), the degree of Q(zeta_{p^n}) over Q (1 for n = 0).
inline u64 cyclo_degree(u64 p, unsigned n) { return n == 0 ? 1 : ipow(p, n - 1) * (p - 1); }

/// An exact element of Q(zeta_{p^n}).
///
/// Stored as integer numerators over one positive common denominator, in the
/// basis 1, z, ..., z^{phi-1} with z = e^{2 pi i / p^n}, reduced modulo the
/// cyclotomic polynomial. After every operation the value is brought to its
/// minimal conductor and the fraction to lowest terms, so equality is
/// structural. Embeddings between levels are coherent: zeta_{p^n} is
/// zeta_{p^m}^{p^{m-n}}.
class CycloNum {
 public:
  CycloNum() = default;

  static CycloNum zero(u64 p) {
    CycloNum c;
    c.p_ = p;
    return c;
  }

  static CycloNum one(u64 p) { return integer(p, 1); }

  static CycloNum integer(u64 p, long v) {
    CycloNum c;
    c.p_ = p;
    c.num_[0] = v;
    return c;
  }

  static CycloNum rational(u64 p, const mpq_class& v) {
    CycloNum c;
    c.p_ = p;
    c.num_[0] = v.get_num();
    c.den_ = v.get_den();
    return c;
  }

  /// zeta_{p^n}^j.
  static CycloNum root(u64 p, unsigned n, std::int64_t j) {
    u64 pn = ipow(p, n);
    std::int64_t e = j % static_cast<std::int64_t>(pn);
    if (e < 0) e += static_cast<std::int64_t>(pn);
    std::vector<mpz_class> buf(pn);
    buf[static_cast<u64>(e)] = 1;
    return from_exponent_buffer(p, n, std::move(buf), 1);
  }

  /// Sum of coeffs[i] * zeta_{p^n}^i; any length up to p^n is accepted.
  static CycloNum from_coeffs(u64 p, unsigned n, const std::vector<mpq_class>& coeffs) {
    u64 pn = ipow(p, n);
    if (coeffs.size() > pn) throw error("CycloNum: too many coefficients for conductor");
    mpz_class den = 1;
    for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> buf(pn);
    for (std::size_t i = 0; i < coeffs.size(); ++i) buf[i] = coeffs[i].get_num() * (den / coeffs[i].get_den());
    return from_exponent_buffer(p, n, std::move(buf), den);
  }

  /// Folds a length-p^n buffer indexed by exponents mod p^n.
  static CycloNum from_exponent_buffer(u64 p, unsigned n, std::vector<mpz_class> buf, mpz_class den) {
    if (buf.size() != ipow(p, n)) throw error("CycloNum: exponent buffer has wrong length");
    if (n > 0) {
      u64 block = ipow(p, n - 1);
      for (u64 r = 0; r < block; ++r) {
        const mpz_class c = buf[(p - 1) * block + r];
        if (c == 0) continue;
        for (u64 i = 0; i + 1 < p; ++i) buf[i * block + r] -= c;
      }
      buf.resize((p - 1) * block);
    }
    CycloNum out;
    out.p_ = p;
    out.cond_ = n;
    out.num_ = std::move(buf);
    out.den_ = std::move(den);
    out.normalize();
    return out;
  }

  u64 prime() const { return p_; }
  unsigned conductor() const { return cond_; }
  const std::vector<mpz_class>& numerators() const { return num_; }
  const mpz_class& denominator() const { return den_; }

  std::vector<mpq_class> coeffs() const {
    std::vector<mpq_class> out;
    out.reserve(num_.size());
    for (const auto& a : num_) {
      mpq_class c(a, den_);
      c.canonicalize();
      out.push_back(c);
    }
    return out;
  }

  bool is_zero() const { return cond_ == 0 && num_[0] == 0; }

  std::optional<mpq_class> as_rational() const {
    if (cond_ != 0) return std::nullopt;
    mpq_class r(num_[0], den_);
    r.canonicalize();
    return r;
  }

  /// (n, j) with *this = zeta_{p^n}^j, if this is a root of unity of p-power order.
  std::optional<std::pair<unsigned, u64>> root_exponent() const {
    using R = std::pair<unsigned, u64>;
    if (den_ != 1) return std::nullopt;
    if (cond_ == 0) {
      if (num_[0] == 1) return R{0, 0};
      if (p_ == 2 && num_[0] == -1) return R{1, 1};
      return std::nullopt;
    }
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (num_[i] != 0) nz.push_back(i);
    if (nz.size() == 1 && num_[nz[0]] == 1) return R{cond_, nz[0]};
    const u64 block = ipow(p_, cond_ - 1);
    if (nz.size() != p_ - 1 || nz[0] >= block) return std::nullopt;
    for (std::size_t i = 0; i < nz.size(); ++i)
      if (nz[i] != nz[0] + i * block || num_[nz[i]] != -1) return std::nullopt;
    return R{cond_, (p_ - 1) * block + nz[0]};
  }

  /// Numerators re-expressed at conductor m >= conductor().
  std::vector<mpz_class> numerators_at(unsigned m) const {
    if (m < cond_) throw error("CycloNum: cannot lower the conductor");
    std::vector<mpz_class> out(cyclo_degree(p_, m));
    u64 stride = ipow(p_, m - cond_);
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (num_[i] != 0) out[i * stride] = num_[i];
    return out;
  }

  /// this * zeta_{p^n}^j; a rotation, no general multiplication.
  CycloNum mul_root(unsigned n, std::int64_t j) const {
    unsigned m = std::max(cond_, n);
    u64 pm = ipow(p_, m);
    std::int64_t e = j % static_cast<std::int64_t>(ipow(p_, n));
    if (e < 0) e += static_cast<std::int64_t>(ipow(p_, n));
    u64 shift = static_cast<u64>(e) * ipow(p_, m - n);
    u64 stride = ipow(p_, m - cond_);
    std::vector<mpz_class> buf(pm);
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (num_[i] != 0) buf[(i * stride + shift) % pm] = num_[i];
    return from_exponent_buffer(p_, m, std::move(buf), den_);
  }

  CycloNum scaled(const mpq_class& c) const {
    if (c == 0) return zero(p_);
    CycloNum out = *this;
    for (auto& a : out.num_) a *= c.get_num();
    out.den_ *= c.get_den();
    out.normalize();
    return out;
  }

  friend CycloNum operator+(const CycloNum& a, const CycloNum& b) { return combine(a, b, false); }
  friend CycloNum operator-(const CycloNum& a, const CycloNum& b) { return combine(a, b, true); }

  friend CycloNum operator-(const CycloNum& a) {
    CycloNum out = a;
    for (auto& x : out.num_) x = -x;
    return out;
  }

  friend CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    check_same(a, b);
    if (a.cond_ == 0) return b.scaled(mpq_class(a.num_[0], a.den_));
    if (b.cond_ == 0) return a.scaled(mpq_class(b.num_[0], b.den_));
    unsigned m = std::max(a.cond_, b.cond_);
    u64 pm = ipow(a.p_, m);
    auto x = a.numerators_at(m);
    auto y = b.numerators_at(m);
    std::vector<mpz_class> buf(pm);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (y[j] == 0) continue;
        mpz_addmul(buf[(i + j) % pm].get_mpz_t(), x[i].get_mpz_t(), y[j].get_mpz_t());
      }
    }
    return from_exponent_buffer(a.p_, m, std::move(buf), a.den_ * b.den_);
  }

  /// Image under the automorphism zeta -> zeta^g, g prime to p.
  CycloNum conjugate(u64 g) const {
    if (cond_ == 0) return *this;
    const u64 pn = ipow(p_, cond_);
    std::vector<mpz_class> buf(pn);
    for (std::size_t i = 0; i < num_.size(); ++i)
      if (num_[i] != 0) buf[static_cast<u64>((static_cast<unsigned __int128>(i) * g) % pn)] = num_[i];
    return from_exponent_buffer(p_, cond_, std::move(buf), den_);
  }

  /// Multiplicative inverse through relative norms down the tower of p-power
  /// cyclotomic fields.
  CycloNum inv() const {
    if (is_zero()) throw division_by_zero();
    if (cond_ == 0) return rational(p_, 1 / mpq_class(num_[0], den_));
    CycloNum others = one(p_);
    if (cond_ == 1) {
      for (u64 g = 2; g < p_; ++g) others = others * conjugate(g);
    } else {
      const u64 step = ipow(p_, cond_ - 1);
      for (u64 j = 1; j < p_; ++j) others = others * conjugate(1 + j * step);
    }
    const CycloNum norm = *this * others;
    if (norm.cond_ >= cond_) throw error("CycloNum::inv: relative norm did not descend");
    return others * norm.inv();
  }

  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inv(); }

  friend bool operator==(const CycloNum& a, const CycloNum& b) {
    return a.p_ == b.p_ && a.cond_ == b.cond_ && a.den_ == b.den_ && a.num_ == b.num_;
  }

  /// Human-readable form, e.g. "-1/4 - 5/4*z4^3" where zN is zeta_N.
  std::string to_string() const {
    if (cond_ == 0) return as_rational()->get_str();
    std::string out;
    const std::string z = "z" + std::to_string(ipow(p_, cond_));
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      mpq_class c(num_[i], den_);
      c.canonicalize();
      bool neg = c < 0;
      if (neg) c = -c;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      std::string mono = i == 0 ? "" : (i == 1 ? z : z + "^" + std::to_string(i));
      if (mono.empty())
        out += c.get_str();
      else if (c == 1)
        out += mono;
      else
        out += c.get_str() + "*" + mono;
    }
    return out;
  }

 private:
  static void check_same(const CycloNum& a, const CycloNum& b) {
    if (a.p_ != b.p_) throw config_error("CycloNum: operands belong to different primes");
  }

  static CycloNum combine(const CycloNum& a, const CycloNum& b, bool subtract) {
    check_same(a, b);
    unsigned m = std::max(a.cond_, b.cond_);
    mpz_class den;
    mpz_lcm(den.get_mpz_t(), a.den_.get_mpz_t(), b.den_.get_mpz_t());
    mpz_class fa = den / a.den_, fb = den / b.den_;
    std::vector<mpz_class> out(cyclo_degree(a.p_, m));
    u64 sa = ipow(a.p_, m - a.cond_), sb = ipow(a.p_, m - b.cond_);
    for (std::size_t i = 0; i < a.num_.size(); ++i)
      if (a.num_[i] != 0) out[i * sa] = a.num_[i] * fa;
    for (std::size_t i = 0; i < b.num_.size(); ++i) {
      if (b.num_[i] == 0) continue;
      if (subtract)
        mpz_submul(out[i * sb].get_mpz_t(), b.num_[i].get_mpz_t(), fb.get_mpz_t());
      else
        mpz_addmul(out[i * sb].get_mpz_t(), b.num_[i].get_mpz_t(), fb.get_mpz_t());
    }
    CycloNum c;
    c.p_ = a.p_;
    c.cond_ = m;
    c.num_ = std::move(out);
    c.den_ = std::move(den);
    c.normalize();
    return c;
  }

  void normalize() {
    bool all_zero = true;
    for (const auto& a : num_)
      if (a != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      cond_ = 0;
      num_.assign(1, mpz_class(0));
      den_ = 1;
      return;
    }
    if (den_ < 0) {
      den_ = -den_;
      for (auto& a : num_) a = -a;
    }
    mpz_class g = den_;
    for (const auto& a : num_) {
      if (g == 1) break;
      if (a != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
    }
    if (g != 1) {
      for (auto& a : num_)
        if (a != 0) mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    // An element of the subfield Q(zeta_{p^{n-1}}) only uses basis indices
    // divisible by p.
    while (cond_ > 0) {
      bool sub = true;
      for (std::size_t i = 0; i < num_.size() && sub; ++i)
        if (i % p_ != 0 && num_[i] != 0) sub = false;
      if (!sub) break;
      std::vector<mpz_class> lower(cyclo_degree(p_, cond_ - 1));
      for (std::size_t k = 0; k < lower.size(); ++k) lower[k] = std::move(num_[k * p_]);
      num_ = std::move(lower);
      --cond_;
    }
  }

  u64 p_ = 2;
  unsigned cond_ = 0;
  std::vector<mpz_class> num_{mpz_class(0)};
  mpz_class den_ = 1;
};

inline CycloNum cy_root(u64 p, unsigned n, std::int64_t j) { return CycloNum::root(p, n, j); }
inline CycloNum cy_inv(const CycloNum& a) { return a.inv(); }
inline std::optional<mpq_class> cy_as_rational(const CycloNum& a) { return a.as_rational(); }

/// Accumulates sum_i a_i * zeta_{p^L}^{r_i} in exponent space and folds once.
class CycloAccumulator {
 public:
  CycloAccumulator(u64 p, unsigned level) : p_(p), level_(level), pl_(ipow(p, level)), buf_(pl_) {}

  void add(const CycloNum& a, u64 rotation = 0, bool subtract = false) {
    if (a.is_zero()) return;
    if (a.prime() != p_) throw config_error("CycloAccumulator: mismatched prime");
    if (a.conductor() > level_) throw error("CycloAccumulator: term conductor exceeds level");
    if (a.denominator() != den_) {
      mpz_class l;
      mpz_lcm(l.get_mpz_t(), den_.get_mpz_t(), a.denominator().get_mpz_t());
      if (l != den_) {
        mpz_class f = l / den_;
        for (auto& x : buf_)
          if (x != 0) x *= f;
        den_ = l;
      }
    }
    mpz_class f = den_ / a.denominator();
    u64 stride = ipow(p_, level_ - a.conductor());
    rotation %= pl_;
    const auto& num = a.numerators();
    for (std::size_t i = 0; i < num.size(); ++i) {
      if (num[i] == 0) continue;
      auto& slot = buf_[(i * stride + rotation) % pl_];
      if (subtract)
        mpz_submul(slot.get_mpz_t(), num[i].get_mpz_t(), f.get_mpz_t());
      else
        mpz_addmul(slot.get_mpz_t(), num[i].get_mpz_t(), f.get_mpz_t());
    }
  }

  CycloNum result() const { return CycloNum::from_exponent_buffer(p_, level_, buf_, den_); }

 private:
  u64 p_;
  unsigned level_;
  u64 pl_;
  std::vector<mpz_class> buf_;
  mpz_class den_ = 1;
};

}  // namespace pqf

#pragma once

#include <tuple>
#include <vector>

#include "base.hpp"

// Dense univariate polynomials over F_q (u64 coefficients) and over Z/mZ
// (mpz coefficients). Coefficients are stored low degree first.

namespace pqf::fq {

using Poly = std::vector<u64>;

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline u64 inv_mod(u64 a, u64 q) {
  if (a % q == 0) throw division_by_zero();
  return mod_pow(a, q - 2, q);
}

inline Poly add(const Poly& a, const Poly& b, u64 q) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % q;
  trim(r);
  return r;
}

inline Poly sub(const Poly& a, const Poly& b, u64 q) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + q - b[i]) % q;
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, u64 q) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % q;
  }
  trim(r);
  return r;
}

inline Poly scale(const Poly& a, u64 c, u64 q) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * (c % q) % q;
  trim(r);
  return r;
}

/// (quotient, remainder) of a by a nonzero b.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, u64 q) {
  if (b.empty()) throw division_by_zero();
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  u64 lead_inv = inv_mod(b.back(), q);
  Poly quot(a.size() - b.size() + 1, 0);
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    u64 c = a.back() * lead_inv % q;
    quot[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = (a[i + shift] + q - c * b[i] % q) % q;
    trim(a);
  }
  trim(quot);
  return {quot, a};
}

inline Poly mod(const Poly& a, const Poly& b, u64 q) { return divmod(a, b, q).second; }

inline Poly monic(const Poly& a, u64 q) {
  if (a.empty()) return a;
  return scale(a, inv_mod(a.back(), q), q);
}

inline Poly gcd(Poly a, Poly b, u64 q) {
  while (!b.empty()) {
    Poly r = mod(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, q);
}

/// (g, s, t) with s*a + t*b = g, g monic.
inline std::tuple<Poly, Poly, Poly> ext_gcd(const Poly& a, const Poly& b, u64 q) {
  Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    auto [qt, r] = divmod(r0, r1, q);
    Poly s2 = sub(s0, mul(qt, s1, q), q);
    Poly t2 = sub(t0, mul(qt, t1, q), q);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) return {r0, s0, t0};
  u64 li = inv_mod(r0.back(), q);
  return {scale(r0, li, q), scale(s0, li, q), scale(t0, li, q)};
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, u64 q) { return mod(mul(a, b, q), m, q); }

inline Poly powmod(Poly base, const mpz_class& e, const Poly& m, u64 q) {
  Poly r{1};
  r = mod(r, m, q);
  base = mod(base, m, q);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m, q);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, base, m, q);
  }
  return r;
}

/// Ben-Or irreducibility test for a polynomial of degree >= 1.
inline bool is_irreducible(const Poly& g, u64 q) {
  int d = degree(g);
  if (d < 1) return false;
  if (d == 1) return true;
  Poly x{0, 1};
  Poly h = x;
  mpz_class qq = q;
  for (int i = 1; i <= d / 2; ++i) {
    h = powmod(h, qq, g, q);
    Poly g1 = gcd(g, sub(h, x, q), q);
    if (degree(g1) > 0) return false;
  }
  return true;
}

/// Polynomial whose coefficients are the base-q digits of k (degree < width).
inline Poly from_index(u64 k, unsigned width, u64 q) {
  Poly r(width, 0);
  for (unsigned i = 0; i < width; ++i) {
    r[i] = k % q;
    k /= q;
  }
  trim(r);
  return r;
}

}  // namespace pqf::fq

namespace pqf::zmod {

using Poly = std::vector<mpz_class>;

inline void reduce(Poly& f, const mpz_class& m) {
  for (auto& c : f) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
}

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b, const mpz_class& m) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  reduce(r, m);
  return r;
}

/// Remainder of a modulo a monic g, coefficients mod m.
inline Poly mod_monic(Poly a, const Poly& g, const mpz_class& m) {
  reduce(a, m);
  trim(a);
  const std::size_t dg = g.size() - 1;
  while (a.size() > dg) {
    std::size_t shift = a.size() - 1 - dg;
    mpz_class c = a.back();
    for (std::size_t i = 0; i < g.size(); ++i) mpz_submul(a[i + shift].get_mpz_t(), c.get_mpz_t(), g[i].get_mpz_t());
    reduce(a, m);
    trim(a);
  }
  return a;
}

inline Poly lift(const fq::Poly& f) {
  Poly r;
  r.reserve(f.size());
  for (u64 c : f) r.emplace_back(static_cast<unsigned long>(c));
  return r;
}

inline fq::Poly reduce_to_fq(const Poly& f, u64 q) {
  fq::Poly r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = mpz_fdiv_ui(f[i].get_mpz_t(), static_cast<unsigned long>(q));
  fq::trim(r);
  return r;
}

}  // namespace pqf::zmod

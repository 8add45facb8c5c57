#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclo.hpp"
#include "dualgroup.hpp"
#include "qadic.hpp"

namespace pqf {

// Value backends. The exact backend (CycloNum) carries only p; the numeric
// backend (QAdicNum) carries its field context.

template <class V>
struct ValueTraits;

template <>
struct ValueTraits<CycloNum> {
  using ctx_type = u64;
  static u64 prime(u64 p) { return p; }
  static CycloNum zero(u64 p) { return CycloNum::zero(p); }
  static CycloNum one(u64 p) { return CycloNum::one(p); }
  static CycloNum from_rational(u64 p, const mpq_class& c) { return CycloNum::rational(p, c); }
  static CycloNum root(u64 p, unsigned n, std::int64_t j) { return CycloNum::root(p, n, j); }
  static CycloNum mul_root(const CycloNum& v, unsigned n, std::int64_t j) { return v.mul_root(n, j); }
  static bool is_zero(const CycloNum& v) { return v.is_zero(); }
  static bool equal(const CycloNum& a, const CycloNum& b) { return a == b; }
};

template <>
struct ValueTraits<QAdicNum> {
  using ctx_type = FieldCtxPtr;
  static u64 prime(const FieldCtxPtr& c) { return c->p; }
  static QAdicNum zero(const FieldCtxPtr& c) { return QAdicNum::zero(c); }
  static QAdicNum one(const FieldCtxPtr& c) { return QAdicNum::one(c); }
  static QAdicNum from_rational(const FieldCtxPtr& c, const mpq_class& v) { return QAdicNum::from_rational(c, v); }
  static QAdicNum root(const FieldCtxPtr& c, unsigned n, std::int64_t j) { return QAdicNum::root(c, n, j); }
  static QAdicNum mul_root(const QAdicNum& v, unsigned n, std::int64_t j) {
    if (v.is_exact_zero()) return v;
    return v * QAdicNum::root(v.ctx(), n, j);
  }
  static bool is_zero(const QAdicNum& v) { return v.is_exact_zero(); }
  static bool equal(const QAdicNum& a, const QAdicNum& b) { return a.congruent(b); }
};

template <class V>
using ctx_of = typename ValueTraits<V>::ctx_type;

/// A locally constant function on Z_p: values[n] is the value on n + p^level Z_p.
template <class V>
struct LCFn {
  ctx_of<V> ctx;
  unsigned level = 0;
  std::vector<V> values;

  u64 prime() const { return ValueTraits<V>::prime(ctx); }
  const V& at(u64 n) const { return values[n % values.size()]; }
};

/// A finitely supported function on the dual group; zero entries are never stored.
template <class V>
struct DualFn {
  ctx_of<V> ctx;
  std::map<PHat, V> support;

  u64 prime() const { return ValueTraits<V>::prime(ctx); }

  V at(const PHat& t) const {
    auto it = support.find(t);
    return it == support.end() ? ValueTraits<V>::zero(ctx) : it->second;
  }

  void set(const PHat& t, V v) {
    if (ValueTraits<V>::is_zero(v))
      support.erase(t);
    else
      support.insert_or_assign(t, std::move(v));
  }

  void add_to(const PHat& t, const V& v) {
    auto it = support.find(t);
    if (it == support.end()) {
      set(t, v);
      return;
    }
    V s = it->second + v;
    if (ValueTraits<V>::is_zero(s))
      support.erase(it);
    else
      it->second = std::move(s);
  }

  /// Largest denominator exponent in the support (0 when empty).
  unsigned max_denom_exp() const {
    unsigned m = 0;
    for (const auto& [t, v] : support) m = std::max(m, t.denom_exp());
    return m;
  }
};

using ExactFn = LCFn<CycloNum>;
using ExactDual = DualFn<CycloNum>;
using NumFn = LCFn<QAdicNum>;
using NumDual = DualFn<QAdicNum>;

namespace detail {

/// Sum of v_i * zeta_{p^n_i}^{j_i}. The exact backend folds in exponent
/// space once at the end.
template <class V>
class RootSum {
 public:
  RootSum(const ctx_of<V>& ctx, unsigned) : acc_(ValueTraits<V>::zero(ctx)) {}
  void add(const V& v, unsigned n, std::int64_t j) { acc_ = acc_ + ValueTraits<V>::mul_root(v, n, j); }
  V result() const { return acc_; }

 private:
  V acc_;
};

template <>
class RootSum<CycloNum> {
 public:
  RootSum(u64 p, unsigned level) : p_(p), level_(level), acc_(p, level), rest_(CycloNum::zero(p)) {}
  void add(const CycloNum& v, unsigned n, std::int64_t j) {
    if (v.is_zero()) return;
    if (v.conductor() > level_ || n > level_) {
      rest_ = rest_ + v.mul_root(n, j);
      return;
    }
    std::int64_t pn = static_cast<std::int64_t>(ipow(p_, n));
    std::int64_t e = j % pn;
    if (e < 0) e += pn;
    acc_.add(v, static_cast<u64>(e) * ipow(p_, level_ - n));
  }
  CycloNum result() const { return acc_.result() + rest_; }

 private:
  u64 p_;
  unsigned level_;
  CycloAccumulator acc_;
  CycloNum rest_;
};

inline unsigned value_level(const CycloNum& v) { return v.conductor(); }
inline unsigned value_level(const QAdicNum&) { return 0; }

template <class V>
unsigned max_value_level(const std::vector<V>& vs) {
  unsigned m = 0;
  for (const auto& v : vs) m = std::max(m, value_level(v));
  return m;
}

}  // namespace detail

template <class V>
LCFn<V> constant_fn(const ctx_of<V>& ctx, const V& c, unsigned level = 0) {
  return LCFn<V>{ctx, level, std::vector<V>(ipow(ValueTraits<V>::prime(ctx), level), c)};
}

/// Indicator of a + p^level Z_p.
template <class V>
LCFn<V> indicator_fn(const ctx_of<V>& ctx, unsigned level, u64 a) {
  LCFn<V> f{ctx, level, std::vector<V>(ipow(ValueTraits<V>::prime(ctx), level), ValueTraits<V>::zero(ctx))};
  f.values[a % f.values.size()] = ValueTraits<V>::one(ctx);
  return f;
}

/// Raises the level; each value is repeated on the p^(N - level) subclasses.
template <class V>
LCFn<V> lift(const LCFn<V>& f, unsigned N) {
  if (N < f.level) throw error("lift: target level below the function's level");
  if (N == f.level) return f;
  u64 pn = ipow(f.prime(), N);
  LCFn<V> g{f.ctx, N, {}};
  g.values.reserve(pn);
  for (u64 n = 0; n < pn; ++n) g.values.push_back(f.values[n % f.values.size()]);
  return g;
}

template <class V>
bool fn_equal(const LCFn<V>& f, const LCFn<V>& g) {
  unsigned N = std::max(f.level, g.level);
  u64 pn = ipow(f.prime(), N);
  for (u64 n = 0; n < pn; ++n)
    if (!ValueTraits<V>::equal(f.at(n), g.at(n))) return false;
  return true;
}

template <class V>
bool dual_equal(const DualFn<V>& a, const DualFn<V>& b) {
  if (a.support.size() != b.support.size()) return false;
  for (const auto& [t, v] : a.support) {
    auto it = b.support.find(t);
    if (it == b.support.end() || !ValueTraits<V>::equal(v, it->second)) return false;
  }
  return true;
}

template <class V>
LCFn<V> map_pair(const LCFn<V>& f, const LCFn<V>& g, auto op) {
  unsigned N = std::max(f.level, g.level);
  u64 pn = ipow(f.prime(), N);
  LCFn<V> h{f.ctx, N, {}};
  h.values.reserve(pn);
  for (u64 n = 0; n < pn; ++n) h.values.push_back(op(f.at(n), g.at(n)));
  return h;
}

template <class V>
LCFn<V> add_fn(const LCFn<V>& f, const LCFn<V>& g) {
  return map_pair(f, g, [](const V& a, const V& b) { return a + b; });
}

template <class V>
LCFn<V> mul_fn(const LCFn<V>& f, const LCFn<V>& g) {
  return map_pair(f, g, [](const V& a, const V& b) { return a * b; });
}

template <class V>
LCFn<V> scale_fn(const LCFn<V>& f, const V& c) {
  LCFn<V> h = f;
  for (auto& v : h.values) v = c * v;
  return h;
}

template <class V>
DualFn<V> add_dual(const DualFn<V>& a, const DualFn<V>& b) {
  DualFn<V> r = a;
  for (const auto& [t, v] : b.support) r.add_to(t, v);
  return r;
}

template <class V>
DualFn<V> sub_dual(const DualFn<V>& a, const DualFn<V>& b) {
  DualFn<V> r = a;
  for (const auto& [t, v] : b.support) r.add_to(t, -v);
  return r;
}

template <class V>
DualFn<V> scale_dual(const DualFn<V>& a, const V& c) {
  DualFn<V> r{a.ctx, {}};
  for (const auto& [t, v] : a.support) r.set(t, c * v);
  return r;
}

/// Pointwise product on the dual group.
template <class V>
DualFn<V> mul_dual(const DualFn<V>& a, const DualFn<V>& b) {
  DualFn<V> r{a.ctx, {}};
  for (const auto& [t, v] : a.support) {
    auto it = b.support.find(t);
    if (it != b.support.end()) r.set(t, v * it->second);
  }
  return r;
}

/// c at s, zero elsewhere.
template <class V>
DualFn<V> dirac_dual(const ctx_of<V>& ctx, const PHat& s, const V& c) {
  DualFn<V> r{ctx, {}};
  r.set(s, c);
  return r;
}

/// The indicator 1_0 of 0 in the dual group.
template <class V>
DualFn<V> delta0(const ctx_of<V>& ctx) {
  return dirac_dual<V>(ctx, PHat::zero(ValueTraits<V>::prime(ctx)), ValueTraits<V>::one(ctx));
}

/// e^{2 pi i {t z}_p}.
template <class V>
V character(const ctx_of<V>& ctx, const PHat& t, const ZpPoint& z) {
  PHat e = frac_mul(t, z);
  return ValueTraits<V>::root(ctx, e.denom_exp(), static_cast<std::int64_t>(e.num()));
}

inline CycloNum character(const PHat& t, const ZpPoint& z) { return character<CycloNum>(t.prime(), t, z); }

/// z -> e^{2 pi i {t z}_p} as a function of level max(level, -v_p(t)).
template <class V>
LCFn<V> character_fn(const ctx_of<V>& ctx, const PHat& t, unsigned level = 0) {
  const u64 p = ValueTraits<V>::prime(ctx);
  unsigned N = std::max(level, t.denom_exp());
  u64 pn = ipow(p, N);
  LCFn<V> f{ctx, N, {}};
  f.values.reserve(pn);
  u64 pk = ipow(p, t.denom_exp());
  for (u64 n = 0; n < pn; ++n)
    f.values.push_back(ValueTraits<V>::root(ctx, t.denom_exp(), static_cast<std::int64_t>(static_cast<u128>(t.num()) * (n % pk) % pk)));
  return f;
}

/// (1/p^N) * sum of the values at the function's own level N.
template <class V>
V haar_integral(const LCFn<V>& f) {
  V s = ValueTraits<V>::zero(f.ctx);
  for (const auto& v : f.values) s = s + v;
  return ValueTraits<V>::from_rational(f.ctx, mpq_class(1, mpz_pow(f.prime(), f.level))) * s;
}

/// f^(t) = (1/p^N) sum_n f(n) e^{-2 pi i n t} on the ball |t|_p <= p^N.
template <class V>
DualFn<V> fourier_fwd(const LCFn<V>& f) {
  const u64 p = f.prime();
  const unsigned N = f.level;
  const u64 pn = ipow(p, N);
  const unsigned L = std::max(N, detail::max_value_level(f.values));
  const V scale = ValueTraits<V>::from_rational(f.ctx, mpq_class(1, mpz_pow(p, N)));
  DualFn<V> out{f.ctx, {}};
  for (u64 k = 0; k < pn; ++k) {
    detail::RootSum<V> sum(f.ctx, L);
    for (u64 n = 0; n < pn; ++n) {
      u64 e = static_cast<u64>(static_cast<u128>(n) * k % pn);
      sum.add(f.values[n], N, -static_cast<std::int64_t>(e));
    }
    out.set(PHat::make_unsigned(p, k, N), scale * sum.result());
  }
  return out;
}

/// chi(z) = sum_t F(t) e^{2 pi i {t z}_p}, at level max(-v_p(t)).
template <class V>
LCFn<V> fourier_inv(const DualFn<V>& F) {
  const u64 p = F.prime();
  const unsigned N = F.max_denom_exp();
  const u64 pn = ipow(p, N);
  unsigned L = N;
  for (const auto& [t, v] : F.support) L = std::max(L, detail::value_level(v));
  LCFn<V> f{F.ctx, N, {}};
  f.values.reserve(pn);
  for (u64 m = 0; m < pn; ++m) {
    detail::RootSum<V> sum(F.ctx, L);
    for (const auto& [t, v] : F.support) {
      u64 pk = ipow(p, t.denom_exp());
      sum.add(v, t.denom_exp(), static_cast<std::int64_t>(static_cast<u128>(t.num()) * (m % pk) % pk));
    }
    f.values.push_back(sum.result());
  }
  return f;
}

/// (f * g)(m) = (1/p^N) sum_n f(m - n) g(n) at the common level N.
template <class V>
LCFn<V> conv_zp(const LCFn<V>& f, const LCFn<V>& g) {
  const unsigned N = std::max(f.level, g.level);
  const u64 pn = ipow(f.prime(), N);
  LCFn<V> a = lift(f, N), b = lift(g, N);
  const V scale = ValueTraits<V>::from_rational(f.ctx, mpq_class(1, mpz_pow(f.prime(), N)));
  LCFn<V> h{f.ctx, N, {}};
  h.values.reserve(pn);
  for (u64 m = 0; m < pn; ++m) {
    V s = ValueTraits<V>::zero(f.ctx);
    for (u64 n = 0; n < pn; ++n) {
      const V& x = a.values[(m + pn - n) % pn];
      if (ValueTraits<V>::is_zero(x) || ValueTraits<V>::is_zero(b.values[n])) continue;
      s = s + x * b.values[n];
    }
    h.values.push_back(scale * s);
  }
  return h;
}

/// (F * G)(t) = sum_s F(s) G(t - s).
template <class V>
DualFn<V> conv_dual(const DualFn<V>& F, const DualFn<V>& G) {
  DualFn<V> out{F.ctx, {}};
  for (const auto& [s, a] : F.support)
    for (const auto& [u, b] : G.support) out.add_to(s + u, a * b);
  return out;
}

/// tau_s F(t) = F(t + s).
template <class V>
DualFn<V> translate_dual(const DualFn<V>& F, const PHat& s) {
  DualFn<V> out{F.ctx, {}};
  for (const auto& [u, v] : F.support) out.support.emplace(u - s, v);
  return out;
}

/// tau_a f(z) = f(z + a).
template <class V>
LCFn<V> translate_fn(const LCFn<V>& f, const ZpPoint& a) {
  const u64 pn = f.values.size();
  const u64 shift = truncate_point(a, f.level);
  LCFn<V> g{f.ctx, f.level, {}};
  g.values.reserve(pn);
  for (u64 n = 0; n < pn; ++n) g.values.push_back(f.values[(n + shift) % pn]);
  return g;
}

/// sum_t f^(-t) g^(t); equals the Haar integral of f g.
template <class V>
V parseval(const LCFn<V>& f, const LCFn<V>& g) {
  DualFn<V> F = fourier_fwd(f), G = fourier_fwd(g);
  V s = ValueTraits<V>::zero(f.ctx);
  for (const auto& [t, v] : G.support) {
    auto it = F.support.find(-t);
    if (it != F.support.end()) s = s + it->second * v;
  }
  return s;
}

/// The non-archimedean size q^{-v}; a missing valuation denotes the zero norm.
struct QNorm {
  u64 q = 2;
  std::optional<int> v;

  bool is_zero() const { return !v.has_value(); }

  mpq_class value() const {
    if (!v) return 0;
    if (*v >= 0) return mpq_class(1, mpz_pow(q, static_cast<unsigned>(*v)));
    return mpq_class(mpz_pow(q, static_cast<unsigned>(-*v)));
  }

  std::string to_string() const {
    if (!v) return "0";
    if (*v == 0) return "1";
    return std::to_string(q) + "^" + std::to_string(-*v);
  }

  friend bool operator==(const QNorm& a, const QNorm& b) { return a.v == b.v; }

  friend std::strong_ordering operator<=>(const QNorm& a, const QNorm& b) {
    if (!a.v && !b.v) return std::strong_ordering::equal;
    if (!a.v) return std::strong_ordering::less;
    if (!b.v) return std::strong_ordering::greater;
    return *b.v <=> *a.v;
  }

  friend QNorm operator*(const QNorm& a, const QNorm& b) {
    if (!a.v || !b.v) return {a.q, std::nullopt};
    return {a.q, *a.v + *b.v};
  }

  static QNorm max(const QNorm& a, const QNorm& b) { return a < b ? b : a; }
};

/// |a|_q under the fixed embedding. Rational values need no embedding.
inline QNorm qnorm(const CycloNum& a, const FieldCtxPtr& ctx) { return {ctx->q, exact_valuation(a, ctx)}; }

inline QNorm qnorm(const QAdicNum& a) {
  if (a.is_exact_zero()) return {a.ctx()->q, std::nullopt};
  QVal v = a.valuation();
  if (!v.is_finite()) throw precision_exhausted("precision exhausted: valuation >= " + std::to_string(v.v));
  return {a.ctx()->q, v.v};
}

/// sup_z |f(z)|_q. The exact backend needs the embedding `ctx`.
inline QNorm norm_fn(const ExactFn& f, const FieldCtxPtr& ctx) {
  QNorm m{ctx->q, std::nullopt};
  for (const auto& v : f.values) m = QNorm::max(m, qnorm(v, ctx));
  return m;
}

inline QNorm norm_fn(const NumFn& f) {
  QNorm m{f.ctx->q, std::nullopt};
  for (const auto& v : f.values) m = QNorm::max(m, qnorm(v));
  return m;
}

/// sup_{|t|_p <= p^n} |F(t)|_q.
inline QNorm norm_dual_window(const ExactDual& F, unsigned n, const FieldCtxPtr& ctx) {
  QNorm m{ctx->q, std::nullopt};
  for (const auto& [t, v] : F.support)
    if (t.in_ball(n)) m = QNorm::max(m, qnorm(v, ctx));
  return m;
}

inline QNorm norm_dual_window(const NumDual& F, unsigned n) {
  QNorm m{F.ctx->q, std::nullopt};
  for (const auto& [t, v] : F.support)
    if (t.in_ball(n)) m = QNorm::max(m, qnorm(v));
  return m;
}

/// sup_t |F(t)|_q.
inline QNorm norm_dual_sup(const ExactDual& F, const FieldCtxPtr& ctx) {
  return norm_dual_window(F, ~0u, ctx);
}

inline QNorm norm_dual_sup(const NumDual& F) { return norm_dual_window(F, ~0u); }

/// Maps an exact function into the numeric backend.
inline NumFn to_numeric(const ExactFn& f, const FieldCtxPtr& ctx) {
  NumFn g{ctx, f.level, {}};
  g.values.reserve(f.values.size());
  for (const auto& v : f.values) g.values.push_back(from_exact(v, ctx));
  return g;
}

inline NumDual to_numeric(const ExactDual& F, const FieldCtxPtr& ctx) {
  NumDual G{ctx, {}};
  for (const auto& [t, v] : F.support) G.set(t, from_exact(v, ctx));
  return G;
}

}  // namespace pqf

#pragma once

#include <climits>
#include <memory>
#include <string>
#include <vector>

#include "base.hpp"
#include "cyclo.hpp"
#include "modpoly.hpp"

namespace pqf {

/// A fixed embedding of Q(zeta_{p^N}) into the unramified extension
/// Q_q(zeta_{p^N}), truncated modulo q^M.
///
/// The residue field F_{q^f} is built as F_q[x]/(h) with h the first monic
/// irreducible of degree f in the scan order of fq::from_index (constant term
/// least significant). zeta's residue is the first element a^((q^f-1)/p^N),
/// over candidates a scanned in the same order, whose order is exactly p^N.
/// Its minimal polynomial over F_q is Hensel-lifted to a factor `minpoly` of
/// Phi_{p^N} mod q^M, and QAdicNum coordinates are taken in the basis
/// 1, zeta, ..., zeta^{f-1} of (Z/q^M)[x]/(minpoly), zeta being the class of x.
struct FieldCtx {
  u64 p = 2;
  u64 q = 5;
  unsigned N = 0;
  int M = 64;
  unsigned f = 1;
  fq::Poly residue_modulus;            // h, monic, degree f
  fq::Poly zeta_residue;               // in F_q[x]/(h)
  zmod::Poly minpoly;                  // g, monic, degree f, mod q^M
  std::vector<zmod::Poly> zeta_powers; // x^i mod g for i < p^N, each of length f
  std::vector<mpz_class> qpow;         // q^0 .. q^{M+1}

  const mpz_class& modulus() const { return qpow[static_cast<std::size_t>(M)]; }
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

namespace detail {

inline zmod::Poly cyclotomic_poly(u64 p, unsigned N) {
  if (N == 0) return {mpz_class(-1), mpz_class(1)};
  u64 block = ipow(p, N - 1);
  zmod::Poly phi((p - 1) * block + 1);
  for (u64 i = 0; i < p; ++i) phi[i * block] = 1;
  return phi;
}

}  // namespace detail

/// Builds the embedding for conductor p^N at precision M = cfg.precision.
inline FieldCtxPtr field_setup(const Config& cfg, unsigned N) {
  const u64 p = cfg.p, q = cfg.q;
  if (p == q) throw config_error("field_setup: p and q must differ");
  auto ctx = std::make_shared<FieldCtx>();
  ctx->p = p;
  ctx->q = q;
  ctx->N = N;
  ctx->M = cfg.precision;
  const u64 pn = ipow(p, N);
  ctx->f = static_cast<unsigned>(mult_order(q % pn == 0 ? 1 : q, pn));
  const unsigned f = ctx->f;
  for (int k = 0; k <= ctx->M + 1; ++k) ctx->qpow.push_back(mpz_pow(q, static_cast<unsigned>(k)));

  // Residue field.
  for (u64 k = 0;; ++k) {
    fq::Poly h = fq::from_index(k, f, q);
    h.resize(f + 1, 0);
    h[f] = 1;
    if (fq::is_irreducible(h, q)) {
      ctx->residue_modulus = h;
      break;
    }
  }
  const fq::Poly& h = ctx->residue_modulus;

  // An element of exact order p^N.
  mpz_class exponent = (mpz_pow(q, f) - 1) / mpz_class(static_cast<unsigned long>(pn));
  const fq::Poly one{1};
  for (u64 k = 1;; ++k) {
    fq::Poly a = fq::from_index(k, f, q);
    fq::Poly y = fq::powmod(a, exponent, h, q);
    if (y.empty()) continue;
    bool ok = true;
    if (N > 0) {
      fq::Poly t = fq::powmod(y, mpz_class(static_cast<unsigned long>(pn / p)), h, q);
      ok = t != one;
    }
    if (ok) {
      ctx->zeta_residue = y;
      break;
    }
  }

  // Minimal polynomial of zeta's residue: prod (X - y^{q^i}), i < f.
  std::vector<fq::Poly> mp{one};
  fq::Poly conj = ctx->zeta_residue;
  for (unsigned i = 0; i < f; ++i) {
    std::vector<fq::Poly> next(mp.size() + 1);
    for (std::size_t j = 0; j < mp.size(); ++j) {
      next[j + 1] = fq::add(next[j + 1], mp[j], q);
      next[j] = fq::sub(next[j], fq::mulmod(conj, mp[j], h, q), q);
    }
    mp = std::move(next);
    conj = fq::powmod(conj, mpz_class(static_cast<unsigned long>(q)), h, q);
  }
  fq::Poly g0(mp.size(), 0);
  for (std::size_t j = 0; j < mp.size(); ++j) {
    if (fq::degree(mp[j]) > 0) throw error("field_setup: minimal polynomial not over F_q");
    g0[j] = mp[j].empty() ? 0 : mp[j][0];
  }

  // Hensel lift of Phi = g0 * h0 from mod q to mod q^M.
  const zmod::Poly phi = detail::cyclotomic_poly(p, N);
  const fq::Poly phi_q = zmod::reduce_to_fq(phi, q);
  auto [h0, rem] = fq::divmod(phi_q, g0, q);
  if (!rem.empty()) throw error("field_setup: minimal polynomial does not divide Phi mod q");
  auto [gg, s, t] = fq::ext_gcd(g0, h0, q);
  if (gg != one) throw error("field_setup: Phi is not squarefree mod q");
  zmod::Poly g = zmod::lift(g0), cof = zmod::lift(h0);
  for (int k = 1; k < ctx->M; ++k) {
    const mpz_class& qk = ctx->qpow[static_cast<std::size_t>(k)];
    const mpz_class& qk1 = ctx->qpow[static_cast<std::size_t>(k + 1)];
    zmod::Poly prod = zmod::mul(g, cof, qk1);
    zmod::Poly e(std::max(prod.size(), phi.size()));
    for (std::size_t i = 0; i < phi.size(); ++i) e[i] = phi[i];
    for (std::size_t i = 0; i < prod.size(); ++i) e[i] -= prod[i];
    zmod::reduce(e, qk1);
    for (auto& c : e) {
      if (mpz_divisible_p(c.get_mpz_t(), qk.get_mpz_t()) == 0) throw error("field_setup: Hensel invariant broken");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), qk.get_mpz_t());
    }
    fq::Poly e0 = zmod::reduce_to_fq(e, q);
    fq::Poly a = fq::mod(fq::mul(e0, t, q), g0, q);
    auto [b, r2] = fq::divmod(fq::sub(e0, fq::mul(a, h0, q), q), g0, q);
    if (!r2.empty()) throw error("field_setup: Hensel step not exact");
    for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul_ui(g[i].get_mpz_t(), qk.get_mpz_t(), static_cast<unsigned long>(a[i]));
    if (cof.size() < b.size()) cof.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) mpz_addmul_ui(cof[i].get_mpz_t(), qk.get_mpz_t(), static_cast<unsigned long>(b[i]));
  }
  zmod::reduce(g, ctx->modulus());
  g.resize(f + 1);
  ctx->minpoly = g;

  // Certificates.
  if (!zmod::mod_monic(phi, g, ctx->modulus()).empty()) throw error("field_setup: minpoly does not divide Phi mod q^M");
  if (!fq::is_irreducible(zmod::reduce_to_fq(g, q), q)) throw error("field_setup: minpoly not irreducible mod q");

  ctx->zeta_powers.reserve(pn);
  zmod::Poly cur(f);
  cur[0] = 1;
  zmod::reduce(cur, ctx->modulus());
  for (u64 i = 0; i < pn; ++i) {
    ctx->zeta_powers.push_back(cur);
    // cur *= x, then reduce the x^f term with the monic minpoly.
    zmod::Poly nxt(f);
    mpz_class top = cur[f - 1];
    for (unsigned j = f - 1; j > 0; --j) nxt[j] = cur[j - 1];
    nxt[0] = 0;
    for (unsigned j = 0; j < f; ++j) mpz_submul(nxt[j].get_mpz_t(), top.get_mpz_t(), g[j].get_mpz_t());
    zmod::reduce(nxt, ctx->modulus());
    cur = std::move(nxt);
  }
  return ctx;
}

/// v_q of a q-adic number: exact, only a lower bound (precision ran out), or
/// infinite for an exact zero.
struct QVal {
  enum class Kind { finite, at_least, infinite };
  Kind kind = Kind::infinite;
  int v = 0;

  bool is_finite() const { return kind == Kind::finite; }
  bool operator==(const QVal&) const = default;
  std::string to_string() const {
    switch (kind) {
      case Kind::finite:
        return std::to_string(v);
      case Kind::at_least:
        return ">=" + std::to_string(v);
      default:
        return "inf";
    }
  }
};

/// q^shift * sum coords[i] zeta^i, known modulo q^prec (absolute precision).
/// Coordinates are reduced modulo q^(prec - shift), which never exceeds q^M.
class QAdicNum {
 public:
  QAdicNum() = default;

  static QAdicNum zero(FieldCtxPtr ctx) {
    QAdicNum x;
    x.ctx_ = std::move(ctx);
    x.coords_.assign(x.ctx_->f, mpz_class(0));
    return x;
  }

  static QAdicNum from_coords(FieldCtxPtr ctx, std::vector<mpz_class> coords, int shift, int prec) {
    QAdicNum x;
    x.ctx_ = std::move(ctx);
    coords.resize(x.ctx_->f);
    x.coords_ = std::move(coords);
    x.exact_zero_ = false;
    x.shift_ = shift;
    x.prec_ = prec;
    x.normalize();
    return x;
  }

  static QAdicNum from_rational(FieldCtxPtr ctx, const mpq_class& c) {
    if (c == 0) return zero(std::move(ctx));
    const u64 q = ctx->q;
    mpz_class den = c.get_den();
    int vd = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(q))) {
      mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(q));
      ++vd;
    }
    const mpz_class& mod = ctx->modulus();
    mpz_class di;
    mpz_invert(di.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    std::vector<mpz_class> coords(ctx->f);
    coords[0] = c.get_num() * di;
    int M = ctx->M;
    return from_coords(std::move(ctx), std::move(coords), -vd, -vd + M);
  }

  static QAdicNum one(FieldCtxPtr ctx) { return from_rational(std::move(ctx), 1); }

  /// zeta_{p^n}^j under the fixed embedding.
  static QAdicNum root(FieldCtxPtr ctx, unsigned n, std::int64_t j) {
    if (n > ctx->N) throw field_too_small("QAdicNum::root: conductor exceeds the field");
    std::int64_t pn = static_cast<std::int64_t>(ipow(ctx->p, n));
    std::int64_t e = j % pn;
    if (e < 0) e += pn;
    u64 idx = static_cast<u64>(e) * ipow(ctx->p, ctx->N - n);
    auto coords = ctx->zeta_powers[idx];
    int M = ctx->M;
    return from_coords(std::move(ctx), std::move(coords), 0, M);
  }

  const FieldCtxPtr& ctx() const { return ctx_; }
  bool is_exact_zero() const { return exact_zero_; }
  int shift() const { return shift_; }
  int precision() const { return exact_zero_ ? INT_MAX : prec_; }
  const std::vector<mpz_class>& coords() const { return coords_; }

  QVal valuation() const {
    if (exact_zero_) return {QVal::Kind::infinite, 0};
    int best = INT_MAX;
    for (const auto& c : coords_)
      if (c != 0) best = std::min(best, pqf::valuation(c, ctx_->q));
    if (best == INT_MAX) return {QVal::Kind::at_least, prec_};
    return {QVal::Kind::finite, best + shift_};
  }

  /// Lower bound on the valuation, usable in precision bookkeeping.
  int valuation_floor() const {
    QVal v = valuation();
    return v.kind == QVal::Kind::infinite ? INT_MAX / 4 : v.v;
  }

  friend QAdicNum operator+(const QAdicNum& a, const QAdicNum& b) { return combine(a, b, false); }
  friend QAdicNum operator-(const QAdicNum& a, const QAdicNum& b) { return combine(a, b, true); }

  friend QAdicNum operator-(const QAdicNum& a) {
    if (a.exact_zero_) return a;
    QAdicNum r = a;
    for (auto& c : r.coords_) c = -c;
    r.normalize();
    return r;
  }

  friend QAdicNum operator*(const QAdicNum& a, const QAdicNum& b) {
    check_same(a, b);
    if (a.exact_zero_) return a;
    if (b.exact_zero_) return b;
    const int shift = a.shift_ + b.shift_;
    int prec = std::min(a.prec_ + b.valuation_floor(), b.prec_ + a.valuation_floor());
    prec = std::min(prec, shift + a.ctx_->M);
    if (prec <= shift) return from_coords(a.ctx_, {}, shift, prec);
    const mpz_class& R = a.ctx_->qpow[static_cast<std::size_t>(prec - shift)];
    return from_coords(a.ctx_, ring_mul(*a.ctx_, a.coords_, b.coords_, R), shift, prec);
  }

  /// Inverse; needs a finite, known valuation.
  QAdicNum inv() const {
    if (exact_zero_) throw division_by_zero();
    QVal v = valuation();
    if (!v.is_finite()) throw precision_exhausted("precision exhausted: inverting a value that is zero to precision");
    const int rel = prec_ - v.v;
    const mpz_class& R = ctx_->qpow[static_cast<std::size_t>(rel)];
    std::vector<mpz_class> u = coords_;
    const mpz_class& unit_scale = ctx_->qpow[static_cast<std::size_t>(v.v - shift_)];
    for (auto& c : u) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), unit_scale.get_mpz_t());
    zmod::reduce(u, R);
    // Residue inverse, then Newton: w <- w (2 - u w).
    const u64 q = ctx_->q;
    fq::Poly gbar = zmod::reduce_to_fq(ctx_->minpoly, q);
    auto [gg, s, t] = fq::ext_gcd(zmod::reduce_to_fq(u, q), gbar, q);
    if (gg != fq::Poly{1}) throw error("QAdicNum::inv: residue not invertible");
    zmod::Poly w = zmod::lift(s);
    w.resize(ctx_->f);
    int have = 1;
    while (have < rel) {
      have = std::min(2 * have, rel);
      const mpz_class& Rk = ctx_->qpow[static_cast<std::size_t>(have)];
      zmod::Poly uw = ring_mul(*ctx_, u, w, Rk);
      for (auto& c : uw) c = -c;
      uw[0] += 2;
      w = ring_mul(*ctx_, w, uw, Rk);
    }
    zmod::reduce(w, R);
    return from_coords(ctx_, std::move(w), -v.v, prec_ - 2 * v.v);
  }

  friend QAdicNum operator/(const QAdicNum& a, const QAdicNum& b) { return a * b.inv(); }

  /// Equal up to the smaller of the two precisions.
  bool congruent(const QAdicNum& b) const {
    QVal d = (*this - b).valuation();
    return d.kind != QVal::Kind::finite;
  }

  std::string to_string() const {
    if (exact_zero_) return "0";
    std::string out = "q^" + std::to_string(shift_) + "*[";
    for (std::size_t i = 0; i < coords_.size(); ++i) out += (i ? "," : "") + coords_[i].get_str();
    return out + "] + O(q^" + std::to_string(prec_) + ")";
  }

  /// (a * b) mod (minpoly, R) for coordinate vectors of length f.
  static zmod::Poly ring_mul(const FieldCtx& ctx, const zmod::Poly& a, const zmod::Poly& b, const mpz_class& R) {
    const unsigned f = ctx.f;
    std::vector<mpz_class> full(2 * f - 1);
    for (unsigned i = 0; i < f; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < f; ++j) mpz_addmul(full[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    zmod::Poly out(f);
    for (unsigned i = 0; i < f; ++i) out[i] = full[i];
    const u64 pn = ctx.zeta_powers.size();
    for (unsigned i = f; i < 2 * f - 1; ++i) {
      if (full[i] == 0) continue;
      mpz_fdiv_r(full[i].get_mpz_t(), full[i].get_mpz_t(), R.get_mpz_t());
      const auto& xp = ctx.zeta_powers[i % pn];
      for (unsigned j = 0; j < f; ++j) mpz_addmul(out[j].get_mpz_t(), full[i].get_mpz_t(), xp[j].get_mpz_t());
    }
    zmod::reduce(out, R);
    return out;
  }

 private:
  static void check_same(const QAdicNum& a, const QAdicNum& b) {
    if (a.ctx_ != b.ctx_ && (a.ctx_->p != b.ctx_->p || a.ctx_->q != b.ctx_->q || a.ctx_->N != b.ctx_->N ||
                             a.ctx_->M != b.ctx_->M))
      throw config_error("QAdicNum: operands live in different fields");
  }

  static QAdicNum combine(const QAdicNum& a, const QAdicNum& b, bool subtract) {
    check_same(a, b);
    if (b.exact_zero_) return a;
    if (a.exact_zero_) return subtract ? -b : b;
    const int shift = std::min(a.shift_, b.shift_);
    const int prec = std::min(a.prec_, b.prec_);
    std::vector<mpz_class> out(a.ctx_->f);
    const mpz_class& fa = a.ctx_->qpow[static_cast<std::size_t>(std::min(a.shift_ - shift, a.ctx_->M + 1))];
    const mpz_class& fb = a.ctx_->qpow[static_cast<std::size_t>(std::min(b.shift_ - shift, a.ctx_->M + 1))];
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = a.coords_[i] * fa;
      if (subtract)
        mpz_submul(out[i].get_mpz_t(), b.coords_[i].get_mpz_t(), fb.get_mpz_t());
      else
        mpz_addmul(out[i].get_mpz_t(), b.coords_[i].get_mpz_t(), fb.get_mpz_t());
    }
    return from_coords(a.ctx_, std::move(out), shift, prec);
  }

  void normalize() {
    prec_ = std::min(prec_, shift_ + ctx_->M);
    if (prec_ <= shift_) {
      shift_ = prec_;
      for (auto& c : coords_) c = 0;
      return;
    }
    zmod::reduce(coords_, ctx_->qpow[static_cast<std::size_t>(prec_ - shift_)]);
  }

  FieldCtxPtr ctx_;
  std::vector<mpz_class> coords_;
  bool exact_zero_ = true;
  int shift_ = 0;
  int prec_ = 0;
};

/// The embedding restricted to Q(zeta_{p^N}): zeta_{p^n} maps to the
/// (p^{N-n})-th power of the context's zeta.
inline QAdicNum from_exact(const CycloNum& a, const FieldCtxPtr& ctx) {
  if (a.prime() != ctx->p) throw config_error("from_exact: mismatched p");
  if (a.conductor() > ctx->N) throw field_too_small("from_exact: conductor exceeds the field");
  if (a.is_zero()) return QAdicNum::zero(ctx);
  const u64 q = ctx->q;
  mpz_class den = a.denominator();
  int vd = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(q))) {
    mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(q));
    ++vd;
  }
  const mpz_class& mod = ctx->modulus();
  std::vector<mpz_class> acc(ctx->f);
  const u64 stride = ipow(ctx->p, ctx->N - a.conductor());
  const auto& num = a.numerators();
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (num[i] == 0) continue;
    const auto& zp = ctx->zeta_powers[i * stride];
    for (unsigned j = 0; j < ctx->f; ++j) mpz_addmul(acc[j].get_mpz_t(), num[i].get_mpz_t(), zp[j].get_mpz_t());
  }
  mpz_class di;
  mpz_invert(di.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  for (auto& c : acc) {
    c *= di;
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  }
  return QAdicNum::from_coords(ctx, std::move(acc), -vd, -vd + ctx->M);
}

inline QVal qval(const QAdicNum& x) { return x.valuation(); }

inline QAdicNum q_inv(const QAdicNum& x) { return x.inv(); }

/// v_q of an exact value under the embedding. Rational values need no
/// embedding. Throws precision_exhausted when the valuation is not resolved
/// within the working precision; returns nullopt for exact zero.
inline std::optional<int> exact_valuation(const CycloNum& a, const FieldCtxPtr& ctx) {
  if (a.is_zero()) return std::nullopt;
  if (auto r = a.as_rational()) {
    int v = valuation(*r, ctx->q);
    if (v >= ctx->M) throw precision_exhausted("precision exhausted: valuation " + std::to_string(v) + " >= M");
    return v;
  }
  QVal v = from_exact(a, ctx).valuation();
  if (!v.is_finite()) throw precision_exhausted("precision exhausted: value is zero to precision " + std::to_string(ctx->M));
  return v.v;
}

}  // namespace pqf

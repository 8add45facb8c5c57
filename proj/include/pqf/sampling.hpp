#pragma once

#include <random>

#include "fourier.hpp"

// Seeded random instances for property checks.

namespace pqf::sampling {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// a/b with |a| <= max_num, 1 <= b <= max_den; zero with probability ~1/(2 max_num + 1).
inline mpq_class small_rational(Rng& rng, long max_num = 4, long max_den = 3) {
  mpq_class r(uniform(rng, -max_num, max_num), uniform(rng, 1, max_den));
  r.canonicalize();
  return r;
}

/// u * q^v with u a q-adic unit of small height and v in [vmin, vmax].
inline mpq_class spread_rational(Rng& rng, u64 q, int vmin, int vmax) {
  long a = 0;
  while (a % static_cast<long>(q) == 0) a = uniform(rng, -12, 12);
  long b = 0;
  while (b % static_cast<long>(q) == 0) b = uniform(rng, 1, 6);
  int v = static_cast<int>(uniform(rng, vmin, vmax));
  mpq_class r(a, b);
  if (v >= 0)
    r *= mpz_pow(q, static_cast<unsigned>(v));
  else
    r /= mpz_pow(q, static_cast<unsigned>(-v));
  r.canonicalize();
  return r;
}

/// A random element of Q(zeta_{p^n}) with n <= max_cond and small coefficients.
inline CycloNum small_cyclo(Rng& rng, u64 p, unsigned max_cond) {
  auto n = static_cast<unsigned>(uniform(rng, 0, max_cond));
  std::vector<mpq_class> c(cyclo_degree(p, n));
  for (auto& x : c) x = uniform(rng, 0, 2) == 0 ? mpq_class(0) : small_rational(rng);
  return CycloNum::from_coeffs(p, n, c);
}

/// A random root of unity of order dividing p^max_cond times a spread rational.
inline CycloNum spread_cyclo(Rng& rng, u64 p, u64 q, unsigned max_cond, int vmin, int vmax) {
  auto n = static_cast<unsigned>(uniform(rng, 0, max_cond));
  auto j = uniform(rng, 0, static_cast<long>(ipow(p, n)) - 1);
  return CycloNum::root(p, n, j).scaled(spread_rational(rng, q, vmin, vmax));
}

inline ExactFn random_fn(Rng& rng, u64 p, unsigned level, unsigned max_cond) {
  ExactFn f{p, level, {}};
  const u64 pn = ipow(p, level);
  for (u64 n = 0; n < pn; ++n) f.values.push_back(small_cyclo(rng, p, max_cond));
  return f;
}

inline PHat random_phat(Rng& rng, u64 p, unsigned max_exp) {
  auto n = static_cast<unsigned>(uniform(rng, 0, max_exp));
  return PHat::make_unsigned(p, static_cast<u64>(uniform(rng, 0, static_cast<long>(ipow(p, n)) - 1)), n);
}

/// Up to `size` entries inside the ball of radius p^max_exp with spread valuations.
inline ExactDual random_dual(Rng& rng, u64 p, u64 q, unsigned max_exp, std::size_t size, unsigned max_cond, int vmin,
                             int vmax) {
  ExactDual F{p, {}};
  for (std::size_t i = 0; i < size; ++i) F.add_to(random_phat(rng, p, max_exp), spread_cyclo(rng, p, q, max_cond, vmin, vmax));
  return F;
}

}  // namespace pqf::sampling

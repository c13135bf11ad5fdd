/*
   Copyright 2026 the descentff authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file factor.hpp
 * Polynomial factorization over GF(q) and the decompositions built on it.
 *
 * Pipeline: characteristic-p squarefree decomposition, then distinct-degree
 * splitting, then Cantor-Zassenhaus equal-degree splitting.  All random
 * choices come from a generator seeded with a fixed constant, so factor()
 * is a pure function of its input.
 */

#ifndef DESCENTFF_FACTOR_HPP
#define DESCENTFF_FACTOR_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "descentff/errors.hpp"
#include "descentff/poly.hpp"

namespace descentff {

constexpr uint64_t kFactorSeed = 0x5eedf00d2026ULL;

// --- helpers ----------------------------------------------------------------

// g^p = f solved for g; requires every exponent in f divisible by p.
inline Poly pth_root(const Poly& f) {
  const FieldCtx& F = f.field();
  if (f.is_zero()) return f;
  std::vector<Fq> c(f.deg() / F.p + 1, FieldCtx::zero());
  for (int i = 0; i <= f.deg(); ++i) {
    Fq ci = f.coeff(i);
    if (ci.is_zero()) continue;
    if (i % int(F.p) != 0)
      throw PreconditionUnmet("polynomial is not a p-th power");
    // a^(1/p) = a^(p^(m-1)).
    c[i / F.p] = F.frobenius(ci, F.m - 1);
  }
  return Poly(F, std::move(c));
}

inline Poly powmod_big(Poly base, const mpz_class& e, const Poly& mod) {
  const FieldCtx& F = base.field();
  Poly r = Poly::constant(F, F.one()) % mod;
  base = base % mod;
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = Poly::mulmod(r, r, mod);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = Poly::mulmod(r, base, mod);
  }
  return r;
}

// --- squarefree decomposition ------------------------------------------------

// f = unit * prod part[i]^i with monic squarefree pairwise coprime part[i].
struct SquarefreeDecomp {
  Fq unit;
  std::map<int, Poly> parts;  // exponent -> monic squarefree factor
};

inline SquarefreeDecomp squarefree_decompose(const Poly& f_in) {
  const FieldCtx& F = f_in.field();
  if (f_in.is_zero()) throw PreconditionUnmet("squarefree part of zero");
  SquarefreeDecomp out;
  out.unit = f_in.lead();
  Poly f = f_in.monic();

  std::map<int, Poly> acc;
  // Recursion on p-th power content, implemented iteratively: at nesting
  // level s the true exponent of a found factor is i * p^s.
  uint64_t pscale = 1;
  while (f.deg() > 0) {
    Poly fp = f.derivative();
    if (fp.is_zero()) {
      f = pth_root(f);
      pscale *= F.p;
      continue;
    }
    Poly c = Poly::gcd(f, fp);
    Poly w = f / c;
    int i = 1;
    while (w.deg() > 0) {
      Poly y = Poly::gcd(w, c);
      Poly fac = w / y;
      if (fac.deg() > 0) {
        int e = int(i * pscale);
        auto it = acc.find(e);
        if (it == acc.end())
          acc.emplace(e, fac);
        else
          it->second = it->second * fac;
      }
      w = y;
      c = c / y;
      ++i;
    }
    // Remaining c is a p-th power (possibly 1).
    if (c.deg() == 0) break;
    f = pth_root(c);
    pscale *= F.p;
  }
  out.parts = std::move(acc);
  return out;
}

inline Poly squarefree_part(const Poly& f) {
  auto d = squarefree_decompose(f);
  Poly r = Poly::constant(f.field(), f.field().one());
  for (auto& [e, g] : d.parts) r = r * g;
  return r;
}

// --- full factorization -------------------------------------------------------

struct Factorization {
  Fq unit;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducible, multiplicity
};

namespace detail {

// Distinct-degree split of a monic squarefree f: list of (product, degree).
inline std::vector<std::pair<Poly, int>> ddf(Poly f) {
  const FieldCtx& F = f.field();
  std::vector<std::pair<Poly, int>> out;
  Poly h = Poly::t(F) % f;
  int d = 0;
  while (f.deg() > 2 * (d + 1) - 1 && f.deg() > 0) {
    ++d;
    h = Poly::powmod(h, F.q, f);
    Poly g = Poly::gcd(h - Poly::t(F), f);
    if (g.deg() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.deg() > 0) out.emplace_back(f, f.deg());
  return out;
}

// Equal-degree split (Cantor-Zassenhaus, odd q).
inline void edf(const Poly& f, int d, std::mt19937_64& rng,
                std::vector<Poly>& out) {
  const FieldCtx& F = f.field();
  if (f.deg() == d) {
    out.push_back(f.monic());
    return;
  }
  mpz_class qd;
  mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(F.q),
                static_cast<unsigned long>(d));
  mpz_class e = (qd - 1) / 2;
  while (true) {
    Poly r = random_poly(F, int(rng() % uint64_t(f.deg())), rng);
    Poly s = powmod_big(r, e, f);
    Poly g = Poly::gcd(s - Poly::constant(F, F.one()), f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      edf(g, d, rng, out);
      edf(f / g, d, rng, out);
      return;
    }
  }
}

}  // namespace detail

// Complete factorization, deterministic; factors sorted by (degree, packed
// coefficients) with multiplicities attached.
inline Factorization factor(const Poly& f) {
  const FieldCtx& F = f.field();
  if (f.is_zero()) throw PreconditionUnmet("factor of zero polynomial");
  Factorization out;
  out.unit = f.lead();
  if (f.deg() == 0) return out;
  std::mt19937_64 rng(kFactorSeed);
  auto sf = squarefree_decompose(f);
  for (auto& [mult, part] : sf.parts) {
    for (auto& [prod, d] : detail::ddf(part)) {
      std::vector<Poly> irr;
      detail::edf(prod, d, rng, irr);
      for (auto& g : irr) out.factors.emplace_back(g, mult);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second && a.first == b.first)
                return a.second < b.second;
              return Poly::less(a.first, b.first);
            });
  return out;
}

inline bool is_irreducible(const Poly& f) {
  const FieldCtx& F = f.field();
  if (f.deg() < 1) return false;
  if (f.deg() == 1) return true;
  uint32_t n = f.deg();
  // t^(q^n) = t mod f and gcd(t^(q^(n/r)) - t, f) = 1 for prime r | n.
  Poly t = Poly::t(F);
  std::vector<Poly> frob_powers;  // t^(q^i) mod f for i = 1..n
  Poly h = t % f;
  for (uint32_t i = 1; i <= n; ++i) {
    h = Poly::powmod(h, F.q, f);
    frob_powers.push_back(h);
  }
  if (frob_powers[n - 1] != t % f) return false;
  for (uint64_t r : detail::prime_factors(n))
    if (Poly::gcd(frob_powers[n / r - 1] - t, f).deg() != 0) return false;
  return true;
}

// All monic polynomials of exact degree deg, ordered by packed coefficients.
inline std::vector<Poly> all_monic_polys(const FieldCtx& F, int deg,
                                         uint64_t budget = 1 << 22) {
  uint64_t count = 1;
  for (int i = 0; i < deg; ++i) {
    count *= F.q;
    if (count > budget)
      throw SearchTooLarge("monic polynomial enumeration of degree " +
                           std::to_string(deg) + " over q=" +
                           std::to_string(F.q) + " exceeds budget");
  }
  std::vector<Poly> out;
  out.reserve(count);
  std::vector<Fq> c(deg + 1, FieldCtx::zero());
  c[deg] = F.one();
  std::vector<uint64_t> digits(deg, 0);
  while (true) {
    out.emplace_back(F, c);
    int i = 0;
    for (; i < deg; ++i) {
      if (++digits[i] < F.q) {
        c[i] = F.from_packed(digits[i]);
        break;
      }
      digits[i] = 0;
      c[i] = FieldCtx::zero();
    }
    if (i == deg) break;
  }
  return out;
}

inline std::vector<Poly> monic_irreducibles(const FieldCtx& F, int deg,
                                            uint64_t budget = 1 << 22) {
  std::vector<Poly> out;
  for (auto& f : all_monic_polys(F, deg, budget))
    if (is_irreducible(f)) out.push_back(f);
  return out;
}

// --- spec operations ----------------------------------------------------------

// f = unit * f1 * f2^2 * f3^3 * f4^4 * f5^5 with monic separable pairwise
// coprime f_i; fails when some irreducible factor has multiplicity >= 6.
struct SixthPowerFreeDecomp {
  Fq unit;
  std::array<Poly, 6> f;  // f[1]..f[5]; f[0] unused
  std::array<int, 6> d{};        // d[i] = deg f_i
  std::array<int, 6> omega{};    // number of irreducible factors of f_i
  int weighted_degree = 0;       // d = sum i * d_i

  const Poly& operator[](int i) const { return f[i]; }
};

inline SixthPowerFreeDecomp sixth_power_free_decompose(const Poly& fin) {
  const FieldCtx& F = fin.field();
  if (fin.is_zero()) throw PreconditionUnmet("decomposition of zero");
  auto fac = factor(fin);
  SixthPowerFreeDecomp out;
  out.unit = fac.unit;
  for (int i = 1; i <= 5; ++i) out.f[i] = Poly::constant(F, F.one());
  for (auto& [g, e] : fac.factors) {
    if (e >= 6)
      throw NotSixthPowerFree("factor (" + g.str() + ") has multiplicity " +
                              std::to_string(e));
    out.f[e] = out.f[e] * g;
    out.omega[e] += 1;
  }
  for (int i = 1; i <= 5; ++i) {
    out.d[i] = out.f[i].deg();
    out.weighted_degree += i * out.d[i];
  }
  return out;
}

// Exact n-th root of a polynomial, n in {2, 3}; empty if none exists.
inline std::optional<Poly> poly_root_n(const Poly& f, int n) {
  const FieldCtx& F = f.field();
  if (n != 2 && n != 3) throw PreconditionUnmet("root index must be 2 or 3");
  if (f.is_zero()) return f;
  if (f.deg() % n != 0) return std::nullopt;
  // Coefficient recursion from the leading term: the root with a given
  // leading coefficient is unique, so the final product check certifies
  // existence without factoring. The characteristic never divides n.
  int k = f.deg() / n;
  std::optional<Fq> lead =
      n == 2 ? F.sqrt(f.coeff(f.deg())) : F.cbrt(f.coeff(f.deg()));
  if (!lead) return std::nullopt;
  std::vector<Fq> h(static_cast<size_t>(k) + 1, FieldCtx::zero());
  h[k] = *lead;
  Fq dinv = F.inv(
      F.mul(F.from_int(n), n == 2 ? *lead : F.mul(*lead, *lead)));
  for (int j = k - 1; j >= 0; j--) {
    // Known part of the coefficient of t^{(n-1)k + j} in the n-th power.
    Fq acc = FieldCtx::zero();
    if (n == 2) {
      for (int a = j + 1; a <= k - 1; a++) {
        int b = k + j - a;
        if (b < j + 1 || b > k) continue;
        acc = F.add(acc, F.mul(h[a], h[b]));
      }
    } else {
      for (int a = j + 1; a <= k; a++)
        for (int b = j + 1; b <= k; b++) {
          int c = 2 * k + j - a - b;
          if (c < j + 1 || c > k) continue;
          acc = F.add(acc, F.mul(F.mul(h[a], h[b]), h[c]));
        }
    }
    h[j] = F.mul(F.sub(f.coeff((n - 1) * k + j), acc), dinv);
  }
  Poly r(F, std::move(h));
  Poly pw = n == 2 ? r * r : r * r * r;
  if (pw != f) return std::nullopt;
  return r;
}

// Number of solutions of x^n = g in the residue field GF(q)[t]/(pi):
// 0 (non-residue), 1 (n coprime to the residue group order) or n.
inline int residue_symbol(const Poly& g, const Poly& pi, int n) {
  const FieldCtx& F = g.field();
  if (n != 2 && n != 3) throw PreconditionUnmet("symbol index must be 2 or 3");
  Poly h = g % pi;
  if (h.is_zero())
    throw NotCoprime("residue symbol of (" + g.str() + ") against (" +
                     pi.str() + ")");
  mpz_class big_q;
  mpz_ui_pow_ui(big_q.get_mpz_t(), static_cast<unsigned long>(F.q),
                static_cast<unsigned long>(pi.deg()));
  mpz_class group = big_q - 1;
  if (group % n != 0) return 1;
  Poly r = powmod_big(h, group / n, pi);
  return r.is_one() ? n : 0;
}

}  // namespace descentff

#endif  // DESCENTFF_FACTOR_HPP

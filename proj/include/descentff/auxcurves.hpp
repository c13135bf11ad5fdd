/*
 * Copyright 2026 the descentff authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
 * implied. See the License for the specific language governing
 * permissions and limitations under the License.
 */

// Function fields of superelliptic covers Y^n = g(t) of the projective
// line, n in {2, 3}: places, valuations, divisors, Riemann-Roch spaces,
// canonical divisors, and point counts. The two covers attached to a
// curve y^2 = x^3 + f are built at the bottom of this header: the cubic
// cover C2 (the locus y = 0), the hyperelliptic cover C3 (the locus
// x = 0), the twisted cover C3', and the distinguished divisors the
// descent maps land on.

#ifndef DESCENTFF_AUXCURVES_HPP
#define DESCENTFF_AUXCURVES_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "descentff/errors.hpp"
#include "descentff/factor.hpp"
#include "descentff/gf.hpp"
#include "descentff/linalg.hpp"
#include "descentff/model.hpp"
#include "descentff/poly.hpp"

namespace descentff {

namespace detail {

// Multiplicity of the irreducible p in a nonzero polynomial a.
inline int ord_of(Poly a, const Poly& p) {
  if (a.is_zero()) throw ZeroFunction("order of the zero polynomial");
  int k = 0;
  while (true) {
    auto [q, r] = Poly::divrem(a, p);
    if (!r.is_zero()) return k;
    a = q;
    k++;
  }
}

inline Poly poly_lcm(const Poly& a, const Poly& b) {
  return ((a * b) / Poly::gcd(a, b)).monic();
}

// Residue field k[t]/(p) for a monic irreducible p; elements are the
// reduced polynomial representatives, which are canonical.
struct ResField {
  Poly mod;
  mpz_class Q;

  explicit ResField(const Poly& p) : mod(p) {
    mpz_ui_pow_ui(Q.get_mpz_t(), static_cast<unsigned long>(p.field().q),
                  static_cast<unsigned long>(p.deg()));
  }

  const FieldCtx& F() const { return mod.field(); }
  Poly red(const Poly& a) const { return a % mod; }
  Poly mul(const Poly& a, const Poly& b) const {
    return Poly::mulmod(a, b, mod);
  }
  Poly inv(const Poly& a) const { return Poly::invmod(a, mod); }
  Poly pow(Poly a, mpz_class e) const {
    if (a.is_zero()) return a;
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    return powmod_big(a, e, mod);
  }
  // The idx-th element in base-q digit order; idx in [0, Q).
  Poly element(mpz_class idx) const {
    const FieldCtx& f = F();
    std::vector<Fq> c;
    while (idx > 0) {
      mpz_class digit = idx % static_cast<unsigned long>(f.q);
      c.push_back(f.from_packed(digit.get_ui()));
      idx /= static_cast<unsigned long>(f.q);
    }
    if (c.empty()) return Poly(f);
    return Poly(f, std::move(c));
  }
};

// Element of exact multiplicative order n (n prime dividing Q - 1).
inline Poly unity_root_res(const ResField& R, int n) {
  if ((R.Q - 1) % n != 0)
    throw PreconditionUnmet("no root of unity of that order");
  mpz_class e = (R.Q - 1) / n;
  for (mpz_class idx = 2;; idx++) {
    Poly w = R.pow(R.element(idx), e);
    if (!w.is_one()) return w;
  }
}

// Deterministic n-th root for prime n; the argument must be a nonzero
// n-th power in the residue field.
inline Poly nth_root_res(const ResField& R, const Poly& c, int n) {
  mpz_class G = R.Q - 1;
  mpz_class nn = n;
  if (G % n != 0) {
    mpz_class ninv;
    mpz_invert(ninv.get_mpz_t(), nn.get_mpz_t(), G.get_mpz_t());
    return R.pow(c, ninv);
  }
  mpz_class m0 = G;
  int s = 0;
  while (m0 % n == 0) {
    m0 /= n;
    s++;
  }
  // xi generates the n-Sylow subgroup of the units; omega has order n.
  Poly eta = R.element(2);
  for (mpz_class idx = 3; R.pow(eta, G / n).is_one(); idx++)
    eta = R.element(idx);
  Poly xi = R.pow(eta, m0);
  Poly omega = xi;
  for (int i = 0; i < s - 1; i++) omega = R.pow(omega, n);
  std::vector<Poly> omega_pow = {R.red(Poly::constant(R.F(), R.F().one()))};
  for (int d = 1; d < n; d++)
    omega_pow.push_back(R.mul(omega_pow[d - 1], omega));

  // Pohlig-Hellman digits of A = c^{m0} against xi.
  Poly A = R.pow(c, m0);
  mpz_class j = 0;
  mpz_class npow_i = 1;
  for (int i = 0; i < s; i++) {
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(s - 1 - i));
    Poly B = R.pow(R.mul(A, R.pow(xi, -j)), e);
    int d = -1;
    for (int cand = 0; cand < n; cand++)
      if (B == omega_pow[cand]) {
        d = cand;
        break;
      }
    if (d < 0) throw PreconditionUnmet("argument is not an n-th power");
    j += d * npow_i;
    npow_i *= n;
  }
  if (j % n != 0) throw PreconditionUnmet("argument is not an n-th power");
  Poly x0 = R.pow(xi, j / n);
  // alpha n + beta m0 = 1 reassembles the root from the two cofactors.
  mpz_class alpha, beta, gcd;
  mpz_gcdext(gcd.get_mpz_t(), alpha.get_mpz_t(), beta.get_mpz_t(),
             nn.get_mpz_t(), m0.get_mpz_t());
  return R.mul(R.pow(c, alpha), R.pow(x0, beta));
}

// Polynomials in Y with k[t] coefficients, index = power of Y.
using YPoly = std::vector<Poly>;

inline int yp_deg(const YPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; i--)
    if (!a[i].is_zero()) return i;
  return -1;
}

inline YPoly yp_red(const YPoly& a, const Poly& mod) {
  YPoly out;
  out.reserve(a.size());
  for (const Poly& c : a) out.push_back(c % mod);
  return out;
}

inline YPoly yp_mul(const YPoly& a, const YPoly& b, const Poly* mod) {
  if (a.empty() || b.empty()) return {};
  const FieldCtx& F = a[0].field();
  YPoly out(a.size() + b.size() - 1, Poly(F));
  for (size_t i = 0; i < a.size(); i++) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); j++) {
      if (b[j].is_zero()) continue;
      out[i + j] = out[i + j] + a[i] * b[j];
      if (mod) out[i + j] = out[i + j] % *mod;
    }
  }
  return out;
}

inline YPoly yp_sub(const YPoly& a, const YPoly& b) {
  if (a.empty() && b.empty()) return {};
  const FieldCtx& F = a.empty() ? b[0].field() : a[0].field();
  YPoly out(std::max(a.size(), b.size()), Poly(F));
  for (size_t i = 0; i < out.size(); i++) {
    Poly av = i < a.size() ? a[i] : Poly(F);
    Poly bv = i < b.size() ? b[i] : Poly(F);
    out[i] = av - bv;
  }
  return out;
}

// Remainder of a by the Y-monic b, all coefficients reduced mod `mod`.
inline YPoly yp_rem_monic(YPoly a, const YPoly& b, const Poly& mod) {
  int db = yp_deg(b);
  if (db < 0) throw PreconditionUnmet("division by the zero Y-polynomial");
  a = yp_red(a, mod);
  int da = yp_deg(a);
  while (da >= db) {
    Poly lead = a[da];
    if (!lead.is_zero())
      for (int i = 0; i <= db; i++)
        a[da - db + i] = (a[da - db + i] - lead * b[i]) % mod;
    a.resize(da);
    da = yp_deg(a);
  }
  return a;
}

// Y-polynomial arithmetic with coefficients in the residue field.
inline YPoly yq_trim(YPoly a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
  return a;
}

inline std::pair<YPoly, YPoly> yq_divrem(YPoly a, const YPoly& b_in,
                                         const ResField& R) {
  YPoly b = yq_trim(yp_red(b_in, R.mod));
  a = yq_trim(yp_red(a, R.mod));
  if (b.empty()) throw PreconditionUnmet("Y-polynomial division by zero");
  Poly linv = R.inv(b.back());
  int db = static_cast<int>(b.size()) - 1;
  YPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 1, Poly(R.F()));
  while (static_cast<int>(a.size()) - 1 >= db) {
    int da = static_cast<int>(a.size()) - 1;
    Poly coef = R.mul(a.back(), linv);
    if (!coef.is_zero()) {
      q[da - db] = coef;
      for (int i = 0; i <= db; i++)
        a[da - db + i] = R.red(a[da - db + i] - coef * b[i]);
    }
    a.pop_back();
    a = yq_trim(a);
  }
  return {yq_trim(q), a};
}

// Bezout pair: u a + v b = 1 for coprime a, b over the residue field.
inline std::pair<YPoly, YPoly> yq_bezout(const YPoly& a, const YPoly& b,
                                         const ResField& R) {
  YPoly one = {R.red(Poly::constant(R.F(), R.F().one()))};
  YPoly r0 = yq_trim(yp_red(a, R.mod)), r1 = yq_trim(yp_red(b, R.mod));
  YPoly u0 = one, u1 = {}, v0 = {}, v1 = one;
  while (!r1.empty()) {
    auto [q, r2] = yq_divrem(r0, r1, R);
    YPoly u2 = yq_trim(yp_red(yp_sub(u0, yp_mul(q, u1, &R.mod)), R.mod));
    YPoly v2 = yq_trim(yp_red(yp_sub(v0, yp_mul(q, v1, &R.mod)), R.mod));
    r0 = r1;
    r1 = r2;
    u0 = u1;
    u1 = u2;
    v0 = v1;
    v1 = v2;
  }
  if (static_cast<int>(r0.size()) != 1)
    throw NotCoprime("Bezout pair of non-coprime Y-polynomials");
  Poly scale = R.inv(r0[0]);
  auto rescale = [&](YPoly w) {
    for (Poly& c : w) c = R.mul(c, scale);
    return w;
  };
  return {rescale(u0), rescale(v0)};
}

// Hensel data for one unramified place: Y^n - g = phi * psi mod p^prec
// with phi monic in Y lifting the place's minimal polynomial, plus the
// mod-p Bezout pair abar phi + bbar psi = 1. Lifting is linear, one
// power of p per step, so the mod-p Bezout pair stays valid throughout.
struct PlaceLift {
  int prec = 1;
  YPoly phi, psi;
  YPoly abar, bbar;
};

}  // namespace detail

// A place of the function field k(t)(Y), Y^n = g. Finite places sit over
// a monic irreducible p(t); infinite places are the finite places over
// s = 0 of the reciprocal model Z^n = s^{nw} g(1/s), Z = s^w Y. Ramified
// places have e = n and an empty minimal polynomial; unramified places
// carry their monic irreducible factor of Y^n - g over the residue field.
struct Place {
  bool infinite = false;
  Poly base;
  int e = 1;
  int reldeg = 1;
  detail::YPoly minpoly;

  int degree() const { return base.deg() * reldeg; }

  std::string key() const {
    std::string s = infinite ? "I|" : "F|";
    s += base.str() + "|e" + std::to_string(e);
    for (const Poly& c : minpoly) s += "|" + c.str();
    return s;
  }
};

// Divisor with integer coefficients, keyed canonically for determinism.
class Divisor {
 public:
  std::map<std::string, std::pair<Place, int64_t>> terms;

  static Divisor of_place(const Place& P, int64_t m) {
    Divisor d;
    d.add(P, m);
    return d;
  }

  void add(const Place& P, int64_t m) {
    if (m == 0) return;
    auto it = terms.find(P.key());
    if (it == terms.end()) {
      terms.emplace(P.key(), std::make_pair(P, m));
    } else {
      it->second.second += m;
      if (it->second.second == 0) terms.erase(it);
    }
  }

  int64_t coeff(const Place& P) const {
    auto it = terms.find(P.key());
    return it == terms.end() ? 0 : it->second.second;
  }

  int64_t degree() const {
    int64_t d = 0;
    for (const auto& [k, pm] : terms) d += pm.second * pm.first.degree();
    return d;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_effective() const {
    for (const auto& [k, pm] : terms)
      if (pm.second < 0) return false;
    return true;
  }

  Divisor& operator+=(const Divisor& o) {
    for (const auto& [k, pm] : o.terms) add(pm.first, pm.second);
    return *this;
  }
  Divisor& operator-=(const Divisor& o) {
    for (const auto& [k, pm] : o.terms) add(pm.first, -pm.second);
    return *this;
  }
  friend Divisor operator+(Divisor a, const Divisor& b) { return a += b; }
  friend Divisor operator-(Divisor a, const Divisor& b) { return a -= b; }
  Divisor scaled(int64_t c) const {
    Divisor out;
    if (c == 0) return out;
    for (const auto& [k, pm] : terms) out.add(pm.first, c * pm.second);
    return out;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [k, pm] : terms) {
      if (!s.empty()) s += " + ";
      s += std::to_string(pm.second) + "*[" + k + "]";
    }
    return s;
  }
};

// Element of the function field in the Y-power basis.
struct FFElem {
  std::vector<RatFunc> c;
};

class SuperCurve {
 public:
  SuperCurve(int n, const Poly& g) : F_(&g.field()), n_(n), g_(g) {
    if (n != 2 && n != 3)
      throw PreconditionUnmet("cover degree must be 2 or 3");
    if (g.is_zero()) throw DegenerateCurve("zero defining polynomial");
    if (g.deg() < 1)
      throw DegenerateCurve("constant defining polynomial gives no cover");
    for (auto& [e, part] : squarefree_decompose(g).parts)
      if (e >= n)
        throw PreconditionUnmet("defining polynomial is not n-th power free");
    w_ = (g.deg() + n - 1) / n;
  }

  SuperCurve(const SuperCurve&) = delete;
  SuperCurve& operator=(const SuperCurve&) = delete;
  SuperCurve(SuperCurve&&) = default;
  SuperCurve& operator=(SuperCurve&&) = default;

  int n() const { return n_; }
  const Poly& g() const { return g_; }
  const FieldCtx& field() const { return *F_; }
  int inf_shift() const { return w_; }

  // --- elements -------------------------------------------------------------

  FFElem zero_elem() const {
    return FFElem{std::vector<RatFunc>(n_, RatFunc(Poly(*F_)))};
  }
  FFElem from_rat(const RatFunc& r) const {
    FFElem e = zero_elem();
    e.c[0] = r;
    return e;
  }
  FFElem y_elem() const {
    FFElem e = zero_elem();
    e.c[1] = RatFunc(Poly::constant(*F_, F_->one()));
    return e;
  }
  bool elem_is_zero(const FFElem& a) const {
    for (const RatFunc& r : a.c)
      if (!r.is_zero()) return false;
    return true;
  }
  FFElem elem_add(const FFElem& a, const FFElem& b) const {
    FFElem out = zero_elem();
    for (int i = 0; i < n_; i++) out.c[i] = a.c[i] + b.c[i];
    return out;
  }
  FFElem elem_sub(const FFElem& a, const FFElem& b) const {
    FFElem out = zero_elem();
    for (int i = 0; i < n_; i++) out.c[i] = a.c[i] - b.c[i];
    return out;
  }
  FFElem elem_mul(const FFElem& a, const FFElem& b) const {
    RatFunc g(g_);
    FFElem out = zero_elem();
    for (int i = 0; i < n_; i++) {
      if (a.c[i].is_zero()) continue;
      for (int j = 0; j < n_; j++) {
        if (b.c[j].is_zero()) continue;
        RatFunc prod = a.c[i] * b.c[j];
        int k = i + j;
        if (k >= n_) {
          k -= n_;
          prod = prod * g;
        }
        out.c[k] = out.c[k] + prod;
      }
    }
    return out;
  }
  FFElem elem_scale(const FFElem& a, const RatFunc& r) const {
    FFElem out = zero_elem();
    for (int i = 0; i < n_; i++) out.c[i] = a.c[i] * r;
    return out;
  }
  std::string elem_str(const FFElem& a) const {
    std::string s;
    for (int i = 0; i < n_; i++) {
      if (!s.empty()) s += " + ";
      s += "(" + a.c[i].str() + ")*Y^" + std::to_string(i);
    }
    return s;
  }

  // Norm down to k(t), by the closed form for n <= 3.
  RatFunc norm(const FFElem& a) const {
    RatFunc g(g_);
    if (n_ == 2) return a.c[0] * a.c[0] - g * a.c[1] * a.c[1];
    RatFunc c0 = a.c[0], c1 = a.c[1], c2 = a.c[2];
    RatFunc three(Poly::constant(*F_, F_->from_int(3)));
    return c0 * c0 * c0 + g * c1 * c1 * c1 + g * g * c2 * c2 * c2 -
           three * g * c0 * c1 * c2;
  }

  // --- places -----------------------------------------------------------------

  const std::vector<Place>& places_over(const Poly& p) const {
    auto it = place_cache_.find(p.str());
    if (it != place_cache_.end()) return it->second;
    std::vector<Place> out;
    int a = (g_ % p).is_zero() ? detail::ord_of(g_, p) : 0;
    if (a > 0) {
      if (a % n_ == 0)
        throw PreconditionUnmet("defining polynomial not n-th power free");
      Place P;
      P.base = p;
      P.e = n_;
      P.reldeg = 1;
      out.push_back(P);
    } else {
      detail::ResField R(p);
      Poly gm = R.red(g_);
      Poly one = R.red(Poly::constant(*F_, F_->one()));
      int cnt = residue_symbol(g_, p, n_);
      if (cnt == n_) {
        std::vector<Poly> roots;
        Poly r = detail::nth_root_res(R, gm, n_);
        roots.push_back(r);
        if (n_ == 2) {
          roots.push_back(R.red(-r));
        } else {
          Poly w = detail::unity_root_res(R, 3);
          roots.push_back(R.mul(r, w));
          roots.push_back(R.mul(roots[1], w));
        }
        for (const Poly& rt : roots) {
          Place P;
          P.base = p;
          P.e = 1;
          P.reldeg = 1;
          P.minpoly = {R.red(-rt), one};
          out.push_back(P);
        }
      } else if (cnt == 1) {
        // n = 3 with the cube map bijective on the residue field: one
        // rational root and one quadratic factor.
        mpz_class G = R.Q - 1, ninv, nn = n_;
        mpz_invert(ninv.get_mpz_t(), nn.get_mpz_t(), G.get_mpz_t());
        Poly r = R.pow(gm, ninv);
        Place P1;
        P1.base = p;
        P1.e = 1;
        P1.reldeg = 1;
        P1.minpoly = {R.red(-r), one};
        Place P2;
        P2.base = p;
        P2.e = 1;
        P2.reldeg = 2;
        P2.minpoly = {R.mul(r, r), r, one};
        out.push_back(P1);
        out.push_back(P2);
      } else {
        Place P;
        P.base = p;
        P.e = 1;
        P.reldeg = n_;
        P.minpoly.assign(n_ + 1, Poly(*F_));
        P.minpoly[0] = R.red(-gm);
        P.minpoly[n_] = one;
        out.push_back(P);
      }
      std::sort(out.begin(), out.end(), [](const Place& x, const Place& y) {
        return x.key() < y.key();
      });
    }
    return place_cache_.emplace(p.str(), std::move(out)).first->second;
  }

  const std::vector<Place>& infinite_places() const {
    if (!inf_places_computed_) {
      const SuperCurve& R = reciprocal();
      for (Place P : R.places_over(Poly::t(*F_))) {
        P.infinite = true;
        inf_places_.push_back(P);
      }
      inf_places_computed_ = true;
    }
    return inf_places_;
  }

  Divisor pullback_prime(const Poly& p) const {
    Divisor d;
    for (const Place& P : places_over(p)) d.add(P, P.e);
    return d;
  }

  Divisor pullback_infinity() const {
    Divisor d;
    for (const Place& P : infinite_places()) d.add(P, P.e);
    return d;
  }

  // All places of the given degree, sorted by key. Finite place degrees
  // are deg(p) * reldeg, so only base degrees dividing r can occur.
  std::vector<Place> places_of_degree(int r) const {
    std::vector<Place> out;
    for (int dp = 1; dp <= r; dp++) {
      if (r % dp != 0) continue;
      for (const Poly& p : monic_irreducibles(*F_, dp))
        for (const Place& P : places_over(p))
          if (P.degree() == r) out.push_back(P);
    }
    for (const Place& P : infinite_places())
      if (P.degree() == r) out.push_back(P);
    std::sort(out.begin(), out.end(), [](const Place& x, const Place& y) {
      return x.key() < y.key();
    });
    return out;
  }

  // --- valuations -------------------------------------------------------------

  // Rewrites an element in the coordinates of the reciprocal model:
  // t = 1/s and Y = Z / s^w.
  FFElem to_reciprocal(const FFElem& el) const {
    FFElem out = reciprocal().zero_elem();
    for (int i = 0; i < n_; i++) {
      if (el.c[i].is_zero()) continue;
      const Poly& N = el.c[i].num();
      const Poly& D = el.c[i].den();
      Poly rn = N.reversed();
      Poly rd = D.reversed();
      int sh = D.deg() - N.deg() - i * w_;
      if (sh >= 0)
        out.c[i] = RatFunc(rn.shifted(sh), rd);
      else
        out.c[i] = RatFunc(rn, rd.shifted(-sh));
    }
    return out;
  }

  int64_t valuation(const Place& P, const FFElem& el) const {
    if (elem_is_zero(el)) throw ZeroFunction("valuation of zero");
    if (P.infinite) {
      Place fin = P;
      fin.infinite = false;
      return reciprocal().valuation(fin, to_reciprocal(el));
    }
    Poly den = Poly::constant(*F_, F_->one());
    for (int i = 0; i < n_; i++)
      if (!el.c[i].is_zero()) den = detail::poly_lcm(den, el.c[i].den());
    detail::YPoly M(n_, Poly(*F_));
    for (int i = 0; i < n_; i++)
      if (!el.c[i].is_zero()) M[i] = el.c[i].num() * (den / el.c[i].den());
    int64_t vden =
        (den % P.base).is_zero()
            ? static_cast<int64_t>(detail::ord_of(den, P.base)) * P.e
            : 0;
    return integral_valuation(P, M) - vden;
  }

  Divisor divisor_of(const FFElem& el) const {
    if (elem_is_zero(el)) throw ZeroFunction("divisor of zero");
    Poly den = Poly::constant(*F_, F_->one());
    for (int i = 0; i < n_; i++)
      if (!el.c[i].is_zero()) den = detail::poly_lcm(den, el.c[i].den());
    FFElem integral = elem_scale(el, RatFunc(den));
    RatFunc nm = norm(integral);
    if (!nm.is_poly())
      throw InternalError("norm of an integral element must be integral");
    // Support is confined to places over the denominator, over factors
    // of the integral norm, and at infinity.
    std::set<std::string> seen;
    std::vector<Poly> candidates;
    auto add_factors = [&](const Poly& h) {
      if (h.deg() < 1) return;
      for (auto& [pi, e] : factor(h).factors)
        if (seen.insert(pi.str()).second) candidates.push_back(pi);
    };
    add_factors(den);
    add_factors(nm.num());
    Divisor out;
    for (const Poly& p : candidates)
      for (const Place& P : places_over(p)) out.add(P, valuation(P, el));
    for (const Place& P : infinite_places()) out.add(P, valuation(P, el));
    if (out.degree() != 0)
      throw InternalError("principal divisor of nonzero degree");
    return out;
  }

  // --- Riemann-Roch -----------------------------------------------------------

  // Basis of L(D) = { F nonzero : div(F) + D >= 0 } plus zero. One
  // linear system over k: the ansatz runs over c_i(t) Y^i / (B B_i)
  // with B_i the integral basis denominators and B clearing the finite
  // poles allowed by D; rows impose every finite and infinite
  // valuation bound.
  std::vector<FFElem> rr_basis(const Divisor& D) const {
    const FieldCtx& F = *F_;
    Poly one = Poly::constant(F, F.one());

    // Integral basis Y^i / B_i with B_i = prod p^{floor(i a_p / n)}.
    std::vector<Poly> Bi(n_, one);
    for (auto& [pi, a] : factor(g_).factors)
      for (int i = 1; i < n_; i++)
        for (int rep = 0; rep < (i * a) / n_; rep++) Bi[i] = Bi[i] * pi;
    const Poly& Bmax = Bi[n_ - 1];

    // B clears the worst allowed finite pole, prime by prime.
    std::map<std::string, std::pair<Poly, int64_t>> beta;
    for (const auto& [key, pm] : D.terms) {
      const Place& P = pm.first;
      if (P.infinite || pm.second <= 0) continue;
      int64_t need = (pm.second + P.e - 1) / P.e;
      auto it = beta.find(P.base.str());
      if (it == beta.end())
        beta.emplace(P.base.str(), std::make_pair(P.base, need));
      else
        it->second.second = std::max(it->second.second, need);
    }
    Poly B = one;
    for (const auto& [k, pe] : beta)
      for (int64_t i = 0; i < pe.second; i++) B = B * pe.first;
    Poly D0 = B * Bmax;

    std::vector<Poly> Ai(n_);
    for (int i = 0; i < n_; i++) Ai[i] = Bmax / Bi[i];

    // Generous degree bounds: the conditions enforce exact membership,
    // so oversizing the column space only widens the kernel search,
    // never the answer. The slack absorbs cross-term cancellation at
    // infinity, bounded by the spread of the Y-conjugate valuations.
    int64_t minf = 0;
    for (const auto& [key, pm] : D.terms)
      if (pm.first.infinite && pm.second > 0)
        minf = std::max(minf, (pm.second + pm.first.e - 1) / pm.first.e);
    int nb = D0.deg() + static_cast<int>(minf) + 3 * w_ + 2;
    std::vector<int> Nbound(n_, nb);

    struct Col {
      int i, j;
    };
    std::vector<Col> cols;
    for (int i = 0; i < n_; i++)
      for (int j = 0; j <= Nbound[i]; j++) cols.push_back({i, j});

    std::vector<std::vector<Fq>> rows;
    auto emit_rows = [&](const std::vector<Poly>& colvals, int count_coeffs) {
      for (int ci = 0; ci < count_coeffs; ci++) {
        std::vector<Fq> row(cols.size(), FieldCtx::zero());
        bool nonzero = false;
        for (size_t col = 0; col < cols.size(); col++) {
          Fq v = colvals[col].coeff(ci);
          row[col] = v;
          if (!v.is_zero()) nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(row));
      }
    };

    // All valuation bounds at one place: v_P(column numerator) >= rho,
    // phrased as vanishing of the reduced image to precision rho.
    auto add_place_conditions = [&](const SuperCurve& model, const Place& P,
                                    int64_t rho,
                                    const std::vector<detail::YPoly>& colM) {
      if (rho <= 0) return;
      const Poly& p = P.base;
      if (P.e == model.n_) {
        int a = detail::ord_of(model.g_, p);
        for (int i = 0; i < model.n_; i++) {
          int64_t num = rho - static_cast<int64_t>(i) * a;
          if (num <= 0) continue;
          int64_t ri = (num + model.n_ - 1) / model.n_;
          Poly pr = p.pow(static_cast<uint32_t>(ri));
          std::vector<Poly> vals;
          vals.reserve(cols.size());
          for (size_t col = 0; col < cols.size(); col++)
            vals.push_back(colM[col].size() > static_cast<size_t>(i)
                               ? colM[col][i] % pr
                               : Poly(F));
          emit_rows(vals, static_cast<int>(ri) * p.deg());
        }
      } else {
        int prec = static_cast<int>(rho);
        const detail::PlaceLift& lift = model.lift_for(P, prec);
        Poly pr = p.pow(static_cast<uint32_t>(prec));
        detail::YPoly phi = detail::yp_red(lift.phi, pr);
        std::vector<detail::YPoly> rems;
        rems.reserve(cols.size());
        for (size_t col = 0; col < cols.size(); col++)
          rems.push_back(detail::yp_rem_monic(colM[col], phi, pr));
        for (int ri = 0; ri < P.reldeg; ri++) {
          std::vector<Poly> vals;
          vals.reserve(cols.size());
          for (size_t col = 0; col < cols.size(); col++)
            vals.push_back(rems[col].size() > static_cast<size_t>(ri)
                               ? rems[col][ri]
                               : Poly(F));
          emit_rows(vals, prec * p.deg());
        }
      }
    };

    // Finite conditions: every place over a prime dividing D0, plus
    // every finite place appearing in D.
    std::map<std::string, Place> fin_places;
    if (D0.deg() >= 1)
      for (auto& [pi, e] : factor(D0).factors)
        for (const Place& P : places_over(pi)) fin_places.emplace(P.key(), P);
    for (const auto& [key, pm] : D.terms)
      if (!pm.first.infinite) fin_places.emplace(key, pm.first);
    {
      std::vector<detail::YPoly> colM;
      colM.reserve(cols.size());
      for (const Col& c : cols) {
        detail::YPoly M(n_, Poly(F));
        M[c.i] = Ai[c.i].shifted(c.j);
        colM.push_back(std::move(M));
      }
      for (const auto& [key, P] : fin_places) {
        int64_t m = D.coeff(P);
        int64_t ordD0 =
            (D0 % P.base).is_zero() ? detail::ord_of(D0, P.base) : 0;
        int64_t rho = -m + static_cast<int64_t>(P.e) * ordD0;
        add_place_conditions(*this, P, rho, colM);
      }
    }

    // Infinite conditions, on the reciprocal model. The image of
    // t^j A_i Y^i / D0 under t = 1/s, Y = Z/s^w has numerator
    // rev(A_i) s^delta over the shared denominator s^NS rev(D0), and
    // ord_s rev(D0) = 0, so v(column) = v(numerator) - e NS.
    {
      const SuperCurve& R = reciprocal();
      int NS = 0;
      for (int i = 0; i < n_; i++)
        NS = std::max(NS, Nbound[i] + Ai[i].deg() + i * w_ - D0.deg());
      std::vector<detail::YPoly> colM;
      colM.reserve(cols.size());
      for (const Col& c : cols) {
        detail::YPoly M(n_, Poly(F));
        int delta = NS + D0.deg() - c.j - Ai[c.i].deg() - c.i * w_;
        M[c.i] = Ai[c.i].reversed().shifted(delta);
        colM.push_back(std::move(M));
      }
      for (const Place& P : infinite_places()) {
        int64_t m = D.coeff(P);
        int64_t rho = static_cast<int64_t>(P.e) * NS - m;
        Place fin = P;
        fin.infinite = false;
        add_place_conditions(R, fin, rho, colM);
      }
    }

    FqMatrix mat(F, rows.empty() ? 1 : rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); r++)
      for (size_t c = 0; c < cols.size(); c++) mat.at(r, c) = rows[r][c];
    std::vector<FFElem> basis;
    for (const std::vector<Fq>& v : mat.kernel_basis()) {
      FFElem el = zero_elem();
      for (int i = 0; i < n_; i++) {
        std::vector<Fq> coeffs(Nbound[i] + 1, FieldCtx::zero());
        bool nz = false;
        for (size_t col = 0; col < cols.size(); col++)
          if (cols[col].i == i && !v[col].is_zero()) {
            coeffs[cols[col].j] = v[col];
            nz = true;
          }
        if (nz) el.c[i] = RatFunc(Poly(F, std::move(coeffs)) * Ai[i], D0);
      }
      basis.push_back(std::move(el));
    }
    return basis;
  }

  int rr_dim(const Divisor& D) const {
    return static_cast<int>(rr_basis(D).size());
  }

  // --- global invariants --------------------------------------------------------

  // K = sum of (e - 1) P over ramified places - 2 pullback(infinity)
  //   - (n - 1) div(Y); the cover is tame because char k >= 5.
  const Divisor& canonical_divisor() const {
    if (canonical_) return *canonical_;
    Divisor K;
    for (auto& [pi, e] : factor(g_).factors)
      for (const Place& P : places_over(pi))
        if (P.e > 1) K.add(P, P.e - 1);
    for (const Place& P : infinite_places())
      if (P.e > 1) K.add(P, P.e - 1);
    K -= pullback_infinity().scaled(2);
    K -= divisor_of(y_elem()).scaled(n_ - 1);
    canonical_ = std::move(K);
    return *canonical_;
  }

  int genus() const {
    if (genus_) return *genus_;
    int64_t degK = canonical_divisor().degree();
    if (degK % 2 != 0 || degK < -2)
      throw InternalError("canonical divisor of impossible degree");
    genus_ = static_cast<int>(degK / 2 + 1);
    return *genus_;
  }

  // Points of the smooth projective model over the degree-ext extension:
  // the fiber over a root of g carries exactly one point, other affine
  // fibers carry the number of n-th roots, and infinite places of degree
  // dividing ext contribute their degree.
  int64_t count_points(int ext) const {
    const FieldCtx& big = FieldCtx::get(F_->p, F_->m * ext);
    Poly gb = g_.lifted(big);
    bool all_power = (big.q - 1) % n_ != 0;
    int64_t cnt = 0;
    for (uint64_t tv = 0; tv < big.q; tv++) {
      Fq v = gb.eval(big.from_packed(tv));
      if (v.is_zero())
        cnt += 1;
      else if (all_power)
        cnt += 1;
      else if (v.v % static_cast<uint32_t>(n_) == 0)
        cnt += n_;
    }
    for (const Place& P : infinite_places())
      if (ext % P.degree() == 0) cnt += P.degree();
    return cnt;
  }

  const SuperCurve& reciprocal() const {
    if (recip_) return *recip_;
    if (is_reciprocal_) throw InternalError("reciprocal model recursion");
    Poly ghat = g_.reversed().shifted(n_ * w_ - g_.deg());
    recip_ = std::unique_ptr<SuperCurve>(new SuperCurve(n_, ghat, true));
    return *recip_;
  }

 private:
  SuperCurve(int n, const Poly& g, bool is_recip) : SuperCurve(n, g) {
    is_reciprocal_ = is_recip;
  }

  // Valuation of a nonzero Y-polynomial with k[t] coefficients.
  int64_t integral_valuation(const Place& P, const detail::YPoly& M) const {
    const Poly& p = P.base;
    if (P.e == n_) {
      // v(Y) = ord_p(g) and the summand valuations are distinct mod n.
      int a = detail::ord_of(g_, p);
      int64_t best = INT64_MAX;
      for (size_t i = 0; i < M.size(); i++) {
        if (M[i].is_zero()) continue;
        int64_t v = static_cast<int64_t>(n_) * detail::ord_of(M[i], p) +
                    static_cast<int64_t>(i) * a;
        best = std::min(best, v);
      }
      if (best == INT64_MAX) throw ZeroFunction("valuation of zero");
      return best;
    }
    // Unramified: reduce against the Hensel factor. The image lives in
    // O_P / p^prec, free over k[t]/p^prec on 1, Y, ..., Y^{reldeg-1},
    // so the valuation is the minimal coefficient order once any
    // coefficient survives the reduction.
    for (int prec = 4; prec <= (1 << 14); prec *= 2) {
      const detail::PlaceLift& lift = lift_for(P, prec);
      Poly pr = p.pow(static_cast<uint32_t>(prec));
      detail::YPoly phi = detail::yp_red(lift.phi, pr);
      detail::YPoly rem = detail::yp_rem_monic(M, phi, pr);
      int64_t best = INT64_MAX;
      for (const Poly& c : rem) {
        if (c.is_zero()) continue;
        best = std::min(
            best, static_cast<int64_t>(
                      (c % p).is_zero() ? detail::ord_of(c, p) : 0));
      }
      if (best != INT64_MAX) return best;
    }
    throw InternalError("valuation precision runaway");
  }

  // Hensel lift of (minpoly, cofactor) to at least the given precision.
  const detail::PlaceLift& lift_for(const Place& P, int prec) const {
    auto it = lift_cache_.find(P.key());
    if (it == lift_cache_.end()) {
      detail::ResField R(P.base);
      detail::YPoly f(n_ + 1, Poly(*F_));
      f[0] = -g_;
      f[n_] = Poly::constant(*F_, F_->one());
      auto [q, r] = detail::yq_divrem(f, P.minpoly, R);
      if (!r.empty())
        throw InternalError("place minimal polynomial does not divide");
      detail::PlaceLift lift;
      lift.prec = 1;
      lift.phi = detail::yp_red(P.minpoly, P.base);
      lift.psi = q;
      auto [u, v] = detail::yq_bezout(lift.phi, lift.psi, R);
      lift.abar = u;
      lift.bbar = v;
      it = lift_cache_.emplace(P.key(), std::move(lift)).first;
    }
    detail::PlaceLift& lift = it->second;
    const Poly& p = P.base;
    detail::ResField R(p);
    while (lift.prec < prec) {
      // One linear step: with Y^n - g = phi psi + p^j h, the corrections
      // delta = (bbar h) rem phi and eps = abar h + quo(bbar h, phi) psi
      // satisfy delta psi + eps phi = h mod p, advancing one power of
      // p. delta keeps deg < deg phi, so phi stays Y-monic.
      int j = lift.prec;
      Poly pj = p.pow(static_cast<uint32_t>(j));
      detail::YPoly f(n_ + 1, Poly(*F_));
      f[0] = -g_;
      f[n_] = Poly::constant(*F_, F_->one());
      detail::YPoly h =
          detail::yp_sub(f, detail::yp_mul(lift.phi, lift.psi, nullptr));
      detail::YPoly hbar(h.size(), Poly(*F_));
      for (size_t i = 0; i < h.size(); i++) {
        Poly c = h[i];
        if (c.is_zero()) continue;
        for (int rep = 0; rep < j; rep++) {
          auto [qq, rr] = Poly::divrem(c, p);
          if (!rr.is_zero()) throw InternalError("Hensel invariant broken");
          c = qq;
        }
        hbar[i] = c % p;
      }
      auto [qd, delta] =
          detail::yq_divrem(detail::yp_mul(lift.bbar, hbar, &p), lift.phi, R);
      detail::YPoly t1 = detail::yp_mul(lift.abar, hbar, &p);
      detail::YPoly t2 = detail::yp_mul(qd, lift.psi, &p);
      detail::YPoly eps =
          detail::yp_red(detail::yp_sub(t1, detail::yp_sub({}, t2)), p);
      for (size_t i = 0; i < delta.size(); i++)
        lift.phi[i] = lift.phi[i] + pj * delta[i];
      lift.psi.resize(std::max(lift.psi.size(), eps.size()), Poly(*F_));
      for (size_t i = 0; i < eps.size(); i++)
        lift.psi[i] = lift.psi[i] + pj * eps[i];
      lift.prec = j + 1;
    }
    return lift;
  }

  const FieldCtx* F_;
  int n_;
  Poly g_;
  int w_;
  bool is_reciprocal_ = false;
  mutable std::unique_ptr<SuperCurve> recip_;
  mutable std::map<std::string, std::vector<Place>> place_cache_;
  mutable std::map<std::string, detail::PlaceLift> lift_cache_;
  mutable std::vector<Place> inf_places_;
  mutable bool inf_places_computed_ = false;
  mutable std::optional<Divisor> canonical_;
  mutable std::optional<int> genus_;
};

// --- covers attached to y^2 = x^3 + f -----------------------------------------

// The cubic cover C2 (locus y = 0) with x = Y f3 f4 f5, and the
// hyperelliptic covers C3 (locus x = 0 on E) and C3' (locus x = 0 on
// the isogenous curve) with y = Y f2 f3 f4^2 f5^2.
struct AuxCover {
  SuperCurve curve;
  Poly multiplier;  // converts Y back to the ambient coordinate
};

inline AuxCover make_c2(const CurveConfig& cfg) {
  const FieldCtx& F = cfg.field();
  const auto& d = cfg.decomp;
  Poly g = (d[1] * d[2] * d[2] * d[4] * d[5] * d[5]).scaled(F.neg(d.unit));
  return AuxCover{SuperCurve(3, g), d[3] * d[4] * d[5]};
}

inline AuxCover make_c3(const CurveConfig& cfg) {
  const auto& d = cfg.decomp;
  Poly g = (d[1] * d[3] * d[5]).scaled(d.unit);
  return AuxCover{SuperCurve(2, g), d[2] * d[3] * d[4] * d[4] * d[5] * d[5]};
}

inline AuxCover make_c3_prime(const CurveConfig& cfg) {
  const FieldCtx& F = cfg.field();
  const auto& d = cfg.decomp;
  Poly g = (d[1] * d[3] * d[5]).scaled(F.mul(F.from_int(-27), d.unit));
  return AuxCover{SuperCurve(2, g), d[2] * d[3] * d[4] * d[4] * d[5] * d[5]};
}

// Distinguished divisor for the quadratic descent target on C2: the
// fibers over the roots of f3, plus the fiber at infinity when d = 3
// mod 6 (exactly the degrees where that fiber is etale).
inline Divisor descent_divisor_c2(const CurveConfig& cfg,
                                  const SuperCurve& c2) {
  Divisor D;
  if (cfg.decomp[3].deg() > 0)
    for (auto& [pi, e] : factor(cfg.decomp[3]).factors)
      D += c2.pullback_prime(pi);
  if (cfg.d % 6 == 3) D += c2.pullback_infinity();
  return D;
}

// Distinguished divisor for the cubic descent target on C3 and C3':
// the fibers over the roots of f2 f4, plus infinity when d = 2, 4 mod 6.
inline Divisor descent_divisor_c3(const CurveConfig& cfg,
                                  const SuperCurve& c3) {
  Divisor D;
  Poly f24 = cfg.decomp[2] * cfg.decomp[4];
  if (f24.deg() > 0)
    for (auto& [pi, e] : factor(f24).factors) D += c3.pullback_prime(pi);
  if (cfg.d % 6 == 2 || cfg.d % 6 == 4) D += c3.pullback_infinity();
  return D;
}

}  // namespace descentff

#endif  // DESCENTFF_AUXCURVES_HPP

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
 * @file gf.hpp
 * Table-based arithmetic for GF(p^m), p an odd prime.
 *
 * Elements are discrete logarithms with respect to a fixed multiplicative
 * generator; multiplication is index addition and addition goes through a
 * Zech logarithm table, so every field operation is O(1) after the one-time
 * table build.  A FieldCtx is immutable once constructed and is shared via a
 * process-wide registry keyed by (p, m).
 *
 * Deterministic choices baked into a context:
 *  - modulus: the monic irreducible of degree m over GF(p) whose coefficient
 *    vector (c_0, ..., c_{m-1}) has minimal packed value sum c_i * p^i;
 *  - generator: the element of minimal packed value generating the
 *    multiplicative group;
 *  - zeta3: generator^((q-1)/3) when 3 | q-1.
 */

#ifndef DESCENTFF_GF_HPP
#define DESCENTFF_GF_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "descentff/errors.hpp"

namespace descentff {

// Field element: discrete log in [0, q-1), or kZeroLog for the zero element.
// Elements carry no context pointer; all operations live on FieldCtx.
struct Fq {
  static constexpr uint32_t kZeroLog = 0xFFFFFFFFu;
  uint32_t v = kZeroLog;

  bool is_zero() const { return v == kZeroLog; }
  friend bool operator==(Fq a, Fq b) { return a.v == b.v; }
  friend bool operator!=(Fq a, Fq b) { return a.v != b.v; }
  friend bool operator<(Fq a, Fq b) { return a.v < b.v; }  // arbitrary total order
};

class FieldCtx {
 public:
  // Largest q for which log/exp/Zech tables are built (3 tables, 4 bytes per
  // entry each).  7^8 and 13^6 fit; 11^8 and 13^8 do not.
  static constexpr uint64_t kMaxTableSize = 8'000'000;

  uint32_t p = 0;
  uint32_t m = 0;
  uint64_t q = 0;                  // p^m
  std::vector<uint32_t> modulus;   // c_0..c_m over GF(p), monic, irreducible
  std::optional<Fq> zeta3;         // primitive cube root of unity if 3 | q-1

  static const FieldCtx& get(uint32_t p, uint32_t m);

  // --- constants and conversions ---------------------------------------
  static Fq zero() { return Fq{Fq::kZeroLog}; }
  Fq one() const { return Fq{0}; }
  Fq gen() const { return Fq{1}; }

  // Image of an integer under Z -> GF(p) -> GF(q).
  Fq from_int(int64_t n) const {
    int64_t r = n % static_cast<int64_t>(p);
    if (r < 0) r += p;
    return from_packed(static_cast<uint32_t>(r));
  }

  // Packed value: sum c_i * p^i of the coordinate vector in the power basis
  // of the modulus root.  Stable across processes; used for serialization
  // and for all deterministic orderings.
  uint64_t packed(Fq a) const { return a.is_zero() ? 0 : exp_[a.v]; }
  Fq from_packed(uint64_t val) const {
    if (val == 0) return zero();
    if (val >= q) throw PreconditionUnmet("packed value out of range");
    return Fq{log_[val]};
  }

  // --- arithmetic -------------------------------------------------------
  Fq add(Fq a, Fq b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // a + b = g^i (1 + g^(j-i)).
    uint32_t i = a.v, j = b.v;
    uint32_t diff = j >= i ? j - i : j + order_ - i;
    uint32_t z = zech_[diff];
    if (z == Fq::kZeroLog) return zero();
    uint64_t s = static_cast<uint64_t>(i) + z;
    if (s >= order_) s -= order_;
    return Fq{static_cast<uint32_t>(s)};
  }
  Fq neg(Fq a) const {
    if (a.is_zero()) return a;
    uint64_t s = a.v + static_cast<uint64_t>(order_) / 2;  // -1 = g^((q-1)/2)
    if (s >= order_) s -= order_;
    return Fq{static_cast<uint32_t>(s)};
  }
  Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
  Fq mul(Fq a, Fq b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    uint64_t s = static_cast<uint64_t>(a.v) + b.v;
    if (s >= order_) s -= order_;
    return Fq{static_cast<uint32_t>(s)};
  }
  Fq inv(Fq a) const {
    if (a.is_zero()) throw PreconditionUnmet("inverse of zero");
    return Fq{a.v == 0 ? 0 : order_ - a.v};
  }
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, int64_t e) const {
    if (a.is_zero()) {
      if (e < 0) throw PreconditionUnmet("inverse of zero");
      return e == 0 ? one() : zero();
    }
    int64_t r = e % static_cast<int64_t>(order_);
    if (r < 0) r += order_;
    return Fq{static_cast<uint32_t>(
        (static_cast<uint64_t>(a.v) * static_cast<uint64_t>(r)) % order_)};
  }

  // --- roots and residues ------------------------------------------------
  bool is_square(Fq a) const { return a.is_zero() || a.v % 2 == 0; }
  std::optional<Fq> sqrt(Fq a) const {
    if (a.is_zero()) return a;
    if (a.v % 2 != 0) return std::nullopt;
    return Fq{a.v / 2};  // the root with smaller log; the other is its negative
  }
  bool has_zeta3() const { return zeta3.has_value(); }
  bool is_cube(Fq a) const {
    if (a.is_zero() || order_ % 3 != 0) return true;
    return a.v % 3 == 0;
  }
  std::optional<Fq> cbrt(Fq a) const {
    if (a.is_zero()) return a;
    if (order_ % 3 != 0) {
      // Cubing is a bijection; the unique root is g^(v / 3 mod order).
      uint64_t inv3 = mod_inverse(3, order_);
      return Fq{static_cast<uint32_t>((a.v * inv3) % order_)};
    }
    if (a.v % 3 != 0) return std::nullopt;
    return Fq{a.v / 3};  // minimal-log root among the three
  }

  // --- Galois structure ----------------------------------------------------
  Fq frobenius(Fq a, uint32_t k = 1) const {
    if (a.is_zero()) return a;
    uint64_t pk = 1;
    for (uint32_t i = 0; i < k % m; ++i) pk = (pk * p) % order_;
    return Fq{static_cast<uint32_t>((a.v * pk) % order_)};
  }
  // True iff a lies in the subfield GF(p^e); requires e | m.
  bool in_subfield(Fq a, uint32_t e) const {
    if (a.is_zero()) return true;
    if (m % e != 0) throw PreconditionUnmet("not a subfield degree");
    uint64_t sub_order = ipow(p, e) - 1;
    return a.v % (order_ / sub_order) == 0;
  }
  // Field embedding GF(p^e) -> GF(p^m) for e | m, as a log multiplier:
  // small log L maps to big log (L * factor) mod (q-1).  Cached per pair.
  Fq embed(const FieldCtx& small, Fq a) const;
  // Partial inverse of embed: the preimage in GF(p^e) when a lies there.
  Fq project(const FieldCtx& small, Fq a) const;

  uint64_t order() const { return order_; }  // q - 1

  static uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
  }

 private:
  FieldCtx(uint32_t p_, uint32_t m_);

  static uint64_t mod_inverse(uint64_t a, uint64_t n) {
    int64_t t = 0, nt = 1, r = static_cast<int64_t>(n),
            nr = static_cast<int64_t>(a % n);
    while (nr != 0) {
      int64_t qt = r / nr;
      std::swap(t -= qt * nt, nt);
      std::swap(r -= qt * nr, nr);
    }
    if (r != 1) throw PreconditionUnmet("not invertible");
    return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(n) : t);
  }

  uint32_t order_ = 0;          // q - 1 (tables require q <= kMaxTableSize)
  std::vector<uint32_t> exp_;   // log -> packed
  std::vector<uint32_t> log_;   // packed -> log
  std::vector<uint32_t> zech_;  // i -> log(1 + g^i)
  mutable std::map<uint32_t, uint64_t> embed_cache_;  // small m -> log factor

  friend struct FieldCtxAccess;
};

namespace detail {

// Dense GF(p) coefficient vectors, used only while building tables.
using PVec = std::vector<uint32_t>;

inline void ptrim(PVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PVec pmulmod(const PVec& a, const PVec& b, const PVec& mod, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PVec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  // Reduce by the monic modulus.
  size_t dm = mod.size() - 1;
  for (size_t i = r.size(); i-- > dm;) {
    uint32_t c = r[i];
    if (c == 0) continue;
    r[i] = 0;
    for (size_t j = 0; j < dm; ++j)
      r[i - dm + j] = (r[i - dm + j] + c * (p - mod[j] % p)) % p;
  }
  r.resize(dm);
  ptrim(r);
  return r;
}

inline PVec ppowmod(PVec base, uint64_t e, const PVec& mod, uint32_t p) {
  PVec r{1};
  while (e) {
    if (e & 1) r = pmulmod(r, base, mod, p);
    base = pmulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

inline PVec pgcd(PVec a, PVec b, uint32_t p) {
  auto inv_mod_p = [p](uint32_t x) {
    uint32_t r = 1, b2 = x, e = p - 2;
    while (e) {
      if (e & 1) r = r * b2 % p;
      b2 = b2 * b2 % p;
      e >>= 1;
    }
    return r;
  };
  while (!b.empty()) {
    // a mod b
    uint32_t lead_inv = inv_mod_p(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      uint32_t c = a.back() * lead_inv % p;
      size_t off = a.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j)
        a[off + j] = (a[off + j] + c * (p - b[j]) % p * 1u) % p;
      ptrim(a);
      if (a.size() < b.size()) break;
    }
    std::swap(a, b);
  }
  return a;
}

inline std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> f;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) f.push_back(n);
  return f;
}

inline bool pirreducible(const PVec& f, uint32_t p) {
  // f monic of degree m: irreducible iff t^(p^m) = t mod f and
  // gcd(t^(p^(m/r)) - t, f) = 1 for every prime r | m.
  size_t m = f.size() - 1;
  if (m == 1) return true;
  PVec t{0, 1};
  auto tq = [&](uint32_t e_) {
    PVec r = t;
    for (uint32_t i = 0; i < e_; ++i) r = ppowmod(r, p, f, p);
    return r;
  };
  PVec top = tq(static_cast<uint32_t>(m));
  ptrim(top);
  PVec tt = t;
  // top must equal t.
  if (top != tt) return false;
  for (uint64_t r : prime_factors(m)) {
    PVec s = tq(static_cast<uint32_t>(m / r));
    // s - t
    PVec diff = s;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    ptrim(diff);
    PVec g = pgcd(f, diff, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

inline FieldCtx::FieldCtx(uint32_t p_, uint32_t m_) : p(p_), m(m_) {
  if (p < 3 || m == 0) throw PreconditionUnmet("need odd prime p and m >= 1");
  q = 1;
  for (uint32_t i = 0; i < m; ++i) {
    q *= p;
    if (q > kMaxTableSize)
      throw SearchTooLarge("field GF(" + std::to_string(p) + "^" +
                           std::to_string(m) + ") exceeds table budget of " +
                           std::to_string(kMaxTableSize) + " elements");
  }
  order_ = static_cast<uint32_t>(q - 1);

  // Deterministic modulus: minimal packed coefficient vector.
  {
    detail::PVec f(m + 1, 0);
    f[m] = 1;
    uint64_t lower = q;  // packed range of c_0..c_{m-1}
    bool found = false;
    for (uint64_t v = 0; v < lower; ++v) {
      uint64_t x = v;
      for (uint32_t i = 0; i < m; ++i) {
        f[i] = static_cast<uint32_t>(x % p);
        x /= p;
      }
      if (f[0] == 0 && m > 1) continue;  // reducible: t divides
      if (detail::pirreducible(f, p)) {
        found = true;
        break;
      }
    }
    if (!found) throw PreconditionUnmet("no irreducible modulus found");
    modulus.assign(f.begin(), f.end());
  }

  // Deterministic generator: minimal packed value with full multiplicative
  // order.  Order tests run in the coefficient representation.
  detail::PVec mod(modulus.begin(), modulus.end());
  auto factors = detail::prime_factors(order_);
  detail::PVec gen_vec;
  {
    bool found = false;
    for (uint64_t v = 2; v < q && !found; ++v) {
      detail::PVec c;
      uint64_t x = v;
      while (x) {
        c.push_back(static_cast<uint32_t>(x % p));
        x /= p;
      }
      bool ok = true;
      for (uint64_t r : factors) {
        detail::PVec t = detail::ppowmod(c, order_ / r, mod, p);
        if (t.size() == 1 && t[0] == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen_vec = c;
        found = true;
      }
    }
    if (!found) throw PreconditionUnmet("no generator found");
  }

  // Tables: exp_ by iterated multiplication, log_ as its inverse, Zech from
  // the packed +1 trick (adding 1 only changes the constant digit).
  exp_.assign(order_, 0);
  log_.assign(q, Fq::kZeroLog);
  {
    detail::PVec cur{1};
    for (uint32_t i = 0; i < order_; ++i) {
      uint64_t packed = 0;
      for (size_t j = cur.size(); j-- > 0;) packed = packed * p + cur[j];
      exp_[i] = static_cast<uint32_t>(packed);
      log_[packed] = i;
      cur = detail::pmulmod(cur, gen_vec, mod, p);
    }
  }
  zech_.assign(order_, 0);
  for (uint32_t i = 0; i < order_; ++i) {
    uint32_t val = exp_[i];
    uint32_t c0 = val % p;
    uint32_t val1 = val - c0 + (c0 + 1) % p;
    zech_[i] = val1 == 0 ? Fq::kZeroLog : log_[val1];
  }

  if (order_ % 3 == 0) zeta3 = Fq{order_ / 3};
}

struct FieldCtxAccess {
  // Registry is intentionally never cleared; contexts are immutable.
  static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<FieldCtx>>&
  registry() {
    static std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<FieldCtx>>
        reg;
    return reg;
  }
  static FieldCtx* make(uint32_t p, uint32_t m) { return new FieldCtx(p, m); }
};

inline const FieldCtx& FieldCtx::get(uint32_t p, uint32_t m) {
  auto& reg = FieldCtxAccess::registry();
  auto key = std::make_pair(p, m);
  auto it = reg.find(key);
  if (it == reg.end())
    it = reg.emplace(key, std::unique_ptr<FieldCtx>(FieldCtxAccess::make(p, m)))
             .first;
  return *it->second;
}

inline Fq FieldCtx::embed(const FieldCtx& small, Fq a) const {
  if (small.p != p || m % small.m != 0)
    throw PreconditionUnmet("not a subfield");
  if (a.is_zero()) return a;
  if (small.m == m) return a;
  auto it = embed_cache_.find(small.m);
  if (it == embed_cache_.end()) {
    // The embedding must send the small generator to a root of its minimal
    // polynomial over GF(p).  Candidates are g^(c*u) with c the index of the
    // subfield group and gcd(u, small order) = 1.
    uint64_t c = order_ / small.order();
    // Minimal polynomial of the small generator: prod (X - g_s^(p^i)).
    std::vector<Fq> minpoly{small.one()};
    Fq conj = small.gen();
    for (uint32_t i = 0; i < small.m; ++i) {
      std::vector<Fq> next(minpoly.size() + 1, zero());
      for (size_t j = 0; j < minpoly.size(); ++j) {
        next[j + 1] = small.add(next[j + 1], minpoly[j]);
        next[j] = small.add(next[j], small.mul(minpoly[j], small.neg(conj)));
      }
      minpoly = next;
      conj = small.frobenius(conj);
    }
    // Coefficients lie in GF(p); transport them via packed integers.
    std::vector<Fq> big_coeffs(minpoly.size());
    for (size_t i = 0; i < minpoly.size(); ++i)
      big_coeffs[i] = from_packed(small.packed(minpoly[i]));
    uint64_t factor = 0;
    for (uint64_t u = 1; u < small.order(); ++u) {
      if (std::gcd(u, small.order()) != 1) continue;
      uint64_t cand = (c * u) % order_;
      // Horner evaluation at g^cand.
      Fq x{static_cast<uint32_t>(cand)}, acc = zero();
      for (size_t i = big_coeffs.size(); i-- > 0;)
        acc = add(mul(acc, x), big_coeffs[i]);
      if (acc.is_zero()) {
        factor = cand;
        break;
      }
    }
    if (factor == 0) throw PreconditionUnmet("embedding root not found");
    it = embed_cache_.emplace(small.m, factor).first;
  }
  return Fq{static_cast<uint32_t>(
      (static_cast<uint64_t>(a.v) * it->second) % order_)};
}

inline Fq FieldCtx::project(const FieldCtx& small, Fq a) const {
  if (a.is_zero()) return a;
  Fq probe = embed(small, small.gen());
  // Solve probe^x = a in the cyclic group of order small.order().
  if (a.v % (order_ / small.order()) != 0)
    throw PreconditionUnmet("element not in subfield");
  // probe.v = factor; x = a.v / factor in Z/(q-1): factor * x = a.v mod order_.
  // factor = c*u with c = order_/small.order(); solve for x mod small.order().
  uint64_t c = order_ / small.order();
  uint64_t fu = probe.v / c;  // u, coprime to small.order()
  uint64_t rhs = a.v / c;
  uint64_t x = (rhs * mod_inverse(fu, small.order())) % small.order();
  return Fq{static_cast<uint32_t>(x)};
}

}  // namespace descentff

#endif  // DESCENTFF_GF_HPP

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
 * @file poly.hpp
 * Dense univariate polynomials over GF(p^m) and reduced rational functions.
 *
 * Invariants: a Poly never stores trailing zero coefficients (the zero
 * polynomial has an empty coefficient vector and degree "minus infinity");
 * a RatFunc keeps gcd(num, den) = 1 with monic denominator.
 *
 * Text format (the CLI input grammar): terms "c*t^k" joined by " + ", with
 * coefficient-1 and exponent-1 abbreviations, e.g. "t^3 + 2*t + 4".
 * Coefficients are integers; over extension fields they are packed values in
 * the power basis of the field modulus.  parse_poly and to_string are
 * mutually inverse on canonical forms.
 */

#ifndef DESCENTFF_POLY_HPP
#define DESCENTFF_POLY_HPP

#include <algorithm>
#include <cctype>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "descentff/errors.hpp"
#include "descentff/gf.hpp"

namespace descentff {

// Degree of the zero polynomial; negative enough that degree sums of any
// realistic sizes stay below every real degree.
constexpr int kNegInfDeg = -(1 << 28);

class Poly {
 public:
  Poly() : F_(nullptr) {}
  explicit Poly(const FieldCtx& F) : F_(&F) {}
  Poly(const FieldCtx& F, std::vector<Fq> coeffs)
      : F_(&F), c_(std::move(coeffs)) {
    trim();
  }
  static Poly constant(const FieldCtx& F, Fq a) {
    return Poly(F, std::vector<Fq>{a});
  }
  static Poly t(const FieldCtx& F) {
    return Poly(F, {FieldCtx::zero(), F.one()});
  }
  // t^k with coefficient a.
  static Poly monomial(const FieldCtx& F, Fq a, int k) {
    if (a.is_zero()) return Poly(F);
    std::vector<Fq> c(k + 1, FieldCtx::zero());
    c[k] = a;
    return Poly(F, std::move(c));
  }

  const FieldCtx& field() const {
    if (!F_) throw PreconditionUnmet("poly without field context");
    return *F_;
  }
  bool is_zero() const { return c_.empty(); }
  int deg() const { return c_.empty() ? kNegInfDeg : int(c_.size()) - 1; }
  Fq coeff(int i) const {
    return (i < 0 || i >= int(c_.size())) ? FieldCtx::zero() : c_[i];
  }
  Fq lead() const { return c_.empty() ? FieldCtx::zero() : c_.back(); }
  const std::vector<Fq>& coeffs() const { return c_; }
  bool is_one() const { return c_.size() == 1 && c_[0] == field().one(); }
  bool is_monic() const { return !c_.empty() && c_.back() == field().one(); }
  bool is_constant() const { return c_.size() <= 1; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  // Deterministic total order: degree first, then packed coefficients from
  // the top down.  Used wherever factor lists must be sorted.
  static bool less(const Poly& a, const Poly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (int i = a.deg(); i >= 0; --i) {
      uint64_t pa = a.field().packed(a.coeff(i));
      uint64_t pb = b.field().packed(b.coeff(i));
      if (pa != pb) return pa < pb;
    }
    return false;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const FieldCtx& F = a.pick_field(b);
    std::vector<Fq> c(std::max(a.c_.size(), b.c_.size()), FieldCtx::zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = F.add(a.coeff(i), b.coeff(i));
    return Poly(F, std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    const FieldCtx& F = a.pick_field(b);
    std::vector<Fq> c(std::max(a.c_.size(), b.c_.size()), FieldCtx::zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a.coeff(i), b.coeff(i));
    return Poly(F, std::move(c));
  }
  Poly operator-() const {
    if (is_zero()) return *this;
    std::vector<Fq> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = F_->neg(c_[i]);
    return Poly(*F_, std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    const FieldCtx& F = a.pick_field(b);
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<Fq> c(a.c_.size() + b.c_.size() - 1, FieldCtx::zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = F.add(c[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return Poly(F, std::move(c));
  }
  Poly scaled(Fq s) const {
    const FieldCtx& F = field();
    if (s.is_zero()) return Poly(F);
    std::vector<Fq> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = F.mul(c_[i], s);
    return Poly(F, std::move(c));
  }
  // Multiplication by t^k (k >= 0).
  Poly shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<Fq> c(c_.size() + k, FieldCtx::zero());
    std::copy(c_.begin(), c_.end(), c.begin() + k);
    return Poly(*F_, std::move(c));
  }

  // Euclidean division: a = q*b + r with deg r < deg b.
  static std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    const FieldCtx& F = a.pick_field(b);
    if (b.is_zero()) throw PreconditionUnmet("polynomial division by zero");
    if (a.deg() < b.deg()) return {Poly(F), a};
    Fq lead_inv = F.inv(b.lead());
    std::vector<Fq> rem = a.c_;
    std::vector<Fq> quot(a.deg() - b.deg() + 1, FieldCtx::zero());
    for (int i = a.deg(); i >= b.deg(); --i) {
      Fq cI = rem[i];
      if (cI.is_zero()) continue;
      Fq qc = F.mul(cI, lead_inv);
      quot[i - b.deg()] = qc;
      for (int j = 0; j <= b.deg(); ++j)
        rem[i - b.deg() + j] =
            F.sub(rem[i - b.deg() + j], F.mul(qc, b.c_[j]));
    }
    return {Poly(F, std::move(quot)), Poly(F, std::move(rem))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) {
    return divrem(a, b).first;
  }
  friend Poly operator%(const Poly& a, const Poly& b) {
    return divrem(a, b).second;
  }
  bool divides(const Poly& a) const { return (a % *this).is_zero(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(F_->inv(lead()));
  }

  // Monic gcd.
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }
  // g = gcd, and u with u*a = g mod b (partial extended Euclid).
  static std::pair<Poly, Poly> half_xgcd(Poly a, const Poly& b) {
    const FieldCtx& F = a.field();
    Poly r0 = a, r1 = b;
    Poly u0 = constant(F, F.one()), u1 = Poly(F);
    while (!r1.is_zero()) {
      auto [q, r] = divrem(r0, r1);
      Poly u = u0 - q * u1;
      r0 = std::move(r1);
      r1 = std::move(r);
      u0 = std::move(u1);
      u1 = std::move(u);
    }
    if (r0.is_zero()) return {r0, u0};
    Fq s = F.inv(r0.lead());
    return {r0.scaled(s), u0.scaled(s)};
  }
  // Inverse of a modulo b (requires gcd = 1).
  static Poly invmod(const Poly& a, const Poly& b) {
    auto [g, u] = half_xgcd(a % b, b);
    if (!g.is_one()) throw NotCoprime("invmod of non-unit");
    return u % b;
  }
  static Poly mulmod(const Poly& a, const Poly& b, const Poly& mod) {
    return (a * b) % mod;
  }
  static Poly powmod(Poly base, uint64_t e, const Poly& mod) {
    const FieldCtx& F = base.field();
    Poly r = constant(F, F.one()) % mod;
    base = base % mod;
    while (e) {
      if (e & 1) r = mulmod(r, base, mod);
      base = mulmod(base, base, mod);
      e >>= 1;
    }
    return r;
  }

  Fq eval(Fq x) const {
    const FieldCtx& F = field();
    Fq acc = FieldCtx::zero();
    for (size_t i = c_.size(); i-- > 0;) acc = F.add(F.mul(acc, x), c_[i]);
    return acc;
  }

  Poly derivative() const {
    const FieldCtx& F = field();
    if (c_.size() <= 1) return Poly(F);
    std::vector<Fq> c(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i)
      c[i - 1] = F.mul(c_[i], F.from_int(int64_t(i)));
    return Poly(F, std::move(c));
  }

  // Coefficient reversal: t^n * f(1/t) for n = max(deg f, n_min).
  Poly reversed(int n_min = -1) const {
    const FieldCtx& F = field();
    int n = std::max(deg(), n_min);
    if (is_zero()) return Poly(F);
    std::vector<Fq> c(n + 1, FieldCtx::zero());
    for (int i = 0; i <= deg(); ++i) c[n - i] = c_[i];
    return Poly(F, std::move(c));
  }

  // Coefficient-wise Frobenius x -> x^(p^k); the Galois action on polys.
  Poly frobenius(uint32_t k = 1) const {
    const FieldCtx& F = field();
    std::vector<Fq> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = F.frobenius(c_[i], k);
    return Poly(F, std::move(c));
  }

  // Coefficient-wise base change along a subfield embedding.
  Poly lifted(const FieldCtx& big) const {
    const FieldCtx& F = field();
    std::vector<Fq> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = big.embed(F, c_[i]);
    return Poly(big, std::move(c));
  }
  Poly projected(const FieldCtx& small) const {
    const FieldCtx& F = field();
    std::vector<Fq> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = F.project(small, c_[i]);
    return Poly(small, std::move(c));
  }

  Poly pow(uint32_t e) const {
    const FieldCtx& F = field();
    Poly r = constant(F, F.one());
    Poly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  // Resultant via the Euclidean algorithm with leading-coefficient tracking.
  static Fq resultant(Poly a, Poly b) {
    const FieldCtx& F = a.pick_field(b);
    if (a.is_zero() || b.is_zero()) return FieldCtx::zero();
    Fq res = F.one();
    while (b.deg() > 0) {
      Poly r = a % b;
      if (r.is_zero()) return FieldCtx::zero();
      // res(a, b) = (-1)^(deg a * deg b) lc(b)^(deg a - deg r) res(b, r)
      if (a.deg() % 2 == 1 && b.deg() % 2 == 1) res = F.neg(res);
      res = F.mul(res, F.pow(b.lead(), a.deg() - r.deg()));
      a = std::move(b);
      b = std::move(r);
    }
    return F.mul(res, F.pow(b.lead(), a.deg()));
  }
  // disc(f) = (-1)^(n(n-1)/2) res(f, f') / lc(f), n = deg f.
  static Fq discriminant(const Poly& f) {
    const FieldCtx& F = f.field();
    if (f.deg() < 1) throw PreconditionUnmet("discriminant needs degree >= 1");
    Fq r = resultant(f, f.derivative());
    int n = f.deg();
    Fq sign = ((int64_t(n) * (n - 1) / 2) % 2 == 1) ? F.neg(F.one()) : F.one();
    return F.mul(sign, F.div(r, f.lead()));
  }

  std::string str() const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  const FieldCtx& pick_field(const Poly& other) const {
    const FieldCtx* f = F_ ? F_ : other.F_;
    if (!f) throw PreconditionUnmet("poly without field context");
    if (F_ && other.F_ && F_ != other.F_)
      throw PreconditionUnmet("mixed field contexts");
    return *f;
  }

  const FieldCtx* F_;
  std::vector<Fq> c_;
};

// --- text format -----------------------------------------------------------

inline std::string Poly::str() const {
  if (is_zero()) return "0";
  const FieldCtx& F = field();
  std::string out;
  for (int i = deg(); i >= 0; --i) {
    Fq ci = coeff(i);
    if (ci.is_zero()) continue;
    if (!out.empty()) out += " + ";
    uint64_t v = F.packed(ci);
    if (i == 0) {
      out += std::to_string(v);
    } else {
      if (v != 1) out += std::to_string(v) + "*";
      out += "t";
      if (i != 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

// Parses the printer grammar plus minus signs and arbitrary spacing.
inline Poly parse_poly(const FieldCtx& F, const std::string& text) {
  std::vector<Fq> coeffs;
  auto add_term = [&](uint64_t packed_val, int exp, bool negative) {
    if (exp >= int(coeffs.size())) coeffs.resize(exp + 1, FieldCtx::zero());
    Fq v = F.from_packed(packed_val % F.q);
    if (negative) v = F.neg(v);
    coeffs[exp] = F.add(coeffs[exp], v);
  };
  size_t i = 0;
  const size_t n = text.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i >= n) throw PreconditionUnmet("empty polynomial literal");
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  while (true) {
    skip_ws();
    // term: INT | INT '*'? 't' ('^' INT)? | 't' ('^' INT)?
    bool have_coeff = false;
    uint64_t coeff = 1;
    if (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      coeff = 0;
      have_coeff = true;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        coeff = coeff * 10 + (text[i] - '0');
        if (coeff > (uint64_t(1) << 62))
          throw PreconditionUnmet("coefficient literal too large");
        ++i;
      }
      skip_ws();
      if (i < n && text[i] == '*') {
        ++i;
        skip_ws();
      }
    }
    int exp = 0;
    if (i < n && text[i] == 't') {
      ++i;
      exp = 1;
      skip_ws();
      if (i < n && text[i] == '^') {
        ++i;
        skip_ws();
        if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw PreconditionUnmet("expected exponent digits");
        exp = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
          exp = exp * 10 + (text[i] - '0');
          if (exp > 1'000'000) throw PreconditionUnmet("exponent too large");
          ++i;
        }
      }
    } else if (!have_coeff) {
      throw PreconditionUnmet("expected term in polynomial literal");
    }
    add_term(coeff, exp, negative);
    skip_ws();
    if (i >= n) break;
    if (text[i] == '+')
      negative = false;
    else if (text[i] == '-')
      negative = true;
    else
      throw PreconditionUnmet("expected + or - in polynomial literal");
    ++i;
  }
  return Poly(F, std::move(coeffs));
}

inline Poly random_poly(const FieldCtx& F, int deg, std::mt19937_64& rng,
                        bool monic = false) {
  if (deg < 0) return Poly(F);
  std::uniform_int_distribution<uint64_t> dist(0, F.q - 1);
  std::vector<Fq> c(deg + 1);
  for (int i = 0; i <= deg; ++i) c[i] = F.from_packed(dist(rng));
  if (monic)
    c[deg] = F.one();
  else
    while (c[deg].is_zero()) c[deg] = F.from_packed(dist(rng));
  return Poly(F, std::move(c));
}

// --- rational functions ------------------------------------------------------

class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(Poly num)
      : num_(std::move(num)),
        den_(Poly::constant(num_.field(), num_.field().one())) {}
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    reduce();
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FieldCtx& field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_one(); }

  // Degree as a map P^1 -> P^1: max of numerator and denominator degrees.
  int map_degree() const {
    return is_zero() ? 0 : std::max(num_.deg(), den_.deg());
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw PreconditionUnmet("rational function div by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) {
    return !(a == b);
  }

  std::string str() const {
    if (is_poly()) return num_.str();
    return "(" + num_.str() + ") / (" + den_.str() + ")";
  }

 private:
  void reduce() {
    const FieldCtx& F = num_.field();
    if (den_.is_zero())
      throw PreconditionUnmet("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly::constant(F, F.one());
      return;
    }
    Poly g = Poly::gcd(num_, den_);
    if (g.deg() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    Fq s = F.inv(den_.lead());
    num_ = num_.scaled(s);
    den_ = den_.scaled(s);
  }

  Poly num_;
  Poly den_;
};

}  // namespace descentff

#endif  // DESCENTFF_POLY_HPP

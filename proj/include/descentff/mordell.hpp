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

// Rational points on E: y^2 = x^3 + f(t) over k(t): chord-tangent group
// law, complex multiplication by zeta_3, the 3-isogeny to the twist
// E': y^2 = x^3 - 27 f and its dual, naive and canonical heights, and
// enumeration of integral points.

#ifndef DESCENTFF_MORDELL_HPP
#define DESCENTFF_MORDELL_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "descentff/errors.hpp"
#include "descentff/factor.hpp"
#include "descentff/gf.hpp"
#include "descentff/model.hpp"
#include "descentff/poly.hpp"
#include "descentff/rational.hpp"

namespace descentff {

// Projective point: either the point at infinity or an affine pair of
// rational functions in t.
struct PointE {
  bool infinity = true;
  RatFunc x;
  RatFunc y;

  PointE() = default;
  PointE(RatFunc px, RatFunc py)
      : infinity(false), x(std::move(px)), y(std::move(py)) {}

  static PointE at_infinity() { return PointE(); }

  friend bool operator==(const PointE& a, const PointE& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const PointE& a, const PointE& b) {
    return !(a == b);
  }

  std::string str() const {
    if (infinity) return "inf";
    return "(" + x.str() + ", " + y.str() + ")";
  }
};

// Integral point: both coordinates are polynomials.
struct IntegralPoint {
  Poly x;
  Poly y;

  PointE point() const { return PointE(RatFunc(x), RatFunc(y)); }
  std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

inline bool on_curve(const CurveConfig& cfg, const PointE& P) {
  if (P.infinity) return true;
  RatFunc f(cfg.f);
  return P.y * P.y == P.x * P.x * P.x + f;
}

inline PointE neg(const PointE& P) {
  if (P.infinity) return P;
  return PointE(P.x, -P.y);
}

inline PointE add(const CurveConfig& cfg, const PointE& P, const PointE& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const FieldCtx& F = cfg.field();
  if (P.x == Q.x) {
    if (P.y == -Q.y) return PointE::at_infinity();
    // Tangent line; P.y != 0 here since y = 0 forces P = -P.
    RatFunc three(Poly::constant(F, F.from_int(3)));
    RatFunc two(Poly::constant(F, F.from_int(2)));
    RatFunc m = three * P.x * P.x / (two * P.y);
    RatFunc xr = m * m - P.x - Q.x;
    return PointE(xr, m * (P.x - xr) - P.y);
  }
  RatFunc m = (Q.y - P.y) / (Q.x - P.x);
  RatFunc xr = m * m - P.x - Q.x;
  return PointE(xr, m * (P.x - xr) - P.y);
}

inline PointE sub(const CurveConfig& cfg, const PointE& P, const PointE& Q) {
  return add(cfg, P, neg(Q));
}

inline PointE smul(const CurveConfig& cfg, int64_t n, PointE P) {
  if (n < 0) {
    P = neg(P);
    n = -n;
  }
  PointE acc = PointE::at_infinity();
  while (n > 0) {
    if (n & 1) acc = add(cfg, acc, P);
    n >>= 1;
    if (n) P = add(cfg, P, P);
  }
  return acc;
}

// CM action (x, y) -> (zeta_3 x, y), an automorphism of E.
inline PointE zeta3_act(const CurveConfig& cfg, const PointE& P) {
  const FieldCtx& F = cfg.field();
  if (!F.has_zeta3())
    throw NoZeta3("zeta3 action needs 3 | q-1 in GF(" + std::to_string(F.q) +
                  ")");
  if (P.infinity) return P;
  RatFunc z(Poly::constant(F, *F.zeta3));
  return PointE(z * P.x, P.y);
}

// CM action of sqrt(-3) = 1 + 2 zeta_3; its norm is 3, so it scales the
// canonical height by 3.
inline PointE sqrt_minus3_act(const CurveConfig& cfg, const PointE& P) {
  return add(cfg, P, smul(cfg, 2, zeta3_act(cfg, P)));
}

// Codomain of the 3-isogeny lambda: the sextic twist y^2 = x^3 - 27 f.
inline CurveConfig lambda_codomain(const CurveConfig& cfg) {
  const FieldCtx& F = cfg.field();
  return make_curve(cfg.f.scaled(F.from_int(-27)));
}

// lambda: E -> E', (x, y) -> ((x^3 + 4f)/x^2, y (x^3 - 8f)/x^3), the
// 3-isogeny whose kernel is the locus x = 0.
inline PointE lambda_isogeny(const CurveConfig& cfg, const PointE& P) {
  if (P.infinity || P.x.is_zero()) return PointE::at_infinity();
  const FieldCtx& F = cfg.field();
  RatFunc f(cfg.f);
  RatFunc four(Poly::constant(F, F.from_int(4)));
  RatFunc eight(Poly::constant(F, F.from_int(8)));
  RatFunc x3 = P.x * P.x * P.x;
  RatFunc xi = (x3 + four * f) / (P.x * P.x);
  RatFunc eta = P.y * (x3 - eight * f) / x3;
  return PointE(xi, eta);
}

// Dual isogeny lambda^t: E' -> E with kernel the locus x' = 0 on E'.
// Satisfies lambda^t(lambda(P)) = 3P exactly (not -3P). Takes the
// config of the *domain of lambda* (the curve y^2 = x^3 + f).
inline PointE lambda_dual(const CurveConfig& cfg, const PointE& Q) {
  if (Q.infinity || Q.x.is_zero()) return PointE::at_infinity();
  const FieldCtx& F = cfg.field();
  RatFunc f(cfg.f);
  RatFunc c108(Poly::constant(F, F.from_int(108)));
  RatFunc c216(Poly::constant(F, F.from_int(216)));
  RatFunc c9(Poly::constant(F, F.from_int(9)));
  RatFunc c27(Poly::constant(F, F.from_int(27)));
  RatFunc x3 = Q.x * Q.x * Q.x;
  RatFunc xi = (x3 - c108 * f) / (c9 * Q.x * Q.x);
  RatFunc eta = Q.y * (x3 + c216 * f) / (c27 * x3);
  return PointE(xi, eta);
}

// The isomorphism psi: E -> E' over k(zeta_3), (x, y) -> (-3x, 3 rho y)
// with rho = 1 + 2 zeta_3 a square root of -3. The sign of the second
// coordinate is pinned by the intertwining law
// lambda_dual(psi(P)) = sqrt_minus3_act(P) for this zeta_3.
inline PointE psi_twist(const CurveConfig& cfg, const PointE& P) {
  const FieldCtx& F = cfg.field();
  if (!F.has_zeta3())
    throw NoZeta3("psi twist needs 3 | q-1 in GF(" + std::to_string(F.q) +
                  ")");
  if (P.infinity) return P;
  Fq rho = F.add(F.one(), F.mul(F.from_int(2), *F.zeta3));
  RatFunc m3(Poly::constant(F, F.from_int(-3)));
  RatFunc p3rho(Poly::constant(F, F.mul(F.from_int(3), rho)));
  return PointE(m3 * P.x, p3rho * P.y);
}

// Naive height max(deg x / 2, deg y / 3), where deg is the degree of the
// coordinate as a map P^1 -> P^1. The height of infinity is 0.
inline Rat naive_height(const PointE& P) {
  if (P.infinity) return Rat(0);
  int hx = 3 * P.x.map_degree();
  int hy = 2 * P.y.map_degree();
  return Rat(std::max(hx, hy), 6);
}

// Canonical height: subtracts the local correction at each zero of x
// lying on a multiple-root locus of f. n_i counts geometric points where
// f_i and the numerator of x vanish simultaneously; f_i is separable, so
// the count is a gcd degree.
inline Rat canonical_height(const CurveConfig& cfg, const PointE& P) {
  if (P.infinity) return Rat(0);
  Rat h = naive_height(P);
  // For x identically zero every root of f_i is a zero of x, and
  // gcd(f_i, 0) = f_i gives exactly that count.
  int n2 = Poly::gcd(cfg.decomp[2], P.x.num()).deg();
  int n3 = Poly::gcd(cfg.decomp[3], P.x.num()).deg();
  int n4 = Poly::gcd(cfg.decomp[4], P.x.num()).deg();
  return h - Rat(n2, 3) - Rat(n3, 2) - Rat(2 * n4, 3);
}

inline bool is_torsion(const CurveConfig& cfg, const PointE& P) {
  return canonical_height(cfg, P) == Rat(0);
}

namespace detail {

// Iterates over all polynomials of degree exactly `deg` (all leading
// coefficients) by odometer increment of packed coefficients. Returns
// false when the supply at this degree is exhausted.
inline bool next_poly_at_degree(const FieldCtx& F, int deg,
                                std::vector<uint64_t>& packed, Poly& out) {
  if (packed.empty()) {
    packed.assign(static_cast<size_t>(deg) + 1, 0);
    packed.back() = 1;  // leading coefficient nonzero
  } else {
    size_t i = 0;
    while (i < packed.size()) {
      packed[i]++;
      if (packed[i] < F.q) break;
      packed[i] = i + 1 == packed.size() ? 1 : 0;
      if (i + 1 == packed.size() && packed[i] == 1) return false;
      i++;
    }
    if (i == packed.size()) return false;
  }
  std::vector<Fq> coeffs(packed.size());
  for (size_t i = 0; i < packed.size(); i++)
    coeffs[i] = F.from_packed(packed[i]);
  out = Poly(F, std::move(coeffs));
  return true;
}

// Odometer over the polynomials of degree exactly deg (the zero
// polynomial alone for deg = -1) that keeps the coefficient elements and
// the values at two probe arguments current across steps, so bulk scans
// can reject candidates without materializing them.
class PolyScanner {
 public:
  PolyScanner(const FieldCtx& F, int deg, Fq a0, Fq a1) : F_(&F) {
    if (deg < 0) return;
    packed_.assign(static_cast<size_t>(deg) + 1, 0);
    packed_.back() = 1;
    felem_.assign(packed_.size(), Fq{});
    felem_.back() = F.one();
    pow0_.assign(packed_.size(), Fq{});
    pow1_.assign(packed_.size(), Fq{});
    Fq x0 = F.one(), x1 = F.one();
    for (size_t i = 0; i < packed_.size(); i++) {
      pow0_[i] = x0;
      pow1_[i] = x1;
      x0 = F_->mul(x0, a0);
      x1 = F_->mul(x1, a1);
    }
    v0_ = pow0_.back();
    v1_ = pow1_.back();
  }

  Fq value0() const { return v0_; }
  Fq value1() const { return v1_; }
  const std::vector<Fq>& coeffs() const { return felem_; }

  Fq value_at(Fq a) const {
    Fq r = FieldCtx::zero();
    for (size_t i = felem_.size(); i-- > 0;) r = F_->add(F_->mul(r, a), felem_[i]);
    return r;
  }

  Poly poly() const { return Poly(*F_, felem_); }

  // Steps to the next polynomial; false once the degree is exhausted.
  bool advance() {
    size_t i = 0;
    while (i < packed_.size()) {
      uint64_t old = packed_[i];
      packed_[i]++;
      if (packed_[i] < F_->q) {
        apply(i, old, packed_[i]);
        return true;
      }
      if (i + 1 == packed_.size()) return false;
      packed_[i] = 0;
      apply(i, old, 0);
      i++;
    }
    return false;
  }

 private:
  void apply(size_t i, uint64_t oldp, uint64_t newp) {
    Fq nw = F_->from_packed(newp);
    Fq d = F_->sub(nw, felem_[i]);
    felem_[i] = nw;
    v0_ = F_->add(v0_, F_->mul(d, pow0_[i]));
    v1_ = F_->add(v1_, F_->mul(d, pow1_[i]));
    (void)oldp;
  }

  const FieldCtx* F_;
  std::vector<uint64_t> packed_;
  std::vector<Fq> felem_, pow0_, pow1_;
  Fq v0_ = FieldCtx::zero(), v1_ = FieldCtx::zero();
};

}  // namespace detail

// All integral points (x, y in k[t]) of naive height at most h_max,
// including y = 0 points, sorted by (x, y) for determinism. Enumerates
// x of degree <= 2 h_max and filters by quadratic residues of x^3 + f
// at sample arguments before the exact square root.
inline std::vector<IntegralPoint> enumerate_integral_points(
    const CurveConfig& cfg, const Rat& h_max) {
  const FieldCtx& F = cfg.field();
  std::vector<IntegralPoint> points;
  if (h_max < Rat(0)) return points;
  int deg_cap = (h_max * Rat(2)).floor();
  uint64_t samples = std::min<uint64_t>(F.q, 24);
  std::vector<Fq> args, fvals;
  for (uint64_t s = 0; s < samples; s++) {
    args.push_back(F.from_packed(s));
    fvals.push_back(cfg.f.eval(args.back()));
  }
  auto cube_plus_f = [&](Fq v, size_t s) {
    return F.add(F.mul(F.mul(v, v), v), fvals[s]);
  };
  for (int deg = -1; deg <= deg_cap; deg++) {
    // deg -1 is the zero polynomial; deg 0 iterates the nonzero constants.
    detail::PolyScanner sc(F, deg, args[0],
                           args.size() > 1 ? args[1] : args[0]);
    bool more = true;
    while (more) {
      // Sampled values of x0^3 + f must be squares; the scanner keeps the
      // first probes current so rejected candidates are never materialized.
      bool reject = !F.is_square(cube_plus_f(sc.value0(), 0));
      if (!reject && args.size() > 1)
        reject = !F.is_square(cube_plus_f(sc.value1(), 1));
      for (size_t s = 2; !reject && s < args.size(); s++)
        reject = !F.is_square(cube_plus_f(sc.value_at(args[s]), s));
      if (!reject) {
        Poly x0 = sc.poly();
        Poly g = x0 * x0 * x0 + cfg.f;
        if (g.is_zero()) {
          IntegralPoint pt{x0, Poly::constant(F, F.zero())};
          if (naive_height(pt.point()) <= h_max) points.push_back(pt);
        } else if (std::optional<Poly> y0 = poly_root_n(g, 2)) {
          IntegralPoint pt{x0, *y0};
          if (!(naive_height(pt.point()) > h_max)) {
            points.push_back(pt);
            if (!y0->is_zero()) points.push_back(IntegralPoint{x0, -*y0});
          }
        }
      }
      more = sc.advance();
    }
  }
  std::sort(points.begin(), points.end(),
            [](const IntegralPoint& a, const IntegralPoint& b) {
              if (a.x != b.x) return Poly::less(a.x, b.x);
              return Poly::less(a.y, b.y);
            });
  return points;
}

// All integral points. The degree bound comes from the height inequality
// h(P) <= d - 1 for integral points, which needs f_1 nonconstant.
inline std::vector<IntegralPoint> enumerate_integral_points(
    const CurveConfig& cfg) {
  return enumerate_integral_points(cfg, Rat(davenport_height_bound(cfg)));
}

// Transports a point to the model with t replaced by 1/t (the curve
// invert_t_model produces): (x, y) -> (t^{2 chi} x(1/t), t^{3 chi} y(1/t)).
// Preserves canonical heights of points of height <= chi.
inline PointE invert_t_point(const CurveConfig& cfg, const PointE& P) {
  if (P.infinity) return P;
  auto reverse_arg = [](const RatFunc& r) {
    int n = std::max(r.num().deg(), r.den().deg());
    return RatFunc(r.num().reversed(n), r.den().reversed(n));
  };
  RatFunc xr = reverse_arg(P.x);
  RatFunc yr = reverse_arg(P.y);
  return PointE(RatFunc(xr.num().shifted(2 * cfg.chi), xr.den()),
                RatFunc(yr.num().shifted(3 * cfg.chi), yr.den()));
}

// Base change of a point to an extension field.
inline PointE lifted_point(const FieldCtx& big, const PointE& P) {
  if (P.infinity) return P;
  return PointE(RatFunc(P.x.num().lifted(big), P.x.den().lifted(big)),
                RatFunc(P.y.num().lifted(big), P.y.den().lifted(big)));
}

}  // namespace descentff

#endif  // DESCENTFF_MORDELL_HPP

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

// Torsion subgroups of Pic(C) and of its extension Pic(C, Q.D) by
// rational coefficients on a reduced divisor D, for superelliptic
// covers: exhaustive class searches with principality certificates,
// the height-truncated subsets W_n, theta characteristics, fiber
// splitting data over the distinguished divisors, and the rank bounds
// the two descents produce. A divisor class with denominator n is kept
// as the integral divisor n times it; a class is n-torsion exactly
// when that integral divisor is principal.

#ifndef DESCENTFF_PICARD_HPP
#define DESCENTFF_PICARD_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "descentff/auxcurves.hpp"
#include "descentff/errors.hpp"
#include "descentff/factor.hpp"
#include "descentff/model.hpp"
#include "descentff/poly.hpp"

namespace descentff {

inline constexpr int64_t kDefaultClassSearchCap = 120000;
inline constexpr int kMaxClassSearchGenus = 4;

// Divisor with coefficients in (1/den)Z, stored as the integral divisor
// num = den * (the divisor). Coefficients at places outside the marked
// support stay divisible by den.
struct QDivisor {
  Divisor num;
  int64_t den = 1;

  // Numerator coefficient reduced to {0, ..., den-1}.
  int64_t residue(const Place& P) const {
    int64_t c = num.coeff(P) % den;
    return c < 0 ? c + den : c;
  }

  QDivisor operator+(const QDivisor& o) const {
    if (den != o.den) throw PreconditionUnmet("mixed denominators");
    return QDivisor{num + o.num, den};
  }
  QDivisor operator-(const QDivisor& o) const {
    if (den != o.den) throw PreconditionUnmet("mixed denominators");
    return QDivisor{num - o.num, den};
  }
  QDivisor scaled(int64_t c) const { return QDivisor{num.scaled(c), den}; }

  std::string str() const {
    return "(1/" + std::to_string(den) + ")*(" + num.str() + ")";
  }
};

// Quotient of a divisor with all coefficients divisible by c.
inline Divisor divisor_div_exact(const Divisor& D, int64_t c) {
  Divisor out;
  for (const auto& [key, pm] : D.terms) {
    if (pm.second % c != 0)
      throw InternalError("divisor coefficient not divisible");
    out.add(pm.first, pm.second / c);
  }
  return out;
}

struct PicClass {
  QDivisor rep;
  std::string key;
};

// An n-torsion subgroup: classes[0] is the zero class. The addition
// table (indices into classes) is filled when the group is small.
struct TorsionSet {
  int n = 0;
  std::vector<Place> marked;  // support carrying fractional coefficients
  std::vector<PicClass> classes;
  std::vector<std::vector<int>> table;
  std::vector<int> neg;
  int dim = 0;

  int64_t size() const { return static_cast<int64_t>(classes.size()); }
  bool has_table() const { return !table.empty(); }
};

// A theta characteristic: a class X of degree g - 1 with 2X canonical.
// ell = l(X) decides parity and effectivity.
struct ThetaChar {
  Divisor rep;
  int ell = 0;

  bool odd() const { return ell % 2 == 1; }
  bool effective() const { return ell >= 1; }
  bool vanishing() const { return ell >= 2; }
};

// Splitting of the fiber of a cover above one base point.
struct FiberSplit {
  bool infinite = false;
  Poly base;
  int closed = 0;    // closed points in the fiber
  int rational = 0;  // closed points with trivial residue extension
};

class PicardGroup {
 public:
  explicit PicardGroup(const SuperCurve& C,
                       int64_t search_cap = kDefaultClassSearchCap)
      : C_(&C), cap_(search_cap), genus_(static_cast<int>(C.genus())) {
    for (int r = 1; r <= genus_ + 3 && base_.base.is_zero(); r++) {
      std::vector<Place> ps = C.places_of_degree(r);
      if (!ps.empty()) base_ = ps[0];
    }
    if (base_.base.is_zero())
      throw InternalError("no closed point of small degree");
  }

  PicardGroup(const PicardGroup&) = delete;
  PicardGroup& operator=(const PicardGroup&) = delete;

  const SuperCurve& curve() const { return *C_; }
  int genus() const { return genus_; }
  const Place& base_place() const { return base_; }
  int base_degree() const { return base_.degree(); }

  // Principality of a degree-zero divisor, decided by l(D) >= 1.
  bool is_principal(const Divisor& D) {
    if (D.degree() != 0) throw PreconditionUnmet("divisor degree nonzero");
    if (D.is_zero()) return true;
    std::string s = D.str();
    auto it = principal_.find(s);
    if (it != principal_.end()) return it->second;
    bool ans = C_->rr_dim(D) >= 1;
    principal_.emplace(std::move(s), ans);
    return ans;
  }

  // Canonical key of a degree-zero class when the base place is
  // rational: the unique effective E with E ~ D + rA at the minimal r.
  // At that r the space L(D + rA) is one dimensional, since a section
  // vanishing at A would contradict minimality.
  std::string class_key(const Divisor& D) {
    if (D.degree() != 0) throw PreconditionUnmet("divisor degree nonzero");
    if (base_degree() != 1)
      throw PreconditionUnmet("canonical keys need a rational base place");
    std::string s = D.str();
    auto it = keys_.find(s);
    if (it != keys_.end()) return it->second;
    Divisor shifted = D;
    for (int r = 0; r <= genus_; r++) {
      std::vector<FFElem> basis = C_->rr_basis(shifted);
      if (!basis.empty()) {
        if (basis.size() != 1)
          throw InternalError("reduction space not one dimensional");
        Divisor E = C_->divisor_of(basis[0]) + shifted;
        if (!E.is_effective()) throw InternalError("reduction not effective");
        std::string key = E.str();
        keys_.emplace(std::move(s), key);
        return key;
      }
      shifted.add(base_, 1);
    }
    throw InternalError("class reduction exceeded the genus");
  }

  // Pic(C)[n] by exhaustive search over reduced representatives.
  TorsionSet pic_torsion(int n) { return pic_qd_torsion(Divisor{}, n); }

  // Pic(C, Q.D)[n] for a reduced effective divisor D = sum of marked
  // places. A class is (1/n) * (sum j_i P_i + n Z); it is n-torsion
  // exactly when sum j_i P_i + n Z is principal, which forces
  // sum j_i deg P_i = 0 mod n. Fractional vectors are walked in odometer
  // order and the integral part Z over all classes of the forced degree.
  TorsionSet pic_qd_torsion(const Divisor& D, int n) {
    if (n != 2 && n != 3) throw PreconditionUnmet("torsion order must be 2 or 3");
    if (genus_ > kMaxClassSearchGenus)
      throw SearchTooLarge("genus " + std::to_string(genus_) +
                           " exceeds the class search limit " +
                           std::to_string(kMaxClassSearchGenus));
    TorsionSet T;
    T.n = n;
    for (const auto& [key, pm] : D.terms) {
      if (pm.second != 1)
        throw PreconditionUnmet("support divisor must be reduced");
      T.marked.push_back(pm.first);
    }
    T.classes.push_back(PicClass{QDivisor{Divisor{}, n}, "0"});

    size_t r = T.marked.size();
    std::vector<int> j(r, 0);
    while (true) {
      int64_t wdeg = 0;
      for (size_t i = 0; i < r; i++) wdeg += j[i] * T.marked[i].degree();
      if (wdeg % n == 0) {
        Divisor frac;
        for (size_t i = 0; i < r; i++) frac.add(T.marked[i], j[i]);
        std::string jtag;
        for (size_t i = 0; i < r; i++)
          jtag += std::to_string(j[i]) + (i + 1 < r ? "," : "");
        for_each_class_of_degree(-wdeg / n, [&](const Divisor& Z) {
          Divisor num = frac + Z.scaled(n);
          if (!is_principal(num)) return;
          QDivisor cand{num, static_cast<int64_t>(n)};
          if (find_class(T, cand) >= 0) return;
          std::string key = "j(" + jtag + ")|";
          if (base_degree() == 1) {
            Divisor z0 = Z;
            z0.add(base_, wdeg / n);
            key += class_key(z0);
          } else {
            key += "#" + std::to_string(T.classes.size());
          }
          T.classes.push_back(PicClass{std::move(cand), std::move(key)});
        });
      }
      size_t pos = 0;
      while (pos < r && ++j[pos] == n) j[pos++] = 0;
      if (pos == r) break;
    }

    int64_t sz = T.size();
    T.dim = 0;
    while (sz > 1 && sz % n == 0) {
      sz /= n;
      T.dim++;
    }
    if (sz != 1) throw InternalError("torsion cardinality not a power of n");
    if (T.size() <= 100) fill_table(T);
    return T;
  }

  // Index of a class in the set, or -1. Equality needs matching
  // fractional residues and a principal integral difference.
  int find_class(const TorsionSet& T, const QDivisor& x) {
    for (size_t i = 0; i < T.classes.size(); i++) {
      const QDivisor& y = T.classes[i].rep;
      bool same = true;
      for (const Place& P : T.marked)
        if (x.residue(P) != y.residue(P)) {
          same = false;
          break;
        }
      if (!same) continue;
      Divisor diff = divisor_div_exact(x.num - y.num, T.n);
      if (is_principal(diff)) return static_cast<int>(i);
    }
    return -1;
  }

  // Members of { classes whose representative admits an effective shift
  // by (bound / deg Dinf) * Dinf }, decided by l of the per-place floor.
  std::vector<int> w_members(const TorsionSet& T, int64_t bound_num,
                             int64_t bound_den) {
    Divisor Dinf = C_->pullback_infinity();
    int64_t W = Dinf.degree();
    std::vector<int> out;
    for (size_t i = 0; i < T.classes.size(); i++) {
      if (is_w_member(T.classes[i].rep, bound_num, bound_den, Dinf, W))
        out.push_back(static_cast<int>(i));
    }
    return out;
  }

  bool is_w_member(const QDivisor& rep, int64_t bound_num, int64_t bound_den,
                   const Divisor& Dinf, int64_t W) {
    // Coefficient at P of rep + (bound / W) Dinf is
    // num_P / den + bound * m_P / (W * bound_den); take per-place floors.
    Divisor floored;
    std::map<std::string, std::pair<Place, int64_t>> support = rep.num.terms;
    for (const auto& [key, pm] : Dinf.terms)
      if (!support.count(key)) support.emplace(key, std::make_pair(pm.first, 0));
    for (const auto& [key, pm] : support) {
      int64_t num_p = rep.num.coeff(pm.first);
      int64_t m_p = Dinf.coeff(pm.first);
      int64_t top = num_p * bound_den * W + bound_num * rep.den * m_p;
      int64_t bot = rep.den * bound_den * W;
      int64_t fl = top >= 0 ? top / bot : -((-top + bot - 1) / bot);
      floored.add(pm.first, fl);
    }
    if (floored.degree() < 0) return false;
    return C_->rr_dim(floored) >= 1;
  }

  // All classes X with 2X canonical, with l(X) attached.
  std::vector<ThetaChar> thetas() {
    std::vector<ThetaChar> out;
    if (genus_ == 0) return out;
    if (genus_ > kMaxClassSearchGenus)
      throw SearchTooLarge("genus " + std::to_string(genus_) +
                           " exceeds the class search limit " +
                           std::to_string(kMaxClassSearchGenus));
    const Divisor& K = C_->canonical_divisor();
    for_each_class_of_degree(genus_ - 1, [&](const Divisor& X) {
      if (!is_principal(X.scaled(2) - K)) return;
      for (const ThetaChar& th : out)
        if (is_principal(X - th.rep)) return;
      out.push_back(ThetaChar{X, C_->rr_dim(X)});
    });
    return out;
  }

  // The half of the canonical class supported at infinity: the divisor
  // ((g - 1) / deg Dinf) * Dinf when its per-place coefficients are
  // integral. Checked to double to the canonical class.
  Divisor half_canonical() {
    Divisor Dinf = C_->pullback_infinity();
    int64_t W = Dinf.degree();
    Divisor half;
    for (const auto& [key, pm] : Dinf.terms) {
      int64_t c = pm.second * (genus_ - 1);
      if (c % W != 0)
        throw PreconditionUnmet("half canonical not integral at infinity");
      half.add(pm.first, c / W);
    }
    if (!is_principal(half.scaled(2) - C_->canonical_divisor()))
      throw InternalError("half canonical does not double to canonical");
    return half;
  }

  // Walks every divisor class of the given degree at least once, as
  // E - ((G - dg) / b) * base with E effective of degree G. Any class
  // shifted by that multiple of the base place has degree G >= g and
  // so admits an effective representative.
  void for_each_class_of_degree(int64_t dg,
                                const std::function<void(const Divisor&)>& cb) {
    int64_t b = base_degree();
    int64_t G = std::max<int64_t>(genus_, dg);
    while ((G - dg) % b != 0) G++;
    Divisor shift = Divisor::of_place(base_, -(G - dg) / b);
    for_each_effective(G, [&](const Divisor& E) { cb(E + shift); });
  }

  // Effective divisors of degree exactly G, in a fixed order. Guarded
  // by the search cap; monic polynomials of degree G embed into this
  // set, so q^G is a lower bound checked before listing places.
  void for_each_effective(int64_t G,
                          const std::function<void(const Divisor&)>& cb) {
    if (G < 0) return;
    if (G == 0) {
      cb(Divisor{});
      return;
    }
    int64_t lower = 1;
    for (int64_t i = 0; i < G; i++) {
      lower *= static_cast<int64_t>(C_->field().q);
      if (lower > cap_)
        throw SearchTooLarge("at least " + std::to_string(lower) +
                             " candidate divisors of degree " +
                             std::to_string(G) + " exceed the cap " +
                             std::to_string(cap_));
    }
    std::vector<Place> pool;
    for (int r = 1; r <= G; r++)
      for (const Place& P : C_->places_of_degree(r)) pool.push_back(P);
    std::vector<int64_t> count(G + 1, 0);
    count[0] = 1;
    for (const Place& P : pool)
      for (int64_t de = P.degree(); de <= G; de++) count[de] += count[de - P.degree()];
    if (count[G] > cap_)
      throw SearchTooLarge(std::to_string(count[G]) +
                           " candidate divisors of degree " + std::to_string(G) +
                           " exceed the cap " + std::to_string(cap_));
    Divisor cur;
    walk_pool(pool, 0, G, cur, cb);
  }

 private:
  void walk_pool(const std::vector<Place>& pool, size_t idx, int64_t remaining,
                 Divisor& cur, const std::function<void(const Divisor&)>& cb) {
    if (remaining == 0) {
      cb(cur);
      return;
    }
    if (idx == pool.size()) return;
    int64_t dp = pool[idx].degree();
    walk_pool(pool, idx + 1, remaining, cur, cb);
    int64_t used = 0;
    while (used + dp <= remaining) {
      cur.add(pool[idx], 1);
      used += dp;
      walk_pool(pool, idx + 1, remaining - used, cur, cb);
    }
    if (used > 0) cur.add(pool[idx], -used / dp);
  }

  void fill_table(TorsionSet& T) {
    size_t m = T.classes.size();
    T.table.assign(m, std::vector<int>(m, -1));
    T.neg.assign(m, -1);
    for (size_t i = 0; i < m; i++) {
      for (size_t k = 0; k < m; k++) {
        QDivisor sum = T.classes[i].rep + T.classes[k].rep;
        int idx = find_class(T, sum);
        if (idx < 0) throw InternalError("torsion set not closed under sum");
        T.table[i][k] = idx;
        if (idx == 0) T.neg[i] = static_cast<int>(k);
      }
      if (T.neg[i] < 0) throw InternalError("torsion class without negative");
    }
  }

  const SuperCurve* C_;
  int64_t cap_;
  int genus_;
  Place base_;
  std::unordered_map<std::string, bool> principal_;
  std::unordered_map<std::string, std::string> keys_;
};

// --- fiber splitting over the distinguished divisors ---------------------------

inline FiberSplit fiber_split_of(const std::vector<Place>& fiber, bool infinite,
                                 const Poly& base) {
  FiberSplit out;
  out.infinite = infinite;
  out.base = base;
  out.closed = static_cast<int>(fiber.size());
  for (const Place& P : fiber)
    if (P.reldeg == 1 && P.e == 1) out.rational++;
  return out;
}

// Fibers of the cubic cover above the base points of its distinguished
// divisor: the roots of f3, and infinity when d = 3 mod 6.
inline std::vector<FiberSplit> fiber_splits_c2(const CurveConfig& cfg,
                                               const SuperCurve& c2) {
  std::vector<FiberSplit> out;
  if (cfg.decomp[3].deg() > 0)
    for (auto& [pi, e] : factor(cfg.decomp[3]).factors)
      out.push_back(fiber_split_of(c2.places_over(pi), false, pi));
  if (cfg.d % 6 == 3)
    out.push_back(fiber_split_of(c2.infinite_places(), true, Poly{}));
  return out;
}

// Fibers of a quadratic cover above the base points of its
// distinguished divisor: the roots of f2 f4, and infinity when
// d = 2, 4 mod 6.
inline std::vector<FiberSplit> fiber_splits_c3(const CurveConfig& cfg,
                                               const SuperCurve& c3) {
  std::vector<FiberSplit> out;
  Poly f24 = cfg.decomp[2] * cfg.decomp[4];
  if (f24.deg() > 0)
    for (auto& [pi, e] : factor(f24).factors)
      out.push_back(fiber_split_of(c3.places_over(pi), false, pi));
  if (cfg.d % 6 == 2 || cfg.d % 6 == 4)
    out.push_back(fiber_split_of(c3.infinite_places(), true, Poly{}));
  return out;
}

// Rationality data of all three distinguished divisors. For the cubic
// cover each fiber contributes #closed - 1; for the quadratic covers a
// fiber counts when it is two rational points.
struct EpsilonData {
  std::vector<FiberSplit> d2, d3, d3p;
  std::vector<int> eps_v;
  int eps2_sum = 0;
  int eps3 = 0;
  int eps3p = 0;
};

inline EpsilonData epsilon_data(const CurveConfig& cfg) {
  EpsilonData out;
  AuxCover c2 = make_c2(cfg);
  AuxCover c3 = make_c3(cfg);
  AuxCover c3p = make_c3_prime(cfg);
  out.d2 = fiber_splits_c2(cfg, c2.curve);
  out.d3 = fiber_splits_c3(cfg, c3.curve);
  out.d3p = fiber_splits_c3(cfg, c3p.curve);
  for (const FiberSplit& fs : out.d2) {
    out.eps_v.push_back(fs.closed - 1);
    out.eps2_sum += fs.closed - 1;
  }
  for (const FiberSplit& fs : out.d3)
    if (fs.rational == 2) out.eps3++;
  for (const FiberSplit& fs : out.d3p)
    if (fs.rational == 2) out.eps3p++;
  return out;
}

// --- rank bounds ----------------------------------------------------------------

// The geometric bound 2 (sum deg f_i - c) with c = 2 when 6 | d and 1
// otherwise, halved when the base field has no primitive cube root of
// unity.
inline int geometric_rank_bound(const CurveConfig& cfg) {
  int sum = 0;
  for (int i = 1; i <= 5; i++) sum += cfg.decomp[i].deg();
  int c = cfg.d % 6 == 0 ? 2 : 1;
  int bound = 2 * (sum - c);
  if (!cfg.field().zeta3) bound /= 2;
  return bound;
}

struct RankBound2 {
  int dim_pic2 = 0;
  int eps_sum = 0;
  int arithmetic = 0;    // dim Pic(C2)[2] + sum eps_v
  int intermediate = 0;  // dim Pic(C2, Q.D2)[2]
  int geometric = 0;
};

inline RankBound2 rank_bound_2_data(const CurveConfig& cfg,
                                    int64_t cap = kDefaultClassSearchCap) {
  AuxCover c2 = make_c2(cfg);
  PicardGroup pic(c2.curve, cap);
  RankBound2 out;
  out.dim_pic2 = pic.pic_torsion(2).dim;
  for (const FiberSplit& fs : fiber_splits_c2(cfg, c2.curve))
    out.eps_sum += fs.closed - 1;
  out.arithmetic = out.dim_pic2 + out.eps_sum;
  out.intermediate =
      pic.pic_qd_torsion(descent_divisor_c2(cfg, c2.curve), 2).dim;
  out.geometric = geometric_rank_bound(cfg);
  return out;
}

inline int rank_bound_2(const CurveConfig& cfg,
                        int64_t cap = kDefaultClassSearchCap) {
  return rank_bound_2_data(cfg, cap).arithmetic;
}

struct RankBound3 {
  int dim_pic3 = 0;
  int dim_pic3p = 0;
  int eps = 0;
  int eps_p = 0;
  int arithmetic = 0;    // dim Pic(C3)[3] + dim Pic(C3')[3] + eps + eps'
  int intermediate = 0;  // dim Pic(C3, Q.D3)[3] + dim Pic(C3', Q.D3')[3]
};

inline RankBound3 rank_bound_3_data(const CurveConfig& cfg,
                                    int64_t cap = kDefaultClassSearchCap) {
  AuxCover c3 = make_c3(cfg);
  AuxCover c3p = make_c3_prime(cfg);
  PicardGroup pic(c3.curve, cap);
  PicardGroup picp(c3p.curve, cap);
  RankBound3 out;
  out.dim_pic3 = pic.pic_torsion(3).dim;
  out.dim_pic3p = picp.pic_torsion(3).dim;
  for (const FiberSplit& fs : fiber_splits_c3(cfg, c3.curve))
    if (fs.rational == 2) out.eps++;
  for (const FiberSplit& fs : fiber_splits_c3(cfg, c3p.curve))
    if (fs.rational == 2) out.eps_p++;
  out.arithmetic = out.dim_pic3 + out.dim_pic3p + out.eps + out.eps_p;
  out.intermediate =
      pic.pic_qd_torsion(descent_divisor_c3(cfg, c3.curve), 3).dim +
      picp.pic_qd_torsion(descent_divisor_c3(cfg, c3p.curve), 3).dim;
  return out;
}

inline int rank_bound_3(const CurveConfig& cfg,
                        int64_t cap = kDefaultClassSearchCap) {
  return rank_bound_3_data(cfg, cap).arithmetic;
}

// --- stabilization along field extensions ---------------------------------------

// Torsion cardinality along the doubling tower of extensions. The walk
// stops early once the count reaches n^(2g): from then on Frobenius
// acts trivially on the n-torsion and the count is the geometric one.
// Two consecutive agreements along the tower stop the walk as well but
// certify nothing; `certified` records which exit fired.
struct StabilizationReport {
  int n = 0;
  int64_t full = 0;  // n^(2 genus)
  std::vector<std::pair<uint32_t, int64_t>> counts;
  uint32_t ext_used = 0;
  int64_t count = 0;
  bool agreed_twice = false;
  bool certified = false;
};

template <typename Factory>
StabilizationReport stabilize_torsion(Factory&& make, int n,
                                      uint32_t max_ext = 12,
                                      int64_t cap = kDefaultClassSearchCap) {
  StabilizationReport rep;
  rep.n = n;
  int agreements = 0;
  for (uint32_t m = 1; m <= max_ext; m *= 2) {
    int64_t card;
    try {
      SuperCurve C = make(m);
      if (rep.full == 0) {
        rep.full = 1;
        for (int64_t i = 0; i < 2 * C.genus(); i++) rep.full *= n;
      }
      PicardGroup pic(C, cap);
      card = pic.pic_torsion(n).size();
    } catch (const Error&) {
      break;  // field table or search budget exhausted; report what we have
    }
    if (!rep.counts.empty()) {
      if (card < rep.count || card % rep.count != 0)
        throw InternalError("torsion count not monotone along extensions");
      agreements = card == rep.count ? agreements + 1 : 0;
    }
    rep.counts.emplace_back(m, card);
    rep.count = card;
    rep.ext_used = m;
    if (card == rep.full) {
      rep.certified = true;
      break;
    }
    if (agreements >= 2) {
      rep.agreed_twice = true;
      break;
    }
  }
  return rep;
}

}  // namespace descentff

#endif  // DESCENTFF_PICARD_HPP

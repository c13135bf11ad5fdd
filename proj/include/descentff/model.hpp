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
 * @file model.hpp
 * The curve family y^2 = x^3 + f(t) over GF(q)(t): configuration data
 * derived from the sixth-power-free decomposition of f, reduction types,
 * genera of the auxiliary covers, and the Davenport degree bound.
 */

#ifndef DESCENTFF_MODEL_HPP
#define DESCENTFF_MODEL_HPP

#include <array>
#include <string>

#include "descentff/errors.hpp"
#include "descentff/factor.hpp"
#include "descentff/poly.hpp"

namespace descentff {

// delta_1..delta_5 of the degree-6 homogenization u^6 f(t/u); the weighted
// sum is always 6.
struct TypeQuintuple {
  std::array<int, 6> delta{};  // delta[1]..delta[5]

  int weighted_sum() const {
    int s = 0;
    for (int i = 1; i <= 5; ++i) s += i * delta[i];
    return s;
  }
  std::string str() const {
    std::string s = "(";
    for (int i = 1; i <= 5; ++i)
      s += std::to_string(delta[i]) + (i < 5 ? "," : ")");
    return s;
  }
  friend bool operator==(const TypeQuintuple& a, const TypeQuintuple& b) {
    return a.delta == b.delta;
  }
};

enum class KodairaType { Good, II, IV, I0star, IVstar, IIstar };

inline std::string kodaira_name(KodairaType t) {
  switch (t) {
    case KodairaType::Good: return "good";
    case KodairaType::II: return "II";
    case KodairaType::IV: return "IV";
    case KodairaType::I0star: return "I0*";
    case KodairaType::IVstar: return "IV*";
    case KodairaType::IIstar: return "II*";
  }
  return "?";
}

struct KodairaFiber {
  bool at_infinity = false;
  Poly place;  // monic irreducible; meaningless when at_infinity
  KodairaType type = KodairaType::Good;
};

struct CurveConfig {
  Poly f;
  SixthPowerFreeDecomp decomp;
  int d = 0;    // deg f = sum i * deg f_i
  int chi = 0;  // ceil(d / 6)

  const FieldCtx& field() const { return f.field(); }
  // Base change to an extension field.
  CurveConfig lifted(const FieldCtx& big) const;
};

inline CurveConfig make_curve(const Poly& f) {
  if (f.deg() < 1)
    throw HypothesisViolated("f must be a nonconstant polynomial");
  CurveConfig cfg;
  cfg.f = f;
  cfg.decomp = sixth_power_free_decompose(f);
  cfg.d = cfg.decomp.weighted_degree;
  cfg.chi = (cfg.d + 5) / 6;
  return cfg;
}

inline CurveConfig CurveConfig::lifted(const FieldCtx& big) const {
  return make_curve(f.lifted(big));
}

// Type quintuple of the homogenized sextic form: the finite part contributes
// deg f_i to delta_i and the line at infinity contributes one factor of
// multiplicity 6 - d when d < 6.
inline TypeQuintuple classify_type(const CurveConfig& cfg) {
  if (cfg.f.deg() > 6)
    throw DegreeTooLarge("type classification requires deg f <= 6, got " +
                         std::to_string(cfg.f.deg()));
  TypeQuintuple t;
  for (int i = 1; i <= 5; ++i) t.delta[i] = cfg.decomp.d[i];
  if (cfg.d < 6) t.delta[6 - cfg.d] += 1;
  return t;
}

// Additive reduction fibers: multiplicity i of f at a place gives the fiber
// II, IV, I0*, IV*, II* for i = 1..5; at infinity the class of -d mod 6
// plays the role of the multiplicity.
inline std::vector<KodairaFiber> kodaira_fibers(const CurveConfig& cfg) {
  static constexpr KodairaType by_mult[6] = {
      KodairaType::Good, KodairaType::II,     KodairaType::IV,
      KodairaType::I0star, KodairaType::IVstar, KodairaType::IIstar};
  std::vector<KodairaFiber> out;
  for (int i = 1; i <= 5; ++i) {
    if (cfg.decomp.d[i] == 0) continue;
    for (auto& [g, e] : factor(cfg.decomp.f[i]).factors)
      out.push_back(KodairaFiber{false, g, by_mult[i]});
  }
  KodairaFiber inf;
  inf.at_infinity = true;
  inf.type = by_mult[(6 - cfg.d % 6) % 6];
  out.push_back(inf);
  return out;
}

// Genus of the cubic cover x^3 = -f: (d1+d2+d4+d5) - 2 when 3 | d, else - 1.
inline int genus_c2(const CurveConfig& cfg) {
  int s = cfg.decomp.d[1] + cfg.decomp.d[2] + cfg.decomp.d[4] +
          cfg.decomp.d[5];
  if (s == 0)
    throw DegenerateCurve("f is a cube up to units; the cubic cover splits");
  return cfg.d % 3 == 0 ? s - 2 : s - 1;
}

// Genus of the hyperelliptic cover y^2 = f: ((d1+d3+d5) - 2) / 2 when d is
// even, else ((d1+d3+d5) - 1) / 2.
inline int genus_c3(const CurveConfig& cfg) {
  int s = cfg.decomp.d[1] + cfg.decomp.d[3] + cfg.decomp.d[5];
  if (s == 0)
    throw DegenerateCurve("f is a square up to units; the double cover splits");
  return cfg.d % 2 == 0 ? (s - 2) / 2 : (s - 1) / 2;
}

// Every integral point has naive height at most d - 1; valid only when f_1
// is nonconstant.
inline int davenport_height_bound(const CurveConfig& cfg) {
  if (cfg.decomp.d[1] == 0)
    throw HypothesisViolated(
        "the degree bound requires a nonconstant multiplicity-one part");
  return cfg.d - 1;
}

// Degree gap check for balanced cube-square differences: requires
// deg g = 2M, deg h = 3M, g^3 != h^2, and a multiplicity-one irreducible
// factor in g^3 - h^2; returns deg(g^3 - h^2), which must be >= M + 1.
inline int check_davenport(const Poly& g, const Poly& h) {
  if (g.deg() < 1 || g.deg() % 2 != 0)
    throw PreconditionUnmet("need deg g = 2M with M >= 1");
  int M = g.deg() / 2;
  if (h.deg() != 3 * M) throw PreconditionUnmet("need deg h = 3M");
  Poly diff = g.pow(3) - h.pow(2);
  if (diff.is_zero()) throw PreconditionUnmet("g^3 = h^2");
  bool has_mult_one = false;
  for (auto& [pi, e] : factor(diff).factors)
    if (e == 1) {
      has_mult_one = true;
      break;
    }
  if (!has_mult_one)
    throw PreconditionUnmet("no multiplicity-one factor in g^3 - h^2");
  return diff.deg();
}

// The reciprocal model y^2 = x^3 + t^(6 chi) f(1/t), which exchanges the
// strata near t = 0 and t = infinity while preserving canonical heights on
// the height <= chi range.
inline CurveConfig invert_t_model(const CurveConfig& cfg) {
  Poly rev = cfg.f.reversed();  // t^d f(1/t)
  int shift = 6 * cfg.chi - cfg.d;
  return make_curve(rev.shifted(shift));
}

}  // namespace descentff

#endif  // DESCENTFF_MODEL_HPP

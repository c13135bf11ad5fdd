// Torsion class searches in Picard groups of superelliptic covers and in
// their rational-coefficient extensions, cross-checked against independent
// chord-tangent arithmetic, residue counts, theta characteristics, and
// point counts over extension fields.

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "descentff/model.hpp"
#include "descentff/picard.hpp"

using namespace descentff;

namespace {

Poly P(const FieldCtx& F, const std::string& s) { return parse_poly(F, s); }

// --- chord-tangent oracle on y^2 = x^3 + c2 x^2 + c1 x + c0 over F_p -----
//
// Plain modular arithmetic on int64, independent of the function-field
// machinery. Counts n-torsion points of the curve group directly.

struct AffPt {
  bool inf = true;
  int64_t x = 0, y = 0;
};

int64_t mod_inv(int64_t a, int64_t p) {
  int64_t r = 1, b = ((a % p) + p) % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

AffPt ec_add(const AffPt& A, const AffPt& B, const std::array<int64_t, 3>& c,
             int64_t p) {
  if (A.inf) return B;
  if (B.inf) return A;
  int64_t s;
  if (A.x == B.x) {
    if ((A.y + B.y) % p == 0) return AffPt{};
    s = ((3 * A.x % p * A.x + 2 * c[2] % p * A.x + c[1]) % p) *
        mod_inv(2 * A.y, p) % p;
  } else {
    s = (B.y - A.y + p) % p * mod_inv((B.x - A.x + p) % p, p) % p;
  }
  int64_t x3 = ((s * s - c[2] - A.x - B.x) % p + 3 * p) % p;
  int64_t y3 = ((s * ((A.x - x3 + p) % p) - A.y) % p + 2 * p) % p;
  return AffPt{false, x3, y3};
}

// Number of points killed by n on y^2 = x^3 + c2 x^2 + c1 x + c0.
int64_t ec_torsion_count(const std::array<int64_t, 3>& c, int64_t p, int n) {
  std::vector<AffPt> pts = {AffPt{}};
  for (int64_t x = 0; x < p; x++) {
    int64_t rhs = ((x * x % p * x + c[2] * x % p * x + c[1] * x + c[0]) % p + p) % p;
    for (int64_t y = 0; y < p; y++)
      if (y * y % p == rhs) pts.push_back(AffPt{false, x, y});
  }
  int64_t cnt = 0;
  for (const AffPt& pt : pts) {
    AffPt acc;
    for (int i = 0; i < n; i++) acc = ec_add(acc, pt, c, p);
    if (acc.inf) cnt++;
  }
  return cnt;
}

// Brute-force root counts of y^n = v over F_p, for fiber splitting checks.
int count_power_roots(int64_t v, int64_t p, int n) {
  int cnt = 0;
  for (int64_t y = 0; y < p; y++) {
    int64_t w = 1;
    for (int i = 0; i < n; i++) w = w * y % p;
    if (w == ((v % p) + p) % p) cnt++;
  }
  return cnt;
}

std::vector<std::string> key_suffixes(const TorsionSet& T) {
  std::vector<std::string> out;
  for (const PicClass& cl : T.classes) {
    size_t bar = cl.key.find('|');
    out.push_back(bar == std::string::npos ? cl.key : cl.key.substr(bar + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int64_t> residue_vector(const TorsionSet& T, int idx) {
  std::vector<int64_t> out;
  for (const Place& Pm : T.marked) out.push_back(T.classes[idx].rep.residue(Pm));
  return out;
}

bool zero_residues(const TorsionSet& T, int idx) {
  for (const Place& Pm : T.marked)
    if (T.classes[idx].rep.residue(Pm) != 0) return false;
  return true;
}

TEST(PicardTest, GenusZeroCoverHasOnlyTheTrivialClass) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^2 + 1"));
  AuxCover c3 = make_c3(cfg);
  ASSERT_EQ(c3.curve.genus(), 0);
  PicardGroup pic(c3.curve);
  for (int n : {2, 3}) {
    TorsionSet T = pic.pic_torsion(n);
    EXPECT_EQ(T.size(), 1);
    EXPECT_EQ(T.dim, 0);
    ASSERT_TRUE(T.has_table());
    EXPECT_EQ(T.table[0][0], 0);
    EXPECT_EQ(T.neg[0], 0);
  }
}

TEST(PicardTest, TorsionCountsMatchChordTangentArithmeticOnCubicModels) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  // Squarefree cubics f: the double cover Y^2 = f is the curve itself,
  // and its degree-zero classes form the chord-tangent group.
  struct Inst {
    std::string f;
    std::array<int64_t, 3> c;  // c[i] is the coefficient of x^i
  };
  std::vector<Inst> insts = {
      {"t^3 + 2", {{2, 0, 0}}},     {"t^3 + 1", {{1, 0, 0}}},
      {"t^3 + 6*t", {{0, 6, 0}}},   {"t^3 + t + 1", {{1, 1, 0}}},
      {"t^3 + 3*t + 2", {{2, 3, 0}}}};
  for (const Inst& in : insts) {
    CurveConfig cfg = make_curve(P(F, in.f));
    AuxCover c3 = make_c3(cfg);
    ASSERT_EQ(c3.curve.genus(), 1);
    PicardGroup pic(c3.curve);
    for (int n : {2, 3}) {
      SCOPED_TRACE(in.f + " n=" + std::to_string(n));
      EXPECT_EQ(pic.pic_torsion(n).size(), ec_torsion_count(in.c, 7, n));
    }
  }
  // Hand anchors: 3x(x^3 + 4f(0)) has all four roots rational for f = t^3+2
  // (x = 0 and the cube roots of -8 = 6), none beyond x = 0 for f = t^3+1.
  {
    CurveConfig cfg = make_curve(P(F, "t^3 + 2"));
    AuxCover c3 = make_c3(cfg);
    EXPECT_EQ(PicardGroup(c3.curve).pic_torsion(3).size(), 9);
  }
  {
    CurveConfig cfg = make_curve(P(F, "t^3 + 1"));
    AuxCover c3 = make_c3(cfg);
    EXPECT_EQ(PicardGroup(c3.curve).pic_torsion(3).size(), 3);
    EXPECT_EQ(PicardGroup(c3.curve).pic_torsion(2).size(), 4);
  }
}

TEST(PicardTest, TorsionSetsFormElementaryAbelianGroups) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  struct Inst {
    std::string f;
    int n;
    int64_t size;
  };
  std::vector<Inst> insts = {{"t^3 + 6*t", 2, 4}, {"t^3 + 2", 3, 9}};
  for (const Inst& in : insts) {
    SCOPED_TRACE(in.f);
    CurveConfig cfg = make_curve(P(F, in.f));
    AuxCover c3 = make_c3(cfg);
    PicardGroup pic(c3.curve);
    TorsionSet T = pic.pic_torsion(in.n);
    ASSERT_EQ(T.size(), in.size);
    ASSERT_TRUE(T.has_table());
    int64_t pw = 1;
    for (int i = 0; i < T.dim; i++) pw *= in.n;
    EXPECT_EQ(pw, T.size());
    size_t m = T.classes.size();
    for (size_t i = 0; i < m; i++) {
      EXPECT_EQ(T.table[0][i], static_cast<int>(i));
      EXPECT_EQ(T.table[i][0], static_cast<int>(i));
      EXPECT_EQ(T.table[i][T.neg[i]], 0);
      // Every element is killed by n.
      int acc = 0;
      for (int k = 0; k < in.n; k++) acc = T.table[acc][i];
      EXPECT_EQ(acc, 0);
      std::set<int> row(T.table[i].begin(), T.table[i].end());
      EXPECT_EQ(row.size(), m);
      for (size_t k = 0; k < m; k++) {
        EXPECT_EQ(T.table[i][k], T.table[k][i]);
        for (size_t l = 0; l < m; l++)
          EXPECT_EQ(T.table[T.table[i][k]][l], T.table[i][T.table[k][l]]);
      }
    }
  }
}

TEST(PicardTest, RationalCoefficientsOnSplitInfinityGiveThreeClasses) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^2 + 1"));
  AuxCover c3 = make_c3(cfg);
  Divisor D3 = descent_divisor_c3(cfg, c3.curve);
  ASSERT_EQ(D3.degree(), 2);
  ASSERT_EQ(D3.terms.size(), 2u);
  for (const auto& [key, pm] : D3.terms) {
    EXPECT_TRUE(pm.first.infinite);
    EXPECT_EQ(pm.first.degree(), 1);
    EXPECT_EQ(pm.second, 1);
  }
  PicardGroup pic(c3.curve);
  TorsionSet T = pic.pic_qd_torsion(D3, 3);
  EXPECT_EQ(T.size(), 3);
  EXPECT_EQ(T.dim, 1);
  // The nonzero classes are the thirds of the difference of the two
  // infinite points, with opposite fractional parts.
  std::set<std::vector<int64_t>> res;
  for (int i = 0; i < T.size(); i++) res.insert(residue_vector(T, i));
  std::set<std::vector<int64_t>> want = {{0, 0}, {1, 2}, {2, 1}};
  EXPECT_EQ(res, want);
  // Genus zero: the extension dimension meets support size minus one.
  EXPECT_EQ(T.dim, 0 + static_cast<int>(T.marked.size()) - 1);
  TorsionSet T2 = pic.pic_qd_torsion(D3, 2);
  EXPECT_EQ(T2.size(), 2);
  // Identical reruns walk the identical order.
  TorsionSet Tb = pic.pic_qd_torsion(D3, 3);
  ASSERT_EQ(Tb.size(), T.size());
  for (int i = 0; i < T.size(); i++) EXPECT_EQ(Tb.classes[i].key, T.classes[i].key);
}

TEST(PicardTest, EmptySupportReproducesThePlainTorsion) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^3 + 6*t"));
  AuxCover c3 = make_c3(cfg);
  PicardGroup pic(c3.curve);
  TorsionSet A = pic.pic_torsion(2);
  TorsionSet B = pic.pic_qd_torsion(Divisor{}, 2);
  ASSERT_EQ(A.size(), B.size());
  for (int i = 0; i < A.size(); i++) EXPECT_EQ(A.classes[i].key, B.classes[i].key);
}

TEST(PicardTest, PlainTorsionEmbedsAsTheZeroResidueClasses) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^4 + t + 1"));
  AuxCover c3 = make_c3(cfg);
  ASSERT_EQ(c3.curve.genus(), 1);
  Divisor D3 = descent_divisor_c3(cfg, c3.curve);
  ASSERT_EQ(D3.terms.size(), 2u);
  PicardGroup pic(c3.curve);
  TorsionSet Tpic = pic.pic_torsion(3);
  TorsionSet Tqd = pic.pic_qd_torsion(D3, 3);
  // The curve has 12 rational points, so its class group has exactly one
  // subgroup of order 3.
  EXPECT_EQ(c3.curve.count_points(1), 12);
  EXPECT_EQ(Tpic.size(), 3);
  // Zero-residue classes are the plain torsion, matched by canonical key.
  TorsionSet zero;
  zero.n = 3;
  for (int i = 0; i < Tqd.size(); i++)
    if (zero_residues(Tqd, i)) zero.classes.push_back(Tqd.classes[i]);
  EXPECT_EQ(key_suffixes(zero), key_suffixes(Tpic));
  EXPECT_EQ(Tqd.size() % Tpic.size(), 0);
  // Every class satisfies the weighted degree condition.
  for (int i = 0; i < Tqd.size(); i++) {
    int64_t w = 0;
    for (const Place& Pm : Tqd.marked)
      w += Tqd.classes[i].rep.residue(Pm) * Pm.degree();
    EXPECT_EQ(w % 3, 0);
  }
  EXPECT_LE(Tqd.dim, Tpic.dim + static_cast<int>(Tqd.marked.size()) - 1);
}

TEST(PicardTest, DimensionIsBoundedBySupportRankPlusPlainDimension) {
  struct Inst {
    int p;
    std::string f;
    bool cubic_cover;
    int n;
  };
  std::vector<Inst> insts = {{7, "t^2 + 1", false, 3},
                             {7, "t^4 + t + 1", false, 3},
                             {7, "t^3 + 2", true, 2}};
  for (const Inst& in : insts) {
    SCOPED_TRACE(in.f);
    const FieldCtx& F = FieldCtx::get(in.p, 1);
    CurveConfig cfg = make_curve(P(F, in.f));
    AuxCover cov = in.cubic_cover ? make_c2(cfg) : make_c3(cfg);
    Divisor D = in.cubic_cover ? descent_divisor_c2(cfg, cov.curve)
                               : descent_divisor_c3(cfg, cov.curve);
    ASSERT_GE(D.terms.size(), 1u);
    PicardGroup pic(cov.curve);
    TorsionSet Tqd = pic.pic_qd_torsion(D, in.n);
    TorsionSet Tp = pic.pic_torsion(in.n);
    EXPECT_LE(Tqd.dim, Tp.dim + static_cast<int>(D.terms.size()) - 1);
  }
}

TEST(PicardTest, StabilizationCertifiesGeometricTorsionOrStopsOnAgreement) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  auto factory = [&](const std::string& f) {
    return [&F, f](uint32_t m) {
      CurveConfig cfg = make_curve(P(F, f));
      return std::move(make_c3(cfg.lifted(FieldCtx::get(7, m))).curve);
    };
  };
  {
    // f = (t-1)(t^2+1): the quadratic factor splits over the degree-two
    // extension, completing the two-torsion there.
    StabilizationReport rep = stabilize_torsion(factory("t^3 + 6*t^2 + t + 6"), 2);
    EXPECT_EQ(rep.full, 4);
    ASSERT_EQ(rep.counts.size(), 2u);
    EXPECT_EQ(rep.counts[0], std::make_pair(uint32_t{1}, int64_t{2}));
    EXPECT_EQ(rep.counts[1], std::make_pair(uint32_t{2}, int64_t{4}));
    EXPECT_TRUE(rep.certified);
    EXPECT_EQ(rep.ext_used, 2u);
    EXPECT_EQ(rep.count, 4);
  }
  {
    // Full three-torsion already over the base field.
    StabilizationReport rep = stabilize_torsion(factory("t^3 + 2"), 3);
    EXPECT_TRUE(rep.certified);
    EXPECT_EQ(rep.ext_used, 1u);
    EXPECT_EQ(rep.count, 9);
  }
  {
    // f = t^3 + 1: the three-torsion completes only in degree three, which
    // no power-of-two extension sees. The agreement exit fires and is
    // honestly uncertified.
    StabilizationReport rep = stabilize_torsion(factory("t^3 + 1"), 3);
    ASSERT_EQ(rep.counts.size(), 3u);
    for (size_t i = 0; i < 3; i++) EXPECT_EQ(rep.counts[i].second, 3);
    EXPECT_TRUE(rep.agreed_twice);
    EXPECT_FALSE(rep.certified);
    EXPECT_EQ(rep.count, 3);
    CurveConfig cfg = make_curve(P(F, "t^3 + 1"));
    AuxCover big = make_c3(cfg.lifted(FieldCtx::get(7, 3)));
    EXPECT_EQ(PicardGroup(big.curve).pic_torsion(3).size(), 9);
  }
}

TEST(PicardTest, ThetaCharacteristicsOnAnEllipticCoverSplitOneOddThreeEven) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^3 + 6*t"));
  AuxCover c3 = make_c3(cfg);
  PicardGroup pic(c3.curve);
  std::vector<ThetaChar> th = pic.thetas();
  ASSERT_EQ(th.size(), 4u);
  EXPECT_EQ(pic.pic_torsion(2).size(), 4);
  int odd = 0, eff = 0, vanishing = 0;
  for (const ThetaChar& x : th) {
    if (x.odd()) odd++;
    if (x.effective()) eff++;
    if (x.vanishing()) vanishing++;
    EXPECT_EQ(x.odd(), x.effective());
  }
  EXPECT_EQ(odd, 1);
  EXPECT_EQ(eff, 1);
  EXPECT_EQ(vanishing, 0);
}

TEST(PicardTest, ThetaCharacteristicsOnAGenusTwoCoverCountSixOddTenEven) {
  const FieldCtx& F = FieldCtx::get(11, 1);
  // t^5 + 1 splits over this field, so all Weierstrass points are rational
  // and the full two-torsion is already defined here.
  Poly f = P(F, "t^5 + 1");
  int roots = 0;
  for (uint64_t v = 0; v < 11; v++)
    if (f.eval(F.from_packed(v)).is_zero()) roots++;
  ASSERT_EQ(roots, 5);
  CurveConfig cfg = make_curve(f);
  AuxCover c3 = make_c3(cfg);
  ASSERT_EQ(c3.curve.genus(), 2);
  PicardGroup pic(c3.curve);
  EXPECT_EQ(pic.pic_torsion(2).size(), 16);
  std::vector<ThetaChar> th = pic.thetas();
  ASSERT_EQ(th.size(), 16u);
  int odd = 0, even_eff = 0;
  for (const ThetaChar& x : th) {
    if (x.odd()) odd++;
    if (!x.odd() && x.effective()) even_eff++;
    EXPECT_FALSE(x.vanishing());
  }
  EXPECT_EQ(odd, 6);
  EXPECT_EQ(even_eff, 0);
}

TEST(PicardTest, WSetAtTheGenusBoundEqualsThePlainTorsion) {
  struct Inst {
    int p;
    std::string f;
    bool cubic_cover;
    int n;
    int genus;
  };
  std::vector<Inst> insts = {{7, "t^2 + 3", true, 2, 1},
                             {7, "t^4 + t + 1", true, 2, 3},
                             {5, "t^5 + t + 1", true, 2, 4},
                             {7, "t^3 + t + 1", false, 3, 1},
                             {11, "t^5 + 1", false, 3, 2}};
  for (const Inst& in : insts) {
    SCOPED_TRACE(in.f + " over GF(" + std::to_string(in.p) + ")");
    const FieldCtx& F = FieldCtx::get(in.p, 1);
    CurveConfig cfg = make_curve(P(F, in.f));
    AuxCover cov = in.cubic_cover ? make_c2(cfg) : make_c3(cfg);
    ASSERT_EQ(cov.curve.genus(), in.genus);
    PicardGroup pic(cov.curve);
    TorsionSet T = pic.pic_torsion(in.n);
    std::vector<int> members = pic.w_members(T, in.genus, 1);
    std::vector<int> all(T.size());
    for (int i = 0; i < T.size(); i++) all[i] = i;
    EXPECT_EQ(members, all);
  }
}

TEST(PicardTest, WSetOneBelowTheGenusMatchesEffectiveThetasThroughHalfCanonical) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^4 + t + 1"));
  AuxCover c2 = make_c2(cfg);
  ASSERT_EQ(c2.curve.genus(), 3);
  PicardGroup pic(c2.curve);
  Divisor half = pic.half_canonical();
  EXPECT_EQ(half.degree(), 2);
  TorsionSet T = pic.pic_torsion(2);
  std::vector<int> members = pic.w_members(T, 2, 1);
  std::vector<ThetaChar> th = pic.thetas();
  int eff = 0;
  for (const ThetaChar& x : th)
    if (x.effective()) eff++;
  // Shifting a member class by the half canonical divisor lands on an
  // effective theta characteristic, distinct classes on distinct thetas.
  std::set<size_t> hit;
  for (int idx : members) {
    Divisor Z = divisor_div_exact(T.classes[idx].rep.num, 2);
    Divisor cand = Z + half;
    bool found = false;
    for (size_t k = 0; k < th.size(); k++) {
      if (pic.is_principal(cand - th[k].rep)) {
        EXPECT_TRUE(th[k].effective());
        EXPECT_FALSE(hit.count(k));
        hit.insert(k);
        found = true;
        break;
      }
    }
    EXPECT_TRUE(found);
  }
  EXPECT_EQ(static_cast<int>(members.size()), eff);
}

TEST(PicardTest, WSetAtThreeHalvesCollectsTheStrictlyFractionalClasses) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^3 + 2"));
  AuxCover c2 = make_c2(cfg);
  ASSERT_EQ(c2.curve.genus(), 1);
  Divisor D2 = descent_divisor_c2(cfg, c2.curve);
  ASSERT_EQ(D2.terms.size(), 3u);
  PicardGroup pic(c2.curve);
  TorsionSet T = pic.pic_qd_torsion(D2, 2);
  std::vector<int> members = pic.w_members(T, 3, 2);
  // Strictly fractional classes all belong; integral ones belong exactly
  // when they shift onto an effective theta characteristic, which at genus
  // one is the zero class alone.
  Divisor half = pic.half_canonical();
  EXPECT_EQ(half.degree(), 0);
  std::set<int> got(members.begin(), members.end());
  for (int i = 0; i < T.size(); i++) {
    if (!zero_residues(T, i)) {
      EXPECT_TRUE(got.count(i));
      continue;
    }
    Divisor Z = divisor_div_exact(T.classes[i].rep.num, 2);
    bool onto_effective = pic.is_principal(Z + half);
    EXPECT_EQ(got.count(i) > 0, onto_effective);
  }
}

TEST(PicardTest, WSetAtTwoThirdsAboveGenusEqualsTheWholeExtension) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^2 + 1"));
  AuxCover c3 = make_c3(cfg);
  Divisor D3 = descent_divisor_c3(cfg, c3.curve);
  PicardGroup pic(c3.curve);
  TorsionSet T = pic.pic_qd_torsion(D3, 3);
  ASSERT_EQ(T.size(), 3);
  std::vector<int> members = pic.w_members(T, 2, 3);
  EXPECT_EQ(members, (std::vector<int>{0, 1, 2}));
}

TEST(PicardTest, WSetAtOneThirdAboveGenusSplitsIntoFractionalAndBaseClasses) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^4 + t + 1"));
  AuxCover c3 = make_c3(cfg);
  ASSERT_EQ(c3.curve.genus(), 1);
  Divisor D3 = descent_divisor_c3(cfg, c3.curve);
  PicardGroup pic(c3.curve);
  TorsionSet T = pic.pic_qd_torsion(D3, 3);
  std::set<int> got;
  for (int i : pic.w_members(T, 4, 3)) got.insert(i);
  std::set<int> base;
  for (int i : pic.w_members(T, 0, 1)) base.insert(i);
  std::set<int> want;
  for (int i = 0; i < T.size(); i++) {
    if (!zero_residues(T, i)) want.insert(i);
    else if (base.count(i)) want.insert(i);
  }
  EXPECT_EQ(got, want);
  // At genus one the integral members below the genus are the zero class.
  std::set<int> base_integral;
  for (int i : base)
    if (zero_residues(T, i)) base_integral.insert(i);
  EXPECT_EQ(base_integral, (std::set<int>{0}));
}

TEST(PicardTest, FiberSplittingCountsFollowTheCubeAndSquareResidues) {
  {
    // Squarefree quadratic: no finite support, infinite fibers split
    // according to the leading square class.
    const FieldCtx& F = FieldCtx::get(7, 1);
    CurveConfig cfg = make_curve(P(F, "t^2 + 3"));
    EpsilonData ed = epsilon_data(cfg);
    EXPECT_TRUE(ed.d2.empty());
    EXPECT_EQ(ed.eps2_sum, 0);
    ASSERT_EQ(ed.d3.size(), 1u);
    ASSERT_EQ(ed.d3p.size(), 1u);
    EXPECT_EQ(ed.eps3, count_power_roots(1, 7, 2) == 2 ? 1 : 0);
    EXPECT_EQ(ed.eps3p, count_power_roots(-27, 7, 2) == 2 ? 1 : 0);
    EXPECT_EQ(ed.eps3, 1);
    EXPECT_EQ(ed.eps3p, 1);
  }
  {
    // Nonsquare leading coefficient: both infinite quadratic fibers inert.
    const FieldCtx& F = FieldCtx::get(7, 1);
    CurveConfig cfg = make_curve(P(F, "3*t^2 + 3"));
    EpsilonData ed = epsilon_data(cfg);
    ASSERT_EQ(count_power_roots(3, 7, 2), 0);
    EXPECT_EQ(ed.eps3, 0);
    EXPECT_EQ(ed.eps3p, 0);
    EXPECT_EQ(ed.d3[0].closed, 1);
    EXPECT_EQ(ed.d3[0].rational, 0);
  }
  struct CubeInst {
    int p;
    std::string f;
    int64_t residue;  // of the cubic cover's defining value at the fiber
  };
  // f = f1 * t^3 with f1 linear: one finite fiber on the cubic cover over
  // t = 0, with residue -f1(0).
  std::vector<CubeInst> cubes = {{7, "t^4 + t^3", -1},
                                 {7, "t^4 + 3*t^3", -3},
                                 {5, "t^4 + t^3", -1}};
  for (const CubeInst& in : cubes) {
    SCOPED_TRACE(in.f + " over GF(" + std::to_string(in.p) + ")");
    const FieldCtx& F = FieldCtx::get(in.p, 1);
    CurveConfig cfg = make_curve(P(F, in.f));
    ASSERT_EQ(cfg.decomp[3].deg(), 1);
    EpsilonData ed = epsilon_data(cfg);
    ASSERT_EQ(ed.d2.size(), 1u);
    ASSERT_EQ(ed.eps_v.size(), 1u);
    int roots = count_power_roots(in.residue, in.p, 3);
    if (roots == 3) {
      EXPECT_EQ(ed.d2[0].closed, 3);
      EXPECT_EQ(ed.eps_v[0], 2);
    } else if (roots == 1) {
      EXPECT_EQ(ed.d2[0].closed, 2);
      EXPECT_EQ(ed.d2[0].rational, 1);
      EXPECT_EQ(ed.eps_v[0], 1);
    } else {
      EXPECT_EQ(ed.d2[0].closed, 1);
      EXPECT_EQ(ed.eps_v[0], 0);
    }
    EXPECT_EQ(ed.eps2_sum, ed.eps_v[0]);
  }
  // The three concrete outcomes are all realized.
  EXPECT_EQ(count_power_roots(-1, 7, 3), 3);
  EXPECT_EQ(count_power_roots(-3, 7, 3), 0);
  EXPECT_EQ(count_power_roots(-1, 5, 3), 1);
}

TEST(PicardTest, GeometricRankBoundTracksTheDecompositionSize) {
  {
    const FieldCtx& F = FieldCtx::get(7, 1);
    EXPECT_EQ(geometric_rank_bound(make_curve(P(F, "t^2 + 3"))), 2);
    EXPECT_EQ(geometric_rank_bound(make_curve(P(F, "t^6 + t + 1"))), 8);
    EXPECT_EQ(geometric_rank_bound(make_curve(P(F, "t^4 + t^3"))), 2);
  }
  {
    // Without a cube root of unity in the field the bound halves.
    const FieldCtx& F = FieldCtx::get(5, 1);
    EXPECT_EQ(geometric_rank_bound(make_curve(P(F, "t^2 + 2"))), 1);
    EXPECT_EQ(geometric_rank_bound(make_curve(P(F, "t^4 + t^3"))), 1);
  }
}

TEST(PicardTest, RankBoundDataCombinesClassDimensionsAndFiberCounts) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  {
    CurveConfig cfg = make_curve(P(F, "t^3 + 2"));
    RankBound2 rb = rank_bound_2_data(cfg);
    // The infinite fiber of the cubic cover splits: -1 is a cube.
    ASSERT_EQ(count_power_roots(-1, 7, 3), 3);
    EXPECT_EQ(rb.eps_sum, 2);
    EXPECT_EQ(rb.arithmetic, rb.dim_pic2 + rb.eps_sum);
    EXPECT_GE(rb.intermediate, rb.dim_pic2);
    EXPECT_LE(rb.intermediate, rb.dim_pic2 + 3 - 1);
    EXPECT_EQ(rb.geometric, 4);
    EXPECT_EQ(rank_bound_2(cfg), rb.arithmetic);
  }
  {
    // Odd degree with trivial even parts: no marked support on either
    // quadratic cover, so the intermediate bound is the arithmetic one
    // without fiber terms.
    CurveConfig cfg = make_curve(P(F, "t^3 + t + 1"));
    RankBound3 rb = rank_bound_3_data(cfg);
    EXPECT_EQ(rb.eps, 0);
    EXPECT_EQ(rb.eps_p, 0);
    EXPECT_EQ(rb.arithmetic, rb.dim_pic3 + rb.dim_pic3p);
    EXPECT_EQ(rb.intermediate, rb.dim_pic3 + rb.dim_pic3p);
    EXPECT_EQ(rank_bound_3(cfg), rb.arithmetic);
  }
}

TEST(PicardTest, ClassSearchesRefuseOversizedInstances) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  // A squarefree polynomial of degree eleven: genus five under the double
  // cover, past the search limit.
  Poly f = P(F, "t^7 + 6*t") * P(F, "t^4 + t + 1");
  ASSERT_EQ(f.deg(), 11);
  SuperCurve C(2, f);
  ASSERT_EQ(C.genus(), 5);
  PicardGroup pic(C);
  EXPECT_THROW(pic.pic_torsion(2), SearchTooLarge);
  EXPECT_THROW(pic.thetas(), SearchTooLarge);

  CurveConfig cfg = make_curve(P(F, "t^3 + 6*t"));
  AuxCover c3 = make_c3(cfg);
  PicardGroup small(c3.curve);
  EXPECT_THROW(small.pic_torsion(5), PreconditionUnmet);
  Divisor bad = Divisor::of_place(c3.curve.places_of_degree(1)[0], 2);
  EXPECT_THROW(small.pic_qd_torsion(bad, 2), PreconditionUnmet);
}

TEST(PicardTest, SearchCapGuardsBothTheFieldSizeAndTheDivisorCount) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^3 + 6*t"));
  AuxCover c3 = make_c3(cfg);
  // Eight places of degree one: seven points over the affine roots and
  // values, one over infinity.
  {
    PicardGroup pic(c3.curve, 3);
    EXPECT_THROW(pic.pic_torsion(2), SearchTooLarge);
  }
  {
    PicardGroup pic(c3.curve, 7);
    EXPECT_THROW(pic.pic_torsion(2), SearchTooLarge);
  }
  {
    PicardGroup pic(c3.curve, 8);
    EXPECT_EQ(pic.pic_torsion(2).size(), 4);
  }
}

TEST(PicardTest, CanonicalKeysIdentifyClassesAcrossRepresentatives) {
  const FieldCtx& F = FieldCtx::get(7, 1);
  CurveConfig cfg = make_curve(P(F, "t^3 + 6*t"));
  AuxCover c3 = make_c3(cfg);
  PicardGroup pic(c3.curve);
  ASSERT_EQ(pic.base_degree(), 1);
  EXPECT_EQ(pic.class_key(Divisor{}), "0");
  FFElem tf = c3.curve.from_rat(RatFunc(P(F, "t")));
  Divisor divt = c3.curve.divisor_of(tf);
  EXPECT_TRUE(pic.is_principal(divt));
  EXPECT_EQ(pic.class_key(divt), "0");
  Place P0 = c3.curve.places_over(P(F, "t"))[0];
  Place P1 = c3.curve.places_over(P(F, "t + 1"))[0];
  Divisor D = Divisor::of_place(P0, 1) + Divisor::of_place(P1, -1);
  std::string k = pic.class_key(D);
  EXPECT_NE(k, "0");
  EXPECT_FALSE(pic.is_principal(D));
  EXPECT_EQ(pic.class_key(D + divt), k);
  // The difference of two branch points is two-torsion, so the class
  // equals its own negative.
  Divisor Dneg = Divisor::of_place(P1, 1) + Divisor::of_place(P0, -1);
  EXPECT_EQ(pic.class_key(Dneg), k);
}

TEST(PicardTest, HalfCanonicalDoublesToTheCanonicalClass) {
  {
    const FieldCtx& F = FieldCtx::get(7, 1);
    CurveConfig cfg = make_curve(P(F, "t^4 + t + 1"));
    AuxCover c2 = make_c2(cfg);
    PicardGroup pic(c2.curve);
    Divisor half = pic.half_canonical();
    EXPECT_EQ(half.degree(), c2.curve.genus() - 1);
  }
  {
    const FieldCtx& F = FieldCtx::get(11, 1);
    CurveConfig cfg = make_curve(P(F, "t^5 + 1"));
    AuxCover c3 = make_c3(cfg);
    PicardGroup pic(c3.curve);
    Divisor half = pic.half_canonical();
    EXPECT_EQ(half.degree(), 1);
  }
  {
    // Split infinity with odd genus minus one: no integral half at
    // infinity exists.
    const FieldCtx& F = FieldCtx::get(7, 1);
    CurveConfig cfg = make_curve(P(F, "t^6 + t + 1"));
    AuxCover c3 = make_c3(cfg);
    ASSERT_EQ(c3.curve.genus(), 2);
    PicardGroup pic(c3.curve);
    EXPECT_THROW(pic.half_canonical(), PreconditionUnmet);
  }
}

TEST(PicardTest, PrincipalityAgreesWithFunctionDivisors) {
  const FieldCtx& F = FieldCtx::get(11, 1);
  CurveConfig cfg = make_curve(P(F, "t^5 + 1"));
  AuxCover c3 = make_c3(cfg);
  PicardGroup pic(c3.curve);
  std::vector<FFElem> elems = {
      c3.curve.from_rat(RatFunc(P(F, "t"))),
      c3.curve.y_elem(),
      c3.curve.elem_add(c3.curve.y_elem(),
                        c3.curve.from_rat(RatFunc(P(F, "t^2 + 4")))),
  };
  for (const FFElem& el : elems)
    EXPECT_TRUE(pic.is_principal(c3.curve.divisor_of(el)));
  // Differences of distinct branch points are nonzero two-torsion.
  Place W0 = c3.curve.places_over(P(F, "t + 4"))[0];
  Place W1 = c3.curve.places_over(P(F, "t + 5"))[0];
  Divisor D = Divisor::of_place(W0, 1) + Divisor::of_place(W1, -1);
  EXPECT_FALSE(pic.is_principal(D));
  EXPECT_TRUE(pic.is_principal(D.scaled(2)));
}

}  // namespace

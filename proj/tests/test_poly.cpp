// Polynomial and rational function layer: ring axioms, division, gcd,
// text-format round trips, and resultants against direct evaluation.

#include <gtest/gtest.h>

#include <random>

#include "descentff/poly.hpp"
#include "descentff/rational.hpp"

using namespace descentff;

namespace {

TEST(Rat, BasicArithmeticAndOrdering) {
  Rat a(1, 3), b(1, 2);
  EXPECT_EQ((a + b).str(), "5/6");
  EXPECT_EQ((b - a).str(), "1/6");
  EXPECT_EQ((a * b).str(), "1/6");
  EXPECT_EQ((a / b).str(), "2/3");
  EXPECT_TRUE(a < b);
  EXPECT_EQ(Rat(-7, 2).floor(), -4);
  EXPECT_EQ(Rat(-7, 2).ceil(), -3);
  EXPECT_EQ(Rat(7, 2).floor(), 3);
  EXPECT_EQ(Rat(-4, -6), Rat(2, 3));
  EXPECT_EQ(Rat(5, 3).frac(), Rat(2, 3));
  EXPECT_EQ(Rat(-5, 3).frac(), Rat(1, 3));
}

TEST(Poly, RingAxiomsRandom1000) {
  std::mt19937_64 rng(99);
  const auto& F = FieldCtx::get(7, 2);
  std::uniform_int_distribution<int> dd(0, 6);
  for (int i = 0; i < 1000; ++i) {
    Poly a = random_poly(F, dd(rng), rng);
    Poly b = random_poly(F, dd(rng), rng);
    Poly c = random_poly(F, dd(rng), rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a - a, Poly(F));
    EXPECT_EQ((a * b).deg(), a.deg() + b.deg());
  }
}

TEST(Poly, DivremInvariant) {
  std::mt19937_64 rng(100);
  const auto& F = FieldCtx::get(5, 2);
  std::uniform_int_distribution<int> dd(0, 8);
  for (int i = 0; i < 500; ++i) {
    Poly a = random_poly(F, dd(rng), rng);
    Poly b = random_poly(F, dd(rng), rng);
    if (b.is_zero()) continue;
    auto [q, r] = Poly::divrem(a, b);
    EXPECT_EQ(a, q * b + r);
    EXPECT_LT(r.deg(), b.deg());
  }
}

TEST(Poly, GcdDividesAndIsMonic) {
  std::mt19937_64 rng(101);
  const auto& F = FieldCtx::get(11, 1);
  std::uniform_int_distribution<int> dd(1, 5);
  for (int i = 0; i < 300; ++i) {
    Poly a = random_poly(F, dd(rng), rng);
    Poly b = random_poly(F, dd(rng), rng);
    Poly g = Poly::gcd(a, b);
    EXPECT_TRUE(g.divides(a));
    EXPECT_TRUE(g.divides(b));
    EXPECT_TRUE(g.is_monic());
    // common multiplier
    Poly m = random_poly(F, 2, rng);
    Poly g2 = Poly::gcd(a * m, b * m);
    EXPECT_TRUE(Poly::gcd(m, g2).deg() == m.monic().deg() ||
                Poly::gcd(m, g2) == m.monic());
  }
}

TEST(Poly, InvmodIsInverse) {
  std::mt19937_64 rng(102);
  const auto& F = FieldCtx::get(13, 1);
  Poly mod = parse_poly(F, "t^3 + 2*t + 1");
  for (int i = 0; i < 200; ++i) {
    Poly a = random_poly(F, 2, rng);
    if (Poly::gcd(a, mod).deg() != 0) continue;
    Poly inv = Poly::invmod(a, mod);
    EXPECT_TRUE(((a * inv) % mod).is_one());
  }
}

TEST(Poly, TextFormatRoundTrip) {
  const auto& F = FieldCtx::get(7, 1);
  for (const char* s : {"t^3 + 2*t + 4", "t", "5", "0", "2*t^2", "t^2 + t",
                        "6*t^6 + 5*t^5 + 4*t^4 + 3*t^3 + 2*t^2 + t + 1"}) {
    Poly f = parse_poly(F, s);
    EXPECT_EQ(f.str(), s);
    EXPECT_EQ(parse_poly(F, f.str()), f);
  }
  // Parser extras: minus signs, spacing, repeated terms.
  EXPECT_EQ(parse_poly(F, "-t + 1"), parse_poly(F, "6*t + 1"));
  EXPECT_EQ(parse_poly(F, "t^2+t^2"), parse_poly(F, "2*t^2"));
  EXPECT_EQ(parse_poly(F, "  3 * t ^ 2 - 1 "), parse_poly(F, "3*t^2 + 6"));
  EXPECT_EQ(parse_poly(F, "9"), parse_poly(F, "2"));
  EXPECT_THROW(parse_poly(F, ""), PreconditionUnmet);
  EXPECT_THROW(parse_poly(F, "t +"), PreconditionUnmet);
  EXPECT_THROW(parse_poly(F, "x"), PreconditionUnmet);
}

TEST(Poly, RandomRoundTrip500) {
  std::mt19937_64 rng(103);
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{{5, 1},
                                                                {13, 1},
                                                                {7, 2}}) {
    const auto& F = FieldCtx::get(p, m);
    std::uniform_int_distribution<int> dd(0, 9);
    for (int i = 0; i < 500; ++i) {
      Poly f = random_poly(F, dd(rng), rng);
      EXPECT_EQ(parse_poly(F, f.str()), f);
    }
  }
}

TEST(Poly, EvalAndReverse) {
  const auto& F = FieldCtx::get(11, 1);
  Poly f = parse_poly(F, "t^3 + 2*t + 5");
  EXPECT_EQ(F.packed(f.eval(F.from_int(2))), (8 + 4 + 5) % 11u);
  // reversed: t^3 f(1/t) has coefficients flipped
  Poly r = f.reversed();
  EXPECT_EQ(r, parse_poly(F, "5*t^3 + 2*t^2 + 1"));
  // eval consistency: r(a) = a^3 f(1/a)
  Fq a = F.from_int(3);
  EXPECT_EQ(r.eval(a), F.mul(F.pow(a, 3), f.eval(F.inv(a))));
}

TEST(Poly, DerivativeLeibniz) {
  std::mt19937_64 rng(104);
  const auto& F = FieldCtx::get(5, 2);
  for (int i = 0; i < 200; ++i) {
    Poly a = random_poly(F, 4, rng);
    Poly b = random_poly(F, 4, rng);
    EXPECT_EQ((a * b).derivative(),
              a.derivative() * b + a * b.derivative());
  }
}

TEST(Poly, ResultantVsRootProduct) {
  // res(f, g) = lc(f)^deg g * prod g(roots of f) when f splits.
  const auto& F = FieldCtx::get(13, 1);
  std::mt19937_64 rng(105);
  for (int i = 0; i < 100; ++i) {
    // f = 3 (t - a)(t - b), evaluate against random g.
    Fq a = F.from_packed(rng() % 13), b = F.from_packed(rng() % 13);
    Fq lc = F.from_int(3);
    Poly t = Poly::t(F);
    Poly f = (t - Poly::constant(F, a)) * (t - Poly::constant(F, b));
    f = f.scaled(lc);
    Poly g = random_poly(F, 3, rng);
    Fq expect = F.mul(F.pow(lc, g.deg()), F.mul(g.eval(a), g.eval(b)));
    EXPECT_EQ(Poly::resultant(f, g), expect);
  }
}

TEST(Poly, DiscriminantQuadraticCubic) {
  const auto& F = FieldCtx::get(7, 1);
  // disc(a t^2 + b t + c) = b^2 - 4ac
  Poly f = parse_poly(F, "2*t^2 + 3*t + 5");
  Fq expect = F.sub(F.from_int(9), F.from_int(4 * 2 * 5));
  EXPECT_EQ(Poly::discriminant(f), expect);
  // disc(t^3 + pt + q) = -4p^3 - 27q^2
  Poly g = parse_poly(F, "t^3 + 4*t + 1");
  Fq e2 = F.sub(F.from_int(-4 * 64), F.from_int(27));
  EXPECT_EQ(Poly::discriminant(g), e2);
}

TEST(Poly, LiftProjectRoundTrip) {
  const auto& F1 = FieldCtx::get(5, 1);
  const auto& F2 = FieldCtx::get(5, 2);
  std::mt19937_64 rng(106);
  for (int i = 0; i < 100; ++i) {
    Poly f = random_poly(F1, 4, rng);
    Poly lifted = f.lifted(F2);
    EXPECT_EQ(lifted.projected(F1), f);
    // lifting commutes with multiplication
    Poly g = random_poly(F1, 3, rng);
    EXPECT_EQ((f * g).lifted(F2), lifted * g.lifted(F2));
  }
}

TEST(RatFunc, ReductionAndArithmetic) {
  const auto& F = FieldCtx::get(7, 1);
  Poly t = Poly::t(F);
  Poly one = Poly::constant(F, F.one());
  RatFunc r(t * t - one, t - one);  // reduces to t + 1
  EXPECT_TRUE(r.is_poly());
  EXPECT_EQ(r.num(), t + one);
  RatFunc s(one, t);
  RatFunc sum = r + s;  // (t^2 + t + 1) / t
  EXPECT_EQ(sum.num(), t * t + t + one);
  EXPECT_EQ(sum.den(), t);
  EXPECT_EQ(sum.map_degree(), 2);
  EXPECT_EQ((s - s).num(), Poly(F));
  EXPECT_EQ((r * s).num(), t + one);
  EXPECT_EQ((r / r).num(), one);
  // denominator stays monic after scaling
  RatFunc u(one, t.scaled(F.from_int(3)));
  EXPECT_TRUE(u.den().is_monic());
}

}  // namespace

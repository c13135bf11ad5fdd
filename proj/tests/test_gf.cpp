// Field arithmetic oracle tests: table-based GF(p^m) against direct modular
// arithmetic and against exhaustive structure checks on small fields.

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "descentff/gf.hpp"

using namespace descentff;

namespace {

// Direct GF(p) arithmetic oracle for m = 1 contexts.
TEST(FieldCtx, PrimeFieldMatchesModularArithmetic) {
  for (uint32_t p : {5u, 7u, 11u, 13u}) {
    const auto& F = FieldCtx::get(p, 1);
    for (uint64_t a = 0; a < p; ++a) {
      for (uint64_t b = 0; b < p; ++b) {
        Fq fa = F.from_packed(a), fb = F.from_packed(b);
        EXPECT_EQ(F.packed(F.add(fa, fb)), (a + b) % p);
        EXPECT_EQ(F.packed(F.mul(fa, fb)), (a * b) % p);
        EXPECT_EQ(F.packed(F.sub(fa, fb)), (a + p - b) % p);
        if (b != 0) {
          uint64_t prod = F.packed(F.mul(F.div(fa, fb), fb));
          EXPECT_EQ(prod, a);
        }
      }
    }
  }
}

TEST(FieldCtx, RingAxiomsRandom1000) {
  std::mt19937_64 rng(20260816);
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{
           {5, 2}, {7, 3}, {11, 2}, {13, 2}, {5, 4}}) {
    const auto& F = FieldCtx::get(p, m);
    std::uniform_int_distribution<uint64_t> dist(0, F.q - 1);
    for (int i = 0; i < 1000; ++i) {
      Fq a = F.from_packed(dist(rng));
      Fq b = F.from_packed(dist(rng));
      Fq c = F.from_packed(dist(rng));
      EXPECT_EQ(F.add(a, b), F.add(b, a));
      EXPECT_EQ(F.mul(a, b), F.mul(b, a));
      EXPECT_EQ(F.add(F.add(a, b), c), F.add(a, F.add(b, c)));
      EXPECT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
      EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      EXPECT_EQ(F.add(a, FieldCtx::zero()), a);
      EXPECT_EQ(F.mul(a, F.one()), a);
      EXPECT_EQ(F.add(a, F.neg(a)), FieldCtx::zero());
      if (!a.is_zero()) EXPECT_EQ(F.mul(a, F.inv(a)), F.one());
    }
  }
}

TEST(FieldCtx, FrobeniusIsPthPower) {
  const auto& F = FieldCtx::get(7, 3);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<uint64_t> dist(0, F.q - 1);
  for (int i = 0; i < 200; ++i) {
    Fq a = F.from_packed(dist(rng));
    EXPECT_EQ(F.frobenius(a), F.pow(a, 7));
    EXPECT_EQ(F.frobenius(a, 3), a);  // Frob^m = identity
  }
}

TEST(FieldCtx, SqrtAndCbrtExhaustiveSmall) {
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{
           {5, 1}, {7, 1}, {5, 2}, {7, 2}, {11, 1}, {13, 1}, {11, 2}}) {
    const auto& F = FieldCtx::get(p, m);
    for (uint64_t v = 0; v < F.q; ++v) {
      Fq a = F.from_packed(v);
      auto r = F.sqrt(a);
      // Oracle: count solutions of x^2 = a exhaustively.
      int count = 0;
      Fq wit = FieldCtx::zero();
      for (uint64_t x = 0; x < F.q; ++x) {
        Fq fx = F.from_packed(x);
        if (F.mul(fx, fx) == a) {
          ++count;
          wit = fx;
        }
      }
      EXPECT_EQ(r.has_value(), count > 0);
      if (r) EXPECT_EQ(F.mul(*r, *r), a);
      EXPECT_EQ(F.is_square(a), count > 0);
      (void)wit;

      auto c = F.cbrt(a);
      int ccount = 0;
      for (uint64_t x = 0; x < F.q; ++x) {
        Fq fx = F.from_packed(x);
        if (F.mul(F.mul(fx, fx), fx) == a) ++ccount;
      }
      EXPECT_EQ(c.has_value(), ccount > 0);
      if (c) EXPECT_EQ(F.mul(F.mul(*c, *c), *c), a);
      EXPECT_EQ(F.is_cube(a), ccount > 0);
    }
  }
}

TEST(FieldCtx, Zeta3PresentExactlyWhen3DividesOrder) {
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint32_t>>{
           {5, 1}, {5, 2}, {7, 1}, {7, 2}, {11, 1}, {11, 2}, {13, 1}}) {
    const auto& F = FieldCtx::get(p, m);
    EXPECT_EQ(F.has_zeta3(), (F.q - 1) % 3 == 0);
    if (F.has_zeta3()) {
      Fq z = *F.zeta3;
      EXPECT_NE(z, F.one());
      EXPECT_EQ(F.mul(F.mul(z, z), z), F.one());
      // 1 + zeta + zeta^2 = 0, and (1 + 2 zeta)^2 = -3.
      Fq zz = F.mul(z, z);
      EXPECT_EQ(F.add(F.one(), F.add(z, zz)), FieldCtx::zero());
      Fq s = F.add(F.one(), F.add(z, z));
      EXPECT_EQ(F.mul(s, s), F.neg(F.from_int(3)));
    }
  }
}

TEST(FieldCtx, SubfieldMembershipAndEmbedding) {
  const auto& F2 = FieldCtx::get(5, 2);
  const auto& F4 = FieldCtx::get(5, 4);
  // Exactly 25 elements of GF(5^4) lie in GF(5^2).
  int count = 0;
  for (uint64_t v = 0; v < F4.q; ++v)
    if (F4.in_subfield(F4.from_packed(v), 2)) ++count;
  EXPECT_EQ(count, 25);

  // Embedding is a field homomorphism and lands in the subfield.
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<uint64_t> dist(0, F2.q - 1);
  for (int i = 0; i < 200; ++i) {
    Fq a = F2.from_packed(dist(rng));
    Fq b = F2.from_packed(dist(rng));
    Fq ea = F4.embed(F2, a), eb = F4.embed(F2, b);
    EXPECT_TRUE(F4.in_subfield(ea, 2));
    EXPECT_EQ(F4.embed(F2, F2.add(a, b)), F4.add(ea, eb));
    EXPECT_EQ(F4.embed(F2, F2.mul(a, b)), F4.mul(ea, eb));
    // project is a left inverse of embed.
    EXPECT_EQ(F4.project(F2, ea), a);
  }
  // Prime-subfield constants map packed-identically.
  for (uint64_t c = 0; c < 5; ++c) {
    const auto& F1 = FieldCtx::get(5, 1);
    EXPECT_EQ(F4.packed(F4.embed(F1, F1.from_packed(c))), c);
  }
}

TEST(FieldCtx, EmbeddingTowerConsistentCounts) {
  // Any two embeddings differ by Frobenius, so subfield images agree setwise.
  const auto& F1 = FieldCtx::get(7, 1);
  const auto& F2 = FieldCtx::get(7, 2);
  const auto& F4 = FieldCtx::get(7, 4);
  std::set<uint64_t> direct, through;
  for (uint64_t v = 0; v < 7; ++v) {
    Fq a = F1.from_packed(v);
    direct.insert(F4.packed(F4.embed(F1, a)));
    through.insert(F4.packed(F4.embed(F2, F2.embed(F1, a))));
  }
  EXPECT_EQ(direct, through);
}

TEST(FieldCtx, DeterministicModulusAndGenerator) {
  const auto& A = FieldCtx::get(5, 3);
  const auto& B = FieldCtx::get(5, 3);
  EXPECT_EQ(&A, &B);  // registry returns the same context
  // Re-deriving the modulus must give the same polynomial.
  EXPECT_EQ(A.modulus.size(), 4u);
  EXPECT_EQ(A.modulus.back(), 1u);
}

TEST(FieldCtx, TableBudgetEnforced) {
  EXPECT_THROW(FieldCtx::get(11, 8), SearchTooLarge);
  EXPECT_THROW(FieldCtx::get(13, 8), SearchTooLarge);
}

TEST(FieldCtx, PowMatchesRepeatedMultiplication) {
  const auto& F = FieldCtx::get(13, 2);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<uint64_t> dist(1, F.q - 1);
  for (int i = 0; i < 100; ++i) {
    Fq a = F.from_packed(dist(rng));
    Fq acc = F.one();
    for (int e = 0; e <= 8; ++e) {
      EXPECT_EQ(F.pow(a, e), acc);
      acc = F.mul(acc, a);
    }
    EXPECT_EQ(F.mul(F.pow(a, -3), F.pow(a, 3)), F.one());
  }
}

}  // namespace

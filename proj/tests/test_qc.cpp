#include "support.hpp"

#include <cmath>

#include "qcext/errors.hpp"
#include "qcext/qc.hpp"

namespace qcext::testing {
namespace {

using coeffs::ModuleVector;
using groups::Subgroup;
using qc::QuasiCocycle;

Subgroup x_axis() { return Subgroup::cyclic(free_xy(), FreeWord::generator(0)); }
Element xpow(std::int64_t n) { return FreeWord::generator(0, n); }

TEST(Defect, HomomorphismIsZero) {
  const auto q = qc::cyclic_homomorphism(x_axis());
  EXPECT_EQ(q.value(xpow(-3)), -3);
  EXPECT_EQ(q.value(xpow(0)), 0);
  EXPECT_EQ(q.value(xpow(5)), 5);
  EXPECT_EQ(qc::defect(q, 5).value, 0.0);
  EXPECT_TRUE(q.flags().antisymmetric);
}

TEST(Defect, StepMatchesBruteForce) {
  const auto q = qc::step(x_axis());
  // Oracle: |s(m+n) - s(m) - s(n)| over |m|,|n| <= 5 with s(n) = [n >= 0].
  int worst = 0;
  for (int m = -5; m <= 5; ++m)
    for (int n = -5; n <= 5; ++n) worst = std::max(worst, std::abs((m + n >= 0) - (m >= 0) - (n >= 0)));
  const auto D = qc::defect(q, 5);
  EXPECT_EQ(D.value, static_cast<double>(worst));
  EXPECT_EQ(D.value, 1.0);
  ASSERT_TRUE(q.defect_bound());
  EXPECT_EQ(q.defect_bound()->value, 1);
  EXPECT_LE(to_double(abs_value(q.value(xpow(0)))), D.value);
}

TEST(Antisymmetrize, StepValues) {
  const auto q = qc::step(x_axis());
  const auto a = qc::antisymmetrize(q);
  EXPECT_EQ(a.value(xpow(0)), 0);
  for (std::int64_t n = -6; n <= 6; ++n) {
    const Rational want = n > 0 ? ratio(1, 2) : (n < 0 ? ratio(-1, 2) : Rational(0));
    EXPECT_EQ(a.value(xpow(n)), want) << n;
    EXPECT_LE(abs_value(a.value(xpow(n)) - q.value(xpow(n))), q.defect_bound()->value);
    EXPECT_EQ(a.value(xpow(-n)), -a.value(xpow(n)));
  }
}

TEST(Antisymmetrize, FixesAntisymmetricInputs) {
  const auto F = free_xy();
  const auto q = qc::brooks(Subgroup::whole(F), groups::parse_word(F->alphabet(), "x y"));
  const auto a = qc::antisymmetrize(q);
  Rng rng(21, "antisym-fixed");
  for (int i = 0; i < 200; ++i) {
    const Element g = random_element(*F, rng, 8);
    EXPECT_EQ(a(g), q(g));
  }
}

TEST(Antisymmetrize, TreeEdgeBoundAndExactAntisymmetry) {
  auto spec = fxy_star_t();
  const auto q = qc::tree_edge_cocycle(spec.subgroup(0), 2);
  const auto a = qc::antisymmetrize(q);
  const auto& G = spec.group();
  Rng rng(22, "antisym-tree");
  for (int i = 0; i < 200; ++i) {
    const Element h = rng.random_word(G, spec.subgroup(0).generators(), rng.below(8));
    EXPECT_EQ(a(G.inverse(h)), coeffs::act(a.codomain(), G, G.inverse(h), -a(h)));
    EXPECT_TRUE(coeffs::norm_at_most(q.codomain(), a(h) - q(h), q.defect_bound()->value));
  }
}

TEST(Brooks, Examples) {
  const auto F = free_xy();
  const auto& A = F->alphabet();
  const auto H = Subgroup::whole(F);
  const FreeWord w = groups::parse_word(A, "x y");
  const auto h = qc::brooks(H, w);
  EXPECT_EQ(h.value(F->parse("x y x y")), 2);
  EXPECT_EQ(h.value(F->parse("y^-1 x^-1")), -1);
  EXPECT_EQ(h.value(F->parse("y x")), 0);
  EXPECT_EQ(qc::count_disjoint(groups::parse_word(A, "x x x"), groups::parse_word(A, "x x")), 1u);
}

TEST(Brooks, MatchesSubwordCountOracle) {
  const auto F = free_xy();
  const auto& A = F->alphabet();
  for (const char* text : {"x y", "[x,y]", "x^2 y"}) {
    const FreeWord w = groups::parse_word(A, text);
    const auto h = qc::brooks(Subgroup::whole(F), w);
    Rng rng(23, text);
    for (int i = 0; i < 300; ++i) {
      const FreeWord u = std::get<FreeWord>(random_element(*F, rng, 14));
      EXPECT_EQ(h.value(u), subword_count(u, w) - subword_count(u, w.inverse())) << format_word(A, u);
    }
  }
}

TEST(Brooks, DefectWithinBound) {
  const auto F = free_xy();
  const auto h = qc::brooks(Subgroup::whole(F), groups::parse_word(F->alphabet(), "x y"));
  const auto D = qc::defect(h, 3, 2000, 1);
  EXPECT_TRUE(D.at_most(h.defect_bound()->value));
}

TEST(Homogenize, Examples) {
  const auto F = free_xy();
  const auto H = Subgroup::whole(F);
  const auto phi = qc::homomorphism(H, {1, 0});
  const auto psi = qc::homogenize(phi, 8);
  Rng rng(24, "homogenize");
  for (int i = 0; i < 50; ++i) {
    const Element g = random_element(*F, rng, 8);
    EXPECT_EQ(psi(g), phi(g));
  }
  const auto hom = qc::brooks_homogenized(H, groups::parse_word(F->alphabet(), "x y"));
  EXPECT_EQ(hom.value(F->parse("x y")), 1);
  EXPECT_EQ(hom.value(F->parse("(x y)^5")), 5);
  EXPECT_EQ(hom.value(F->parse("y x")), 1);  // conjugation invariance
  EXPECT_TRUE(hom.flags().homogeneous);
  // Homogenized step: psi(x^n) -> 0; the numeric version stays within its error.
  const auto s = qc::homogenize(qc::step(x_axis()), 16);
  ASSERT_TRUE(s.value_error());
  for (std::int64_t n = -4; n <= 4; ++n) EXPECT_LE(abs_value(s.value(xpow(n))), *s.value_error());
}

TEST(Homogenize, DefectAtMostTwiceOriginal) {
  const auto F = free_xy();
  const auto H = Subgroup::whole(F);
  for (const char* w : {"x y", "[x,y]"}) {
    const auto phi = qc::brooks(H, groups::parse_word(F->alphabet(), w));
    const auto psi = qc::brooks_homogenized(H, groups::parse_word(F->alphabet(), w));
    const auto Dphi = qc::defect(phi, 3);
    const auto Dpsi = qc::defect(psi, 3);
    EXPECT_LE(Dpsi.value, 2 * Dphi.value + 1e-12) << w;
    EXPECT_TRUE(Dpsi.at_most(psi.defect_bound()->value));
  }
}

TEST(TreeEdge, Values) {
  auto spec = fxy_star_t();
  const auto q = qc::tree_edge_cocycle(spec.subgroup(0), 2);
  const auto& V = q.codomain();
  const auto ex = V.tag_index("e_x"), ey = V.tag_index("e_y");
  const auto& G = spec.group();
  EXPECT_EQ(q(el(spec, "x")), ModuleVector::basis(G.identity(), ex));
  EXPECT_EQ(q(el(spec, "x y")), ModuleVector::basis(G.identity(), ex) + ModuleVector::basis(el(spec, "x"), ey));
  EXPECT_TRUE(q(el(spec, "x x^-1")).is_zero());
  EXPECT_NEAR(coeffs::norm(V, q(el(spec, "x y"))), std::sqrt(2.0), 1e-12);
}

TEST(TreeEdge, ExactCocycleAndNormIsWordLength) {
  auto spec = fxy_star_t();
  const auto& H = spec.subgroup(0);
  const auto& G = spec.group();
  for (Rational p : {Rational(1), Rational(2), Rational(3)}) {
    const auto q = qc::tree_edge_cocycle(H, p);
    const auto ball = groups::enumerate_ball(G, H.generators(), 3);
    for (const Element& a : ball)
      for (const Element& b : ball) ASSERT_TRUE(qc::coboundary1(q, a, b).is_zero());
    for (const Element& h : ball) {
      const auto len = std::get<FreeWord>(H.to_intrinsic(h)).length();
      EXPECT_EQ(coeffs::norm_exact_pth_power(q.codomain(), q(h)), static_cast<long>(len));
    }
  }
}

TEST(Coboundary, SquareIsZero) {
  const auto F = free_xy();
  const auto H = Subgroup::whole(F);
  const auto q = qc::brooks(H, groups::parse_word(F->alphabet(), "x y"));
  const qc::Cochain2 c = [&](const Element& a, const Element& b) { return qc::coboundary1(q, a, b); };
  Rng rng(25, "d2d1");
  for (int i = 0; i < 50; ++i) {
    const Element a = random_element(*F, rng, 6), b = random_element(*F, rng, 6), d = random_element(*F, rng, 6);
    EXPECT_TRUE(qc::coboundary2(q.codomain(), *F, c, a, b, d).is_zero());
  }
  const auto t = qc::step(x_axis());
  const qc::Cochain2 ct = [&](const Element& a, const Element& b) { return qc::coboundary1(t, a, b); };
  for (std::int64_t i = -3; i <= 3; ++i)
    for (std::int64_t j = -3; j <= 3; ++j)
      EXPECT_TRUE(qc::coboundary2(t.codomain(), t.group(), ct, xpow(i), xpow(j), xpow(i - j)).is_zero());
}

TEST(LinearCombination, ValuesAndBound) {
  const auto F = free_xy();
  const auto H = Subgroup::whole(F);
  const auto a = qc::brooks(H, groups::parse_word(F->alphabet(), "x y"));
  const auto b = qc::homomorphism(H, {1, 2});
  const auto c = qc::linear_combination({{2, a}, {-3, b}});
  const Element g = F->parse("x y x^2");
  EXPECT_EQ(c.value(g), 2 * a.value(g) - 3 * b.value(g));
  ASSERT_TRUE(c.defect_bound());
  EXPECT_EQ(c.defect_bound()->value, 2 * a.defect_bound()->value);
}

TEST(Descriptor, BuildsAndRejects) {
  auto spec = fxy_star_t();
  const auto& H = spec.subgroup(0);
  const auto q = qc::from_descriptor(H, {{"kind", "brooks"}, {"w", "x y"}, {"scale", "1/2"}});
  EXPECT_EQ(q.value(el(spec, "x y")), ratio(1, 2));
  EXPECT_THROW(qc::from_descriptor(H, {{"kind", "unknown"}}), SchemaError);
  EXPECT_THROW(qc::from_descriptor(H, {{"kind", "brooks"}}), SchemaError);
  EXPECT_THROW(qc::from_descriptor(H, {{"kind", "brooks"}, {"w", "x q"}}), SchemaError);
}

TEST(Evaluation, OutsideDomainThrows) {
  const auto q = qc::cyclic_homomorphism(x_axis());
  EXPECT_THROW(q(free_xy()->parse("y")), CheckFailure);
}

}  // namespace
}  // namespace qcext::testing

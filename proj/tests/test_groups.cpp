#include "support.hpp"

#include "qcext/errors.hpp"
#include "qcext/groups/subgroup.hpp"

namespace qcext::testing {
namespace {

using groups::parse_word;
using groups::format_word;

TEST(FreeWord, ReductionExamples) {
  auto F = free_xy();
  const auto& A = F->alphabet();
  EXPECT_TRUE(parse_word(A, "x x^-1").is_identity());
  EXPECT_EQ(format_word(A, parse_word(A, "x y y^-1 x")), "x^2");
  EXPECT_EQ(parse_word(A, "[x,y]^-1"), parse_word(A, "y^-1 x^-1 y x"));
}

TEST(FreeWord, CommutatorOfCommutatorAndT) {
  auto F = GroupContext::free_group(std::vector<std::string>{"x", "y", "t"});
  const auto& A = F->alphabet();
  EXPECT_EQ(parse_word(A, "[x,y]^-1 t^-1 [x,y] t"), parse_word(A, "[[x,y],t]"));
}

TEST(FreeWord, ExponentVectors) {
  auto F = free_xy();
  const auto& A = F->alphabet();
  EXPECT_EQ(groups::exponent_vector(parse_word(A, "x y^-1 x"), 2), (std::vector<std::int64_t>{2, -1}));
  EXPECT_EQ(groups::exponent_vector(parse_word(A, "[x,y]"), 2), (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(groups::exponent_vector(parse_word(A, "x^3"), 2), (std::vector<std::int64_t>{3, 0}));
}

TEST(FreeWord, ParseRejectsUnknownGenerator) {
  auto F = free_xy();
  EXPECT_THROW(parse_word(F->alphabet(), "x z"), ParseError);
}

TEST(FreeWord, GroupLawsOnRandomWords) {
  auto F = free_xy();
  Rng rng(11, "free-word-laws");
  for (int i = 0; i < 500; ++i) {
    const auto a = std::get<FreeWord>(random_element(*F, rng, 8));
    const auto b = std::get<FreeWord>(random_element(*F, rng, 8));
    const auto c = std::get<FreeWord>(random_element(*F, rng, 8));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a.inverse()).is_identity());
    EXPECT_EQ((a * b).inverse(), b.inverse() * a.inverse());
    EXPECT_EQ(parse_word(F->alphabet(), format_word(F->alphabet(), a)), a);
    EXPECT_EQ(a.pow(3), a * a * a);
  }
}

TEST(FreeProduct, SyllableArithmetic) {
  auto spec = z_star_z();
  const auto& G = spec.group();
  const Element ab = G.product(el(spec, "a"), el(spec, "b"));
  ASSERT_EQ(std::get<groups::FreeProductElement>(ab).syllable_count(), 2u);
  EXPECT_EQ(G.product(ab, el(spec, "b^-1")), el(spec, "a"));
  EXPECT_EQ(G.format(G.product(el(spec, "a b"), el(spec, "b^-1 a^2"))), "a^3");
}

TEST(FreeProduct, FiniteFactorMultiplication) {
  auto c3 = GroupContext::finite(groups::FiniteGroup::cyclic(3, "s"));
  auto z = GroupContext::free_group(std::vector<std::string>{"t"});
  auto G = GroupContext::free_product(c3, z);
  const Element s = G->parse("s");
  EXPECT_TRUE(G->is_identity(G->power(s, 3)));
  EXPECT_EQ(G->product(G->parse("s t"), G->parse("t^-1 s^2")), G->identity());
}

TEST(FreeProduct, GroupLawsOnRandomElements) {
  auto spec = fxy_star_t();
  const auto& G = spec.group();
  Rng rng(12, "free-product-laws");
  for (int i = 0; i < 300; ++i) {
    const Element a = random_element(G, rng, 8), b = random_element(G, rng, 8), c = random_element(G, rng, 8);
    EXPECT_EQ(G.product(G.product(a, b), c), G.product(a, G.product(b, c)));
    EXPECT_TRUE(G.is_identity(G.product(a, G.inverse(a))));
    EXPECT_EQ(G.parse(G.format(a)), a);
  }
}

TEST(Ball, FreeGroupCountsMatchBruteForce) {
  auto F = free_xy();
  const auto gens = F->generators();
  EXPECT_EQ(groups::enumerate_ball(*F, gens, 0).size(), 1u);
  EXPECT_EQ(groups::enumerate_ball(*F, gens, 1).size(), 5u);
  for (std::size_t r = 0; r <= 4; ++r) EXPECT_EQ(groups::enumerate_ball(*F, gens, r).size(), brute_ball_size(2, r));
  // Oracle value at radius 2: 1 + 4 + 12.
  EXPECT_EQ(brute_ball_size(2, 2), 17u);
}

TEST(Subgroup, CyclicMembershipAndExponent) {
  auto F = free_xy();
  const FreeWord w = parse_word(F->alphabet(), "x y");
  const auto H = groups::Subgroup::cyclic(F, w);
  EXPECT_TRUE(H.contains(F->parse("(x y)^5")));
  EXPECT_FALSE(H.contains(F->parse("y x")));
  EXPECT_EQ(H.cyclic_exponent(parse_word(F->alphabet(), "(x y)^-3")), -3);
  EXPECT_TRUE(groups::is_proper_power(parse_word(F->alphabet(), "x y x y")));
  EXPECT_FALSE(groups::is_proper_power(w));
}

TEST(Subgroup, FactorRoundTrip) {
  auto spec = fxy_star_t();
  const auto& H = spec.subgroup(0);
  const Element h = el(spec, "x y^-2");
  EXPECT_TRUE(H.contains(h));
  EXPECT_FALSE(H.contains(el(spec, "x t")));
  EXPECT_EQ(H.from_intrinsic(H.to_intrinsic(h)), h);
}

}  // namespace
}  // namespace qcext::testing

#include "support.hpp"

#include <cmath>

#include "qcext/coeffs.hpp"
#include "qcext/errors.hpp"

namespace qcext::testing {
namespace {

using coeffs::ModuleSpec;
using coeffs::ModuleVector;

ModuleVector random_vector(const GroupContext& G, Rng& rng, std::size_t terms, std::uint32_t tags) {
  ModuleVector v;
  for (std::size_t i = 0; i < terms; ++i)
    v += ModuleVector::basis(random_element(G, rng, 3), static_cast<std::uint32_t>(rng.below(tags)),
                             ratio(rng.between(-5, 5), 1 + static_cast<long>(rng.below(3))));
  return v;
}

TEST(Coeffs, TrivialAction) {
  auto F = free_xy();
  const auto V = ModuleSpec::trivial_reals();
  EXPECT_EQ(coeffs::act(V, *F, F->parse("x y"), ModuleVector::scalar(3)), ModuleVector::scalar(3));
}

TEST(Coeffs, IndexedAction) {
  auto F = free_xy();
  const auto V = ModuleSpec::indexed_lp(2, {"e"});
  const Element g = F->parse("x y^-1");
  EXPECT_EQ(coeffs::act(V, *F, g, ModuleVector::basis(F->identity(), 0)), ModuleVector::basis(g, 0));
}

TEST(Coeffs, Norms) {
  auto F = free_xy();
  const auto V = ModuleSpec::indexed_lp(2, {"e"});
  EXPECT_DOUBLE_EQ(coeffs::norm(V, ModuleVector::basis(F->identity(), 0)), 1.0);
  const ModuleVector v = ModuleVector::basis(F->identity(), 0, 3) + ModuleVector::basis(F->parse("x"), 0, 4);
  EXPECT_DOUBLE_EQ(coeffs::norm(V, v), 5.0);
  EXPECT_TRUE(coeffs::norm_is_rational(V, v));
  EXPECT_EQ(coeffs::norm_upper(V, v), 5);
  EXPECT_TRUE(coeffs::norm_at_most(V, v, 5));
  EXPECT_FALSE(coeffs::norm_at_most(V, v, ratio(49, 10)));
  EXPECT_EQ(coeffs::norm(V, ModuleVector()), 0.0);
  EXPECT_EQ(coeffs::norm_exact_pth_power(V, v), 25);
}

TEST(Coeffs, IrrationalNormUpperBound) {
  auto F = free_xy();
  const auto V = ModuleSpec::indexed_lp(2, {"e"});
  const ModuleVector v = ModuleVector::basis(F->identity(), 0) + ModuleVector::basis(F->parse("y"), 0);
  EXPECT_FALSE(coeffs::norm_is_rational(V, v));
  EXPECT_GE(to_double(coeffs::norm_upper(V, v)), std::sqrt(2.0));
  EXPECT_TRUE(coeffs::norm_at_most(V, v, ratio(1415, 1000)));
  EXPECT_FALSE(coeffs::norm_at_most(V, v, ratio(1414, 1000)));
}

TEST(Coeffs, Projection) {
  auto F = free_xy();
  const auto V = ModuleSpec::indexed_lp(1, {"e"});
  auto in_x = [&](const Element& g) {
    for (auto l : std::get<FreeWord>(g).letters())
      if (groups::generator_of(l) != 0) return false;
    return true;
  };
  const ModuleVector h_part = ModuleVector::basis(F->parse("x^2"), 0, 2);
  EXPECT_EQ(coeffs::project_to_submodule(V, in_x, h_part), h_part);
  EXPECT_TRUE(coeffs::project_to_submodule(V, in_x, ModuleVector::basis(F->parse("y"), 0)).is_zero());
  Rng rng(4, "projection");
  for (int i = 0; i < 200; ++i) {
    const ModuleVector v = random_vector(*F, rng, 5, 1);
    const ModuleVector p = coeffs::project_to_submodule(V, in_x, v);
    EXPECT_LE(coeffs::norm(V, p), coeffs::norm(V, v) + 1e-12);
    EXPECT_EQ(coeffs::project_to_submodule(V, in_x, p), p);
  }
}

TEST(Coeffs, ActionLaws) {
  auto F = free_xy();
  const auto V = ModuleSpec::indexed_lp(3, {"e_x", "e_y"});
  Rng rng(5, "action-laws");
  for (int i = 0; i < 200; ++i) {
    const Element g = random_element(*F, rng, 5), h = random_element(*F, rng, 5);
    const ModuleVector v = random_vector(*F, rng, 4, 2), w = random_vector(*F, rng, 4, 2);
    EXPECT_EQ(coeffs::act(V, *F, F->inverse(g), coeffs::act(V, *F, g, v)), v);
    EXPECT_EQ(coeffs::act(V, *F, F->product(g, h), v), coeffs::act(V, *F, g, coeffs::act(V, *F, h, v)));
    EXPECT_EQ(coeffs::act(V, *F, g, v + w), coeffs::act(V, *F, g, v) + coeffs::act(V, *F, g, w));
    EXPECT_NEAR(coeffs::norm(V, coeffs::act(V, *F, g, v)), coeffs::norm(V, v), 1e-12);
    EXPECT_LE(coeffs::norm(V, v + w), coeffs::norm(V, v) + coeffs::norm(V, w) + 1e-12);
    EXPECT_TRUE((v - v).is_zero());
  }
}

TEST(Coeffs, MixingKindsThrows) {
  auto F = free_xy();
  EXPECT_THROW(ModuleVector::scalar(1) + ModuleVector::basis(F->identity(), 0), MixedContextError);
  EXPECT_THROW(ModuleVector::basis(F->identity(), 0).scalar_value(), MixedContextError);
}

TEST(Coeffs, SpecSchema) {
  EXPECT_THROW(ModuleSpec::indexed_lp(ratio(1, 2), {"e"}), SchemaError);
  EXPECT_THROW(ModuleSpec::indexed_lp(2, {}), SchemaError);
  const auto V = ModuleSpec::indexed_lp(2, {"e_x", "e_y"});
  EXPECT_EQ(ModuleSpec::from_json(V.to_json()), V);
  EXPECT_EQ(ModuleSpec::from_json("trivial_reals"), ModuleSpec::trivial_reals());
  EXPECT_THROW(ModuleSpec::from_json({{"kind", "banach"}}), SchemaError);
}

}  // namespace
}  // namespace qcext::testing

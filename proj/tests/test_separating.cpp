#include "support.hpp"

#include "qcext/separating.hpp"
#include "qcext/verify.hpp"

namespace qcext::testing {
namespace {

using embedding::Coset;
using geodesics::GeodesicEngine;
using separating::Separator;

std::vector<Coset> cosets_of(const separating::SeparatingCosets& s) {
  std::vector<Coset> out;
  for (const auto& c : s.cosets) out.push_back(c.coset);
  return out;
}

TEST(Separating, FreeProductExample) {
  auto spec = z_star_z();
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const Element one = spec.group().identity(), g = el(spec, "a b a^2");
  EXPECT_EQ(cosets_of(sep.separating_cosets(one, g, 0)),
            (std::vector<Coset>{spec.coset(0, one), spec.coset(0, el(spec, "a b"))}));
  EXPECT_EQ(cosets_of(sep.separating_cosets(one, g, 1)), (std::vector<Coset>{spec.coset(1, el(spec, "a"))}));
  const auto E = sep.entrance_exit_set(one, g, spec.coset(1, el(spec, "a")));
  ASSERT_EQ(E.pairs.size(), 1u);
  EXPECT_EQ(E.pairs[0], std::make_pair(el(spec, "a"), el(spec, "a b")));
  EXPECT_TRUE(sep.separating_cosets(g, g, 0).cosets.empty());
}

TEST(Separating, TrivialCase) {
  auto spec = z_star_z();
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const Element one = spec.group().identity(), a5 = el(spec, "a^5");
  const auto S = sep.separating_cosets(one, a5, 0);
  EXPECT_TRUE(S.trivial);
  EXPECT_EQ(cosets_of(S), (std::vector<Coset>{spec.coset(0, one)}));
  const auto E = sep.entrance_exit_set(one, a5, spec.coset(0, one));
  ASSERT_EQ(E.pairs.size(), 1u);
  EXPECT_EQ(E.pairs[0], std::make_pair(one, a5));
}

TEST(Separating, RelXEntranceExit) {
  auto spec = rel_cyclic("x", 0);
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const Element one = spec.group().identity(), g = el(spec, "y x^5 y");
  const Coset c = spec.coset(0, el(spec, "y"));
  ASSERT_TRUE(sep.separating_cosets(one, g, 0).contains(c));
  const auto E = sep.entrance_exit_set(one, g, c);
  ASSERT_EQ(E.pairs.size(), 1u);
  EXPECT_EQ(E.pairs[0], std::make_pair(el(spec, "y"), el(spec, "y x^5")));
}

TEST(Separating, TrianglePartitionExample) {
  auto spec = z_star_z();
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const Element one = spec.group().identity(), g = el(spec, "a b a^2 b"), h = el(spec, "a b");
  for (embedding::SubgroupId l = 0; l < 2; ++l) {
    const auto P = sep.triangle_partition(one, g, h, l);
    EXPECT_LE(P.F.size(), 2u);
    for (const Coset& c : P.s_prime)
      EXPECT_EQ(sep.entrance_exit_set(one, g, c).pairs, sep.entrance_exit_set(one, h, c).pairs);
    for (const Coset& c : P.s_double_prime)
      EXPECT_EQ(sep.entrance_exit_set(one, g, c).pairs, sep.entrance_exit_set(h, g, c).pairs);
  }
  // Degenerate triangle h = f.
  const auto P = sep.triangle_partition(one, g, one, 0);
  EXPECT_TRUE(P.s_prime.empty());
  EXPECT_LE(P.F.size(), 2u);
}

void expect_suite_clean(const verify::SuiteReport& rep) {
  for (const auto& c : rep.checks) {
    EXPECT_EQ(c.violations, 0u) << c.name << (c.failures.empty() ? "" : ": " + c.failures.front());
  }
}

verify::SuiteConfig small_config(std::uint64_t seed) {
  verify::SuiteConfig cfg;
  cfg.ball_radius = 2;
  cfg.samples = 150;
  cfg.sample_length = 3;
  cfg.seed = seed;
  return cfg;
}

TEST(SeparatingProperties, FreeProduct) {
  auto spec = fxy_star_t();
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const auto cfg = small_config(5);
  expect_suite_clean(verify::separating_suite(sep, verify::triple_domain(spec, cfg), cfg));
}

// At C = 0 the parallel edges X:x and H:x give geodesics 1 -> x y avoiding H,
// so the penetration properties are only checked from C = 1 on.
TEST(SeparatingProperties, RelX) {
  auto spec = rel_cyclic("x", 1);
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const auto cfg = small_config(6);
  expect_suite_clean(verify::separating_suite(sep, verify::triple_domain(spec, cfg), cfg));
}

TEST(SeparatingProperties, RelXAtZeroHasAvoidingGeodesics) {
  auto spec = rel_cyclic("x", 0);
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const Element one = spec.group().identity(), g = el(spec, "x y");
  ASSERT_TRUE(sep.separating_cosets(one, g, 0).contains(spec.coset(0, one)));
  const auto geos = engine.geodesics(one, g);
  EXPECT_EQ(geos.paths.size(), 2u);
  std::size_t avoiding = 0;
  for (const auto& p : geos.paths) avoiding += geodesics::components(p, 0).empty();
  EXPECT_EQ(avoiding, 1u);
}

TEST(SeparatingProperties, RelXYAboveCalibratedC) {
  auto spec = rel_cyclic("x y", 2);
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const auto cfg = small_config(7);
  expect_suite_clean(verify::separating_suite(sep, verify::triple_domain(spec, cfg), cfg));
}

TEST(SeparatingProperties, CardinalityBoundOnBall) {
  auto spec = rel_cyclic("x y", 2);
  GeodesicEngine engine(spec);
  Separator sep(engine);
  const auto& G = spec.group();
  for (const Element& g : groups::enumerate_ball(G, G.generators(), 4))
    EXPECT_LE(sep.separating_cosets(G.identity(), g, 0).cosets.size(), engine.distance(G.identity(), g));
}

}  // namespace
}  // namespace qcext::testing

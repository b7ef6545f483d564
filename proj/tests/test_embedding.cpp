#include "support.hpp"

#include <deque>
#include <map>

#include "qcext/calibration.hpp"
#include "qcext/errors.hpp"

namespace qcext::testing {
namespace {

using embedding::relative_distance;

// Oracle: breadth-first search in the coned-off Cayley graph of F(x,y) rel <x>,
// over reduced words of length <= 6, with the H-edges of the coset <x> itself removed.
std::map<FreeWord, int> filtered_bfs_rel_x(std::size_t max_len, std::int64_t max_power) {
  const FreeWord x = FreeWord::generator(0);
  auto in_H = [&](const FreeWord& v) {
    for (auto l : v.letters())
      if (groups::generator_of(l) != 0) return false;
    return true;
  };
  std::map<FreeWord, int> dist{{FreeWord(), 0}};
  std::deque<FreeWord> queue{FreeWord()};
  while (!queue.empty()) {
    const FreeWord v = queue.front();
    queue.pop_front();
    std::vector<FreeWord> next;
    for (std::size_t g = 0; g < 2; ++g)
      for (int s : {1, -1}) next.push_back(v * FreeWord::generator(g, s));
    if (!in_H(v))
      for (std::int64_t k = -max_power; k <= max_power; ++k)
        if (k != 0) next.push_back(v * x.pow(k));
    for (const auto& u : next) {
      if (u.length() > max_len || dist.count(u)) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

TEST(RelativeDistance, FreeProductOffDiagonalIsInfinite) {
  auto spec = z_star_z();
  EXPECT_TRUE(relative_distance(spec, 0, el(spec, "a"), el(spec, "a^3")).is_infinite());
  EXPECT_EQ(relative_distance(spec, 0, el(spec, "a^2"), el(spec, "a^2")).value(), 0u);
}

TEST(RelativeDistance, RelXMatchesFilteredBfs) {
  auto spec = rel_cyclic("x", 0);
  const auto oracle = filtered_bfs_rel_x(6, 6);
  for (std::int64_t n = -3; n <= 3; ++n) {
    const FreeWord xn = FreeWord::generator(0, n);
    ASSERT_TRUE(oracle.count(xn));
    EXPECT_EQ(relative_distance(spec, 0, spec.group().identity(), xn).value(), static_cast<std::uint64_t>(oracle.at(xn)))
        << "n = " << n;
  }
  EXPECT_EQ(relative_distance(spec, 0, spec.group().identity(), el(spec, "x")).value(), 1u);
}

TEST(LocalFiniteness, Balls) {
  auto fp = z_star_z();
  EXPECT_EQ(embedding::check_local_finiteness(fp, 0, 5).elements.size(), 1u);
  auto rx = rel_cyclic("x", 0);
  const auto ball = embedding::check_local_finiteness(rx, 0, 2);
  std::set<Element> got(ball.elements.begin(), ball.elements.end());
  std::set<Element> want;
  for (const char* s : {"1", "x", "x^-1", "x^2", "x^-2"}) want.insert(el(rx, s));
  EXPECT_EQ(got, want);
  EXPECT_EQ(embedding::check_local_finiteness(rx, 0, 0).elements.size(), 1u);
}

TEST(Coset, CanonicalRepresentatives) {
  auto fp = z_star_z();
  EXPECT_EQ(fp.coset(0, el(fp, "a b a^2")).rep, el(fp, "a b"));
  EXPECT_EQ(fp.coset(1, el(fp, "a b")).rep, el(fp, "a"));
  auto rx = rel_cyclic("x y", 1);
  const auto c = rx.coset(0, el(rx, "y (x y)^3"));
  EXPECT_TRUE(rx.coset_contains(c, el(rx, "y")));
  EXPECT_EQ(rx.coset(0, el(rx, "y x y")), rx.coset(0, el(rx, "y")));
}

TEST(Coset, TranslationIsEquivariant) {
  auto spec = rel_cyclic("x y", 1);
  Rng rng(3, "coset-translate");
  for (int i = 0; i < 200; ++i) {
    const Element g = random_element(spec.group(), rng, 6), h = random_element(spec.group(), rng, 6);
    EXPECT_EQ(spec.translate(h, spec.coset(0, g)), spec.coset(0, spec.group().product(h, g)));
  }
}

TEST(EmbeddingSpec, JsonRoundTripAndSchemaErrors) {
  auto rx = rel_cyclic("x y", ratio(3, 2));
  const auto back = EmbeddingSpec::from_json(rx.to_json());
  EXPECT_EQ(back.to_json(), rx.to_json());
  EXPECT_EQ(back.C(), ratio(3, 2));
  EXPECT_THROW(EmbeddingSpec::from_json({{"family", "nope"}}), SchemaError);
  EXPECT_THROW(EmbeddingSpec::from_json({{"family", "free_rel_cyclic"}, {"rank", 2}, {"w", "x x"}}), SchemaError);
  EXPECT_THROW(EmbeddingSpec::from_json({{"family", "free_rel_cyclic"}, {"rank", 2}, {"w", "y x y^-1"}}), SchemaError);
  EXPECT_THROW(EmbeddingSpec::from_json({{"family", "free_rel_cyclic"}, {"rank", 2}, {"w", "x"}, {"C", 1}}), SchemaError);
  EXPECT_THROW(EmbeddingSpec::from_json({{"family", "free_product"}, {"factors", nlohmann::json::array({{{"kind", "cyclic"}, {"generator", "a"}}})}}), SchemaError);
}

TEST(Calibration, FreeProductIsZero) {
  geodesics::GeodesicEngine engine(z_star_z());
  embedding::CalibrationConfig cfg;
  cfg.samples = 50;
  EXPECT_EQ(embedding::calibrate_C(engine, cfg).C_bar, 0);
}

// The triangle 1, x^2, x y has two parallel edges (X:x and H:x) at the base,
// leaving an isolated H-component of length 2 on three sides.
TEST(Calibration, RelXTriangleWitness) {
  auto spec = rel_cyclic("x", 0);
  geodesics::GeodesicEngine engine(spec);
  const auto rep = embedding::calibrate_polygon(engine, {el(spec, "1"), el(spec, "x^2"), el(spec, "x y")});
  EXPECT_EQ(rep.C_bar, ratio(2, 3));
}

TEST(Calibration, SampledValuesAreBoundedAndDeterministic) {
  embedding::CalibrationConfig cfg;
  cfg.samples = 200;
  cfg.seed = 0;
  geodesics::GeodesicEngine ex(rel_cyclic("x", 0, 0));
  const auto rx = embedding::calibrate_C(ex, cfg);
  EXPECT_GE(rx.C_bar, ratio(2, 3));
  EXPECT_LE(rx.C_bar, 1);
  geodesics::GeodesicEngine exy(rel_cyclic("x y", 1, 0));
  const auto rxy = embedding::calibrate_C(exy, cfg);
  EXPECT_FALSE(rxy.infinite);
  // Regression baseline from the seed-0 run.
  EXPECT_EQ(rxy.C_bar, ratio(4, 3));
  EXPECT_EQ(embedding::calibrate_C(exy, cfg).C_bar, rxy.C_bar);
}

TEST(Calibration, ConfigRejectsUnknownFields) {
  EXPECT_THROW(embedding::CalibrationConfig::from_json({{"sidez", {3}}}), SchemaError);
}

}  // namespace
}  // namespace qcext::testing

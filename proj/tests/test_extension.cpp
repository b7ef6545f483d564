#include "support.hpp"

#include "qcext/errors.hpp"
#include "qcext/extension.hpp"
#include "qcext/verify.hpp"

namespace qcext::testing {
namespace {

using coeffs::ModuleVector;
using extension::Extension;
using qc::QuasiCocycle;

std::vector<std::optional<QuasiCocycle>> cyclic_family(const EmbeddingSpec& spec) {
  std::vector<std::optional<QuasiCocycle>> f;
  for (embedding::SubgroupId l = 0; l < spec.subgroup_count(); ++l) f.push_back(qc::cyclic_homomorphism(spec.subgroup(l)));
  return f;
}

TEST(ElementaryBicombing, Values) {
  auto spec = z_star_z();
  const auto q = qc::cyclic_homomorphism(spec.subgroup(0));
  const auto r = extension::elementary_bicombing(spec, 0, q);
  const Element one = spec.group().identity();
  EXPECT_EQ(r(one, el(spec, "a^4")), q(el(spec, "a^4")));
  EXPECT_TRUE(r(el(spec, "b a"), el(spec, "b a")).is_zero());
  EXPECT_EQ(r(el(spec, "a^2"), el(spec, "a^5")), ModuleVector::scalar(3));
  EXPECT_FALSE(r.defined(one, el(spec, "b")));
}

TEST(KConstant, Values) {
  auto fp = z_star_z();
  EXPECT_EQ(extension::K_constant(fp, 0, qc::cyclic_homomorphism(fp.subgroup(0))).value, 0);
  auto rx0 = rel_cyclic("x", 0);
  EXPECT_EQ(extension::K_constant(rx0, 0, qc::cyclic_homomorphism(rx0.subgroup(0))).value, 0);
  // dhat(1, x^n) = |n| < 15 gives the ball {x^n : |n| <= 14}.
  auto rx1 = rel_cyclic("x", 1);
  const auto K = extension::K_constant(rx1, 0, qc::cyclic_homomorphism(rx1.subgroup(0)));
  EXPECT_EQ(K.value, 14);
  EXPECT_EQ(K.ball_size, 29u);
  EXPECT_TRUE(K.exact);
}

TEST(Extension, FreeProductExamples) {
  auto spec = z_star_z();
  const Extension ext(spec, cyclic_family(spec));
  EXPECT_EQ(ext(el(spec, "a b a^2 b^-3")), ModuleVector::scalar(1));
  EXPECT_EQ(ext(el(spec, "a^7")), ModuleVector::scalar(7));
  EXPECT_EQ(ext.certificate().total(), 0);
  EXPECT_FALSE(ext.conditional());

  const Extension only_a(spec, {qc::cyclic_homomorphism(spec.subgroup(0)), std::nullopt});
  EXPECT_EQ(only_a.combed_value(0, spec.group().identity(), el(spec, "a b a^2")), ModuleVector::scalar(3));
  EXPECT_TRUE(only_a.combed_value(0, el(spec, "b"), el(spec, "b^3")).is_zero());
}

TEST(Extension, SingletonAverageIsElementaryValue) {
  auto spec = z_star_z();
  const Extension ext(spec, cyclic_family(spec));
  const Element one = spec.group().identity(), g = el(spec, "a^2 b^3 a^-1");
  const auto c = spec.coset(1, el(spec, "a^2"));
  const auto E = ext.separator().entrance_exit_set(one, g, c);
  ASSERT_EQ(E.pairs.size(), 1u);
  EXPECT_EQ(extension::averaged_value(ext.separator(), one, g, c, ext.input(1)),
            ext.elementary(1)(E.pairs[0].first, E.pairs[0].second));
}

TEST(Extension, MatchesTelescopingAndExponentOracles) {
  auto spec = z_star_z();
  const auto family = cyclic_family(spec);
  const Extension ext(spec, family);
  const auto& G = spec.group();
  Rng rng(31, "telescoping");
  for (int i = 0; i < 500; ++i) {
    const Element g = random_element(G, rng, 12);
    const ModuleVector v = ext(g);
    EXPECT_EQ(v, extension::telescoping_sum(spec, family, g));
    EXPECT_EQ(v, ModuleVector::scalar(total_exponent(G, g)));
  }
}

TEST(Extension, RestrictsToInputs) {
  auto spec = rel_cyclic("x y", 2);
  const Extension ext(spec, cyclic_family(spec));
  for (std::int64_t n = -6; n <= 6; ++n) {
    const Element h = spec.group().power(el(spec, "x y"), n);
    EXPECT_EQ(ext(h), ext.input(0)(h));
  }
}

TEST(Extension, RejectsNonAntisymmetricInput) {
  auto spec = rel_cyclic("x", 0);
  EXPECT_THROW(Extension(spec, {qc::step(spec.subgroup(0))}), CheckFailure);
  auto other = rel_cyclic("x", 0);
  EXPECT_THROW(Extension(spec, {qc::cyclic_homomorphism(other.subgroup(0))}), MixedContextError);
}

TEST(Extension, GeneralizedExtensionStaysNearInput) {
  auto spec = rel_cyclic("x", 0);
  const auto q = qc::step(spec.subgroup(0));
  const auto kappa = extension::extend_general(spec, {q});
  const auto kappa2 = extension::extend_general(spec, {qc::linear_combination({{2, q}})});
  for (std::int64_t n = -5; n <= 5; ++n) {
    const Element h = spec.group().power(el(spec, "x"), n);
    EXPECT_LE(abs_value(kappa(h).scalar_value() - q.value(h)), q.defect_bound()->value);
  }
  Rng rng(32, "kappa-linear");
  for (int i = 0; i < 100; ++i) {
    const Element g = random_element(spec.group(), rng, 6);
    EXPECT_EQ(kappa2(g), kappa(g).scaled(2));
  }
}

TEST(Extension, DefectWithinCertificateRelX) {
  auto spec = rel_cyclic("x", 0);
  const auto ext = extension::extend_general(spec, {qc::step(spec.subgroup(0))});
  const auto D = qc::defect(ext.as_quasi_cocycle(), 3);
  EXPECT_EQ(ext.certificate().total(), 264);
  EXPECT_TRUE(D.at_most(ext.certificate().total()));
  EXPECT_FALSE(ext.conditional());
}

TEST(Extension, TreeEdgeNormGrowth) {
  auto spec = fxy_star_t();
  const Extension ext(spec, {qc::tree_edge_cocycle(spec.subgroup(0), 2), std::nullopt});
  for (std::int64_t n = 1; n <= 8; ++n) {
    const Element h = spec.group().power(el(spec, "x y"), n);
    EXPECT_EQ(coeffs::norm_exact_pth_power(ext.codomain(), ext(h)), 2 * n);
  }
}

TEST(AsNec, NaiveExtensionTable) {
  const auto rep = extension::asnec_demo(2, 10, 2);
  ASSERT_EQ(rep.rows.size(), 10u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.plus, r.k);
    EXPECT_EQ(r.minus, 0);
  }
  EXPECT_TRUE(rep.values_match);
  EXPECT_TRUE(rep.antisymmetrized_passes);
}

verify::SuiteConfig small_config(std::uint64_t seed) {
  verify::SuiteConfig cfg;
  cfg.ball_radius = 2;
  cfg.samples = 100;
  cfg.sample_length = 3;
  cfg.defect_radius = 2;
  cfg.seed = seed;
  return cfg;
}

void expect_clean(const verify::SuiteReport& rep) {
  for (const auto& c : rep.checks)
    EXPECT_EQ(c.violations, 0u) << c.name << (c.failures.empty() ? "" : ": " + c.failures.front());
}

TEST(BicombingProperties, FreeProductBrooks) {
  auto spec = fxy_star_t();
  const auto& A = spec.subgroup(0).intrinsic().alphabet();
  const Extension ext(spec, {qc::brooks(spec.subgroup(0), groups::parse_word(A, "x y")), std::nullopt});
  const auto cfg = small_config(41);
  expect_clean(verify::bicombing_suite(ext, verify::triple_domain(spec, cfg), cfg));
  expect_clean(verify::extension_suite(ext, cfg));
}

TEST(BicombingProperties, RelXAntisymmetrizedStep) {
  auto spec = rel_cyclic("x", 0);
  const auto ext = extension::extend_general(spec, {qc::step(spec.subgroup(0))});
  const auto cfg = small_config(42);
  expect_clean(verify::bicombing_suite(ext, verify::triple_domain(spec, cfg), cfg));
  expect_clean(verify::extension_suite(ext, cfg));
}

TEST(BicombingProperties, RelXYCyclic) {
  auto spec = rel_cyclic("x y", 2);
  const Extension ext(spec, cyclic_family(spec));
  const auto cfg = small_config(43);
  expect_clean(verify::bicombing_suite(ext, verify::triple_domain(spec, cfg), cfg));
}

}  // namespace
}  // namespace qcext::testing

#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qcext/qc.hpp"
#include "qcext/separating.hpp"

namespace qcext::extension {

using coeffs::ModuleSpec;
using coeffs::ModuleVector;
using embedding::Coset;
using embedding::EmbeddingSpec;
using embedding::SubgroupId;
using groups::Element;
using qc::QuasiCocycle;

// A partial map G x G -> V.
struct BiCombing {
  std::function<bool(const Element&, const Element&)> defined;
  std::function<ModuleVector(const Element&, const Element&)> eval;
  std::optional<Rational> area_bound;
  std::string area_note;

  ModuleVector operator()(const Element& f, const Element& g) const;
};

// r(f,g) = f q(f^-1 g), defined when f^-1 g lies in H_lambda.
BiCombing elementary_bicombing(const EmbeddingSpec& spec, SubgroupId lambda, const QuasiCocycle& q);

struct KConstant {
  Rational value;
  bool exact = true;  // false when value is a rounded-up norm
  std::uint64_t radius = 0;
  std::size_t ball_size = 0;  // 0 for the empty ball (C = 0)
  nlohmann::json to_json() const;
};

// max ||q(g)|| over dhat_lambda(1,g) < 15C; 0 on the empty ball.
KConstant K_constant(const EmbeddingSpec& spec, SubgroupId lambda, const QuasiCocycle& q);

// Mean of r_lambda over E(f,g;coset); zero when the coset does not separate f from g.
ModuleVector averaged_value(const separating::Separator& sep, const Element& f, const Element& g, const Coset& coset,
                            const QuasiCocycle& q);

struct SubgroupCertificate {
  SubgroupId lambda;
  KConstant K;
  std::optional<qc::DefectBound> D;
  Rational contribution() const { return 54 * K.value + 66 * (D ? D->value : Rational(0)); }
};

struct Certificate {
  std::vector<SubgroupCertificate> parts;
  bool complete = true;  // every input carried a defect upper bound
  Rational total() const;
  qc::DefectBound bound() const;
  nlohmann::json to_json() const;
};

struct ExtensionOptions {
  // Reject non-antisymmetric inputs. Disabled only to reproduce the failure of the naive extension.
  bool require_antisymmetric = true;
  bool antisymmetrize_inputs = false;
};

// The extension iota(q) = sum over lambda of r~_lambda(1, .).
class Extension {
 public:
  // family[lambda] is q_lambda on H_lambda; missing entries are zero.
  Extension(EmbeddingSpec spec, std::vector<std::optional<QuasiCocycle>> family, ExtensionOptions options = {});

  const EmbeddingSpec& spec() const;
  const geodesics::GeodesicEngine& engine() const;
  const separating::Separator& separator() const;
  const ModuleSpec& codomain() const;
  const QuasiCocycle& input(SubgroupId lambda) const;

  BiCombing elementary(SubgroupId lambda) const;
  BiCombing combed(SubgroupId lambda) const;
  ModuleVector combed_value(SubgroupId lambda, const Element& f, const Element& g) const;
  ModuleVector operator()(const Element& g) const;
  // iota(q) as a quasi-cocycle on G carrying the certificate as its defect bound.
  QuasiCocycle as_quasi_cocycle() const;

  const Certificate& certificate() const;
  // Elements of H_lambda shared with another H_mu; always empty for the two families.
  std::vector<Element> shared_elements(SubgroupId lambda) const;
  // Set once any geodesic set used was not certified exhaustive.
  bool conditional() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

Extension extend(const EmbeddingSpec& spec, std::vector<std::optional<QuasiCocycle>> family);
// kappa = iota o alpha.
Extension extend_general(const EmbeddingSpec& spec, std::vector<std::optional<QuasiCocycle>> family);

// Telescoping closed form for a free product: sum of prefix . q(syllable).
ModuleVector telescoping_sum(const EmbeddingSpec& spec, const std::vector<std::optional<QuasiCocycle>>& family,
                             const Element& g);

struct AsNecRow {
  std::int64_t k;
  Rational plus;   // q~((y x^n)^k)
  Rational minus;  // q~((y x^n)^-k)
};

struct AsNecReport {
  std::int64_t n = 2;
  std::vector<AsNecRow> rows;
  bool values_match = true;       // plus = k, minus = 0 for every row
  bool antisymmetrized_passes = false;
  qc::DefectEstimate antisymmetrized_defect;
  Rational antisymmetrized_certificate;
  std::size_t defect_ball_radius = 3;
  nlohmann::json to_json() const;
};

// Naive extension of the step quasimorphism from <x> to F(x,y) with C = 0, and the antisymmetrized rerun.
AsNecReport asnec_demo(std::int64_t n = 2, std::int64_t k_max = 10, std::size_t defect_radius = 3);

}  // namespace qcext::extension

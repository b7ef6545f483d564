#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcext/extension.hpp"
#include "qcext/qc.hpp"

namespace qcext::scl {

using groups::Element;
using groups::FreeWord;
using groups::GroupContext;
using qc::QuasiCocycle;

struct Witnessed {
  Rational value;
  std::string provenance;  // exact | empirical-lower-bound | certified-upper-bound | reference
  nlohmann::json witness;
  nlohmann::json to_json() const;
};

struct SclBound {
  std::optional<Witnessed> lower;
  std::optional<Witnessed> upper;
  bool consistent() const { return !lower || !upper || lower->value <= upper->value; }
  nlohmann::json to_json() const;
};

// A formal product of commutators [u_i, v_i].
struct CommutatorExpression {
  std::string text;
  std::vector<std::pair<Element, Element>> terms;
};
CommutatorExpression parse_commutators(const GroupContext& G, std::string_view text);

// Number of commutators, after checking that the expression multiplies out to g.
std::size_t cl_upper(const GroupContext& G, const Element& g, const CommutatorExpression& expr);

// Exponent sums per generator; nullopt when the group has torsion in its abelianization.
std::optional<std::vector<std::int64_t>> abelianization(const GroupContext& G, const Element& g);

// min over n of cl(g^n)/n, with each expression verified against g^n.
Witnessed scl_upper(const GroupContext& G, const Element& g,
                    const std::vector<std::pair<std::int64_t, CommutatorExpression>>& expressions);

// |phi(g)| / (2 D) for a homogeneous phi carrying a certified defect bound D.
Witnessed bavard_lower(const QuasiCocycle& phi, const Element& g);

struct NiceGeneratingSet {
  std::vector<FreeWord> Y1;  // exponent vectors linearly independent
  std::vector<FreeWord> Y2;  // exponent vectors zero
  nlohmann::json to_json(const groups::Alphabet& alphabet) const;
};

// Integer row reduction on exponent vectors by Nielsen moves g_j <- g_p^-q g_j.
NiceGeneratingSet nice_generating_set(const GroupContext& free_group, const std::vector<FreeWord>& gens);
bool is_nice(const NiceGeneratingSet& Y, std::size_t rank);

// phi' = phi - beta with beta the homomorphism agreeing with phi on Y1 (Y in H's own basis).
QuasiCocycle adjust_quasimorphism(const QuasiCocycle& phi, const NiceGeneratingSet& Y);

struct PipelineConstants {
  Rational L;
  extension::KConstant K;
  qc::DefectBound D_phi;
  std::optional<Rational> M;  // absent when D(phi') = 0
  nlohmann::json to_json() const;
};

struct PipelineResult {
  SclBound bound;
  PipelineConstants constants;
  Rational phi_h;  // phi(h) = phi'(h) = psi(h)
  bool restriction_consistent = true;
  bool conditional = false;
  nlohmann::json chain;  // each inequality with its value and provenance
  nlohmann::json to_json(const embedding::EmbeddingSpec& spec, const Element& h) const;
};

struct PipelineOptions {
  std::optional<NiceGeneratingSet> Y;
  // Commutator expressions for an upper bound on scl_G(h).
  std::vector<std::pair<std::int64_t, CommutatorExpression>> upper_expressions;
  std::int64_t homogenize_check_powers = 3;
};

// Lower bound for scl_G(h), h in [H,H], through the extension of a homogeneous phi on H = H_lambda.
PipelineResult undistortion_pipeline(const embedding::EmbeddingSpec& spec, embedding::SubgroupId lambda,
                                     const Element& h, const QuasiCocycle& phi, const PipelineOptions& options = {});

struct FreeDistRow {
  std::int64_t k;
  Witnessed scl_G_upper;
  Witnessed scl_H_lower;
  Rational scl_H_reference;  // k + 1/2
  Rational ratio_lower;      // scl_H lower / scl_G upper
};

struct FreeDistReport {
  std::vector<FreeDistRow> rows;
  bool lower_strictly_increasing = true;
  nlohmann::json to_json() const;
};

// H = <x, y, x^t, y^t> in F(x,y,t), h_k = [x,y]^-k [x^t,y^t]^k.
FreeDistReport free_dist_experiment(const std::vector<std::int64_t>& k_list);

}  // namespace qcext::scl

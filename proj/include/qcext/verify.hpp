#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcext/extension.hpp"

namespace qcext::verify {

using groups::Element;

struct CheckResult {
  std::string name;
  std::string description;
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::vector<std::string> failures;  // first few violations, formatted

  void record(bool ok, const std::function<std::string()>& describe);
  bool passed() const { return violations == 0; }
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::deque<CheckResult> checks;  // stable references for check()

  CheckResult& check(const std::string& name, const std::string& description);
  const CheckResult* find(const std::string& name) const;
  bool passed() const;
  std::size_t violations() const;
  void merge(SuiteReport other);
  nlohmann::json to_json() const;
};

struct SuiteConfig {
  std::size_t ball_radius = 3;   // exhaustive part: f = 1, g and h over this word ball
  std::size_t samples = 500;     // random triples on top of the ball
  std::size_t sample_length = 6; // random triples use words of at most this length
  std::size_t chain_max = 6;
  std::size_t defect_radius = 3;
  std::uint64_t seed = 0;

  static SuiteConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Triple {
  Element f, g, h;
};

// Every (1, g, h) with g, h in the ball, then the random triples.
std::vector<Triple> triple_domain(const embedding::EmbeddingSpec& spec, const SuiteConfig& config);

// Separating cosets, entrance/exit sets, ordering and the triangle partition.
SuiteReport separating_suite(const separating::Separator& sep, const std::vector<Triple>& triples,
                             const SuiteConfig& config);
// Elementary and combed bi-combings, averaged values, and their area bounds.
SuiteReport bicombing_suite(const extension::Extension& ext, const std::vector<Triple>& triples,
                            const SuiteConfig& config);
// Restriction to the subgroups and the defect certificate over the word ball.
SuiteReport extension_suite(const extension::Extension& ext, const SuiteConfig& config);

SuiteReport full_suite(const extension::Extension& ext, const SuiteConfig& config);

}  // namespace qcext::verify

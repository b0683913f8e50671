#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "growth.hpp"
#include "offspring.hpp"
#include "rng.hpp"

namespace stabletree {

struct VerifyConfig {
  double alpha = 1.5;
  std::uint64_t seed = 1;
  // scales the replica counts down for smoke runs; 1 = the full battery
  double effort = 1.0;
  // path to the CLI binary for the process-level determinism check ("" skips)
  std::string cli_path;
};

struct CaseResult {
  std::string name;
  std::string anchor;  // short identity label, or "plumbing"
  double estimate = 0.0;
  double oracle = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  std::vector<CaseResult> cases;

  bool all_pass() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg);
std::vector<SuiteReport> run_all_suites(const VerifyConfig& cfg);

// exhaustive law of the size-n critical tree conditioned on its size;
// keys are canonical ordered trees, values normalised probabilities
std::map<OrderedTree, double> enumerate_conditioned_gw(const OffspringLaw& law,
                                                       std::size_t n);
// unnormalised total sum_t prod p_{d_i} over ordered trees of size n
double conditioned_gw_normalizer(const OffspringLaw& law, std::size_t n);

struct UrnResult {
  std::vector<double> fraction;        // A_i / M_i
  std::vector<double> jump_frequency;  // #{j <= i : A_j != A_{j-1}} / i
};

// time-dependent reinforced urn: A grows by m_i with probability A/M
UrnResult polya_urn_simulate(double a0, double m0, const std::vector<double>& increments,
                             Rng& rng);

}  // namespace stabletree

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/verify.hpp"

using namespace stabletree;

TEST_CASE("exhaustive conditioned law: n=1 and n=3 hand cases") {
  const auto law = OffspringLaw::uniform012();
  const auto single = enumerate_conditioned_gw(law, 1);
  REQUIRE(single.size() == 1);
  CHECK(single.begin()->second == doctest::Approx(1.0));

  // n=3: path (degrees 1,1,0) and cherry (2,0,0), each probability 1/2
  const auto three = enumerate_conditioned_gw(law, 3);
  REQUIRE(three.size() == 2);
  for (const auto& [shape, p] : three) CHECK(p == doctest::Approx(0.5));

  // normaliser equals (1/n) P(Xi_n = n-1): n=3 -> (1/3)(6/27)
  CHECK(conditioned_gw_normalizer(law, 3) == doctest::Approx(2.0 / 27.0));
  CHECK_THROWS_AS(enumerate_conditioned_gw(law, 9), std::invalid_argument);
}

TEST_CASE("enumeration sums to one for the heavy-tailed family too") {
  const auto law = OffspringLaw::stable(1.5, 64);
  const auto trees = enumerate_conditioned_gw(law, 5);
  double total = 0.0;
  for (const auto& [shape, p] : trees) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("urn mechanics") {
  Rng rng(3);
  const std::vector<double> incs(200, 1.0);
  const auto res = polya_urn_simulate(1.0, 2.0, incs, rng);
  REQUIRE(res.fraction.size() == incs.size());
  for (std::size_t i = 0; i < res.fraction.size(); ++i) {
    CHECK(res.fraction[i] > 0.0);
    CHECK(res.fraction[i] < 1.0);
    CHECK(res.jump_frequency[i] >= 0.0);
    CHECK(res.jump_frequency[i] <= 1.0);
  }
  CHECK_THROWS_AS(polya_urn_simulate(2.0, 1.0, incs, rng), std::invalid_argument);
}

TEST_CASE("suite registry and smoke run at low effort") {
  CHECK(suite_names().size() >= 16);
  CHECK_THROWS_AS(run_suite("nonsense", VerifyConfig{}), std::invalid_argument);

  VerifyConfig cfg;
  cfg.effort = 0.02;
  cfg.seed = 11;
  for (const char* name : {"density-basics", "prufer-exhaustive", "growth-invariants",
                           "polya-urn", "determinism"}) {
    const auto rep = run_suite(name, cfg);
    CHECK(rep.suite == name);
    CHECK(!rep.cases.empty());
    CHECK(rep.all_pass());
  }
}

TEST_CASE("reports serialize deterministically") {
  VerifyConfig cfg;
  cfg.effort = 0.02;
  cfg.seed = 19;
  const auto a = run_suite("prufer-exhaustive", cfg);
  const auto b = run_suite("prufer-exhaustive", cfg);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_text() == b.to_text());
}

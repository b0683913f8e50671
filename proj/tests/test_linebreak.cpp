#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/linebreak.hpp"

using namespace stabletree;

namespace {

double ks_against_cdf(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / xs.size()));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / xs.size() - f));
  }
  return d;
}

}  // namespace

TEST_CASE("hazard accumulates drift and jumps") {
  // drift 0, jumps of sizes 1 at t=0+ and 2 at t=1: Lambda(2) = 1*2 + 2*1 = 4
  IntensityPath ip(0.0, 4.0, {1e-300, 1.0}, {1.0, 2.0});
  CHECK(ip.hazard(2.0) == doctest::Approx(4.0));
  CHECK(ip.tau(0.5) == doctest::Approx(1.0));
  CHECK(ip.tau(1.5) == doctest::Approx(3.0));
  CHECK(ip.tau_left(1.0) == doctest::Approx(1.0));

  // P(Y1 > 2) = exp(-4): check through the inverse instead
  CHECK(*ip.hazard_inverse(4.0) == doctest::Approx(2.0));
  CHECK(*ip.hazard_inverse(1.0) == doctest::Approx(1.0));      // flat until the jump
  CHECK(*ip.hazard_inverse(0.5) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(!ip.hazard_inverse(100.0));

  IntensityPath drift_only = IntensityPath::constant_rate_one(10.0);
  CHECK(drift_only.hazard(2.0) == doctest::Approx(2.0));
  CHECK(*drift_only.hazard_inverse(2.0) == doctest::Approx(2.0));
}

TEST_CASE("attachment point semantics") {
  // pure drift: uniform over [0, y): y=2, u=0.25 -> 0.5
  IntensityPath drift = IntensityPath::constant_rate_one(10.0);
  CHECK(sample_attachment(drift, 2.0, 0.25) == doctest::Approx(0.5));

  // one atom owns all the mass
  IntensityPath atom(0.0, 2.0, {0.3}, {1.0});
  CHECK(sample_attachment(atom, 1.0, 0.1) == doctest::Approx(0.3));
  CHECK(sample_attachment(atom, 1.0, 0.9) == doctest::Approx(0.3));

  // two atoms: u=0.5 of total mass 4 exceeds tau(0.7-)=1, so z = 0.7
  IntensityPath two(0.0, 2.0, {0.2, 0.7}, {1.0, 3.0});
  CHECK(sample_attachment(two, 1.0, 0.5) == doctest::Approx(0.7));
  CHECK(sample_attachment(two, 1.0, 0.2) == doctest::Approx(0.2));

  CHECK_THROWS_AS(sample_attachment(two, 0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(sample_attachment(two, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("tree construction and metric recursion") {
  // single segment: distance is |u - v|
  auto stick = LineBreakTree::build({2.0}, {});
  CHECK(stick.distance(0.3, 1.7) == doctest::Approx(1.4));
  CHECK(stick.distance(1.0, 1.0) == 0.0);

  // cuts (1,2), attachment 0.5: d(1.5, 0.9) = 0.5 + 0.4
  auto t2 = LineBreakTree::build({1.0, 2.0}, {0.5});
  CHECK(t2.parent_segment()[1] == 0);
  CHECK(t2.distance(1.5, 0.9) == doctest::Approx(0.9));
  CHECK(t2.distance(0.9, 1.5) == doctest::Approx(0.9));

  // cuts (1,2,3), attachments (0.5, 1.4): segment 2 hangs off segment 1
  auto t3 = LineBreakTree::build({1.0, 2.0, 3.0}, {0.5, 1.4});
  CHECK(t3.parent_segment()[1] == 0);
  CHECK(t3.parent_segment()[2] == 1);
  CHECK(t3.total_length() == doctest::Approx(3.0));
  // 2.5 sits 1.1 above z_2=1.4; 1.4 sits 0.4 above z_1=0.5
  CHECK(t3.distance(2.5, 0.5) == doctest::Approx(0.5 + 0.4));
  CHECK(t3.distance(2.5, 0.0) == doctest::Approx(0.5 + 0.4 + 0.5));

  CHECK_THROWS_AS(LineBreakTree::build({1.0, 0.5}, {0.2}), std::invalid_argument);
  CHECK_THROWS_AS(LineBreakTree::build({1.0, 2.0}, {1.5}), std::invalid_argument);
}

TEST_CASE("distance matrices are tree metrics") {
  StableModel m(1.5);
  auto ens = sample_stable_tree_ensemble(m, 4, 8.0, 1e-3, 200, 31);
  int checked = 0;
  for (const auto& wt : ens.trees) {
    if (!wt.complete) continue;
    const auto d = empirical_measure_distances(wt.tree);
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(d[i][i] == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(d[i][j] == d[j][i]);
        CHECK(d[i][j] >= 0.0);
        for (std::size_t l = 0; l < n; ++l)
          CHECK(d[i][j] <= d[i][l] + d[l][j] + 1e-12);
      }
    }
    // four-point condition on the first few quadruples
    for (std::size_t a = 0; a + 3 < n; ++a) {
      const double s1 = d[a][a + 1] + d[a + 2][a + 3];
      const double s2 = d[a][a + 2] + d[a + 1][a + 3];
      const double s3 = d[a][a + 3] + d[a + 1][a + 2];
      CHECK(s1 <= std::max(s2, s3) + 1e-12);
    }
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("total segment length equals the last cut") {
  StableModel m(1.5);
  auto ens = sample_stable_tree_ensemble(m, 3, 8.0, 1e-3, 100, 77);
  for (const auto& wt : ens.trees) {
    if (wt.tree.segment_count() == 0) continue;
    const auto& cuts = wt.tree.cuts();
    double total = cuts[0];
    for (std::size_t j = 1; j < cuts.size(); ++j) total += cuts[j] - cuts[j - 1];
    CHECK(total == doctest::Approx(wt.tree.total_length()));
    for (std::size_t j = 0; j < wt.tree.attachments().size(); ++j)
      CHECK(wt.tree.attachments()[j] < cuts[j]);
  }
}

TEST_CASE("Aldous special case: Y1^2/2 ~ Exp(1), Z1/Y1 ~ Uniform") {
  const std::size_t n = 20000;
  auto ens = sample_crt_ensemble(2, 50.0, n, 41);
  std::vector<double> half_y2, ratio;
  for (const auto& wt : ens.trees) {
    if (wt.tree.segment_count() < 2) continue;
    const double y1 = wt.tree.cuts()[0];
    half_y2.push_back(0.5 * y1 * y1);
    ratio.push_back(wt.tree.attachments()[0] / y1);
  }
  CHECK(half_y2.size() == n);  // horizon 50 is effectively infinite here
  const double crit = 1.628 / std::sqrt(static_cast<double>(n));
  CHECK(ks_against_cdf(half_y2, [](double x) { return -std::expm1(-x); }) < crit);
  CHECK(ks_against_cdf(ratio, [](double x) { return std::clamp(x, 0.0, 1.0); }) < crit);
}

TEST_CASE("ICRT intensity: pure drift and single atom") {
  Rng rng(5);
  auto drift = icrt_intensity(1.0, {}, 10.0, rng);
  CHECK(drift.jump_count() == 0);
  CHECK(drift.tau(3.0) == doctest::Approx(3.0));

  // theta0=0, one atom of size 2 at an Exp(2) time
  std::size_t within = 0;
  double sum_t = 0.0;
  const std::size_t n = 20000;
  for (std::size_t i = 0; i < n; ++i) {
    Rng r(6, i);
    const std::vector<double> th{2.0};
    auto ip = icrt_intensity(0.0, th, 100.0, r);
    REQUIRE(ip.jump_count() == 1);
    CHECK(ip.tau(100.0) == doctest::Approx(2.0));
    ++within;
    sum_t += ip.hazard(100.0) / 2.0 + 0.0;  // not used further
  }
  CHECK(within == n);

  // mean atom count before t: sum(1 - exp(-theta_i t))
  const std::vector<double> thetas{1.0, 0.5, 0.25};
  double mean_atoms = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng r(7, i);
    mean_atoms += icrt_intensity(0.0, thetas, 2.0, r).jump_count();
  }
  mean_atoms /= n;
  double expect = 0.0;
  for (double th : thetas) expect += -std::expm1(-th * 2.0);
  CHECK(mean_atoms == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("weighted ensemble: mean weight one and first-cut moment") {
  StableModel m(1.5);
  const std::size_t n = 4000;
  auto ens = sample_stable_tree_ensemble(m, 1, 12.0, 1e-4, n, 97);
  double sw = 0.0, swsq = 0.0;
  for (const auto& wt : ens.trees) {
    sw += wt.weight;
    swsq += wt.weight * wt.weight;
  }
  const double mw = sw / n;
  const double se = std::sqrt((swsq / n - mw * mw) / (n - 1.0));
  CHECK(std::fabs(mw - 1.0) < 3.0 * se + 5e-3);
  CHECK(ens.missing_mass() < 1e-3);

  // E[Y1] = Gamma(2) Gamma(1/3) / (alpha Gamma(2/3))
  double sy = 0.0, sysq = 0.0;
  for (const auto& wt : ens.trees) {
    const double y = (wt.complete && wt.tree.segment_count() > 0)
                         ? wt.weight * wt.tree.cuts()[0]
                         : 0.0;
    sy += y;
    sysq += y * y;
  }
  const double my = sy / n;
  const double sey = std::sqrt((sysq / n - my * my) / (n - 1.0));
  const double oracle = std::tgamma(1.0 / 3.0) / (1.5 * std::tgamma(2.0 / 3.0));
  CHECK(oracle == doctest::Approx(1.3189).epsilon(1e-4));
  CHECK(std::fabs(my - oracle) < 3.0 * sey + 0.02);
}

TEST_CASE("ensembles are reproducible for a fixed seed") {
  StableModel m(1.5);
  auto a = sample_stable_tree_ensemble(m, 2, 6.0, 1e-3, 50, 123);
  auto b = sample_stable_tree_ensemble(m, 2, 6.0, 1e-3, 50, 123);
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t i = 0; i < a.trees.size(); ++i) {
    CHECK(a.trees[i].weight == b.trees[i].weight);
    CHECK(a.trees[i].tree.cuts() == b.trees[i].tree.cuts());
  }
}

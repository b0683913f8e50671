#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/levy_paths.hpp"

using namespace stabletree;

namespace {

// two-sample Kolmogorov-Smirnov statistic
double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

}  // namespace

TEST_CASE("path bookkeeping: value, integral, quadratic variation") {
  JumpPath empty(1.0, 0.0, {}, {});
  CHECK(empty.value(1.0) == 0.0);
  CHECK(empty.integral(1.0) == 0.0);
  CHECK(empty.quadratic_variation(1.0) == 0.0);

  JumpPath one(1.0, 0.0, {0.5}, {2.0});
  CHECK(one.integral(1.0) == doctest::Approx(1.0));

  JumpPath two(1.0, 0.0, {0.2, 0.6}, {1.0, 3.0});
  CHECK(two.value(0.1) == 0.0);
  CHECK(two.value(0.4) == doctest::Approx(1.0));
  CHECK(two.value(1.0) == doctest::Approx(4.0));
  CHECK(two.integral(1.0) == doctest::Approx(1.0 * 0.8 + 3.0 * 0.4));
  CHECK(two.quadratic_variation(1.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(two.integral(1.5), std::out_of_range);

  CHECK_THROWS_AS(JumpPath(1.0, 0.0, {0.5, 0.4}, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(JumpPath(1.0, 0.0, {0.5}, {-1.0}), std::invalid_argument);
}

TEST_CASE("sampler parameter validation and empty-horizon limit") {
  StableModel m(1.5);
  Rng rng(1);
  CHECK_THROWS_AS(sample_subordinator_path(m, 0.0, 1e-4, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_subordinator_path(m, 1.0, 0.0, rng), std::invalid_argument);
  // vanishing horizon: expected count -> 0
  std::size_t total = 0;
  for (int i = 0; i < 100; ++i) {
    Rng r(7, i);
    total += sample_subordinator_path(m, 1e-9, 0.1, r).count();
  }
  CHECK(total == 0);
}

TEST_CASE("subordinator Laplace transform e^{-t alpha lambda^{alpha-1}}") {
  StableModel m(1.5);
  const std::size_t n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Rng rng(11, j);
    const auto path = sample_subordinator_path(m, 1.0, 1e-6, rng);
    const double y = std::exp(-path.value(1.0));
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1.0));
  const double target = std::exp(-1.5);  // t=1, lambda=1
  CHECK(std::fabs(mean - target) < 3.0 * se + 1e-3);
}

TEST_CASE("exact marginal sampler matches its Laplace transform") {
  StableModel m(1.5);
  const std::size_t n = 50000;
  double sum = 0.0, sumsq = 0.0;
  Rng rng(3);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = std::exp(-exact_marginal_sample(m, 1.0, rng));
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1.0));
  CHECK(std::fabs(mean - std::exp(-1.5)) < 3.0 * se);
}

TEST_CASE("path sampler and exact marginal agree in distribution (KS)") {
  StableModel m(1.5);
  const std::size_t n = 20000;
  std::vector<double> from_path(n), exact(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rng r1(21, j), r2(22, j);
    from_path[j] = sample_subordinator_path(m, 0.7, 1e-6, r1).value(0.7);
    exact[j] = exact_marginal_sample(m, 0.7, r2);
  }
  const double d = ks_two_sample(from_path, exact);
  const double crit = 1.628 * std::sqrt(2.0 / n);  // 1% level
  CHECK(d < crit);
}

TEST_CASE("marginal scaling: value(t) =d t^{1/(alpha-1)} value(1)") {
  StableModel m(1.5);
  const double t = 0.3;
  const std::size_t n = 20000;
  std::vector<double> at_t(n), scaled(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rng r1(31, j), r2(32, j);
    at_t[j] = sample_subordinator_path(m, t, 1e-6, r1).value(t);
    scaled[j] = std::pow(t, 1.0 / 0.5) *
                sample_subordinator_path(m, 1.0, 1e-6, r2).value(1.0);
  }
  CHECK(ks_two_sample(at_t, scaled) < 1.628 * std::sqrt(2.0 / n));
}

TEST_CASE("martingale weight is mean one") {
  StableModel m(1.5);
  CHECK(log_martingale_weight(JumpPath(1.0, 0.0, {}, {}), 0.0, m) ==
        doctest::Approx(0.0));

  auto est = importance_estimate(m, 0.5, 1e-6, 20000, 5,
                                 [](const JumpPath&) { return 1.0; });
  CHECK(std::fabs(est.mean - 1.0) < 3.0 * est.se);
}

TEST_CASE("shifted martingale identity at c = 0.5") {
  StableModel m(1.5);
  const double c = 0.5, t = 0.5;
  const std::size_t n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Rng rng(17, j);
    const auto path = sample_subordinator_path(m, t, 1e-6, rng);
    const double y =
        std::exp(c * t + path.integral(t) + m.log_density(-c - path.value(t)));
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / (n - 1.0));
  CHECK(std::fabs(mean - m.density(-c)) < 3.0 * se);
}

TEST_CASE("tilted mean: small-t limit, growth law, MC agreement") {
  StableModel m(1.5);
  CHECK(sigma_tilde_mean(m, 1e-4) < 1e-2);

  // E[tilted sigma_t] ~ alpha t^{alpha-1}
  const double t_big = 50.0;
  const double ratio = sigma_tilde_mean(m, t_big) / (1.5 * std::pow(t_big, 0.5));
  CHECK(ratio > 0.95);
  CHECK(ratio < 1.05);

  auto est = importance_estimate(m, 1.0, 1e-6, 20000, 19,
                                 [](const JumpPath& p) { return p.value(1.0); });
  CHECK(std::fabs(est.mean - sigma_tilde_mean(m, 1.0)) < 3.0 * est.se);
}

TEST_CASE("tilted Laplace transform: bounds, MC agreement, derivative") {
  StableModel m(1.5);
  CHECK(sigma_tilde_laplace(m, 0.0, 1.0) == 1.0);

  const double val = sigma_tilde_laplace(m, 1.0, 1.0);
  CHECK(val > 0.0);
  CHECK(val <= 1.0);

  auto est = importance_estimate(m, 1.0, 1e-6, 20000, 23, [](const JumpPath& p) {
    return std::exp(-p.value(1.0));
  });
  CHECK(std::fabs(est.mean - val) < 3.0 * est.se);

  // -d/dlambda at 0 equals the tilted mean
  const double h = 1e-3;
  const double deriv =
      (sigma_tilde_laplace(m, h, 1.0) - sigma_tilde_laplace(m, 0.0, 1.0)) / h;
  const double mean = sigma_tilde_mean(m, 1.0);
  CHECK(-deriv == doctest::Approx(mean).epsilon(2e-3));

  // nonincreasing and log-convex on a lambda grid
  double prev = 1.0;
  std::vector<double> logs;
  for (double l = 0.0; l <= 4.0 + 1e-9; l += 0.25) {
    const double v = sigma_tilde_laplace(m, l, 1.0);
    CHECK(v <= prev * (1.0 + 1e-9));
    prev = v;
    logs.push_back(std::log(v));
  }
  for (std::size_t i = 1; i + 1 < logs.size(); ++i)
    CHECK(logs[i - 1] + logs[i + 1] - 2.0 * logs[i] > -1e-7);
}

TEST_CASE("quadratic variation bound holds for the tilted process") {
  StableModel m(1.5);
  const double bound = quadratic_variation_bound(m);
  CHECK(std::isfinite(bound));
  CHECK(bound > 0.0);

  const double t = 5.0;
  auto est = importance_estimate(m, t, 1e-4, 20000, 29, [&](const JumpPath& p) {
    return p.quadratic_variation(t);
  });
  CHECK(est.mean <= bound + 3.0 * est.se);
}

TEST_CASE("importance estimates are stable under a 10x smaller cutoff") {
  StableModel m(1.5);
  auto coarse = importance_estimate(m, 0.5, 1e-4, 20000, 41,
                                    [](const JumpPath& p) { return p.value(0.5); });
  auto fine = importance_estimate(m, 0.5, 1e-5, 20000, 42,
                                  [](const JumpPath& p) { return p.value(0.5); });
  CHECK(std::fabs(coarse.mean - fine.mean) <
        3.0 * std::sqrt(coarse.se * coarse.se + fine.se * fine.se));
}

TEST_CASE("deterministic for a fixed seed") {
  StableModel m(1.5);
  auto a = importance_estimate(m, 0.5, 1e-4, 500, 77,
                               [](const JumpPath& p) { return p.value(0.5); });
  auto b = importance_estimate(m, 0.5, 1e-4, 500, 77,
                               [](const JumpPath& p) { return p.value(0.5); });
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

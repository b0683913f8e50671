#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "core/growth.hpp"
#include "core/offspring.hpp"
#include "core/prufer.hpp"

using namespace stabletree;

TEST_CASE("offspring family: pmf values, mean, tails") {
  auto law = OffspringLaw::stable(1.5, 4096);
  CHECK(law.pmf(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(law.pmf(1) == 0.0);
  CHECK(law.pmf(2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(law.pmf(3) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));

  // mean exactly 1: body sum + exact size-biased tail mass
  double mean = 0.0;
  for (std::uint64_t k = 0; k <= law.table_cap(); ++k)
    mean += static_cast<double>(k) * law.pmf(k);
  const double alpha = 1.5;
  const double sb_tail = alpha * static_cast<double>(law.table_cap()) *
                         law.tail(law.table_cap()) / (alpha - 1.0);
  CHECK(mean + sb_tail == doctest::Approx(1.0).epsilon(1e-10));

  // tail index: t_k ~ c k^{-alpha}
  const double r = law.tail(1u << 14) / law.tail(1u << 13);
  CHECK(r == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-3));

  // pmf beyond the table agrees with the Gamma-ratio continuation
  CHECK(law.pmf(5000) == doctest::Approx(alpha * law.tail(4999) / 5000.0).epsilon(1e-9));

  CHECK_THROWS_AS(OffspringLaw::from_pmf({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(OffspringLaw::from_pmf({0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(OffspringLaw::from_pmf({0.5, 0.0, 0.5, 0.1}), std::invalid_argument);
}

TEST_CASE("offspring sampler matches the pmf") {
  auto law = OffspringLaw::stable(1.5, 1024);
  Rng rng(8);
  const std::size_t n = 200000;
  std::map<std::uint64_t, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[law.sample(rng)];
  for (std::uint64_t k : {0ull, 2ull, 3ull, 4ull, 10ull}) {
    const double expect = law.pmf(k);
    const double got = static_cast<double>(counts[k]) / n;
    const double se = std::sqrt(expect * (1 - expect) / n);
    CHECK(std::fabs(got - expect) < 4.0 * se + 1e-4);
  }
  // a couple of tail draws should appear beyond the table
  std::size_t beyond = 0;
  for (auto& [k, c] : counts)
    if (k > law.table_cap()) beyond += c;
  const double tail_expect = law.tail(law.table_cap());
  CHECK(std::fabs(static_cast<double>(beyond) / n - tail_expect) <
        4.0 * std::sqrt(tail_expect / n) + 1e-4);
}

TEST_CASE("size-biased law: k p_k") {
  auto uni = OffspringLaw::uniform012();
  auto sb = uni.size_biased_pmf(2);
  CHECK(sb[0] == 0.0);
  CHECK(sb[1] == doctest::Approx(1.0 / 3.0));
  CHECK(sb[2] == doctest::Approx(2.0 / 3.0));

  auto law = OffspringLaw::stable(1.5, 1024);
  CHECK(law.size_biased_pmf(2)[2] == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(9);
  const std::size_t n = 100000;
  std::size_t ones = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (uni.sample_size_biased(rng) == 1) ++ones;
  CHECK(std::fabs(ones / static_cast<double>(n) - 1.0 / 3.0) < 0.006);
}

TEST_CASE("walk pmf: base cases and hand convolution") {
  auto uni = OffspringLaw::uniform012();
  auto one = walk_pmf(uni, 1, 4);
  CHECK(one[0] == doctest::Approx(1.0 / 3.0));
  CHECK(one[2] == doctest::Approx(1.0 / 3.0));
  auto two = walk_pmf(uni, 2, 4);
  CHECK(two[2] == doctest::Approx(3.0 / 9.0).epsilon(1e-14));
  CHECK(two[0] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(two[4] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  // doubling route and FFT route agree
  auto law = OffspringLaw::stable(1.5, 1u << 12);
  auto direct = walk_pmf(law, 64, 255);
  std::vector<double> conv{1.0};
  // independent reference: plain repeated convolution
  std::vector<double> base(256, 0.0);
  for (std::size_t k = 0; k < 256; ++k) base[k] = law.pmf(k);
  for (int rep = 0; rep < 64; ++rep) {
    std::vector<double> next(256, 0.0);
    for (std::size_t i = 0; i < conv.size(); ++i)
      for (std::size_t j = 0; i + j < 256; ++j) next[i + j] += conv[i] * base[j];
    conv = std::move(next);
  }
  for (std::size_t s = 0; s < 256; ++s)
    CHECK(direct[s] == doctest::Approx(conv[s]).epsilon(1e-10));
}

TEST_CASE("conditioned degrees: exact law at n=3 and acceptance rate") {
  auto uni = OffspringLaw::uniform012();
  Rng rng(10);
  // (xi1,xi2,xi3) | sum=2: {2,0,0} perms and {1,1,0} perms, 3 each of 6
  std::size_t type110 = 0;
  const std::size_t n = 100000;
  double trials = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto d = sample_conditioned_degrees(uni, 3, rng);
    trials += static_cast<double>(d.trials);
    std::size_t nonzero = 0;
    for (auto v : d.values) nonzero += v > 0;
    if (nonzero == 2) ++type110;
  }
  CHECK(std::fabs(type110 / static_cast<double>(n) - 0.5) < 0.006);
  // acceptance rate = P(Xi_3 = 2) = 6/27
  const double acc = walk_pmf(uni, 3, 2)[2];
  CHECK(acc == doctest::Approx(6.0 / 27.0).epsilon(1e-14));
  CHECK(std::fabs(n / trials - acc) < 0.005);
}

TEST_CASE("size-biased reorder: exact head probability") {
  // D = (2,1,0): P(first = index 0) = 2/3
  Rng rng(11);
  const std::vector<std::uint32_t> d{2, 1, 0};
  std::size_t first0 = 0;
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    auto sb = size_biased_reorder(d, rng);
    CHECK(sb.dhat.size() == 3);
    CHECK(sb.dhat[2] == 0);
    if (sb.order[0] == 0) ++first0;
  }
  CHECK(std::fabs(first0 / static_cast<double>(n) - 2.0 / 3.0) < 0.006);
}

TEST_CASE("prufer decode: hand-traced words") {
  // 0-based versions of the worked examples
  const std::uint32_t w1[] = {0};
  auto t1 = prufer_decode(w1);
  CHECK(t1.root == 0);
  CHECK(t1.parent[1] == 0);

  const std::uint32_t w2[] = {0, 0};  // root with two children
  auto t2 = prufer_decode(w2);
  CHECK(t2.root == 0);
  CHECK(t2.parent[1] == 0);
  CHECK(t2.parent[2] == 0);

  const std::uint32_t w3[] = {0, 1};  // path 0 -> 1 -> 2
  auto t3 = prufer_decode(w3);
  CHECK(t3.parent[1] == 0);
  CHECK(t3.parent[2] == 1);

  const std::uint32_t bad[] = {0, 5};
  CHECK_THROWS_AS(prufer_decode(bad), std::invalid_argument);
}

TEST_CASE("prufer codec: exhaustive bijection on [3]^2 and [4]^3") {
  for (std::size_t n : {3u, 4u}) {
    std::set<std::vector<std::uint32_t>> images;
    std::size_t total = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::uint32_t> word(n - 1);
      std::size_t c = code;
      for (auto& w : word) {
        w = static_cast<std::uint32_t>(c % n);
        c /= n;
      }
      auto tree = prufer_decode(word);
      // encode inverts decode
      CHECK(prufer_encode(tree) == word);
      // degree multiplicity identity
      auto deg = tree.out_degrees();
      std::vector<std::uint32_t> mult(n, 0);
      for (auto w : word) ++mult[w];
      CHECK(deg == mult);
      std::vector<std::uint32_t> key = tree.parent;
      key.push_back(tree.root);
      images.insert(key);
    }
    CHECK(images.size() == total);  // decode is injective, hence bijective
  }
}

TEST_CASE("prufer round-trip on random trees up to n=200") {
  Rng rng(13);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 2 + rng.below(199);
    RootedTree t;
    t.root = 0;
    t.parent.assign(n, 0);
    for (std::uint32_t v = 1; v < n; ++v)
      t.parent[v] = static_cast<std::uint32_t>(rng.below(v));
    auto word = prufer_encode(t);
    auto back = prufer_decode(word);
    // same tree up to the label-preserving identity
    CHECK(back.root == t.root);
    CHECK(back.parent == t.parent);
    auto deg = t.out_degrees();
    std::vector<std::uint32_t> mult(n, 0);
    for (auto w : word) ++mult[w];
    CHECK(deg == mult);
  }
}

TEST_CASE("growth process: first step grows, invariants hold, shape checks") {
  Rng rng(14);
  auto uni = OffspringLaw::uniform012();
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 50;
    auto cd = sample_conditioned_degrees(uni, n, rng);
    auto sb = size_biased_reorder(cd.values, rng);
    auto [tree, trace] = grow_tree(n, sb.dhat, rng);  // throws if invariants break
    CHECK(trace.events.front() == GrowthEvent::kGrowth);
    CHECK(tree.size() == n);
    tree.validate();
    // attach step precedes its branch step
    for (std::size_t i = 0; i < trace.branch_steps.size(); ++i)
      CHECK(trace.attach_steps[i] < trace.branch_steps[i]);
  }
}

TEST_CASE("first-stick survival formula and MC agreement") {
  // dhat = (2,1,...): k=2 -> 1 * (1 - 1/8) at n=10
  std::vector<std::uint32_t> dhat{2, 1, 1, 1, 1, 1, 1, 1, 0, 0};
  std::uint64_t total = 0;
  for (auto v : dhat) total += v;
  REQUIRE(total == 9);
  CHECK(first_stick_survival(dhat, 1, 10) == 1.0);
  CHECK(first_stick_survival(dhat, 2, 10) == doctest::Approx(0.875));

  // conditional MC: fraction of runs whose first branching comes after step k
  Rng rng(15);
  const std::size_t reps = 40000;
  std::size_t late = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    auto [tree, trace] = grow_tree(10, dhat, rng);
    const std::uint32_t c1 = trace.branch_steps.empty()
                                 ? UINT32_MAX
                                 : trace.branch_steps.front();
    if (c1 > 2) ++late;
  }
  const double expect = first_stick_survival(dhat, 2, 10);
  CHECK(std::fabs(late / static_cast<double>(reps) - expect) < 0.008);
}

TEST_CASE("theta weight: trivial prefix and exact finite-n identity") {
  auto law = OffspringLaw::stable(1.5, 4096);
  CHECK(theta_weight({}, 8, law) == 1.0);

  // sum over feasible prefixes of Theta * prod xi*-pmf = P(N^n >= m), n=8, m=2
  const std::size_t n = 8, m = 2;
  const auto row = walk_pmf(law, n - m, n - 1);
  const auto full = walk_pmf(law, n, n - 1);
  auto sb = law.size_biased_pmf(n - 1);
  double lhs = 0.0;
  for (std::uint64_t k1 = 1; k1 <= n - 1; ++k1)
    for (std::uint64_t k2 = 1; k1 + k2 <= n - 1; ++k2) {
      const std::uint64_t pre[] = {k1, k2};
      const double lw = log_theta_weight(pre, n, row, full[n - 1]);
      if (std::isfinite(lw)) lhs += std::exp(lw) * sb[k1] * sb[k2];
    }

  // exact P(N >= 2 | Xi_8 = 7) by a direct pass over (count, sum) states
  // dp[c][s] = P(c nonzero among j draws, sum s), c capped at 2
  std::vector<std::vector<double>> dp(3, std::vector<double>(n, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<double>> next(3, std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t s = 0; s < n; ++s) {
        if (dp[c][s] == 0.0) continue;
        for (std::size_t k = 0; s + k < n; ++k) {
          const std::size_t nc = std::min<std::size_t>(2, c + (k > 0 ? 1 : 0));
          next[nc][s + k] += dp[c][s] * law.pmf(k);
        }
      }
    dp = std::move(next);
  }
  const double rhs = dp[2][n - 1] / (dp[0][n - 1] + dp[1][n - 1] + dp[2][n - 1]);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("randomize_order: cherry has two equally likely orders") {
  RootedTree t;  // root 0 with children 1 (a leaf) and 2 -> 3
  t.root = 0;
  t.parent = {0, 0, 0, 2};
  Rng rng(16);
  std::map<OrderedTree, std::size_t> counts;
  const std::size_t n = 40000;
  for (std::size_t i = 0; i < n; ++i) ++counts[randomize_order(t, rng)];
  REQUIRE(counts.size() == 2);
  for (auto& [key, c] : counts)
    CHECK(std::fabs(c / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("tree statistics: spanned subtree and complement forest") {
  // path 0 <- 1 <- 2 <- ... <- 9 built by growth with dhat = (1,...,1,0)
  std::vector<std::uint32_t> dhat(10, 1);
  dhat[9] = 0;
  Rng rng(17);
  auto [tree, trace] = grow_tree(10, dhat, rng);
  CHECK(tree.height() == 9);

  auto st = tree_statistics(tree, trace, 10, 3, rng);
  CHECK(st.spanned_size == 10);
  CHECK(st.forest_sizes.empty());
  CHECK(st.size_biased_component == 0);
  CHECK(st.top_degrees[0] == 1);

  // k=0: everything except the root is one component
  auto st0 = tree_statistics(tree, trace, 0, 3, rng);
  CHECK(st0.spanned_size == 1);
  REQUIRE(st0.forest_sizes.size() == 1);
  CHECK(st0.forest_sizes[0] == 9);
  CHECK(st0.size_biased_component == 9);
}

#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <stdexcept>

#include "levy_paths.hpp"
#include "linebreak.hpp"
#include "serialize.hpp"
#include "stats.hpp"

namespace stabletree {

namespace {

std::size_t scaled(const VerifyConfig& cfg, std::size_t n, std::size_t floor_n = 500) {
  const auto s = static_cast<std::size_t>(static_cast<double>(n) * cfg.effort);
  return std::max(floor_n, std::min(n, s));
}

void add_case(SuiteReport& rep, std::string name, std::string anchor, double estimate,
              double oracle, double tolerance, std::string note = "") {
  CaseResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.estimate = estimate;
  c.oracle = oracle;
  c.tolerance = tolerance;
  c.pass = std::fabs(estimate - oracle) <= tolerance;
  c.note = std::move(note);
  rep.cases.push_back(std::move(c));
}

void add_flag(SuiteReport& rep, std::string name, std::string anchor, bool ok,
              std::string note = "") {
  CaseResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.estimate = ok ? 1.0 : 0.0;
  c.oracle = 1.0;
  c.tolerance = 0.0;
  c.pass = ok;
  c.note = std::move(note);
  rep.cases.push_back(std::move(c));
}

std::uint64_t derive_seed(const VerifyConfig& cfg, std::uint64_t salt) {
  return cfg.seed * 0x9E3779B97F4A7C15ull + salt;
}

// E[p(-sigma_t)]/p(0) by exact marginal draws; the S variates are shared
// across t through the scaling sigma_t = t^{1/(alpha-1)} sigma_1
struct SurvivalOracle {
  std::vector<double> sigma1;
  const StableModel* model;

  SurvivalOracle(const StableModel& m, std::size_t draws, std::uint64_t seed)
      : model(&m) {
    sigma1.resize(draws);
    Rng rng(seed);
    for (auto& s : sigma1) s = exact_marginal_sample(m, 1.0, rng);
  }

  std::pair<double, double> at(double t) const {
    const double scale = std::pow(t, 1.0 / (model->alpha() - 1.0));
    const double lp0 = std::log(model->p_zero());
    stats::MeanAccumulator acc;
    for (double s : sigma1)
      acc.add(std::exp(model->log_density(-scale * s) - lp0));
    return {acc.mean(), acc.se()};
  }
};

// ---------------------------------------------------------------- suites --

void suite_density_basics(const VerifyConfig& cfg, SuiteReport& rep) {
  for (double alpha : {1.2, 1.5, 1.8}) {
    StableModel m(alpha);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "alpha=%.1f", alpha);
    add_case(rep, std::string("total-mass ") + buf, "density-normalisation",
             m.total_mass(), 1.0, 1e-6);
    add_case(rep, std::string("p0-identity ") + buf, "p0-gamma-identity",
             m.density(0.0) * alpha * std::tgamma(1.0 - 1.0 / alpha), 1.0, 1e-6);

    double worst = 0.0;
    for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.5)
      worst = std::max(worst, std::fabs(m.density(x) - m.density_oracle(x)));
    add_case(rep, std::string("oracle-agreement ") + buf, "independent-evaluator",
             worst, 0.0, 1e-6);
  }

  // left-tail regression: log p(-x) against x^{alpha/(alpha-1)} on [3,6]
  StableModel m(cfg.alpha);
  std::vector<double> xs, ys;
  for (double x = 3.0; x <= 6.0 + 1e-9; x += 0.25) {
    xs.push_back(std::pow(x, m.alpha() / (m.alpha() - 1.0)));
    ys.push_back(m.log_density(-x));
  }
  const auto fit = stats::linear_fit(xs, ys);
  add_flag(rep, "left-tail-slope", "stretched-exponential-tail",
           fit.slope < 0.0 && fit.r_squared > 0.999,
           "slope=" + format_double(fit.slope) + " r2=" + format_double(fit.r_squared));

  // |e^{G(i lambda)}| <= 1
  bool mod_ok = true;
  for (double l = -40.0; l <= 40.0; l += 0.5)
    mod_ok = mod_ok && std::abs(std::exp(m.exponent_G({0.0, l}))) <= 1.0 + 1e-12;
  add_flag(rep, "char-function-modulus", "characteristic-bound", mod_ok);
}

void suite_martingale_mean(const VerifyConfig& cfg, SuiteReport& rep) {
  const std::size_t replicas = scaled(cfg, 100000);
  const double eps = 1e-4;
  const double ts[] = {0.25, 0.5, 1.0};
  for (double alpha : {1.2, 1.5, 1.8}) {
    StableModel m(alpha);
    stats::MeanAccumulator acc[3];
    for (std::size_t j = 0; j < replicas; ++j) {
      Rng rng(derive_seed(cfg, 101 + static_cast<int>(alpha * 10)), j);
      const auto path = sample_subordinator_path(m, 1.0, eps, rng);
      for (int i = 0; i < 3; ++i)
        acc[i].add(std::exp(log_martingale_weight(path, ts[i], m)));
    }
    for (int i = 0; i < 3; ++i) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "mean-weight alpha=%.1f t=%.2f", alpha, ts[i]);
      add_case(rep, buf, "mean-one-weight", acc[i].mean(), 1.0, 3.0 * acc[i].se(),
               "se=" + format_double(acc[i].se()));
    }
  }
}

void suite_martingale_key(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);
  const std::size_t replicas = scaled(cfg, 100000);
  const double t = 0.5, eps = 1e-4;
  const double cs[] = {0.0, 0.5, 1.0};
  stats::MeanAccumulator acc[3];
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(derive_seed(cfg, 201), j);
    const auto path = sample_subordinator_path(m, t, eps, rng);
    const double integral = path.integral(t);
    const double v = path.value(t);
    for (int i = 0; i < 3; ++i)
      acc[i].add(std::exp(cs[i] * t + integral + m.log_density(-cs[i] - v)));
  }
  for (int i = 0; i < 3; ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "shifted-identity c=%.1f", cs[i]);
    add_case(rep, buf, "shifted-weight-identity", acc[i].mean(), m.density(-cs[i]),
             3.0 * acc[i].se(), "se=" + format_double(acc[i].se()));
  }
}

void suite_sigma_tilde(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);
  const std::size_t replicas = scaled(cfg, 100000);
  const double eps = 1e-4;

  for (double t : {0.5, 1.0}) {
    stats::MeanAccumulator lap[2], mean_acc;
    const double lambdas[] = {0.5, 1.0};
    for (std::size_t j = 0; j < replicas; ++j) {
      Rng rng(derive_seed(cfg, 301 + static_cast<int>(t * 10)), j);
      const auto path = sample_subordinator_path(m, t, eps, rng);
      const double w = std::exp(log_martingale_weight(path, t, m));
      const double v = path.value(t);
      for (int i = 0; i < 2; ++i) lap[i].add(w * std::exp(-lambdas[i] * v));
      mean_acc.add(w * v);
    }
    for (int i = 0; i < 2; ++i) {
      const double quad = sigma_tilde_laplace(m, lambdas[i], t);
      char buf[80];
      std::snprintf(buf, sizeof(buf), "laplace lambda=%.1f t=%.1f", lambdas[i], t);
      add_case(rep, buf, "tilted-laplace", lap[i].mean(), quad, 3.0 * lap[i].se(),
               "se=" + format_double(lap[i].se()));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mean-vs-quadrature t=%.1f", t);
    add_case(rep, buf, "tilted-mean", mean_acc.mean(), sigma_tilde_mean(m, t),
             3.0 * mean_acc.se(), "se=" + format_double(mean_acc.se()));
  }

  const double t_big = 50.0;
  const double ratio =
      sigma_tilde_mean(m, t_big) / (m.alpha() * std::pow(t_big, m.alpha() - 1.0));
  add_case(rep, "mean-growth t=50", "tilted-mean-growth", ratio, 1.0, 0.05);

  // derivative of the Laplace transform at 0 recovers the mean
  const double h = 1e-3;
  const double deriv = (sigma_tilde_laplace(m, h, 1.0) - 1.0) / h;
  add_case(rep, "laplace-derivative t=1", "tilted-laplace", -deriv,
           sigma_tilde_mean(m, 1.0), 2e-3 * sigma_tilde_mean(m, 1.0));

  // monotone and log-convex over the lambda grid
  bool monotone = true, logconvex = true;
  std::vector<double> logs;
  double prev = 2.0;
  for (double l = 0.0; l <= 4.0 + 1e-9; l += 0.25) {
    const double v = sigma_tilde_laplace(m, l, 1.0);
    monotone = monotone && v <= prev * (1.0 + 1e-9);
    prev = v;
    logs.push_back(std::log(v));
  }
  for (std::size_t i = 1; i + 1 < logs.size(); ++i)
    logconvex = logconvex && logs[i - 1] + logs[i + 1] - 2.0 * logs[i] > -1e-7;
  add_flag(rep, "laplace-shape", "complete-monotonicity", monotone && logconvex);
}

void suite_quadvar(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);
  const std::size_t replicas = scaled(cfg, 100000);
  const double eps = 1e-4;
  const double lp0 = std::log(m.p_zero());

  // ratio identity over the (t,x) grid
  for (double t : {0.5, 1.0}) {
    stats::MeanAccumulator acc[3];
    const double xs[] = {0.5, 1.0, 2.0};
    for (std::size_t j = 0; j < replicas; ++j) {
      Rng rng(derive_seed(cfg, 401 + static_cast<int>(t * 10)), j);
      const auto path = sample_subordinator_path(m, t, eps, rng);
      const double w = std::exp(log_martingale_weight(path, t, m));
      const double lpv = m.log_density(-path.value(t));
      for (int i = 0; i < 3; ++i)
        acc[i].add(w * std::exp(m.log_density(-path.value(t) - xs[i]) - lpv));
    }
    for (int i = 0; i < 3; ++i) {
      const double oracle = std::exp(-t * xs[i] + m.log_density(-xs[i]) - lp0);
      char buf[80];
      std::snprintf(buf, sizeof(buf), "ratio-identity t=%.1f x=%.1f", t, xs[i]);
      add_case(rep, buf, "tilted-ratio-identity", acc[i].mean(), oracle,
               3.0 * acc[i].se(), "se=" + format_double(acc[i].se()));
    }
  }

  // expected total quadratic variation is below the closed-form bound
  const double t = 5.0;
  stats::MeanAccumulator qv;
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(derive_seed(cfg, 431), j);
    const auto path = sample_subordinator_path(m, t, eps, rng);
    qv.add(std::exp(log_martingale_weight(path, t, m)) * path.quadratic_variation(t));
  }
  const double bound = quadratic_variation_bound(m);
  const bool ok = qv.mean() <= bound + 3.0 * qv.se();
  add_flag(rep, "quadratic-variation-bound t=5", "jump-square-bound", ok,
           "estimate=" + format_double(qv.mean()) + " bound=" + format_double(bound) +
               " se=" + format_double(qv.se()));
}

void suite_first_cut(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);
  const double alpha = m.alpha();
  const std::size_t replicas = scaled(cfg, 100000);
  const double horizon = 12.0, eps = 1e-4;
  const auto ens =
      sample_stable_tree_ensemble(m, 1, horizon, eps, replicas, derive_seed(cfg, 501));

  const double miss = ens.missing_mass();
  stats::MeanAccumulator m1, m2, w_acc;
  for (const auto& wt : ens.trees) {
    w_acc.add(wt.weight);
    const double y =
        (wt.complete && wt.tree.segment_count() >= 1) ? wt.tree.cuts()[0] : 0.0;
    const double ay = alpha * y;
    m1.add(wt.weight * ay);
    m2.add(wt.weight * ay * ay);
  }
  add_case(rep, "ensemble-mean-weight", "mean-one-weight", w_acc.mean(), 1.0,
           3.0 * w_acc.se());

  // moments of the first-cut law: E[(alpha Y1)^k] = Gamma(k+1)Gamma(th)/Gamma((k+1)th)
  const double th = 1.0 - 1.0 / alpha;
  const double mom1 = std::tgamma(2.0) * std::tgamma(th) / std::tgamma(2.0 * th);
  const double mom2 = std::tgamma(3.0) * std::tgamma(th) / std::tgamma(3.0 * th);
  add_case(rep, "first-cut-moment k=1", "first-cut-moments", m1.mean(), mom1,
           3.0 * m1.se() + miss * alpha * horizon,
           "se=" + format_double(m1.se()) + " missing=" + format_double(miss));
  add_case(rep, "first-cut-moment k=2", "first-cut-moments", m2.mean(), mom2,
           3.0 * m2.se() + miss * std::pow(alpha * horizon, 2.0),
           "se=" + format_double(m2.se()) + " missing=" + format_double(miss));

  // survival P(Y1 >= t) against the marginal-density oracle
  SurvivalOracle oracle(m, scaled(cfg, 200000), derive_seed(cfg, 502));
  for (double t : {0.5, 1.0, 2.0}) {
    stats::MeanAccumulator s;
    for (const auto& wt : ens.trees) {
      const bool beyond =
          wt.tree.segment_count() < 1 || wt.tree.cuts()[0] >= t;
      s.add(wt.weight * (beyond ? 1.0 : 0.0));
    }
    const auto [ov, ose] = oracle.at(t);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "survival t=%.1f", t);
    add_case(rep, buf, "survival-vs-marginal", s.mean(), ov,
             3.0 * std::sqrt(s.se() * s.se() + ose * ose),
             "se=" + format_double(s.se()) + " oracle_se=" + format_double(ose));
  }
}

void suite_crt_sanity(const VerifyConfig& cfg, SuiteReport& rep) {
  const std::size_t n = scaled(cfg, 100000);
  const auto ens = sample_crt_ensemble(2, 60.0, n, derive_seed(cfg, 601));
  std::vector<double> half_y2, ratio;
  half_y2.reserve(n);
  ratio.reserve(n);
  for (const auto& wt : ens.trees) {
    if (wt.tree.segment_count() < 2) continue;
    const double y1 = wt.tree.cuts()[0];
    half_y2.push_back(0.5 * y1 * y1);
    ratio.push_back(wt.tree.attachments()[0] / y1);
  }
  const double crit = stats::ks_critical_one(0.01, half_y2.size());
  const double d1 =
      stats::ks_one_sample(half_y2, [](double x) { return -std::expm1(-x); });
  const double d2 = stats::ks_one_sample(
      ratio, [](double x) { return std::clamp(x, 0.0, 1.0); });
  add_case(rep, "first-cut-exponential", "constant-rate-cuts", d1, 0.0, crit,
           "KS at 1%");
  add_case(rep, "attachment-uniform", "uniform-attachment", d2, 0.0, crit,
           "KS at 1%");
}

void suite_prufer(const VerifyConfig& cfg, SuiteReport& rep) {
  // exhaustive bijection over [3]^2 and [4]^3
  for (std::size_t n : {3u, 4u}) {
    std::size_t total = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) total *= n;
    std::set<std::vector<std::uint32_t>> images;
    bool roundtrip = true, degrees = true;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::uint32_t> word(n - 1);
      std::size_t c = code;
      for (auto& w : word) {
        w = static_cast<std::uint32_t>(c % n);
        c /= n;
      }
      const auto tree = prufer_decode(word);
      roundtrip = roundtrip && prufer_encode(tree) == word;
      std::vector<std::uint32_t> mult(n, 0);
      for (auto w : word) ++mult[w];
      degrees = degrees && tree.out_degrees() == mult;
      auto key = tree.parent;
      key.push_back(tree.root);
      images.insert(key);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "exhaustive n=%zu", n);
    add_flag(rep, buf, "codeword-bijection",
             roundtrip && degrees && images.size() == total,
             std::to_string(images.size()) + "/" + std::to_string(total) +
                 " distinct trees");
  }

  // random round-trips, n up to 200
  Rng rng(derive_seed(cfg, 701));
  bool ok = true;
  const std::size_t reps = scaled(cfg, 10000, 200);
  for (std::size_t rep_i = 0; rep_i < reps && ok; ++rep_i) {
    const std::size_t n = 2 + rng.below(199);
    RootedTree t;
    t.root = 0;
    t.parent.assign(n, 0);
    for (std::uint32_t v = 1; v < n; ++v)
      t.parent[v] = static_cast<std::uint32_t>(rng.below(v));
    const auto word = prufer_encode(t);
    const auto back = prufer_decode(word);
    ok = back.root == t.root && back.parent == t.parent;
    std::vector<std::uint32_t> mult(n, 0);
    for (auto w : word) ++mult[w];
    ok = ok && t.out_degrees() == mult;
  }
  add_flag(rep, "random-roundtrip", "codeword-bijection", ok,
           std::to_string(reps) + " trees");
}

void suite_bienayme(const VerifyConfig& cfg, SuiteReport& rep) {
  const auto law = OffspringLaw::uniform012();
  const std::size_t n = 4;
  const auto exact = enumerate_conditioned_gw(law, n);

  const std::size_t reps = scaled(cfg, 1000000, 20000);
  std::map<OrderedTree, std::size_t> counts;
  Rng rng(derive_seed(cfg, 801));
  for (std::size_t i = 0; i < reps; ++i) {
    const auto cd = sample_conditioned_degrees(law, n, rng);
    const auto sb = size_biased_reorder(cd.values, rng);
    auto [tree, trace] = grow_tree(n, sb.dhat, rng);
    ++counts[randomize_order(tree, rng)];
  }
  double tv = 0.0;
  for (const auto& [shape, p] : exact) {
    const auto it = counts.find(shape);
    const double emp =
        it == counts.end() ? 0.0 : static_cast<double>(it->second) / reps;
    tv += std::fabs(emp - p);
  }
  for (const auto& [shape, c] : counts)
    if (!exact.count(shape)) tv += static_cast<double>(c) / reps;
  tv *= 0.5;
  add_case(rep, "pipeline-law-tv n=4", "conditioned-tree-law", tv, 0.0, 0.02,
           std::to_string(exact.size()) + " shapes");

  // normaliser agrees with the first-passage identity (1/n) P(Xi_n = n-1)
  const double normalizer = conditioned_gw_normalizer(law, n);
  const double via_walk = walk_pmf(law, n, n - 1)[n - 1] / static_cast<double>(n);
  add_case(rep, "enumeration-normaliser", "first-passage-count", normalizer, via_walk,
           1e-12);
}

void suite_growth_invariants(const VerifyConfig& cfg, SuiteReport& rep) {
  // grow_tree throws if the half-edge identity ever fails, so this suite
  // simply drives it hard and checks final states
  const std::size_t runs = scaled(cfg, 1000, 50);
  std::size_t violations = 0, bad_final = 0;
  for (auto which : {0, 1}) {
    const auto law =
        which == 0 ? OffspringLaw::stable(cfg.alpha) : OffspringLaw::uniform012();
    Rng rng(derive_seed(cfg, 901 + which));
    for (std::size_t i = 0; i < runs; ++i) {
      const std::size_t n = 1000;
      try {
        const auto cd = sample_conditioned_degrees(law, n, rng);
        const auto sb = size_biased_reorder(cd.values, rng);
        auto [tree, trace] = grow_tree(n, sb.dhat, rng);
        tree.validate();
        if (tree.size() != n || trace.half_edges.back() != 0) ++bad_final;
      } catch (const std::logic_error&) {
        ++violations;
      }
    }
  }
  add_case(rep, "half-edge-identity", "half-edge-count-identity",
           static_cast<double>(violations), 0.0, 0.0,
           std::to_string(2 * runs) + " runs at n=1000");
  add_case(rep, "final-state", "complete-tree", static_cast<double>(bad_final), 0.0,
           0.0);
}

void suite_theta(const VerifyConfig& cfg, SuiteReport& rep) {
  const auto law = OffspringLaw::stable(cfg.alpha, 1u << 14);

  // exact identity at n=8, m=2 by brute enumeration
  {
    const std::size_t n = 8, m = 2;
    const auto row = walk_pmf(law, n - m, n - 1);
    const auto full = walk_pmf(law, n, n - 1);
    const auto sb = law.size_biased_pmf(n - 1);
    double lhs = 0.0;
    for (std::uint64_t k1 = 1; k1 <= n - 1; ++k1)
      for (std::uint64_t k2 = 1; k1 + k2 <= n - 1; ++k2) {
        const std::uint64_t pre[] = {k1, k2};
        const double lw = log_theta_weight(pre, n, row, full[n - 1]);
        if (std::isfinite(lw)) lhs += std::exp(lw) * sb[k1] * sb[k2];
      }
    // P(N >= 2 | Xi_8 = 7): states (count capped at 2, partial sum)
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
    add_case(rep, "exact-sum n=8 m=2", "prefix-reweighting", lhs, rhs, 1e-10);
  }

  // statistical identity at n=2000: E[Theta_m] = P(N >= m), m = floor(t m_n)
  {
    const std::size_t n = 2000;
    const double mn = law.m_n(n);
    const std::size_t m = static_cast<std::size_t>(0.5 * mn);
    const auto row = walk_pmf(law, n - m, n - 1);
    const auto full = walk_pmf(law, n, n - 1);
    const std::size_t reps = scaled(cfg, 100000);
    stats::MeanAccumulator acc;
    std::vector<std::uint64_t> prefix(m);
    for (std::size_t i = 0; i < reps; ++i) {
      Rng rng(derive_seed(cfg, 1001), i);
      for (auto& k : prefix) k = law.sample_size_biased(rng);
      const double lw = log_theta_weight(prefix, n, row, full[n - 1]);
      acc.add(std::isfinite(lw) ? std::exp(lw) : 0.0);
    }

    // exact P(N^n >= m) in log space
    const double p0 = law.pmf(0);
    std::vector<double> q(n, 0.0);  // positive-part pmf, unnormalised
    for (std::size_t k = 1; k < n; ++k) q[k] = law.pmf(k);
    std::vector<double> conv{1.0};
    double below = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (r > 0 && conv.size() > n) conv.resize(n);
      double lc = 0.0;  // log C(n, r)
      for (std::size_t i = 0; i < r; ++i)
        lc += std::log(static_cast<double>(n - i)) -
              std::log(static_cast<double>(i + 1));
      const double mass = (r == 0 && n - 1 == 0) ? 1.0
                          : (conv.size() > n - 1 ? conv[n - 1] : 0.0);
      if (mass > 0.0)
        below += std::exp(lc + static_cast<double>(n - r) * std::log(p0) +
                          std::log(mass));
      // advance conv to q^{*(r+1)}
      std::vector<double> next(n, 0.0);
      for (std::size_t i = 0; i < conv.size(); ++i) {
        if (conv[i] == 0.0) continue;
        for (std::size_t k = 1; i + k < n; ++k) next[i + k] += conv[i] * q[k];
      }
      conv = std::move(next);
    }
    const double p_n_geq_m = 1.0 - below / full[n - 1];
    add_case(rep, "statistical n=2000", "prefix-reweighting", acc.mean(), p_n_geq_m,
             3.0 * acc.se(), "m=" + std::to_string(m) +
                                 " se=" + format_double(acc.se()));

    // independent cross-check: N from directly sampled conditioned degrees
    const std::size_t direct_reps = scaled(cfg, 300, 30);
    std::size_t at_least = 0;
    Rng rng(derive_seed(cfg, 1002));
    for (std::size_t i = 0; i < direct_reps; ++i) {
      const auto cd = sample_conditioned_degrees(law, n, rng);
      std::size_t nz = 0;
      for (auto v : cd.values) nz += v > 0;
      at_least += nz >= m;
    }
    const double emp = static_cast<double>(at_least) / direct_reps;
    add_case(rep, "direct-degree-crosscheck", "prefix-reweighting", emp, p_n_geq_m,
             3.0 * std::sqrt(0.25 / direct_reps) + 1e-9);
  }
}

void suite_first_stick(const VerifyConfig& cfg, SuiteReport& rep) {
  const std::size_t n = 100, k = 6;
  std::vector<std::vector<std::uint32_t>> dhats;
  {
    std::vector<std::uint32_t> a(n, 1);  // 99 ones
    a[n - 1] = 0;
    dhats.push_back(a);
    std::vector<std::uint32_t> b(n, 0);  // 5,2,2 then ones
    b[0] = 5;
    b[1] = 2;
    b[2] = 2;
    for (std::size_t i = 3; i < 93; ++i) b[i] = 1;
    dhats.push_back(b);
    std::vector<std::uint32_t> c(n, 0);  // 10,10 then ones
    c[0] = 10;
    c[1] = 10;
    for (std::size_t i = 2; i < 81; ++i) c[i] = 1;
    dhats.push_back(c);
  }
  const std::size_t reps = scaled(cfg, 30000, 2000);
  for (std::size_t which = 0; which < dhats.size(); ++which) {
    const auto& dhat = dhats[which];
    std::uint64_t total = 0;
    for (auto v : dhat) total += v;
    if (total != n - 1) throw std::logic_error("bad test degree sequence");
    const double expect = first_stick_survival(dhat, k, n);
    std::size_t late = 0;
    for (std::size_t i = 0; i < reps; ++i) {
      Rng rng(derive_seed(cfg, 1101 + which), i);
      auto [tree, trace] = grow_tree(n, dhat, rng);
      const std::uint32_t c1 =
          trace.branch_steps.empty() ? UINT32_MAX : trace.branch_steps.front();
      late += c1 > k;
    }
    const double emp = static_cast<double>(late) / reps;
    const double se = std::sqrt(std::max(expect * (1 - expect), 1e-9) / reps);
    add_case(rep, "survival-product seq" + std::to_string(which),
             "all-growth-prefix", emp, expect, 3.0 * se + 1e-12);
  }
}

void suite_component_mass(const VerifyConfig& cfg, SuiteReport& rep) {
  const auto law = OffspringLaw::stable(cfg.alpha);
  const std::size_t n = 10000, k = 3;
  const std::size_t trees = scaled(cfg, 1200, 40);
  stats::MeanAccumulator acc;
  for (std::size_t i = 0; i < trees; ++i) {
    Rng rng(derive_seed(cfg, 1201), i);
    const auto cd = sample_conditioned_degrees(law, n, rng);
    const auto sb = size_biased_reorder(cd.values, rng);
    auto [tree, trace] = grow_tree(n, sb.dhat, rng);
    const auto st = tree_statistics(tree, trace, k, 3, rng);
    acc.add(static_cast<double>(st.size_biased_component) / static_cast<double>(n));
  }
  const double th = 1.0 - 1.0 / cfg.alpha;
  const double oracle = th / (static_cast<double>(k) + th);
  add_case(rep, "size-biased-component-mean", "component-beta-law", acc.mean(), oracle,
           0.1 * oracle,
           "qualitative; se=" + format_double(acc.se()) + " trees=" +
               std::to_string(trees));
}

void suite_discrete_continuous(const VerifyConfig& cfg, SuiteReport& rep) {
  const auto law = OffspringLaw::stable(cfg.alpha, 1u << 18);
  StableModel model(cfg.alpha);
  SurvivalOracle oracle(model, scaled(cfg, 200000), derive_seed(cfg, 1301));

  // n = 1e5 through the exact prefix-reweighting identity
  {
    const std::size_t n = 100000;
    const double mn = law.m_n(n);
    const double an = law.a_n(n);
    for (double t : {0.5, 1.0}) {
      const std::size_t k = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(t * mn)) - 1);
      const std::size_t m = k;
      const auto row = walk_pmf(law, n - m, n - 1);
      const auto full = walk_pmf(law, n, n - 1);
      const std::size_t reps = scaled(cfg, 200000);
      stats::MeanAccumulator surv, cumdeg;
      std::vector<std::uint64_t> prefix(m);
      for (std::size_t i = 0; i < reps; ++i) {
        Rng rng(derive_seed(cfg, 1302 + static_cast<int>(10 * t)), i);
        double product = 1.0;
        std::int64_t excess = 0;
        std::uint64_t sum = 0;
        for (std::size_t j = 1; j <= m; ++j) {
          const std::uint64_t d = law.sample_size_biased(rng);
          prefix[j - 1] = d;
          sum += d;
          // survival factor for step j uses the excess before entry j
          const double factor =
              1.0 - static_cast<double>(excess) / static_cast<double>(n - j);
          product *= std::max(factor, 0.0);
          excess += static_cast<std::int64_t>(d) - 1;
        }
        const double lw = log_theta_weight(prefix, n, row, full[n - 1]);
        const double w = std::isfinite(lw) ? std::exp(lw) : 0.0;
        surv.add(w * product);
        cumdeg.add(w * static_cast<double>(sum) / an);
      }
      const auto [ov, ose] = oracle.at(t);
      char buf[96];
      std::snprintf(buf, sizeof(buf), "first-branch-survival n=1e5 t=%.1f", t);
      add_case(rep, buf, "survival-vs-marginal", surv.mean(), ov, 0.05,
               "qualitative; se=" + format_double(surv.se()) +
                   " oracle_se=" + format_double(ose));
      std::snprintf(buf, sizeof(buf), "cumulative-degrees n=1e5 t=%.1f", t);
      const double quad = sigma_tilde_mean(model, t);
      add_case(rep, buf, "tilted-mean", cumdeg.mean(), quad, 0.1 * quad,
               "qualitative; se=" + format_double(cumdeg.se()));
    }
  }

  // full pipeline at n = 1e4: branch time and component statistics
  {
    const std::size_t n = 10000;
    const double mn = law.m_n(n);
    const std::size_t trees = scaled(cfg, 400, 40);
    std::size_t late_half = 0, late_one = 0;
    Rng rng(derive_seed(cfg, 1303));
    for (std::size_t i = 0; i < trees; ++i) {
      const auto cd = sample_conditioned_degrees(law, n, rng);
      const auto sb = size_biased_reorder(cd.values, rng);
      auto [tree, trace] = grow_tree(n, sb.dhat, rng);
      const double c1 = trace.branch_steps.empty()
                            ? std::numeric_limits<double>::infinity()
                            : trace.branch_steps.front();
      late_half += c1 / mn >= 0.5;
      late_one += c1 / mn >= 1.0;
    }
    const double se = std::sqrt(0.25 / static_cast<double>(trees));
    add_case(rep, "direct-survival n=1e4 t=0.5", "survival-vs-marginal",
             static_cast<double>(late_half) / trees, oracle.at(0.5).first,
             0.05 + 3.0 * se, "qualitative");
    add_case(rep, "direct-survival n=1e4 t=1.0", "survival-vs-marginal",
             static_cast<double>(late_one) / trees, oracle.at(1.0).first,
             0.05 + 3.0 * se, "qualitative");
  }
}

void suite_polya_urn(const VerifyConfig& cfg, SuiteReport& rep) {
  // classical urn: terminal fraction is uniform
  const std::size_t reps = scaled(cfg, 10000, 500);
  const std::size_t steps = 10000;
  std::vector<double> terminal;
  terminal.reserve(reps);
  {
    const std::vector<double> ones(steps, 1.0);
    for (std::size_t i = 0; i < reps; ++i) {
      Rng rng(derive_seed(cfg, 1401), i);
      // terminal-only run to avoid building the whole trajectory
      double a = 1.0, m = 2.0;
      for (double inc : ones) {
        if (rng.uniform() < a / m) a += inc;
        m += inc;
      }
      terminal.push_back(a / m);
    }
  }
  const double d = stats::ks_one_sample(
      terminal, [](double x) { return std::clamp(x, 0.0, 1.0); });
  add_case(rep, "classical-uniform-limit", "urn-limit", d, 0.0,
           stats::ks_critical_one(0.01, reps), "KS at 1%");

  // time-dependent urn: fraction and jump frequency share the limit
  const std::size_t reps2 = scaled(cfg, 2000, 100);
  std::vector<double> gaps;
  gaps.reserve(reps2);
  for (std::size_t i = 0; i < reps2; ++i) {
    Rng rng(derive_seed(cfg, 1402), i);
    std::vector<double> incs(steps);
    for (auto& v : incs) v = rng.exponential();
    const auto res = polya_urn_simulate(1.0, 2.0, incs, rng);
    gaps.push_back(std::fabs(res.fraction.back() - res.jump_frequency.back()));
  }
  add_case(rep, "fraction-vs-frequency", "urn-limit", stats::median(gaps), 0.0, 0.02,
           "median gap at 1e4 steps");
}

void suite_determinism(const VerifyConfig& cfg, SuiteReport& rep) {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("stabletree-determinism-" +
                                   std::to_string(derive_seed(cfg, 1501) & 0xFFFFFF));
  fs::create_directories(dir);

  auto emit_density = [&](const fs::path& p) {
    StableModel m(cfg.alpha);
    CsvWriter csv(cfg.alpha, cfg.seed);
    csv.header({"x", "p", "log_p"});
    for (double x = -2.0; x <= 2.0 + 1e-9; x += 0.25)
      csv.row({x, m.density(x), m.log_density(x)});
    write_text_file(p.string(), csv.str());
  };
  auto emit_subordinator = [&](const fs::path& p) {
    StableModel m(cfg.alpha);
    const auto est = importance_estimate(m, 1.0, 1e-4, 2000, cfg.seed,
                                         [](const JumpPath& q) { return q.value(1.0); });
    CsvWriter csv(cfg.alpha, cfg.seed);
    csv.header({"estimate", "stderr", "oracle"});
    csv.row({est.mean, est.se, sigma_tilde_mean(m, 1.0)});
    write_text_file(p.string(), csv.str());
  };
  auto emit_tree = [&](const fs::path& p) {
    StableModel m(cfg.alpha);
    const auto ens = sample_stable_tree_ensemble(m, 3, 6.0, 1e-3, 25, cfg.seed);
    write_text_file(p.string(), ensemble_to_json(ens).dump(2) + "\n");
  };
  auto emit_discrete = [&](const fs::path& p) {
    const auto law = OffspringLaw::stable(cfg.alpha);
    Rng rng(cfg.seed);
    const auto cd = sample_conditioned_degrees(law, 200, rng);
    const auto sb = size_biased_reorder(cd.values, rng);
    auto [tree, trace] = grow_tree(200, sb.dhat, rng);
    write_text_file(p.string(),
                    discrete_tree_to_json(cfg.alpha, cfg.seed, tree, trace, 5).dump(2) +
                        "\n");
  };

  const std::vector<std::pair<std::string, std::function<void(const fs::path&)>>>
      emitters = {{"density", emit_density},
                  {"subordinator", emit_subordinator},
                  {"tree-continuous", emit_tree},
                  {"tree-discrete", emit_discrete}};
  for (const auto& [name, emit] : emitters) {
    const fs::path a = dir / (name + "-a"), b = dir / (name + "-b");
    emit(a);
    emit(b);
    const bool same = read_text_file(a.string()) == read_text_file(b.string());
    add_flag(rep, "byte-identical " + name, "plumbing", same);
  }

  if (!cfg.cli_path.empty()) {
    auto run_twice = [&](const std::string& args, const std::string& tag) {
      const fs::path a = dir / (tag + "-cli-a"), b = dir / (tag + "-cli-b");
      for (const auto& out : {a, b}) {
        const std::string cmd =
            cfg.cli_path + " " + args + " --out " + out.string() + " >/dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0)
          throw std::runtime_error("CLI invocation failed: " + cmd);
      }
      return read_text_file(a.string()) == read_text_file(b.string());
    };
    add_flag(rep, "cli density", "plumbing",
             run_twice("density --alpha 1.5 --from -1 --to 1 --step 0.25", "density"));
    add_flag(rep, "cli subordinator", "plumbing",
             run_twice("subordinator --alpha 1.5 --t 0.5 --eps 1e-4 --replicas 500 "
                       "--seed 7 --stat mean",
                       "subordinator"));
    add_flag(rep, "cli tree-continuous", "plumbing",
             run_twice("tree-continuous --alpha 1.5 --k 2 --horizon 6 --replicas 20 "
                       "--seed 7",
                       "tree-c"));
    add_flag(rep, "cli tree-crt", "plumbing",
             run_twice("tree-crt --k 2 --horizon 20 --replicas 20 --seed 7", "tree-crt"));
    add_flag(rep, "cli tree-discrete", "plumbing",
             run_twice("tree-discrete --alpha 1.5 --n 300 --seed 7", "tree-d"));
  }
  fs::remove_all(dir);
}

void suite_subordinator_sanity(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);
  const std::size_t n = scaled(cfg, 100000);

  stats::MeanAccumulator lap;
  for (std::size_t j = 0; j < n; ++j) {
    Rng rng(derive_seed(cfg, 1601), j);
    lap.add(std::exp(-sample_subordinator_path(m, 1.0, 1e-4, rng).value(1.0)));
  }
  const double target = std::exp(-m.alpha());
  add_case(rep, "laplace-at-one", "subordinator-laplace", lap.mean(), target,
           3.0 * lap.se() + expected_truncation_mass(m, 1.0, 1e-4) * target,
           "se=" + format_double(lap.se()));

  // sampler marginal against the exact generator (KS at 1%)
  const std::size_t ks_n = scaled(cfg, 20000, 2000);
  std::vector<double> via_path(ks_n), exact(ks_n);
  for (std::size_t j = 0; j < ks_n; ++j) {
    Rng r1(derive_seed(cfg, 1602), j), r2(derive_seed(cfg, 1603), j);
    via_path[j] = sample_subordinator_path(m, 0.7, 1e-5, r1).value(0.7);
    exact[j] = exact_marginal_sample(m, 0.7, r2);
  }
  add_case(rep, "marginal-vs-exact", "marginal-law",
           stats::ks_two_sample(via_path, exact), 0.0,
           stats::ks_critical_two(0.01, ks_n, ks_n), "KS at 1%");

  // scaling property of the marginal
  std::vector<double> at_t(ks_n), scaled_v(ks_n);
  const double t = 0.3;
  for (std::size_t j = 0; j < ks_n; ++j) {
    Rng r1(derive_seed(cfg, 1604), j), r2(derive_seed(cfg, 1605), j);
    at_t[j] = sample_subordinator_path(m, t, 1e-5, r1).value(t);
    scaled_v[j] = std::pow(t, 1.0 / (m.alpha() - 1.0)) *
                  sample_subordinator_path(m, 1.0, 1e-5, r2).value(1.0);
  }
  add_case(rep, "marginal-scaling", "marginal-scaling",
           stats::ks_two_sample(at_t, scaled_v), 0.0,
           stats::ks_critical_two(0.01, ks_n, ks_n), "KS at 1%");

  // estimates move by less than 3 SE when the cutoff shrinks 10x
  const std::size_t half = scaled(cfg, 20000, 2000);
  auto coarse = importance_estimate(m, 0.5, 1e-4, half, derive_seed(cfg, 1606),
                                    [](const JumpPath& p) { return p.value(0.5); });
  auto fine = importance_estimate(m, 0.5, 1e-5, half, derive_seed(cfg, 1607),
                                  [](const JumpPath& p) { return p.value(0.5); });
  add_case(rep, "cutoff-stability", "truncation-bias", coarse.mean, fine.mean,
           3.0 * std::sqrt(coarse.se * coarse.se + fine.se * fine.se));
}

void suite_linebreak_law(const VerifyConfig& cfg, SuiteReport& rep) {
  StableModel m(cfg.alpha);

  // attachment threshold coverage: tau(z-) <= u tau(y-) <= tau(z) always
  bool coverage = true;
  const std::size_t reps = scaled(cfg, 10000, 500);
  for (std::size_t j = 0; j < reps && coverage; ++j) {
    Rng rng(derive_seed(cfg, 1701), j);
    const auto path = sample_subordinator_path(m, 2.0, 1e-3, rng);
    const auto intensity = IntensityPath::from_jump_path(path);
    const auto cuts = sample_cut_points(intensity, 1, rng);
    if (cuts.values.empty()) continue;
    const double y = cuts.values[0];
    const double u = rng.uniform();
    const double mass = intensity.tau_left(y);
    if (!(mass > 0.0)) continue;
    const double z = sample_attachment(intensity, y, u);
    coverage = intensity.tau_left(z) <= u * mass * (1 + 1e-12) &&
               u * mass <= intensity.tau(z) * (1 + 1e-12);
  }
  add_flag(rep, "attachment-threshold-coverage", "attachment-rule", coverage,
           std::to_string(reps) + " replicas");

  // four-point condition on sampled quadruples
  const auto ens =
      sample_stable_tree_ensemble(m, 5, 8.0, 1e-3, scaled(cfg, 300, 50),
                                  derive_seed(cfg, 1702));
  bool four_point = true;
  Rng rng(derive_seed(cfg, 1703));
  for (const auto& wt : ens.trees) {
    if (!wt.complete) continue;
    const double len = wt.tree.total_length();
    double pts[4];
    for (auto& p : pts) p = rng.uniform() * len;
    const auto d = [&](int i, int j) { return wt.tree.distance(pts[i], pts[j]); };
    const double s1 = d(0, 1) + d(2, 3), s2 = d(0, 2) + d(1, 3), s3 = d(0, 3) + d(1, 2);
    four_point = four_point && s1 <= std::max(s2, s3) + 1e-9;
  }
  add_flag(rep, "four-point-condition", "tree-metric", four_point);

  // ICRT atom-count mean
  const std::vector<double> thetas{1.0, 0.5, 0.25};
  stats::MeanAccumulator atoms;
  for (std::size_t j = 0; j < reps; ++j) {
    Rng r(derive_seed(cfg, 1704), j);
    atoms.add(static_cast<double>(icrt_intensity(0.0, thetas, 2.0, r).jump_count()));
  }
  double expect = 0.0;
  for (double th : thetas) expect += -std::expm1(-th * 2.0);
  add_case(rep, "icrt-atom-count", "atom-arrival-rate", atoms.mean(), expect,
           3.0 * atoms.se());
}

void suite_offspring_law(const VerifyConfig& cfg, SuiteReport& rep) {
  const auto law = OffspringLaw::stable(cfg.alpha, 1u << 18);
  StableModel model(cfg.alpha);

  // f'(1) = 1: body mean plus the exact size-biased tail mass
  double mean = 0.0;
  for (std::uint64_t k = 0; k <= law.table_cap(); ++k)
    mean += static_cast<double>(k) * law.pmf(k);
  mean += cfg.alpha * static_cast<double>(law.table_cap()) *
          law.tail(law.table_cap()) / (cfg.alpha - 1.0);
  add_case(rep, "unit-mean", "critical-mean", mean, 1.0, 1e-9);

  // normalisation: (Xi_n - n)/a_n matches the stable cdf on a grid
  const std::size_t n = 100000;
  const std::size_t draws = scaled(cfg, 40000, 400);
  const double an = law.a_n(n);
  std::vector<double> grid{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::size_t> counts(grid.size(), 0);
  for (std::size_t i = 0; i < draws; ++i) {
    Rng rng(derive_seed(cfg, 1801), i);
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < n; ++j) sum += law.sample(rng);
    const double norm =
        (static_cast<double>(sum) - static_cast<double>(n)) / an;
    for (std::size_t g = 0; g < grid.size(); ++g) counts[g] += norm <= grid[g];
  }
  double sup_gap = 0.0;
  const double lo = -model.left_cut();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double emp = static_cast<double>(counts[g]) / draws;
    const double cdf = model.cdf_interval(lo, grid[g]);
    sup_gap = std::max(sup_gap, std::fabs(emp - cdf));
  }
  add_case(rep, "walk-normalisation", "domain-of-attraction", sup_gap, 0.0, 0.01,
           "grid sup; draws=" + std::to_string(draws));

  // local limit: a_n P(Xi_n = n-1) -> p(0)
  const auto row = walk_pmf(law, n, n - 1);
  add_case(rep, "local-limit n=1e5", "local-limit", an * row[n - 1], model.p_zero(),
           0.02 * model.p_zero());
}

using SuiteFn = void (*)(const VerifyConfig&, SuiteReport&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"density-basics", suite_density_basics},
      {"martingale-mean", suite_martingale_mean},
      {"martingale-key", suite_martingale_key},
      {"sigma-tilde", suite_sigma_tilde},
      {"quadvar", suite_quadvar},
      {"first-cut", suite_first_cut},
      {"crt-sanity", suite_crt_sanity},
      {"prufer-exhaustive", suite_prufer},
      {"bienayme-law", suite_bienayme},
      {"growth-invariants", suite_growth_invariants},
      {"theta-consistency", suite_theta},
      {"first-stick", suite_first_stick},
      {"component-mass", suite_component_mass},
      {"discrete-continuous", suite_discrete_continuous},
      {"polya-urn", suite_polya_urn},
      {"determinism", suite_determinism},
      {"subordinator-sanity", suite_subordinator_sanity},
      {"linebreak-law", suite_linebreak_law},
      {"offspring-law", suite_offspring_law},
  };
  return reg;
}

}  // namespace

bool SuiteReport::all_pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return true;
}

std::string SuiteReport::to_text() const {
  std::string out = "suite " + suite + " (alpha=" + format_double(alpha) +
                    ", seed=" + std::to_string(seed) + ")\n";
  for (const auto& c : cases) {
    out += std::string(c.pass ? "  PASS " : "  FAIL ") + c.name + " [" + c.anchor +
           "] estimate=" + format_double(c.estimate) +
           " oracle=" + format_double(c.oracle) +
           " tol=" + format_double(c.tolerance);
    if (!c.note.empty()) out += " (" + c.note + ")";
    out += "\n";
  }
  return out;
}

nlohmann::json SuiteReport::to_json() const {
  // wall time deliberately omitted so identical seeds give identical bytes
  nlohmann::json j;
  j["suite"] = suite;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["version"] = kToolVersion;
  j["pass"] = all_pass();
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : cases) {
    cs.push_back({{"name", c.name},
                  {"anchor", c.anchor},
                  {"estimate", c.estimate},
                  {"oracle", c.oracle},
                  {"tolerance", c.tolerance},
                  {"pass", c.pass},
                  {"note", c.note}});
  }
  j["cases"] = std::move(cs);
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyConfig& cfg) {
  for (const auto& [reg_name, fn] : registry()) {
    if (reg_name != name) continue;
    SuiteReport rep;
    rep.suite = name;
    rep.alpha = cfg.alpha;
    rep.seed = cfg.seed;
    const auto t0 = std::chrono::steady_clock::now();
    fn(cfg, rep);
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

std::vector<SuiteReport> run_all_suites(const VerifyConfig& cfg) {
  std::vector<SuiteReport> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, cfg));
  return out;
}

std::map<OrderedTree, double> enumerate_conditioned_gw(const OffspringLaw& law,
                                                       std::size_t n) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumeration capped at n=8");
  // a vertex in a size-n tree has at most n-1 children regardless of the law
  const std::uint64_t dmax =
      law.heavy_tailed() ? static_cast<std::uint64_t>(n - 1) : law.max_support();

  // all (shape, probability) pairs for ordered trees of a given size
  std::vector<std::vector<std::pair<std::vector<std::uint32_t>, double>>> memo(n + 1);
  std::function<void(std::size_t)> fill = [&](std::size_t s) {
    if (!memo[s].empty()) return;
    auto& out = memo[s];
    if (s == 1) {
      out.push_back({{0u}, law.pmf(0)});
      return;
    }
    for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(dmax, s - 1); ++d) {
      if (law.pmf(d) == 0.0) continue;
      // compositions of s-1 into d positive parts
      std::vector<std::size_t> parts(d, 1);
      std::function<void(std::size_t, std::size_t)> comp = [&](std::size_t idx,
                                                               std::size_t left) {
        if (idx + 1 == d) {
          parts[idx] = left;
          // cross product of subtree lists
          std::vector<std::pair<std::vector<std::uint32_t>, double>> acc = {
              {{static_cast<std::uint32_t>(d)}, law.pmf(d)}};
          for (std::size_t i = 0; i < d; ++i) {
            fill(parts[i]);
            std::vector<std::pair<std::vector<std::uint32_t>, double>> next;
            for (const auto& [shape, p] : acc)
              for (const auto& [sub, q] : memo[parts[i]]) {
                auto combined = shape;
                combined.insert(combined.end(), sub.begin(), sub.end());
                next.push_back({std::move(combined), p * q});
              }
            acc = std::move(next);
          }
          for (auto& entry : acc) out.push_back(std::move(entry));
          return;
        }
        for (std::size_t take = 1; take + (d - idx - 1) <= left; ++take) {
          parts[idx] = take;
          comp(idx + 1, left - take);
        }
      };
      comp(0, s - 1);
    }
  };
  fill(n);

  double total = 0.0;
  for (const auto& [shape, p] : memo[n]) total += p;
  std::map<OrderedTree, double> out;
  for (const auto& [shape, p] : memo[n]) out[OrderedTree{shape}] += p / total;
  return out;
}

double conditioned_gw_normalizer(const OffspringLaw& law, std::size_t n) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumeration capped at n=8");
  const std::uint64_t dmax =
      law.heavy_tailed() ? static_cast<std::uint64_t>(n - 1) : law.max_support();
  std::function<double(std::size_t)> total = [&](std::size_t s) -> double {
    if (s == 1) return law.pmf(0);
    double acc = 0.0;
    for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(dmax, s - 1); ++d) {
      if (law.pmf(d) == 0.0) continue;
      // sum over compositions via convolution powers of the size-total map
      std::vector<double> conv{1.0};
      for (std::uint64_t i = 0; i < d; ++i) {
        std::vector<double> next(s, 0.0);
        for (std::size_t a = 0; a < conv.size(); ++a) {
          if (conv[a] == 0.0) continue;
          for (std::size_t b = 1; a + b < s; ++b) next[a + b] += conv[a] * total(b);
        }
        conv = std::move(next);
      }
      if (conv.size() > s - 1) acc += law.pmf(d) * conv[s - 1];
    }
    return acc;
  };
  return total(n);
}

UrnResult polya_urn_simulate(double a0, double m0, const std::vector<double>& increments,
                             Rng& rng) {
  if (!(a0 > 0.0) || !(a0 < m0))
    throw std::invalid_argument("need 0 < A0 < M0");
  UrnResult res;
  res.fraction.reserve(increments.size());
  res.jump_frequency.reserve(increments.size());
  double a = a0, m = m0;
  std::size_t jumps = 0, i = 0;
  for (double inc : increments) {
    if (!(inc > 0.0)) throw std::invalid_argument("increments must be positive");
    if (rng.uniform() < a / m) {
      a += inc;
      ++jumps;
    }
    m += inc;
    ++i;
    res.fraction.push_back(a / m);
    res.jump_frequency.push_back(static_cast<double>(jumps) / static_cast<double>(i));
  }
  return res;
}

}  // namespace stabletree

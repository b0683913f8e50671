// Command-line front end; all functionality is reached through the shared
// C interface in stabletree/stabletree.h.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stabletree/stabletree.h"

namespace {

struct ModelHandle {
  st_model* ptr = nullptr;
  ~ModelHandle() { st_model_free(ptr); }
};

int runtime_error_exit(const char* what) {
  std::fprintf(stderr, "error: %s\n", what[0] ? what : "unknown failure");
  return 1;
}

std::uint64_t seed_with_env(std::uint64_t cli_seed) {
  if (const char* env = std::getenv("STL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return cli_seed;
}

std::vector<std::uint32_t> read_integers(std::istream& in) {
  std::vector<std::uint32_t> out;
  std::uint64_t v;
  while (in >> v) out.push_back(static_cast<std::uint32_t>(v));
  return out;
}

int cmd_prufer(const std::string& mode) {
  const auto values = read_integers(std::cin);
  if (mode == "decode") {
    if (values.empty()) return runtime_error_exit("empty codeword on stdin");
    const std::size_t n = values.size() + 1;
    std::vector<std::uint32_t> parent(n);
    std::uint32_t root = 0;
    if (st_prufer_decode(values.data(), values.size(), parent.data(), &root) != ST_OK)
      return runtime_error_exit(st_last_error());
    std::printf("root %u\n", root);
    for (std::size_t v = 0; v < n; ++v)
      if (v + 1 != root) std::printf("%zu <- %u\n", v + 1, parent[v]);
    return 0;
  }
  // encode: first number is the root, then the n parent entries
  if (values.size() < 3) return runtime_error_exit("expected: root then n parents");
  const std::uint32_t root = values[0];
  const std::size_t n = values.size() - 1;
  std::vector<std::uint32_t> word(n - 1);
  if (st_prufer_encode(values.data() + 1, root, n, word.data()) != ST_OK)
    return runtime_error_exit(st_last_error());
  for (std::size_t i = 0; i < word.size(); ++i)
    std::printf("%s%u", i ? " " : "", word[i]);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"line-breaking constructions of heavy-tailed random trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", st_version());

  double alpha = 1.5, from = -3.0, to = 3.0, step = 0.1, t = 1.0, eps = 1e-4;
  double horizon = 6.0, theta0 = 0.0, effort = 1.0;
  std::uint64_t seed = 1, replicas = 10000, k = 1, n = 1000, stats_k = 0;
  std::string out, stat = "mean", suite = "all", json_path, theta_file, prufer_mode;
  bool run_all = false;

  auto* density = app.add_subcommand("density", "tabulate the stable density");
  density->add_option("--alpha", alpha)->required();
  density->add_option("--from", from)->required();
  density->add_option("--to", to)->required();
  density->add_option("--step", step)->required();
  density->add_option("--out", out)->required();
  density->add_option("--seed", seed);

  auto* sub = app.add_subcommand("subordinator",
                                 "importance-sampled statistics of the tilted process");
  sub->add_option("--alpha", alpha)->required();
  sub->add_option("--t", t)->required();
  sub->add_option("--eps", eps);
  sub->add_option("--replicas", replicas);
  sub->add_option("--seed", seed);
  sub->add_option("--stat", stat, "mean | laplace:L | qvar");
  sub->add_option("--out", out)->required();

  auto* tc = app.add_subcommand("tree-continuous",
                                "weighted line-breaking trees from the tilted intensity");
  tc->add_option("--alpha", alpha)->required();
  tc->add_option("--k", k)->required();
  tc->add_option("--horizon", horizon);
  tc->add_option("--eps", eps);
  tc->add_option("--replicas", replicas);
  tc->add_option("--seed", seed);
  tc->add_option("--out", out)->required();

  auto* crt = app.add_subcommand("tree-crt", "line-breaking trees at constant rate");
  crt->add_option("--k", k)->required();
  crt->add_option("--horizon", horizon);
  crt->add_option("--replicas", replicas);
  crt->add_option("--seed", seed);
  crt->add_option("--out", out)->required();

  auto* icrt = app.add_subcommand("tree-icrt", "line-breaking trees from atom intensities");
  icrt->add_option("--theta", theta_file, "file: theta0 then the atom sizes")
      ->required();
  icrt->add_option("--k", k)->required();
  icrt->add_option("--horizon", horizon);
  icrt->add_option("--replicas", replicas);
  icrt->add_option("--seed", seed);
  icrt->add_option("--out", out)->required();

  auto* td = app.add_subcommand("tree-discrete", "conditioned critical tree via growth");
  td->add_option("--alpha", alpha)->required();
  td->add_option("--n", n)->required();
  td->add_option("--seed", seed);
  td->add_option("--stats", stats_k, "also emit spanned-subtree statistics at k");
  td->add_option("--out", out)->required();

  auto* pr = app.add_subcommand("prufer", "codeword <-> tree on stdin/stdout");
  pr->add_option("mode", prufer_mode, "encode | decode")
      ->required()
      ->check(CLI::IsMember({"encode", "decode"}));

  auto* vf = app.add_subcommand("verify", "statistical identity suites");
  vf->add_option("--suite", suite, "suite name, or 'all'");
  vf->add_flag("--all", run_all, "run the full battery");
  vf->add_option("--alpha", alpha);
  vf->add_option("--seed", seed);
  vf->add_option("--effort", effort, "replica-count scale in (0,1]");
  vf->add_option("--json", json_path, "also write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  seed = seed_with_env(seed);

  try {
    if (density->parsed()) {
      ModelHandle m;
      if (st_model_create(alpha, &m.ptr) != ST_OK)
        return runtime_error_exit(st_last_error());
      if (st_density_csv(m.ptr, from, to, step, seed, out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("density: alpha=%g grid [%g, %g] step %g -> %s\n", alpha, from, to,
                  step, out.c_str());
      return 0;
    }
    if (sub->parsed()) {
      ModelHandle m;
      if (st_model_create(alpha, &m.ptr) != ST_OK)
        return runtime_error_exit(st_last_error());
      if (st_subordinator_csv(m.ptr, stat.c_str(), t, eps, replicas, seed,
                              out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      double est, se, oracle;
      int has;
      st_subordinator_estimate(m.ptr, stat.c_str(), t, eps, replicas, seed, &est, &se,
                               &oracle, &has);
      std::printf("subordinator %s: estimate %.6g (se %.3g), oracle %.6g -> %s\n",
                  stat.c_str(), est, se, oracle, out.c_str());
      return 0;
    }
    if (tc->parsed()) {
      ModelHandle m;
      if (st_model_create(alpha, &m.ptr) != ST_OK)
        return runtime_error_exit(st_last_error());
      if (st_tree_continuous_json(m.ptr, k, horizon, eps, replicas, seed,
                                  out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("tree-continuous: %llu replicas at k=%llu -> %s\n",
                  static_cast<unsigned long long>(replicas),
                  static_cast<unsigned long long>(k), out.c_str());
      return 0;
    }
    if (crt->parsed()) {
      if (st_tree_crt_json(k, horizon, replicas, seed, out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("tree-crt: %llu replicas at k=%llu -> %s\n",
                  static_cast<unsigned long long>(replicas),
                  static_cast<unsigned long long>(k), out.c_str());
      return 0;
    }
    if (icrt->parsed()) {
      std::ifstream theta_in(theta_file);
      if (!theta_in) return runtime_error_exit("cannot read the theta file");
      std::vector<double> values;
      double v;
      while (theta_in >> v) values.push_back(v);
      if (values.empty()) return runtime_error_exit("theta file is empty");
      theta0 = values.front();
      values.erase(values.begin());
      if (st_tree_icrt_json(theta0, values.data(), values.size(), k, horizon, replicas,
                            seed, out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("tree-icrt: %zu atoms, %llu replicas -> %s\n", values.size(),
                  static_cast<unsigned long long>(replicas), out.c_str());
      return 0;
    }
    if (td->parsed()) {
      if (st_tree_discrete_json(alpha, n, stats_k, seed, out.c_str()) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("tree-discrete: n=%llu alpha=%g -> %s\n",
                  static_cast<unsigned long long>(n), alpha, out.c_str());
      return 0;
    }
    if (pr->parsed()) return cmd_prufer(prufer_mode);
    if (vf->parsed()) {
      if (run_all) suite = "all";
      int ok = 0;
      if (st_verify(suite.c_str(), alpha, seed, effort,
                    json_path.empty() ? nullptr : json_path.c_str(), &ok) != ST_OK)
        return runtime_error_exit(st_last_error());
      std::printf("verify %s: %s\n", suite.c_str(), ok ? "all cases passed" : "FAILURES");
      return ok ? 0 : 3;
    }
  } catch (const std::exception& e) {
    return runtime_error_exit(e.what());
  }
  return 2;
}

#include "stabletree/stabletree.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/growth.hpp"
#include "core/levy_paths.hpp"
#include "core/linebreak.hpp"
#include "core/offspring.hpp"
#include "core/prufer.hpp"
#include "core/serialize.hpp"
#include "core/stable_density.hpp"
#include "core/verify.hpp"

using namespace stabletree;

struct st_model {
  StableModel impl;
};

namespace {

thread_local std::string g_last_error;

st_status fail(st_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class Fn>
st_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const QuadratureError& e) {
    return fail(ST_EQUAD, e.what());
  } catch (const std::domain_error& e) {
    return fail(ST_ERANGE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(ST_ERANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ST_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(ST_EFAIL, e.what());
  }
}

st_status parse_statistic(const std::string& spec, std::string& kind, double& lambda) {
  if (spec == "mean" || spec == "qvar") {
    kind = spec;
    return ST_OK;
  }
  if (spec.rfind("laplace:", 0) == 0) {
    kind = "laplace";
    try {
      lambda = std::stod(spec.substr(8));
    } catch (...) {
      return fail(ST_EINVAL, "bad laplace parameter: " + spec);
    }
    if (lambda < 0.0) return fail(ST_EINVAL, "laplace parameter must be >= 0");
    return ST_OK;
  }
  return fail(ST_EINVAL, "unknown statistic (use mean | laplace:L | qvar): " + spec);
}

}  // namespace

extern "C" {

const char* st_version(void) { return kToolVersion; }

const char* st_last_error(void) { return g_last_error.c_str(); }

st_status st_model_create(double alpha, st_model** out) {
  if (!out) return fail(ST_EINVAL, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    *out = new st_model{StableModel(alpha)};
    return ST_OK;
  });
}

void st_model_free(st_model* model) { delete model; }

double st_model_alpha(const st_model* model) { return model->impl.alpha(); }
double st_model_levy_constant(const st_model* model) { return model->impl.c_alpha(); }
double st_model_density_at_zero(const st_model* model) { return model->impl.p_zero(); }

st_status st_exponent(const st_model* model, double re, double im, double* out_re,
                      double* out_im) {
  if (!model || !out_re || !out_im) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    const auto g = model->impl.exponent_G({re, im});
    *out_re = g.real();
    *out_im = g.imag();
    return ST_OK;
  });
}

st_status st_density(const st_model* model, double x, double* out) {
  if (!model || !out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    *out = model->impl.density(x);
    return ST_OK;
  });
}

st_status st_log_density(const st_model* model, double x, double* out) {
  if (!model || !out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    *out = model->impl.log_density(x);
    return ST_OK;
  });
}

st_status st_density_ratio(const st_model* model, double y, double x, double* out) {
  if (!model || !out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    *out = model->impl.density_ratio(y, x);
    return ST_OK;
  });
}

st_status st_density_csv(const st_model* model, double from, double to, double step,
                         uint64_t seed, const char* path) {
  if (!model || !path) return fail(ST_EINVAL, "null pointer");
  if (!(step > 0.0) || to < from) return fail(ST_EINVAL, "bad grid");
  return guarded([&] {
    CsvWriter csv(model->impl.alpha(), seed);
    csv.header({"x", "p", "log_p"});
    // fixed integer stepping keeps the row count exact for any step
    const auto rows = static_cast<std::size_t>((to - from) / step + 1e-9) + 1;
    for (std::size_t i = 0; i < rows; ++i) {
      const double x = from + static_cast<double>(i) * step;
      csv.row({x, model->impl.density(x), model->impl.log_density(x)});
    }
    write_text_file(path, csv.str());
    return ST_OK;
  });
}

st_status st_subordinator_estimate(const st_model* model, const char* statistic,
                                   double t, double eps, uint64_t replicas,
                                   uint64_t seed, double* estimate, double* stderr_out,
                                   double* oracle, int* has_oracle) {
  if (!model || !statistic || !estimate || !stderr_out || !oracle || !has_oracle)
    return fail(ST_EINVAL, "null pointer");
  std::string kind;
  double lambda = 0.0;
  const st_status ps = parse_statistic(statistic, kind, lambda);
  if (ps != ST_OK) return ps;
  return guarded([&] {
    const StableModel& m = model->impl;
    Estimate est;
    if (kind == "mean") {
      est = importance_estimate(m, t, eps, replicas, seed,
                                [&](const JumpPath& p) { return p.value(t); });
      *oracle = sigma_tilde_mean(m, t);
      *has_oracle = 1;
    } else if (kind == "laplace") {
      est = importance_estimate(m, t, eps, replicas, seed, [&](const JumpPath& p) {
        return std::exp(-lambda * p.value(t));
      });
      *oracle = sigma_tilde_laplace(m, lambda, t);
      *has_oracle = 1;
    } else {  // qvar: the oracle column carries the closed-form upper bound
      est = importance_estimate(m, t, eps, replicas, seed, [&](const JumpPath& p) {
        return p.quadratic_variation(t);
      });
      *oracle = quadratic_variation_bound(m);
      *has_oracle = 1;
    }
    *estimate = est.mean;
    *stderr_out = est.se;
    return ST_OK;
  });
}

st_status st_subordinator_csv(const st_model* model, const char* statistic, double t,
                              double eps, uint64_t replicas, uint64_t seed,
                              const char* path) {
  if (!path) return fail(ST_EINVAL, "null pointer");
  double est = 0.0, se = 0.0, oracle = 0.0;
  int has = 0;
  const st_status s = st_subordinator_estimate(model, statistic, t, eps, replicas,
                                               seed, &est, &se, &oracle, &has);
  if (s != ST_OK) return s;
  return guarded([&] {
    CsvWriter csv(model->impl.alpha(), seed);
    csv.header({"estimate", "stderr", "oracle"});
    csv.row({est, se, oracle});
    write_text_file(path, csv.str());
    return ST_OK;
  });
}

st_status st_sigma_tilde_mean(const st_model* model, double t, double* out) {
  if (!model || !out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    *out = sigma_tilde_mean(model->impl, t);
    return ST_OK;
  });
}

st_status st_sigma_tilde_laplace(const st_model* model, double lambda, double t,
                                 double* out) {
  if (!model || !out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    *out = sigma_tilde_laplace(model->impl, lambda, t);
    return ST_OK;
  });
}

st_status st_tree_continuous_json(const st_model* model, uint64_t k, double horizon,
                                  double eps, uint64_t replicas, uint64_t seed,
                                  const char* path) {
  if (!model || !path) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    const auto ens =
        sample_stable_tree_ensemble(model->impl, k, horizon, eps, replicas, seed);
    write_text_file(path, ensemble_to_json(ens).dump(2) + "\n");
    return ST_OK;
  });
}

st_status st_tree_crt_json(uint64_t k, double horizon, uint64_t replicas, uint64_t seed,
                           const char* path) {
  if (!path) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    const auto ens = sample_crt_ensemble(k, horizon, replicas, seed);
    write_text_file(path, ensemble_to_json(ens).dump(2) + "\n");
    return ST_OK;
  });
}

st_status st_tree_icrt_json(double theta0, const double* thetas, size_t n_thetas,
                            uint64_t k, double horizon, uint64_t replicas,
                            uint64_t seed, const char* path) {
  if (!path || (n_thetas > 0 && !thetas)) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    const auto ens = sample_icrt_ensemble(
        theta0, std::span<const double>(thetas, n_thetas), k, horizon, replicas, seed);
    write_text_file(path, ensemble_to_json(ens).dump(2) + "\n");
    return ST_OK;
  });
}

st_status st_tree_discrete_json(double alpha, uint64_t n, uint64_t stats_k,
                                uint64_t seed, const char* path) {
  if (!path) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    const auto law = OffspringLaw::stable(alpha);
    Rng rng(seed);
    const auto cd = sample_conditioned_degrees(law, n, rng);
    const auto sb = size_biased_reorder(cd.values, rng);
    auto [tree, trace] = grow_tree(n, sb.dhat, rng);
    auto j = discrete_tree_to_json(alpha, seed, tree, trace,
                                   stats_k == 0 ? 5 : stats_k);
    if (stats_k > 0) {
      const auto st = tree_statistics(tree, trace, stats_k, stats_k, rng);
      j["stats"] = {{"height", st.height},
                    {"spanned_size", st.spanned_size},
                    {"forest_sizes", st.forest_sizes},
                    {"size_biased_component", st.size_biased_component}};
    }
    write_text_file(path, j.dump(2) + "\n");
    return ST_OK;
  });
}

st_status st_prufer_decode(const uint32_t* word, size_t len, uint32_t* parent_out,
                           uint32_t* root_out) {
  if (!word || !parent_out || !root_out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    std::vector<std::uint32_t> zero_based(len);
    for (size_t i = 0; i < len; ++i) {
      if (word[i] == 0 || word[i] > len + 1)
        throw std::invalid_argument("codeword labels must lie in [1, n]");
      zero_based[i] = word[i] - 1;
    }
    const auto tree = prufer_decode(zero_based);
    for (size_t v = 0; v < tree.size(); ++v) parent_out[v] = tree.parent[v] + 1;
    *root_out = tree.root + 1;
    return ST_OK;
  });
}

st_status st_prufer_encode(const uint32_t* parent, uint32_t root, size_t n,
                           uint32_t* word_out) {
  if (!parent || !word_out) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    RootedTree t;
    if (root == 0 || root > n) throw std::invalid_argument("root out of range");
    t.root = root - 1;
    t.parent.resize(n);
    for (size_t v = 0; v < n; ++v) {
      if (parent[v] == 0 || parent[v] > n)
        throw std::invalid_argument("parent labels must lie in [1, n]");
      t.parent[v] = parent[v] - 1;
    }
    const auto word = prufer_encode(t);
    for (size_t i = 0; i < word.size(); ++i) word_out[i] = word[i] + 1;
    return ST_OK;
  });
}

st_status st_verify(const char* suite, double alpha, uint64_t seed, double effort,
                    const char* json_path, int* all_passed) {
  if (!suite || !all_passed) return fail(ST_EINVAL, "null pointer");
  return guarded([&] {
    VerifyConfig cfg;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.effort = effort > 0.0 ? effort : 1.0;
    std::vector<SuiteReport> reports;
    if (std::strcmp(suite, "all") == 0) {
      reports = run_all_suites(cfg);
    } else {
      reports.push_back(run_suite(suite, cfg));
    }
    bool ok = true;
    std::string text;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
      ok = ok && r.all_pass();
      text += r.to_text();
      arr.push_back(r.to_json());
    }
    if (json_path)
      write_text_file(json_path,
                      (reports.size() == 1 ? reports[0].to_json() : arr).dump(2) + "\n");
    std::fputs(text.c_str(), stdout);
    *all_passed = ok ? 1 : 0;
    return ST_OK;
  });
}

st_status st_verify_suite_names(const char*** names, size_t* count) {
  if (!names || !count) return fail(ST_EINVAL, "null pointer");
  static std::vector<const char*> ptrs = [] {
    std::vector<const char*> out;
    for (const auto& n : suite_names()) out.push_back(n.c_str());
    return out;
  }();
  *names = ptrs.data();
  *count = ptrs.size();
  return ST_OK;
}

}  // extern "C"

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rng.hpp"
#include "stable_density.hpp"

namespace stabletree {

// Pure-jump increasing path on [0, horizon]: the (alpha-1)-stable
// subordinator sigma with small jumps below `truncation` discarded.
class JumpPath {
 public:
  JumpPath(double horizon, double truncation, std::vector<double> times,
           std::vector<double> sizes);

  double horizon() const { return horizon_; }
  double truncation() const { return truncation_; }
  std::size_t count() const { return times_.size(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& sizes() const { return sizes_; }

  // sigma_t = sum of jump sizes up to and including t
  double value(double t) const;
  // exact Int_0^t sigma_s ds = sum x_i (t - s_i)^+
  double integral(double t) const;
  // sum of squared jump sizes up to t
  double quadratic_variation(double t) const;

 private:
  std::size_t upper_index(double t) const;  // jumps with time <= t

  double horizon_, truncation_;
  std::vector<double> times_, sizes_;
  std::vector<double> cum_x_, cum_tx_, cum_xx_;
};

// Jumps above eps of the subordinator with Levy measure c_alpha x^{-alpha} dx,
// i.e. E[exp(-lambda sigma_t)] -> exp(-t alpha lambda^{alpha-1}) as eps -> 0.
// No drift compensation: sigma is driftless, the discarded mass is
// horizon * c_alpha eps^{2-alpha} / (2-alpha).
JumpPath sample_subordinator_path(const StableModel& model, double horizon,
                                  double eps, Rng& rng);

double expected_truncation_mass(const StableModel& model, double horizon, double eps);

// One exact draw of sigma_t: (alpha t)^{1/(alpha-1)} times a standard
// one-sided (alpha-1)-stable variate (Kanter's representation).
double exact_marginal_sample(const StableModel& model, double t, Rng& rng);

// log M_t = Int_0^t sigma + log p(-sigma_t) - log p(0); exp is the
// change-of-measure weight turning sigma into the tilted process.
double log_martingale_weight(const JumpPath& path, double t, const StableModel& model);

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t replicas = 0;
};

// (1/N) sum_j M_t^(j) F(path_j); replica j draws from stream j of `seed`.
Estimate importance_estimate(const StableModel& model, double t, double eps,
                             std::size_t replicas, std::uint64_t seed,
                             const std::function<double(const JumpPath&)>& statistic);

// quadrature of E[tilted sigma_t] = Int (1-e^{-tx}) c_alpha x^{-alpha} p(-x)/p(0) dx
double sigma_tilde_mean(const StableModel& model, double t);

// Laplace transform of the tilted marginal,
// (1/(2 pi p(0))) Int exp(G(iu-l) - G(iu-t-l) + G(iu-t)) du
double sigma_tilde_laplace(const StableModel& model, double lambda, double t);

// c_alpha Int x^{1-alpha} p(-x)/p(0) dx: upper bound for the expected
// total quadratic variation of the tilted process
double quadratic_variation_bound(const StableModel& model);

}  // namespace stabletree

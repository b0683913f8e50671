#include "levy_paths.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace stabletree {

namespace {
constexpr double kPi = std::numbers::pi;
}

JumpPath::JumpPath(double horizon, double truncation, std::vector<double> times,
                   std::vector<double> sizes)
    : horizon_(horizon),
      truncation_(truncation),
      times_(std::move(times)),
      sizes_(std::move(sizes)) {
  if (horizon_ <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (times_.size() != sizes_.size())
    throw std::invalid_argument("times/sizes length mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] > prev) || times_[i] > horizon_)
      throw std::invalid_argument("jump times must be strictly increasing in (0, horizon]");
    if (!(sizes_[i] > 0.0)) throw std::invalid_argument("jump sizes must be positive");
    prev = times_[i];
  }
  cum_x_.resize(times_.size());
  cum_tx_.resize(times_.size());
  cum_xx_.resize(times_.size());
  double x = 0.0, tx = 0.0, xx = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    x += sizes_[i];
    tx += sizes_[i] * times_[i];
    xx += sizes_[i] * sizes_[i];
    cum_x_[i] = x;
    cum_tx_[i] = tx;
    cum_xx_[i] = xx;
  }
}

std::size_t JumpPath::upper_index(double t) const {
  return std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
}

double JumpPath::value(double t) const {
  if (t < 0.0) throw std::out_of_range("negative time");
  const std::size_t k = upper_index(t);
  return k == 0 ? 0.0 : cum_x_[k - 1];
}

double JumpPath::integral(double t) const {
  if (t < 0.0 || t > horizon_ * (1.0 + 1e-12))
    throw std::out_of_range("integral time outside [0, horizon]");
  const std::size_t k = upper_index(t);
  return k == 0 ? 0.0 : t * cum_x_[k - 1] - cum_tx_[k - 1];
}

double JumpPath::quadratic_variation(double t) const {
  if (t < 0.0 || t > horizon_ * (1.0 + 1e-12))
    throw std::out_of_range("time outside [0, horizon]");
  const std::size_t k = upper_index(t);
  return k == 0 ? 0.0 : cum_xx_[k - 1];
}

JumpPath sample_subordinator_path(const StableModel& model, double horizon,
                                  double eps, Rng& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double alpha = model.alpha();
  // Poisson rate of jumps above eps: c_alpha Int_eps^inf x^{-alpha} dx
  const double rate = model.c_alpha() * std::pow(eps, 1.0 - alpha) / (alpha - 1.0);
  const double inv_exp = 1.0 / (alpha - 1.0);

  std::vector<double> times, sizes;
  times.reserve(static_cast<std::size_t>(rate * horizon * 1.2) + 8);
  sizes.reserve(times.capacity());
  double t = rng.exponential() / rate;
  while (t <= horizon) {
    times.push_back(t);
    sizes.push_back(eps * std::pow(rng.uniform(), -inv_exp));
    t += rng.exponential() / rate;
  }
  return JumpPath(horizon, eps, std::move(times), std::move(sizes));
}

double expected_truncation_mass(const StableModel& model, double horizon, double eps) {
  const double alpha = model.alpha();
  return horizon * model.c_alpha() * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
}

double exact_marginal_sample(const StableModel& model, double t, Rng& rng) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double beta = model.alpha() - 1.0;  // index of the subordinator
  // Kanter: S = B(theta)^{1/beta} E^{-(1-beta)/beta}, theta ~ U(0,pi),
  // with B(u) = sin(beta u)^beta sin((1-beta)u)^{1-beta} / sin(u),
  // gives E[exp(-lambda S)] = exp(-lambda^beta).
  const double u = kPi * rng.uniform();
  const double e = rng.exponential();
  const double logB = beta * std::log(std::sin(beta * u)) +
                      (1.0 - beta) * std::log(std::sin((1.0 - beta) * u)) -
                      std::log(std::sin(u));
  const double s = std::exp(logB / beta - (1.0 - beta) / beta * std::log(e));
  return std::pow(model.alpha() * t, 1.0 / beta) * s;
}

double log_martingale_weight(const JumpPath& path, double t, const StableModel& model) {
  return path.integral(t) + model.log_density(-path.value(t)) -
         std::log(model.p_zero());
}

Estimate importance_estimate(const StableModel& model, double t, double eps,
                             std::size_t replicas, std::uint64_t seed,
                             const std::function<double(const JumpPath&)>& statistic) {
  if (replicas < 2) throw std::invalid_argument("need at least two replicas");
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(seed, j);
    const JumpPath path = sample_subordinator_path(model, t, eps, rng);
    const double y = std::exp(log_martingale_weight(path, t, model)) * statistic(path);
    sum += y;
    sumsq += y * y;
  }
  const double n = static_cast<double>(replicas);
  const double mean = sum / n;
  const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), replicas};
}

double sigma_tilde_mean(const StableModel& model, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  const double alpha = model.alpha();
  const double lp0 = std::log(model.p_zero());
  auto tilted = [&](double x) { return std::exp(model.log_density(-x) - lp0); };
  // Write the integrand as [(1-e^{-tx})/x] * x^{1-alpha} * p(-x)/p(0) and
  // substitute r = x^{2-alpha}, which flattens x^{1-alpha} dx into dr/(2-alpha).
  const double pw = 1.0 / (2.0 - alpha);
  auto inner = [&](double r) {
    if (r <= 0.0) return t * pw;
    const double x = std::pow(r, pw);
    return -std::expm1(-t * x) / x * tilted(x) * pw;
  };
  const double x_cut = model.left_cut() + 4.0 / t + 2.0;
  const double r_hi = std::pow(std::min(1.0, x_cut), 2.0 - alpha);
  const double head =
      model.c_alpha() * quad::adaptive_simpson(inner, 0.0, r_hi, 1e-9);
  double tail = 0.0;
  if (x_cut > 1.0) {
    auto via_x = [&](double x) {
      return -std::expm1(-t * x) * std::pow(x, -alpha) * tilted(x);
    };
    tail = model.c_alpha() * quad::adaptive_simpson(via_x, 1.0, x_cut, 1e-9);
  }
  return head + tail;
}

double sigma_tilde_laplace(const StableModel& model, double lambda, double t) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (lambda == 0.0) return 1.0;

  const double alpha = model.alpha();
  const double cos_term = -std::cos(alpha * kPi / 2.0);
  auto log_integrand = [&](double u) {
    const std::complex<double> iu(0.0, u);
    return model.exponent_G(iu - lambda) - model.exponent_G(iu - t - lambda) +
           model.exponent_G(iu - t);
  };
  // the exponent behaves like G(iu) for large |u|; same truncation as density
  const double L = model.config().log_cut;
  double u_max = std::pow(L / cos_term, 1.0 / alpha) + t + lambda;
  while (log_integrand(u_max).real() > -L) u_max *= 1.5;

  auto f = [&](double u) { return std::exp(log_integrand(u)).real(); };
  auto step = [&](double u) {
    const double du = 1e-4 * (1.0 + u);
    const double rate =
        std::abs(log_integrand(u + du) - log_integrand(u)) / du + 2.0 * kPi / u_max;
    return 2.0 * kPi / (model.config().nodes_per_cycle * rate);
  };
  const double integral = quad::panels(f, 0.0, u_max, step, 16);
  return integral / (kPi * model.p_zero());
}

double quadratic_variation_bound(const StableModel& model) {
  const double alpha = model.alpha();
  const double lp0 = std::log(model.p_zero());
  auto weighted = [&](double x) { return std::exp(model.log_density(-x) - lp0); };
  // x^{1-alpha} near zero: substitute x = r^{1/(2-alpha)} as in the mean
  const double pw = 1.0 / (2.0 - alpha);
  auto inner = [&](double r) { return weighted(std::pow(r, pw)) * pw; };
  const double head = model.c_alpha() * quad::adaptive_simpson(inner, 0.0, 1.0, 1e-9);
  auto via_x = [&](double x) { return weighted(x) * std::pow(x, 1.0 - alpha); };
  const double tail =
      model.c_alpha() * quad::adaptive_simpson(via_x, 1.0, model.left_cut() + 2.0, 1e-9);
  return head + tail;
}

}  // namespace stabletree

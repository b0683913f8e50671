#include "stable_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quadrature.hpp"

namespace stabletree {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double v) { return v * v; }

}  // namespace

StableModel::StableModel(double alpha, QuadratureConfig cfg)
    : alpha_(alpha), cfg_(cfg) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("alpha must lie in the open interval (1,2)");

  // the two closed forms for the Levy constant must coincide
  const double via_gamma2 = alpha * (alpha - 1.0) / std::tgamma(2.0 - alpha);
  const double via_recip = 1.0 / std::tgamma(-alpha);
  if (std::fabs(via_gamma2 - via_recip) > 1e-12 * std::fabs(via_gamma2))
    throw std::logic_error("Levy constant cross-check failed");
  c_alpha_ = via_gamma2;

  p_zero_ = 1.0 / (alpha * std::tgamma(1.0 - 1.0 / alpha));
  cos_term_ = -std::cos(alpha * kPi / 2.0);
  sin_term_ = std::sin(alpha * kPi / 2.0);

  const double q = alpha / (alpha - 1.0);
  tail_c2_ = (alpha - 1.0) * std::pow(alpha, -q);
  tail_beta_ = (2.0 - alpha) / (2.0 * alpha - 2.0);
  tail_c1_ = std::pow(alpha, -tail_beta_) / std::sqrt(2.0 * kPi * alpha * (alpha - 1.0));

  // direct Fourier route handles the left side while the saddle sits below 0.05
  saddle_min_x_ = alpha * std::pow(0.05, alpha - 1.0);

  const double p0 = density(0.0);
  if (std::fabs(p0 - p_zero_) > 1e-7 * p_zero_)
    throw QuadratureError("density(0) does not reproduce 1/(alpha Gamma(1-1/alpha))",
                          std::fabs(p0 - p_zero_));
}

std::complex<double> StableModel::exponent_G(std::complex<double> z) const {
  if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
  if (z.real() > 1e-12 * (1.0 + std::abs(z)))
    throw std::domain_error("exponent_G requires Re(z) <= 0");
  return std::exp(alpha_ * std::log(-z));
}

double StableModel::saddle_point(double x) const {
  return x <= 0.0 ? 0.0 : std::pow(x / alpha_, 1.0 / (alpha_ - 1.0));
}

namespace {

std::complex<double> log1p_c(std::complex<double> z) {
  if (std::abs(z) < 1e-4) {
    // |z|^5 < 1e-20: series is exact to double precision
    return z * (1.0 + z * (-0.5 + z * (1.0 / 3.0 + z * -0.25)));
  }
  return std::log(1.0 + z);
}

std::complex<double> expm1_c(std::complex<double> z) {
  if (std::abs(z) < 1e-4) {
    return z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
  }
  return std::exp(z) - 1.0;
}

// (1+z)^a - 1 - a z without cancellation: binomial series for small |z|
std::complex<double> pow1p_m1_linear(double a, std::complex<double> z) {
  if (std::abs(z) <= 0.5) {
    std::complex<double> term(a * (a - 1.0) / 2.0, 0.0);
    std::complex<double> acc = term * z * z;
    std::complex<double> zk = z * z;
    for (int k = 2; k < 128; ++k) {
      term *= (a - static_cast<double>(k)) / static_cast<double>(k + 1);
      zk *= z;
      const std::complex<double> add = term * zk;
      acc += add;
      if (std::abs(add) < 1e-18 * (std::abs(acc) + 1e-300)) break;
    }
    return acc;
  }
  return std::exp(a * std::log(1.0 + z)) - 1.0 - a * z;
}

// Composite GL12 with a locally adapted panel width, evaluated twice (full
// and halved steps); the difference is the convergence estimate.
template <class F, class Step>
double integrate_with_check(F&& f, double a, double b, Step&& step, bool checked,
                            double rel_tol, const char* what) {
  const double coarse = quad::panels(f, a, b, step, 8);
  if (!checked) return coarse;
  const double fine =
      quad::panels(f, a, b, [&](double s) { return 0.5 * step(s); }, 16);
  const double err = std::fabs(fine - coarse);
  if (err > rel_tol * std::max(std::fabs(fine), 1e-300) + 1e-15)
    throw QuadratureError(std::string(what) + ": refinement did not converge", err);
  return fine;
}

}  // namespace

// log p(-x) for x >= 0 on the contour lambda = s + i w*.  The integrand
//   exp(i s x + (w* - i s)^alpha - w*^alpha)
// has modulus 1 at s = 0, decreasing in s, so no cancellation is left and the
// result keeps full relative precision however deep the tail.
double StableModel::log_density_left(double x, bool checked) const {
  const double w = saddle_point(x);
  if (w < 0.05) return std::log(density_direct(-x, checked));

  const std::complex<double> I(0.0, 1.0);
  const double w_pow = std::pow(w, alpha_);
  const double peak_log = w_pow - w * x;  // = -(alpha-1) w^alpha

  // (w - is)^alpha - w^alpha evaluated as w^alpha expm1(alpha log1p(-is/w)),
  // which stays accurate when w^alpha is astronomically large
  auto log_integrand = [&](double s) {
    return I * (s * x) + w_pow * expm1_c(alpha_ * log1p_c(I * (-s / w)));
  };
  auto f = [&](double s) { return std::exp(log_integrand(s)).real(); };

  // modulus is monotone decreasing in s: bisect for the truncation point.
  // Seed the bracket from the Gaussian width around the peak; the crude
  // c|s|^alpha bound can overshoot by dozens of orders of magnitude when w
  // is huge, and an unconverged endpoint makes the panel count explode.
  const double L = cfg_.log_cut;
  const double sigma = 1.0 / std::sqrt(alpha_ * (alpha_ - 1.0) * std::pow(w, alpha_ - 2.0));
  auto mod_log = [&](double s) { return log_integrand(s).real(); };
  const double hard_cap = w + std::pow((L + w_pow) / cos_term_, 1.0 / alpha_) + 1.0;
  double hi = std::min(hard_cap, sigma * (std::sqrt(2.0 * L) + 8.0));
  while (mod_log(hi) > -L && hi < hard_cap) hi = std::min(hard_cap, 2.0 * hi);
  double lo = 0.0;
  for (int it = 0; it < 300 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mod_log(mid) > -L ? lo : hi) = mid;
  }
  const double s_max = hi;
  auto step = [&](double s) {
    // g'(s) = i x (1 - (1 - is/w)^{alpha-1}) since alpha w^{alpha-1} = x
    const std::complex<double> gprime =
        -I * x * expm1_c((alpha_ - 1.0) * log1p_c(I * (-s / w)));
    const double by_deriv = 1.5 / (std::abs(gprime) + 1.0 / s_max);
    const double by_sing = 0.6 * std::sqrt(sq(s) + sq(w)) + 0.02 * s_max;
    const double by_curv = 1.3 * sigma + 0.4 * s;
    return std::min({by_deriv, by_sing, by_curv});
  };

  const double integral =
      integrate_with_check(f, 0.0, s_max, step, checked, cfg_.rel_tol, "log_density_left");
  if (!(integral > 0.0))
    throw QuadratureError("log_density_left: non-positive integral", integral);
  return peak_log + std::log(integral / kPi);
}

// p(y) by Fourier inversion, integrated in v with u = v^2 to soften the
// u^alpha kink at the origin:
//   p(y) = (2/pi) Int_0^inf exp(-c v^{2a}) cos(y v^2 + s v^{2a}) v dv
double StableModel::density_direct(double y, bool checked) const {
  const double two_a = 2.0 * alpha_;
  const double v_max = std::pow(cfg_.log_cut / cos_term_, 1.0 / two_a);

  auto f = [&](double v) {
    const double va = std::pow(v, two_a);
    return std::exp(-cos_term_ * va) * std::cos(y * v * v + sin_term_ * va) * 2.0 * v / kPi;
  };
  auto step = [&](double v) {
    const double phase_rate =
        2.0 * std::fabs(y) * v + two_a * sin_term_ * std::pow(v, two_a - 1.0) +
        two_a * cos_term_ * std::pow(v, two_a - 1.0);
    const double by_osc =
        2.0 * kPi / (cfg_.nodes_per_cycle * (phase_rate + 2.0 * kPi / v_max));
    return std::min(by_osc, 0.6 * v + 0.02 * v_max);
  };
  return integrate_with_check(f, 0.0, v_max, step, checked, cfg_.rel_tol, "density_direct");
}

double StableModel::density(double x) const {
  if (x < 0.0) return std::exp(log_density_left(-x, true));
  return density_direct(x, true);
}

double StableModel::log_density(double x) const {
  if (x <= 0.0) return log_density_left(-x, false);
  const double p = density_direct(x, false);
  if (p > 0.0) return std::log(p);
  // cancellation floor on the heavy side; fall back to the regularly varying tail
  return std::log(c_alpha_) - (alpha_ + 1.0) * std::log(x);
}

double StableModel::density_ratio(double y, double x) const {
  if (x < 0.0 || y < 0.0) throw std::domain_error("density_ratio requires x,y >= 0");
  return std::exp(log_density_left(x + y, false) - log_density_left(x, false));
}

double StableModel::density_oracle(double x) const {
  // raw-variable adaptive Simpson; deliberately a separate code path
  const double u_max = std::pow((cfg_.log_cut + 5.0) / cos_term_, 1.0 / alpha_);
  auto f = [&](double u) {
    const double ua = std::pow(u, alpha_);
    return std::exp(-cos_term_ * ua) * std::cos(u * x + sin_term_ * ua) / kPi;
  };
  return quad::adaptive_simpson(f, 0.0, u_max, 1e-12);
}

double StableModel::cdf_interval(double a, double b) const {
  if (!(b > a)) return 0.0;
  const double two_a = 2.0 * alpha_;
  const double v_max = std::pow(cfg_.log_cut / cos_term_, 1.0 / two_a);
  const double big = std::max(std::fabs(a), std::fabs(b));

  auto f = [&](double v) {
    const double va = std::pow(v, two_a);
    const double chirp = sin_term_ * va;
    const double num = std::sin(b * v * v + chirp) - std::sin(a * v * v + chirp);
    return std::exp(-cos_term_ * va) * num * 2.0 / (v * kPi);
  };
  auto step = [&](double v) {
    const double phase_rate = 2.0 * big * v + two_a * sin_term_ * std::pow(v, two_a - 1.0) +
                              two_a * cos_term_ * std::pow(v, two_a - 1.0);
    const double by_osc =
        2.0 * kPi / (cfg_.nodes_per_cycle * (phase_rate + 2.0 * kPi / v_max));
    return std::min(by_osc, 0.6 * v + 0.01 * v_max);
  };
  return integrate_with_check(f, 0.0, v_max, step, true, cfg_.rel_tol, "cdf_interval");
}

double StableModel::left_cut() const {
  return std::pow((cfg_.log_cut + 12.0) / tail_c2_, (alpha_ - 1.0) / alpha_);
}

double StableModel::total_mass() const {
  const double a = -left_cut();
  const double b = 1000.0;
  // P(L_1 > b) ~ c_alpha b^{-alpha} / alpha: the jump tail dominates
  return cdf_interval(a, b) + c_alpha_ * std::pow(b, -alpha_) / alpha_;
}

}  // namespace stabletree

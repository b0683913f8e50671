#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace stabletree {

struct QuadratureConfig {
  double log_cut = 45.0;      // integrand envelopes truncated at exp(-log_cut)
  int nodes_per_cycle = 8;    // sampling density against local oscillation
  double x_switch = 8.0;      // direct-quadrature cap on the heavy (right) side
  double rel_tol = 1e-9;      // step-halving agreement required by checked evals
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved(achieved_error) {}
  double achieved;
};

// Spectrally positive alpha-stable law, alpha in (1,2), normalised so that
// the Levy measure is c_alpha x^{-alpha-1} dx with c_alpha = 1/Gamma(-alpha),
// equivalently E[exp(z L_t)] = exp(t (-z)^alpha) for Re z <= 0.
//
// density() evaluates the law of L_1. The light left tail is computed on a
// contour shifted through the real saddle w* = (x/alpha)^(1/(alpha-1)), which
// keeps the integrand's peak at the scale of the answer, so log_density stays
// relatively accurate arbitrarily deep into the tail. The heavy right side
// uses direct Fourier inversion.
class StableModel {
 public:
  explicit StableModel(double alpha, QuadratureConfig cfg = {});

  double alpha() const { return alpha_; }
  double c_alpha() const { return c_alpha_; }
  double p_zero() const { return p_zero_; }
  const QuadratureConfig& config() const { return cfg_; }

  // (-z)^alpha with the principal branch; requires Re z <= 0.
  std::complex<double> exponent_G(std::complex<double> z) const;

  double density(double x) const;
  double log_density(double x) const;

  // p(-x-y)/p(-x) for x,y >= 0, evaluated in log space.
  double density_ratio(double y, double x) const;

  // Independently coded slow evaluator (adaptive Simpson in the raw Fourier
  // variable); anti-regression oracle for the main routes, |x| <= ~5.
  double density_oracle(double x) const;

  // integral of the density over [a,b] through one Fourier-side quadrature
  double cdf_interval(double a, double b) const;

  // integral over all of R: Fourier quadrature on a finite window plus the
  // analytic regularly-varying right-tail correction
  double total_mass() const;

  // left-tail asymptotics log p(-x) ~ log c1 + beta log x - c2 x^{alpha/(alpha-1)}
  double tail_exponent_c2() const { return tail_c2_; }
  double tail_power_beta() const { return tail_beta_; }
  double tail_prefactor_c1() const { return tail_c1_; }

  // x such that log p(-x) has decayed past the truncation threshold
  double left_cut() const;

 private:
  double log_density_left(double x, bool checked) const;   // log p(-x), x >= 0
  double density_direct(double y, bool checked) const;     // Fourier route
  double saddle_point(double x) const;                      // w*(x)

  double alpha_;
  double c_alpha_;
  double p_zero_;
  double cos_term_;   // -cos(alpha pi / 2) > 0
  double sin_term_;   // sin(alpha pi / 2) > 0
  double tail_c2_, tail_beta_, tail_c1_;
  double saddle_min_x_;  // below: direct route serves the left side too
  QuadratureConfig cfg_;
};

}  // namespace stabletree

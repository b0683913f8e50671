#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "core/quadrature.hpp"
#include "core/stable_density.hpp"

using namespace stabletree;

TEST_CASE("model constants") {
  StableModel m(1.5);
  CHECK(m.alpha() == 1.5);
  // 1/Gamma(-3/2) = 3/(4 sqrt(pi)) is also alpha(alpha-1)/Gamma(2-alpha)
  CHECK(m.c_alpha() == doctest::Approx(0.75 / std::tgamma(0.5)).epsilon(1e-13));
  CHECK(m.p_zero() == doctest::Approx(1.0 / (1.5 * std::tgamma(1.0 / 3.0))).epsilon(1e-14));
  CHECK_THROWS_AS(StableModel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(StableModel(2.0), std::invalid_argument);
  CHECK_THROWS_AS(StableModel(0.5), std::invalid_argument);
}

TEST_CASE("exponent G closed form") {
  StableModel m(1.5);
  CHECK(std::abs(m.exponent_G({0.0, 0.0})) == 0.0);
  CHECK(m.exponent_G({-1.0, 0.0}).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.exponent_G({-1.0, 0.0}).imag() == doctest::Approx(0.0));

  // G(i) = (-i)^{3/2} = exp(-i 3 pi / 4)
  const auto gi = m.exponent_G({0.0, 1.0});
  CHECK(gi.real() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
  CHECK(gi.imag() == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));

  // and the same value from numerical quadrature of the defining integral
  // Int_0^inf (e^{zx} - 1 - zx) c_alpha x^{-alpha-1} dx at z = i
  const double c = m.c_alpha();
  auto re_part = [&](double x) {
    return (std::cos(x) - 1.0) * c * std::pow(x, -2.5);
  };
  auto im_part = [&](double x) {
    return (std::sin(x) - x) * c * std::pow(x, -2.5);
  };
  const double X = 400.0;
  double re = quad::adaptive_simpson(re_part, 1e-8, X, 1e-10);
  double im = quad::adaptive_simpson(im_part, 1e-8, X, 1e-10);
  // analytic remainder of the non-oscillatory pieces beyond X
  re += -c * (2.0 / 3.0) * std::pow(X, -1.5);
  im += -c * 2.0 * std::pow(X, -0.5);
  CHECK(re == doctest::Approx(gi.real()).epsilon(5e-3));
  CHECK(im == doctest::Approx(gi.imag()).epsilon(5e-3));

  CHECK_THROWS_AS(m.exponent_G({0.5, 0.0}), std::domain_error);
}

TEST_CASE("density at zero matches 1/(alpha Gamma(1-1/alpha))") {
  for (double a : {1.2, 1.5, 1.8}) {
    StableModel m(a);
    CHECK(m.density(0.0) == doctest::Approx(m.p_zero()).epsilon(1e-8));
  }
  StableModel m(1.5);
  CHECK(m.density(0.0) == doctest::Approx(0.2488547).epsilon(1e-6));
}

TEST_CASE("density agrees with the independent oracle on [-5,5]") {
  for (double a : {1.2, 1.5, 1.8}) {
    StableModel m(a);
    for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.5) {
      const double fast = m.density(x);
      const double slow = m.density_oracle(x);
      CHECK(std::fabs(fast - slow) < 1e-6);
    }
  }
}

TEST_CASE("saddle and direct routes agree across the seam") {
  for (double a : {1.2, 1.5, 1.8}) {
    StableModel m(a);
    for (double x = 0.1; x < 4.0; x += 0.3) {
      const double via_log = std::exp(m.log_density(-x));
      const double via_oracle = m.density_oracle(-x);
      CHECK(via_log == doctest::Approx(via_oracle).epsilon(1e-7));
    }
  }
}

TEST_CASE("deep left tail follows the saddle asymptote") {
  StableModel m(1.5);
  const double q = 1.5 / 0.5;  // alpha/(alpha-1) = 3
  // log p(-x) ~ log c1 + beta log x - c2 x^3
  for (double x : {20.0, 50.0, 200.0}) {
    const double lp = m.log_density(-x);
    const double asym = std::log(m.tail_prefactor_c1()) +
                        m.tail_power_beta() * std::log(x) -
                        m.tail_exponent_c2() * std::pow(x, q);
    CHECK(lp == doctest::Approx(asym).epsilon(1e-3));
  }
}

TEST_CASE("left tail log-density is linear in x^{alpha/(alpha-1)}") {
  StableModel m(1.5);
  // regression of log p(-x) on x^3 over [3,6]
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (double x = 3.0; x <= 6.0 + 1e-9; x += 0.25) {
    const double t = x * x * x;
    const double y = m.log_density(-x);
    sx += t; sy += y; sxx += t * t; sxy += t * y; syy += y * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double r_num = n * sxy - sx * sy;
  const double r2 = r_num * r_num / ((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(slope < 0.0);
  CHECK(r2 > 0.999);
  CHECK(slope == doctest::Approx(-m.tail_exponent_c2()).epsilon(0.05));
}

TEST_CASE("characteristic function modulus bound |e^{G(i lambda)}| <= 1") {
  StableModel m(1.5);
  for (double l = -30.0; l <= 30.0; l += 0.7) {
    CHECK(std::abs(std::exp(m.exponent_G({0.0, l}))) <= 1.0 + 1e-12);
  }
}

TEST_CASE("density integrates to one") {
  for (double a : {1.2, 1.5, 1.8}) {
    StableModel m(a);
    CHECK(std::fabs(m.total_mass() - 1.0) < 1e-6);
  }
}

TEST_CASE("cdf_interval matches direct integration of the density") {
  StableModel m(1.5);
  auto f = [&](double x) { return m.density(x); };
  const double direct = quad::adaptive_simpson(f, -2.0, 3.0, 1e-10);
  CHECK(m.cdf_interval(-2.0, 3.0) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("density_ratio basics") {
  StableModel m(1.5);
  CHECK(m.density_ratio(0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.density_ratio(1.0, 0.0) ==
        doctest::Approx(m.density(-1.0) / m.density(0.0)).epsilon(1e-8));
  CHECK_THROWS_AS(m.density_ratio(-1.0, 0.0), std::domain_error);

  // finite sup over the grid; non-increasing in y once past the mode
  // (the density peaks left of zero, so monotonicity genuinely starts there)
  double sup = 0.0;
  for (double x = 0.0; x <= 10.0; x += 1.0) {
    double prev = std::numeric_limits<double>::infinity();
    for (double y = 0.0; y <= 10.0; y += 1.0) {
      const double r = m.density_ratio(y, x);
      CHECK(std::isfinite(r));
      if (x + y >= 2.0) CHECK(r <= prev * (1.0 + 1e-9));
      prev = r;
      sup = std::max(sup, r);
    }
  }
  CHECK(std::isfinite(sup));
}

TEST_CASE("right tail is regularly varying with the Levy constant") {
  StableModel m(1.5);
  // p(y) ~ c_alpha y^{-alpha-1}
  for (double y : {40.0, 80.0}) {
    const double expect = m.c_alpha() * std::pow(y, -2.5);
    CHECK(m.density(y) == doctest::Approx(expect).epsilon(0.08));
  }
}

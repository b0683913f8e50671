#include "offspring.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace stabletree {

OffspringLaw OffspringLaw::stable(double alpha, std::size_t table_cap) {
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("alpha must lie in (1,2)");
  if (table_cap < 4) throw std::invalid_argument("table too small");
  OffspringLaw law;
  law.alpha_ = alpha;
  law.pmf_.assign(table_cap + 1, 0.0);
  law.pmf_[0] = 1.0 / alpha;
  law.pmf_[1] = 0.0;
  // p_k = (-1)^k binom(alpha,k)/alpha for k >= 2, via the stable recurrence
  double p = (alpha - 1.0) / 2.0;
  law.pmf_[2] = p;
  for (std::size_t k = 2; k < table_cap; ++k) {
    p *= (static_cast<double>(k) - alpha) / static_cast<double>(k + 1);
    law.pmf_[k + 1] = p;
  }
  // exact tail: t_m = t_{m-1} (m-alpha)/m from t_1 = 1 - 1/alpha
  double t = 1.0 - 1.0 / alpha;
  for (std::size_t m = 2; m <= table_cap; ++m)
    t *= (static_cast<double>(m) - alpha) / static_cast<double>(m);
  law.tail_cap_ = t;
  // sum_{j>=m} t_j = m t_m/(alpha-1), and k p_k = alpha t_{k-1}, so
  // P(xi* > m) = alpha m t_m / (alpha - 1)
  law.tail_cap_sb_ =
      alpha * static_cast<double>(table_cap) * t / (alpha - 1.0);
  law.build_tables();
  return law;
}

OffspringLaw OffspringLaw::from_pmf(std::vector<double> pmf) {
  OffspringLaw law;
  double total = 0.0, mean = 0.0;
  std::uint64_t g = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (pmf[k] < 0.0) throw std::invalid_argument("negative pmf entry");
    total += pmf[k];
    mean += static_cast<double>(k) * pmf[k];
    if (pmf[k] > 0.0 && k > 0) g = std::gcd(g, static_cast<std::uint64_t>(k));
  }
  if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("pmf must sum to 1");
  if (std::fabs(mean - 1.0) > 1e-12) throw std::invalid_argument("offspring mean must be 1");
  if (g != 1) throw std::invalid_argument("support gcd must be 1");
  if (pmf.size() > 1 && std::fabs(pmf[1] - 1.0) < 1e-12)
    throw std::invalid_argument("degenerate law concentrated at 1");
  law.pmf_ = std::move(pmf);
  law.build_tables();
  return law;
}

OffspringLaw OffspringLaw::uniform012() {
  return from_pmf({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
}

void OffspringLaw::build_tables() {
  std::vector<double> w(pmf_);
  w.push_back(tail_cap_);  // last slot = beyond-table bucket
  body_ = build_alias(w);
  std::vector<double> wsb(pmf_.size());
  for (std::size_t k = 0; k < pmf_.size(); ++k)
    wsb[k] = static_cast<double>(k) * pmf_[k];
  wsb.push_back(tail_cap_sb_);
  body_sb_ = build_alias(wsb);
}

OffspringLaw::Alias OffspringLaw::build_alias(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  Alias a;
  a.prob.assign(n, 0.0);
  a.other.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    a.prob[s] = scaled[s];
    a.other[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) a.prob[i] = 1.0;
  for (std::uint32_t i : small) a.prob[i] = 1.0;
  return a;
}

std::uint64_t OffspringLaw::Alias::pick(Rng& rng) const {
  const std::uint64_t i = rng.below(prob.size());
  return rng.uniform() < prob[i] ? i : other[i];
}

double OffspringLaw::pmf(std::uint64_t k) const {
  if (k < pmf_.size()) return pmf_[k];
  if (alpha_ == 0.0) return 0.0;
  // p_k = alpha t_{k-1} / k with t from the Gamma-ratio form
  return alpha_ * tail(k - 1) / static_cast<double>(k);
}

double OffspringLaw::tail(std::uint64_t k) const {
  const std::size_t cap = pmf_.size() - 1;
  if (k >= cap) {
    if (alpha_ == 0.0) return 0.0;
    // t_k / t_cap = Gamma(k+1-a)Gamma(cap+1) / (Gamma(cap+1-a)Gamma(k+1))
    const double lr = std::lgamma(static_cast<double>(k) + 1.0 - alpha_) -
                      std::lgamma(static_cast<double>(cap) + 1.0 - alpha_) +
                      std::lgamma(static_cast<double>(cap) + 1.0) -
                      std::lgamma(static_cast<double>(k) + 1.0);
    return tail_cap_ * std::exp(lr);
  }
  double acc = tail_cap_;
  for (std::size_t m = cap; m > k; --m) acc += pmf_[m];
  return acc;
}

std::uint64_t OffspringLaw::max_support() const {
  if (alpha_ > 0.0) throw std::logic_error("heavy-tailed law has unbounded support");
  for (std::size_t k = pmf_.size(); k-- > 0;)
    if (pmf_[k] > 0.0) return k;
  return 0;
}

double OffspringLaw::a_n(std::size_t n) const {
  if (alpha_ == 0.0)
    throw std::logic_error("a_n is defined for the built-in alpha family");
  return std::pow(static_cast<double>(n) / alpha_, 1.0 / alpha_);
}

std::uint64_t OffspringLaw::invert_tail(double v) const {
  // smallest m > cap with P(xi > m)/P(xi > cap) < v
  const std::size_t cap = pmf_.size() - 1;
  auto ratio = [&](std::uint64_t m) {
    return std::exp(std::lgamma(static_cast<double>(m) + 1.0 - alpha_) -
                    std::lgamma(static_cast<double>(cap) + 1.0 - alpha_) +
                    std::lgamma(static_cast<double>(cap) + 1.0) -
                    std::lgamma(static_cast<double>(m) + 1.0));
  };
  std::uint64_t lo = cap, hi = cap * 2;  // ratio(lo) >= v > ratio(hi) wanted
  while (ratio(hi) >= v) {
    lo = hi;
    hi *= 2;
    if (hi > (1ull << 62)) break;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ratio(mid) >= v ? lo : hi) = mid;
  }
  return hi;
}

std::uint64_t OffspringLaw::invert_tail_size_biased(double v) const {
  // P(xi* > m)/P(xi* > cap) = (m t_m)/(cap t_cap)
  const std::size_t cap = pmf_.size() - 1;
  auto ratio = [&](std::uint64_t m) {
    return std::exp(std::log(static_cast<double>(m) / static_cast<double>(cap)) +
                    std::lgamma(static_cast<double>(m) + 1.0 - alpha_) -
                    std::lgamma(static_cast<double>(cap) + 1.0 - alpha_) +
                    std::lgamma(static_cast<double>(cap) + 1.0) -
                    std::lgamma(static_cast<double>(m) + 1.0));
  };
  std::uint64_t lo = cap, hi = cap * 2;
  while (ratio(hi) >= v) {
    lo = hi;
    hi *= 2;
    if (hi > (1ull << 62)) break;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ratio(mid) >= v ? lo : hi) = mid;
  }
  return hi;
}

std::uint64_t OffspringLaw::sample(Rng& rng) const {
  const std::uint64_t k = body_.pick(rng);
  if (k < pmf_.size()) return k;
  return invert_tail(rng.uniform());
}

std::uint64_t OffspringLaw::sample_size_biased(Rng& rng) const {
  const std::uint64_t k = body_sb_.pick(rng);
  if (k < pmf_.size()) return k;
  return invert_tail_size_biased(rng.uniform());
}

std::vector<double> OffspringLaw::size_biased_pmf(std::size_t cap) const {
  std::vector<double> out(cap + 1, 0.0);
  for (std::size_t k = 0; k <= cap; ++k)
    out[k] = static_cast<double>(k) * pmf(k);
  return out;
}

namespace {

std::vector<double> convolve_truncated(const std::vector<double>& a,
                                       const std::vector<double>& b,
                                       std::size_t cap) {
  std::vector<double> out(cap + 1, 0.0);
  for (std::size_t i = 0; i < a.size() && i <= cap; ++i) {
    if (a[i] == 0.0) continue;
    const std::size_t jmax = std::min(b.size() - 1, cap - i);
    for (std::size_t j = 0; j <= jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> power_by_doubling(std::vector<double> base, std::size_t j,
                                      std::size_t cap) {
  std::vector<double> result{1.0};
  while (j > 0) {
    if (j & 1) result = convolve_truncated(result, base, cap);
    j >>= 1;
    if (j > 0) base = convolve_truncated(base, base, cap);
  }
  result.resize(cap + 1, 0.0);
  return result;
}

std::vector<double> power_by_fft(const std::vector<double>& base, std::size_t j,
                                 std::size_t cap) {
  std::size_t m = 1;
  while (m < 2 * (cap + 1)) m <<= 1;
  std::vector<double> in(m, 0.0);
  for (std::size_t i = 0; i < base.size() && i < m; ++i) in[i] = base[i];

  const std::size_t spec = m / 2 + 1;
  std::vector<std::complex<double>> freq(spec);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(
      static_cast<int>(m), in.data(), reinterpret_cast<fftw_complex*>(freq.data()),
      FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);

  for (auto& c : freq) {
    const double r = std::abs(c);
    if (r == 0.0) {
      c = 0.0;
      continue;
    }
    const double lr = static_cast<double>(j) * std::log(r);
    const double th = static_cast<double>(j) * std::arg(c);
    c = lr < -745.0 ? 0.0 : std::polar(std::exp(lr), th);
  }

  std::vector<double> out(m, 0.0);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(
      static_cast<int>(m), reinterpret_cast<fftw_complex*>(freq.data()), out.data(),
      FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);

  std::vector<double> result(cap + 1);
  for (std::size_t i = 0; i <= cap; ++i)
    result[i] = std::max(0.0, out[i] / static_cast<double>(m));
  return result;
}

}  // namespace

std::vector<double> walk_pmf(const OffspringLaw& law, std::size_t j, std::size_t cap) {
  if (j == 0) {
    std::vector<double> unit(cap + 1, 0.0);
    unit[0] = 1.0;
    return unit;
  }
  std::vector<double> base(cap + 1, 0.0);
  for (std::size_t k = 0; k <= std::min(cap, law.table_cap()); ++k)
    base[k] = law.pmf(k);

  std::size_t levels = 0;
  for (std::size_t v = j; v > 1; v >>= 1) ++levels;
  const double direct_cost =
      static_cast<double>(levels + 1) * static_cast<double>(cap + 1) *
      static_cast<double>(cap + 1);
  if (direct_cost <= 2e8) return power_by_doubling(std::move(base), j, cap);
  return power_by_fft(base, j, cap);
}

}  // namespace stabletree

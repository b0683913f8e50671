#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace stabletree::stats {

// streaming mean/standard-error accumulator for i.i.d. summands
class MeanAccumulator {
 public:
  void add(double y) {
    ++n_;
    sum_ += y;
    sumsq_ += y * y;
  }
  std::size_t count() const { return n_; }
  double mean() const { return sum_ / static_cast<double>(n_); }
  double se() const {
    const double n = static_cast<double>(n_);
    const double m = mean();
    const double var = std::max(0.0, (sumsq_ - n * m * m) / (n - 1.0));
    return std::sqrt(var / n);
  }

 private:
  std::size_t n_ = 0;
  double sum_ = 0.0, sumsq_ = 0.0;
};

inline double ks_one_sample(std::vector<double> xs,
                            const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                              static_cast<double>(j) / b.size()));
  }
  return d;
}

// asymptotic Kolmogorov critical values
inline double ks_critical(double level) {
  if (level == 0.01) return 1.6276;
  if (level == 0.05) return 1.3581;
  if (level == 0.10) return 1.2238;
  throw std::invalid_argument("unsupported KS level");
}

inline double ks_critical_one(double level, std::size_t n) {
  return ks_critical(level) / std::sqrt(static_cast<double>(n));
}

inline double ks_critical_two(double level, std::size_t n, std::size_t m) {
  return ks_critical(level) *
         std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                   (static_cast<double>(n) * static_cast<double>(m)));
}

struct Regression {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

inline Regression linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  Regression r;
  const double den = n * sxx - sx * sx;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  const double num = n * sxy - sx * sy;
  r.r_squared = num * num / (den * (n * syy - sy * sy));
  return r;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty sample");
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  double hi = xs[mid];
  if (xs.size() % 2 == 1) return hi;
  std::nth_element(xs.begin(), xs.begin() + mid - 1, xs.begin() + mid);
  return 0.5 * (hi + xs[mid - 1]);
}

}  // namespace stabletree::stats

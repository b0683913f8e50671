#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rng.hpp"

namespace stabletree {

// Critical offspring law (mean exactly 1). Two flavours:
//  - the built-in alpha family with generating function f(s) = s + (1-s)^alpha/alpha,
//    whose tail P(xi > k) obeys t_{k} = t_{k-1}(k-alpha)/k exactly, so draws
//    beyond the table are inverted through Gamma-function ratios;
//  - arbitrary finite-support laws supplied as a pmf.
class OffspringLaw {
 public:
  static OffspringLaw stable(double alpha, std::size_t table_cap = 1u << 18);
  static OffspringLaw from_pmf(std::vector<double> pmf);
  static OffspringLaw uniform012();

  double pmf(std::uint64_t k) const;
  double tail(std::uint64_t k) const;  // P(xi > k)
  double mean() const { return 1.0; }
  bool heavy_tailed() const { return alpha_ > 0.0; }
  double alpha_tail() const { return alpha_; }
  std::size_t table_cap() const { return pmf_.size() - 1; }
  std::uint64_t max_support() const;  // finite laws only

  // space normalisation a_n = (n/alpha)^{1/alpha} for the built-in family
  double a_n(std::size_t n) const;
  double m_n(std::size_t n) const { return static_cast<double>(n) / a_n(n); }

  std::uint64_t sample(Rng& rng) const;
  std::uint64_t sample_size_biased(Rng& rng) const;  // P = k pmf(k)

  // size-biased pmf restricted to [0, cap]
  std::vector<double> size_biased_pmf(std::size_t cap) const;

 private:
  OffspringLaw() = default;
  void build_tables();
  std::uint64_t invert_tail(double v) const;             // xi | xi > cap
  std::uint64_t invert_tail_size_biased(double v) const; // xi* | xi* > cap

  double alpha_ = 0.0;            // 0 marks a finite user law
  std::vector<double> pmf_;       // 0..cap
  double tail_cap_ = 0.0;         // P(xi > cap)
  double tail_cap_sb_ = 0.0;      // P(xi* > cap)

  // alias tables for the body (plus one slot for the tail bucket)
  struct Alias {
    std::vector<double> prob;
    std::vector<std::uint32_t> other;
    std::uint64_t pick(Rng& rng) const;
  };
  static Alias build_alias(const std::vector<double>& weights);
  Alias body_, body_sb_;
};

// P(Xi_j = s) for s = 0..cap, where Xi_j is a sum of j i.i.d. offspring:
// doubling convolution when small, FFT powering when large. Exact (to float
// rounding) for s <= cap since all summands are nonnegative.
std::vector<double> walk_pmf(const OffspringLaw& law, std::size_t j, std::size_t cap);

}  // namespace stabletree

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levy_paths.hpp"
#include "rng.hpp"
#include "stable_density.hpp"

namespace stabletree {

// Nondecreasing cadlag intensity tau(t) = drift * t + sum of jumps up to t,
// driving an inhomogeneous Poisson process of cut points through the
// cumulative hazard Lambda(t) = drift t^2/2 + sum x_i (t - s_i)^+.
class IntensityPath {
 public:
  IntensityPath(double drift, double horizon, std::vector<double> jump_times,
                std::vector<double> jump_sizes);

  static IntensityPath constant_rate_one(double horizon);  // tau_t = t
  static IntensityPath from_jump_path(const JumpPath& path);

  double drift() const { return drift_; }
  double horizon() const { return horizon_; }
  std::size_t jump_count() const { return times_.size(); }

  double tau(double t) const;       // right-continuous value
  double tau_left(double t) const;  // left limit tau(t-)
  double hazard(double t) const;    // Lambda(t)

  // smallest t with Lambda(t) >= g, exact per linear/quadratic piece
  std::optional<double> hazard_inverse(double g) const;

  // inf{ t : tau(t) > threshold }; requires threshold < tau(horizon)
  double first_exceedance(double threshold) const;

 private:
  double drift_, horizon_;
  std::vector<double> times_, sizes_, cum_sizes_, hazard_at_;
};

// theta_0^2 drift plus one size-theta_i jump at an Exp(theta_i) time per atom
IntensityPath icrt_intensity(double theta0, std::span<const double> thetas,
                             double horizon, Rng& rng);

struct CutPoints {
  std::vector<double> values;
  bool exhausted = false;  // fewer than requested within the horizon
};

// jump times of the Poisson process with intensity tau(t) dt
CutPoints sample_cut_points(const IntensityPath& intensity, std::size_t k, Rng& rng);

// inf{ t > 0 : tau(t) > u * tau(y-) }: a point in [0, y) chosen with
// probability proportional to jump sizes (and uniformly over the drift part)
double sample_attachment(const IntensityPath& intensity, double y, double u);

// Finite tree from cut points y_1 < ... < y_k and attachment points z_j < y_j:
// segment 0 is [0,y_1], segment j >= 1 is (y_j, y_{j+1}] glued at z_j.
class LineBreakTree {
 public:
  static LineBreakTree build(std::vector<double> cuts, std::vector<double> attachments);

  std::size_t segment_count() const { return cuts_.size(); }
  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<double>& attachments() const { return attachments_; }
  const std::vector<int>& parent_segment() const { return parents_; }
  double total_length() const { return cuts_.empty() ? 0.0 : cuts_.back(); }

  int segment_of(double point) const;
  double distance(double u, double v) const;

 private:
  std::vector<double> cuts_, attachments_;
  std::vector<int> parents_;  // parents_[j] = segment containing z_j, j >= 1
};

// distance matrix over {root, Y_1, ..., Y_k}
std::vector<std::vector<double>> empirical_measure_distances(const LineBreakTree& tree);

struct WeightedTree {
  LineBreakTree tree;
  double weight = 1.0;
  bool complete = true;
};

struct WeightedTreeEnsemble {
  double alpha = 0.0;  // 0 for non-stable intensities
  double horizon = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::vector<WeightedTree> trees;

  // weighted fraction of replicas that never reached k cuts
  double missing_mass() const;
};

// N replicas of: subordinator path on [0,T] -> intensity -> k cuts and
// attachments, carrying the weight M_T; statistics of the tilted construction
// are weighted means over the ensemble.
WeightedTreeEnsemble sample_stable_tree_ensemble(const StableModel& model,
                                                 std::size_t k, double horizon,
                                                 double eps, std::size_t replicas,
                                                 std::uint64_t seed);

// same construction with tau_t = t and unit weights
WeightedTreeEnsemble sample_crt_ensemble(std::size_t k, double horizon,
                                         std::size_t replicas, std::uint64_t seed);

WeightedTreeEnsemble sample_icrt_ensemble(double theta0, std::span<const double> thetas,
                                          std::size_t k, double horizon,
                                          std::size_t replicas, std::uint64_t seed);

}  // namespace stabletree

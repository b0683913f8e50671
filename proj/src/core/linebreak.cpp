#include "linebreak.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stabletree {

IntensityPath::IntensityPath(double drift, double horizon,
                             std::vector<double> jump_times,
                             std::vector<double> jump_sizes)
    : drift_(drift),
      horizon_(horizon),
      times_(std::move(jump_times)),
      sizes_(std::move(jump_sizes)) {
  if (drift_ < 0.0) throw std::invalid_argument("drift must be nonnegative");
  if (!(horizon_ > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (times_.size() != sizes_.size())
    throw std::invalid_argument("times/sizes length mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (times_[i] < prev || times_[i] > horizon_)
      throw std::invalid_argument("jump times must be nondecreasing within the horizon");
    if (!(sizes_[i] > 0.0)) throw std::invalid_argument("jump sizes must be positive");
    prev = times_[i];
  }
  cum_sizes_.resize(times_.size());
  hazard_at_.resize(times_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    // hazard at this jump time, before the jump contributes
    const double t0 = i == 0 ? 0.0 : times_[i - 1];
    const double base = i == 0 ? 0.0 : hazard_at_[i - 1];
    const double tau0 = drift_ * t0 + (i == 0 ? 0.0 : cum_sizes_[i - 1]);
    const double dt = times_[i] - t0;
    hazard_at_[i] = base + tau0 * dt + 0.5 * drift_ * dt * dt;
    acc += sizes_[i];
    cum_sizes_[i] = acc;
  }
}

IntensityPath IntensityPath::constant_rate_one(double horizon) {
  return IntensityPath(1.0, horizon, {}, {});
}

IntensityPath IntensityPath::from_jump_path(const JumpPath& path) {
  return IntensityPath(0.0, path.horizon(), path.times(), path.sizes());
}

double IntensityPath::tau(double t) const {
  const std::size_t k = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  return drift_ * t + (k == 0 ? 0.0 : cum_sizes_[k - 1]);
}

double IntensityPath::tau_left(double t) const {
  const std::size_t k = std::lower_bound(times_.begin(), times_.end(), t) - times_.begin();
  return drift_ * t + (k == 0 ? 0.0 : cum_sizes_[k - 1]);
}

double IntensityPath::hazard(double t) const {
  if (t < 0.0 || t > horizon_ * (1.0 + 1e-12))
    throw std::out_of_range("hazard time outside [0, horizon]");
  const std::size_t k = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  const double t0 = k == 0 ? 0.0 : times_[k - 1];
  const double base = k == 0 ? 0.0 : hazard_at_[k - 1];
  const double tau0 = drift_ * t0 + (k == 0 ? 0.0 : cum_sizes_[k - 1]);
  const double dt = t - t0;
  return base + tau0 * dt + 0.5 * drift_ * dt * dt;
}

std::optional<double> IntensityPath::hazard_inverse(double g) const {
  if (g <= 0.0) return 0.0;
  // locate the piece [t_i, t_{i+1}) whose hazard range contains g
  std::size_t lo = std::upper_bound(hazard_at_.begin(), hazard_at_.end(), g) -
                   hazard_at_.begin();
  // hazard_at_[i] is Lambda(times_[i]); piece lo starts at times_[lo-1] (or 0)
  const double t0 = lo == 0 ? 0.0 : times_[lo - 1];
  const double base = lo == 0 ? 0.0 : hazard_at_[lo - 1];
  const double tau0 = drift_ * t0 + (lo == 0 ? 0.0 : cum_sizes_[lo - 1]);
  const double need = g - base;
  double t;
  if (drift_ > 0.0) {
    // tau0 dt + drift dt^2/2 = need
    t = t0 + (std::sqrt(tau0 * tau0 + 2.0 * drift_ * need) - tau0) / drift_;
  } else if (tau0 > 0.0) {
    t = t0 + need / tau0;
  } else {
    return std::nullopt;  // flat piece with zero intensity cannot be crossed
  }
  const double end = lo < times_.size() ? times_[lo] : horizon_;
  if (t > end * (1.0 + 1e-12) || t > horizon_) {
    if (lo >= times_.size()) return std::nullopt;  // beyond the horizon
    // numerical spill into the next piece: clamp to the piece boundary
    t = end;
  }
  return t;
}

double IntensityPath::first_exceedance(double threshold) const {
  if (threshold < 0.0) threshold = 0.0;
  // scan jumps; between jumps tau grows linearly at rate drift
  double t_prev = 0.0, tau_prev = 0.0;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double tau_before = drift_ * times_[i] + (i == 0 ? 0.0 : cum_sizes_[i - 1]);
    if (drift_ > 0.0 && tau_before > threshold) {
      // crossed within the drift stretch before this jump
      const double t = (threshold - (tau_prev - drift_ * t_prev)) / drift_;
      return std::max(t, t_prev);
    }
    const double tau_after = tau_before + sizes_[i];
    if (tau_after > threshold) return times_[i];
    t_prev = times_[i];
    tau_prev = tau_after;
  }
  if (drift_ > 0.0) {
    const double t = (threshold - (tau_prev - drift_ * t_prev)) / drift_;
    if (t <= horizon_) return std::max(t, t_prev);
  }
  throw std::domain_error("intensity never exceeds the requested threshold");
}

IntensityPath icrt_intensity(double theta0, std::span<const double> thetas,
                             double horizon, Rng& rng) {
  std::vector<std::pair<double, double>> atoms;
  double prev = std::numeric_limits<double>::infinity();
  for (double th : thetas) {
    if (!(th > 0.0)) throw std::invalid_argument("theta atoms must be positive");
    if (th > prev * (1.0 + 1e-12))
      throw std::invalid_argument("theta atoms must be nonincreasing");
    prev = th;
    const double e = rng.exponential() / th;
    if (e <= horizon) atoms.emplace_back(e, th);
  }
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> times, sizes;
  times.reserve(atoms.size());
  sizes.reserve(atoms.size());
  for (auto& [t, s] : atoms) {
    times.push_back(t);
    sizes.push_back(s);
  }
  return IntensityPath(theta0 * theta0, horizon, std::move(times), std::move(sizes));
}

CutPoints sample_cut_points(const IntensityPath& intensity, std::size_t k, Rng& rng) {
  if (k == 0) throw std::invalid_argument("need at least one cut");
  CutPoints out;
  out.values.reserve(k);
  double gamma = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    gamma += rng.exponential();
    const auto y = intensity.hazard_inverse(gamma);
    if (!y) {
      out.exhausted = true;
      break;
    }
    out.values.push_back(*y);
  }
  return out;
}

double sample_attachment(const IntensityPath& intensity, double y, double u) {
  if (!(u > 0.0) || !(u < 1.0)) throw std::invalid_argument("u must lie in (0,1)");
  const double mass = intensity.tau_left(y);
  if (!(mass > 0.0))
    throw std::domain_error("attachment undefined: tau(y-) = 0");
  return intensity.first_exceedance(u * mass);
}

LineBreakTree LineBreakTree::build(std::vector<double> cuts,
                                   std::vector<double> attachments) {
  if (cuts.empty()) throw std::invalid_argument("need at least one cut");
  if (attachments.size() + 1 != cuts.size())
    throw std::invalid_argument("need exactly one fewer attachment than cuts");
  double prev = 0.0;
  for (double y : cuts) {
    if (!(y > prev)) throw std::invalid_argument("cuts must be strictly increasing and positive");
    prev = y;
  }
  for (std::size_t j = 0; j < attachments.size(); ++j) {
    if (!(attachments[j] >= 0.0) || !(attachments[j] < cuts[j]))
      throw std::invalid_argument("attachment z_j must lie in [0, y_j)");
  }
  LineBreakTree t;
  t.cuts_ = std::move(cuts);
  t.attachments_ = std::move(attachments);
  t.parents_.assign(t.cuts_.size(), -1);
  for (std::size_t j = 1; j < t.cuts_.size(); ++j) {
    t.parents_[j] = t.segment_of(t.attachments_[j - 1]);
    if (t.parents_[j] >= static_cast<int>(j))
      throw std::logic_error("parent segment must precede its child");
  }
  return t;
}

int LineBreakTree::segment_of(double point) const {
  if (cuts_.empty()) throw std::logic_error("empty tree");
  if (point < 0.0 || point > cuts_.back())
    throw std::out_of_range("point outside [0, y_k]");
  // segment 0 = [0, y_1]; segment j = (y_j, y_{j+1}]
  const auto it = std::lower_bound(cuts_.begin(), cuts_.end(), point);
  return static_cast<int>(it - cuts_.begin());
}

double LineBreakTree::distance(double u, double v) const {
  int su = segment_of(u), sv = segment_of(v);
  double pu = u, pv = v, acc = 0.0;
  // lift the deeper endpoint through its attachment until segments meet;
  // parent indices strictly decrease so this terminates
  while (su != sv) {
    if (su > sv) {
      acc += pu - cuts_[su - 1];  // distance to the glued end of segment su
      pu = attachments_[su - 1];
      su = parents_[su];
    } else {
      acc += pv - cuts_[sv - 1];
      pv = attachments_[sv - 1];
      sv = parents_[sv];
    }
  }
  return acc + std::fabs(pu - pv);
}

std::vector<std::vector<double>> empirical_measure_distances(const LineBreakTree& tree) {
  const std::size_t k = tree.segment_count();
  std::vector<double> pts;
  pts.reserve(k + 1);
  pts.push_back(0.0);
  for (double y : tree.cuts()) pts.push_back(y);
  std::vector<std::vector<double>> d(k + 1, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j)
      d[i][j] = d[j][i] = tree.distance(pts[i], pts[j]);
  return d;
}

double WeightedTreeEnsemble::missing_mass() const {
  double acc = 0.0;
  for (const auto& wt : trees)
    if (!wt.complete) acc += wt.weight;
  return trees.empty() ? 0.0 : acc / static_cast<double>(trees.size());
}

namespace {

// shared replica body: cuts, attachments, tree; an empty tree marks a
// replica whose first cut never arrived within the horizon
WeightedTree build_replica(const IntensityPath& intensity, std::size_t k, double weight,
                           Rng& rng) {
  WeightedTree out;
  out.weight = weight;
  const CutPoints cp = sample_cut_points(intensity, k, rng);
  out.complete = !cp.exhausted && cp.values.size() == k;
  if (cp.values.empty()) return out;
  std::vector<double> atts;
  atts.reserve(cp.values.size() - 1);
  for (std::size_t j = 0; j + 1 < cp.values.size(); ++j)
    atts.push_back(sample_attachment(intensity, cp.values[j], rng.uniform()));
  out.tree = LineBreakTree::build(cp.values, std::move(atts));
  return out;
}

}  // namespace

WeightedTreeEnsemble sample_stable_tree_ensemble(const StableModel& model,
                                                 std::size_t k, double horizon,
                                                 double eps, std::size_t replicas,
                                                 std::uint64_t seed) {
  WeightedTreeEnsemble ens;
  ens.alpha = model.alpha();
  ens.horizon = horizon;
  ens.epsilon = eps;
  ens.seed = seed;
  ens.trees.reserve(replicas);
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(seed, j);
    const JumpPath path = sample_subordinator_path(model, horizon, eps, rng);
    auto replica = build_replica(IntensityPath::from_jump_path(path), k, 1.0, rng);
    // Weight at the stopped time Y_k ^ T rather than at the horizon: the
    // weight is a martingale, so expectations of statistics of the first k
    // cuts are unchanged, while Var(M_T) ~ exp(T^alpha) would swamp every
    // estimate for horizons past t ~ 2.
    const double t_stop = (replica.complete && replica.tree.segment_count() == k)
                              ? replica.tree.cuts().back()
                              : horizon;
    replica.weight = std::exp(log_martingale_weight(path, t_stop, model));
    ens.trees.push_back(std::move(replica));
  }
  return ens;
}

WeightedTreeEnsemble sample_crt_ensemble(std::size_t k, double horizon,
                                         std::size_t replicas, std::uint64_t seed) {
  WeightedTreeEnsemble ens;
  ens.horizon = horizon;
  ens.seed = seed;
  const IntensityPath intensity = IntensityPath::constant_rate_one(horizon);
  ens.trees.reserve(replicas);
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(seed, j);
    ens.trees.push_back(build_replica(intensity, k, 1.0, rng));
  }
  return ens;
}

WeightedTreeEnsemble sample_icrt_ensemble(double theta0, std::span<const double> thetas,
                                          std::size_t k, double horizon,
                                          std::size_t replicas, std::uint64_t seed) {
  WeightedTreeEnsemble ens;
  ens.horizon = horizon;
  ens.seed = seed;
  ens.trees.reserve(replicas);
  for (std::size_t j = 0; j < replicas; ++j) {
    Rng rng(seed, j);
    const IntensityPath intensity = icrt_intensity(theta0, thetas, horizon, rng);
    ens.trees.push_back(build_replica(intensity, k, 1.0, rng));
  }
  return ens;
}

}  // namespace stabletree

#include "growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace stabletree {

ConditionedDegrees sample_conditioned_degrees(const OffspringLaw& law, std::size_t n,
                                              Rng& rng) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  ConditionedDegrees out;
  out.values.resize(n);
  const std::uint64_t target = n - 1;
  for (;;) {
    ++out.trials;
    std::uint64_t sum = 0;
    bool over = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t d = law.sample(rng);
      sum += d;
      if (sum > target) {  // cannot recover: abandon the vector early
        over = true;
        break;
      }
      out.values[i] = static_cast<std::uint32_t>(d);
    }
    if (!over && sum == target) return out;
  }
}

SizeBiasedOrder size_biased_reorder(std::span<const std::uint32_t> degrees, Rng& rng) {
  // weighted order without replacement via exponential race:
  // index i finishes at Exp(1)/D_i, smallest first
  std::vector<std::pair<double, std::uint32_t>> keyed;
  keyed.reserve(degrees.size());
  for (std::uint32_t i = 0; i < degrees.size(); ++i)
    if (degrees[i] > 0)
      keyed.emplace_back(rng.exponential() / degrees[i], i);
  std::sort(keyed.begin(), keyed.end());

  SizeBiasedOrder out;
  out.dhat.reserve(degrees.size());
  out.order.reserve(keyed.size());
  for (auto& [key, idx] : keyed) {
    out.dhat.push_back(degrees[idx]);
    out.order.push_back(idx);
  }
  out.dhat.resize(degrees.size(), 0);
  return out;
}

std::pair<RootedTree, GrowthTrace> grow_tree(std::size_t n,
                                             std::span<const std::uint32_t> dhat,
                                             Rng& rng) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (dhat.size() != n) throw std::invalid_argument("dhat must have n entries");
  std::uint64_t total = 0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dhat[i] > 0 && i != nonzero)
      throw std::invalid_argument("dhat must list nonzero entries first");
    if (dhat[i] > 0) ++nonzero;
    total += dhat[i];
  }
  if (total != n - 1) throw std::invalid_argument("dhat must sum to n-1");

  RootedTree tree;
  tree.root = 0;
  tree.parent.assign(n, 0);

  GrowthTrace trace;
  trace.events.reserve(n - 1);
  trace.half_edges.reserve(n - 1);
  trace.dormant.reserve(n - 1);
  trace.active_vertex.reserve(n - 1);
  trace.reveal_step.assign(n, 0);

  std::vector<std::uint32_t> half_owner;  // one entry per pending half-edge
  half_owner.reserve(16);
  std::vector<std::uint32_t> dormant;
  std::uint32_t active = 0;
  std::uint32_t created = 1;
  std::size_t next_entry = 0;        // next dhat index to reveal
  std::uint64_t revealed_excess = 0; // running sum of (dhat_j - 1)

  auto reveal = [&](std::uint32_t vertex, std::uint32_t step) {
    if (next_entry >= nonzero)
      throw std::logic_error("growth invariant violated: no entries left");
    const std::uint32_t d = dhat[next_entry++];
    revealed_excess += d - 1;
    trace.reveal_step[vertex] = step;
    for (std::uint32_t i = 0; i + 1 < d; ++i) half_owner.push_back(vertex);
  };

  for (std::uint32_t step = 1; step < n; ++step) {
    const std::uint64_t m = n - step;  // vertices still to create, + this one
    const std::uint64_t nh = half_owner.size();
    const std::uint64_t nz = dormant.size();
    if (nh > m)
      throw std::logic_error("growth invariant violated: too many half-edges");

    const double u = rng.uniform();
    std::uint32_t fresh = created++;
    if (u < static_cast<double>(nh) / static_cast<double>(m)) {
      // branching: complete a uniformly chosen half-edge
      const std::size_t pick = rng.below(nh);
      const std::uint32_t owner = half_owner[pick];
      half_owner[pick] = half_owner.back();
      half_owner.pop_back();
      tree.parent[fresh] = owner;
      dormant.push_back(active);
      trace.events.push_back(GrowthEvent::kBranching);
      trace.branch_steps.push_back(step);
      trace.attach_steps.push_back(trace.reveal_step[owner]);
      active = fresh;
    } else if (rng.uniform() * static_cast<double>(m + nz) < static_cast<double>(m)) {
      // growth: the active vertex reveals its degree and extends the branch
      reveal(active, step);
      tree.parent[fresh] = active;
      trace.events.push_back(GrowthEvent::kGrowth);
      active = fresh;
    } else {
      // activation: a dormant vertex wakes, reveals, and begins a new branch
      const std::size_t pick = rng.below(nz);
      const std::uint32_t woken = dormant[pick];
      dormant[pick] = dormant.back();
      dormant.pop_back();
      reveal(woken, step);
      tree.parent[fresh] = woken;
      dormant.push_back(active);
      trace.events.push_back(GrowthEvent::kActivation);
      trace.activation_steps.push_back(step);
      active = fresh;
    }

    // half-edge identity: #H_k = sum_{j <= k-#Z_k}(dhat_j - 1) - #Z_k
    const std::uint64_t nz_now = dormant.size();
    if (half_owner.size() != revealed_excess - nz_now)
      throw std::logic_error("half-edge identity violated");
    trace.half_edges.push_back(static_cast<std::uint32_t>(half_owner.size()));
    trace.dormant.push_back(static_cast<std::uint32_t>(nz_now));
    trace.active_vertex.push_back(active);
  }

  if (!half_owner.empty()) throw std::logic_error("half-edges left at termination");
  if (next_entry != nonzero) throw std::logic_error("unrevealed degrees left");
  return {std::move(tree), std::move(trace)};
}

double first_stick_survival(std::span<const std::uint32_t> dhat, std::size_t k,
                            std::size_t n) {
  if (k > n - 1) throw std::invalid_argument("k must be at most n-1");
  double prod = 1.0;
  std::int64_t excess = 0;  // sum_{i<j}(dhat_i - 1)
  for (std::size_t j = 1; j <= k; ++j) {
    const double factor =
        1.0 - static_cast<double>(excess) / static_cast<double>(n - j);
    if (factor <= 0.0) return 0.0;
    prod *= factor;
    if (j - 1 < dhat.size()) excess += static_cast<std::int64_t>(dhat[j - 1]) - 1;
  }
  return prod;
}

double log_theta_weight(std::span<const std::uint64_t> prefix, std::size_t n,
                        std::span<const double> row_n_minus_m, double p_n_at_n1) {
  const std::size_t m = prefix.size();
  if (m >= n) throw std::invalid_argument("prefix must be shorter than n");
  double log_prod = 0.0;
  std::uint64_t partial = 0;
  for (std::size_t i = 1; i <= m; ++i) {
    if (partial > n - 1) return -std::numeric_limits<double>::infinity();
    log_prod += std::log(static_cast<double>(n - i + 1)) -
                std::log(static_cast<double>(n - 1 - partial));
    partial += prefix[i - 1];
  }
  if (partial > n - 1) return -std::numeric_limits<double>::infinity();
  const std::uint64_t residual = n - 1 - partial;
  const double p_tail =
      residual < row_n_minus_m.size() ? row_n_minus_m[residual] : 0.0;
  if (p_tail <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(p_tail) - std::log(p_n_at_n1) + log_prod;
}

double theta_weight(std::span<const std::uint64_t> prefix, std::size_t n,
                    const OffspringLaw& law) {
  const std::size_t m = prefix.size();
  if (m == 0) return 1.0;
  const auto row = walk_pmf(law, n - m, n - 1);
  const auto full = walk_pmf(law, n, n - 1);
  const double lw = log_theta_weight(prefix, n, row, full[n - 1]);
  return std::isfinite(lw) ? std::exp(lw) : 0.0;
}

OrderedTree randomize_order(const RootedTree& tree, Rng& rng) {
  auto ch = tree.children();
  for (auto& list : ch) {
    for (std::size_t i = list.size(); i > 1; --i)
      std::swap(list[i - 1], list[rng.below(i)]);
  }
  OrderedTree out;
  out.preorder_degrees.reserve(tree.size());
  std::vector<std::uint32_t> visit{tree.root};
  while (!visit.empty()) {
    const std::uint32_t v = visit.back();
    visit.pop_back();
    out.preorder_degrees.push_back(static_cast<std::uint32_t>(ch[v].size()));
    for (auto it = ch[v].rbegin(); it != ch[v].rend(); ++it) visit.push_back(*it);
  }
  return out;
}

TreeStatistics tree_statistics(const RootedTree& tree, const GrowthTrace& trace,
                               std::size_t k, std::size_t top, Rng& rng) {
  const std::size_t n = tree.size();
  if (k > n) throw std::invalid_argument("k must be at most n");

  TreeStatistics st;
  st.height = tree.height();
  const std::size_t kk = std::min(k, trace.branch_steps.size());
  st.branch_steps.assign(trace.branch_steps.begin(), trace.branch_steps.begin() + kk);
  const std::size_t ka = std::min(k, trace.attach_steps.size());
  st.attach_steps.assign(trace.attach_steps.begin(), trace.attach_steps.begin() + ka);

  // k distinct uniform vertices; labels are exchangeable so this realises
  // the subtree spanned by the root and the first k labels
  std::vector<std::uint8_t> spanned(n, 0);
  spanned[tree.root] = 1;
  std::vector<std::uint8_t> picked(n, 0);
  std::size_t chosen = 0;
  while (chosen < k) {
    const std::uint32_t v = static_cast<std::uint32_t>(rng.below(n));
    if (picked[v]) continue;
    picked[v] = 1;
    ++chosen;
    std::uint32_t u = v;
    while (!spanned[u]) {
      spanned[u] = 1;
      u = tree.parent[u];
    }
  }
  st.spanned_size = static_cast<std::uint32_t>(
      std::count(spanned.begin(), spanned.end(), std::uint8_t{1}));

  // complement components; vertex creation order makes parent[v] < v, so a
  // single forward pass assigns component ids
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<std::uint64_t> sizes;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (spanned[v]) continue;
    const std::uint32_t p = tree.parent[v];
    if (v != tree.root && !spanned[p] && comp[p] != UINT32_MAX) {
      comp[v] = comp[p];
      ++sizes[comp[v]];
    } else {
      comp[v] = static_cast<std::uint32_t>(sizes.size());
      sizes.push_back(1);
    }
  }
  st.forest_sizes = sizes;
  if (!sizes.empty()) {
    const std::uint64_t total =
        std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
    std::uint64_t mark =
        static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(total));
    if (mark >= total) mark = total - 1;
    for (std::uint64_t s : sizes) {
      if (mark < s) {
        st.size_biased_component = s;
        break;
      }
      mark -= s;
    }
  }

  auto deg = tree.out_degrees();
  std::sort(deg.begin(), deg.end(), std::greater<>());
  deg.resize(std::min(top, deg.size()));
  st.top_degrees = std::move(deg);
  return st;
}

}  // namespace stabletree

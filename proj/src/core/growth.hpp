#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "offspring.hpp"
#include "prufer.hpp"
#include "rng.hpp"

namespace stabletree {

// n i.i.d. offspring conditioned on total sum n-1, by exact rejection.
struct ConditionedDegrees {
  std::vector<std::uint32_t> values;
  std::uint64_t trials = 0;  // vectors drawn until acceptance
};
ConditionedDegrees sample_conditioned_degrees(const OffspringLaw& law, std::size_t n,
                                              Rng& rng);

// Size-biased reordering of D: nonzero entries in weighted-without-replacement
// order, zeros appended; `order` holds the chosen indices into D.
struct SizeBiasedOrder {
  std::vector<std::uint32_t> dhat;
  std::vector<std::uint32_t> order;
};
SizeBiasedOrder size_biased_reorder(std::span<const std::uint32_t> degrees, Rng& rng);

enum class GrowthEvent : std::uint8_t { kGrowth = 0, kBranching = 1, kActivation = 2 };

struct GrowthTrace {
  std::vector<GrowthEvent> events;          // one per step 1..n-1
  std::vector<std::uint32_t> branch_steps;  // steps with a branching event
  std::vector<std::uint32_t> attach_steps;  // per branching: owner's reveal step
  std::vector<std::uint32_t> activation_steps;
  std::vector<std::uint32_t> half_edges;    // #H_k after step k
  std::vector<std::uint32_t> dormant;       // #Z_k after step k
  std::vector<std::uint32_t> active_vertex; // V_k after step k
  std::vector<std::uint32_t> reveal_step;   // per vertex; 0 = never revealed
};

// The half-edge growth process: step k picks a half-edge (branching), the
// active vertex (growth) or a dormant vertex (activation) with the exact
// conditional probabilities, revealing entries of dhat as degrees. The
// output, after uniformly random child ordering, is the critical tree
// conditioned to n vertices. The half-edge identity
//   #H_k = sum_{j<=k-#Z_k} (dhat_j - 1) - #Z_k
// is asserted at every step.
std::pair<RootedTree, GrowthTrace> grow_tree(std::size_t n,
                                             std::span<const std::uint32_t> dhat,
                                             Rng& rng);

// P(first k steps are all growth | dhat) as an exact product
double first_stick_survival(std::span<const std::uint32_t> dhat, std::size_t k,
                            std::size_t n);

// log of the prefix reweighting factor between size-biased-ordered degrees
// and i.i.d. size-biased draws:
//   Theta = [P(Xi_{n-m} = n-1-sum k_i)/P(Xi_n = n-1)] *
//           prod_i (n-i+1)/(n-1-sum_{j<i} k_j)
// Returns -inf for infeasible prefixes. The two walk rows may be precomputed.
double log_theta_weight(std::span<const std::uint64_t> prefix, std::size_t n,
                        std::span<const double> row_n_minus_m, double p_n_at_n1);
double theta_weight(std::span<const std::uint64_t> prefix, std::size_t n,
                    const OffspringLaw& law);

// Ordered tree in canonical form: preorder sequence of child counts.
struct OrderedTree {
  std::vector<std::uint32_t> preorder_degrees;
  bool operator==(const OrderedTree&) const = default;
  auto operator<=>(const OrderedTree&) const = default;
};
OrderedTree randomize_order(const RootedTree& tree, Rng& rng);

struct TreeStatistics {
  std::uint32_t height = 0;
  std::vector<std::uint32_t> branch_steps;
  std::vector<std::uint32_t> attach_steps;
  std::uint32_t spanned_size = 0;           // vertices of the spanned subtree
  std::vector<std::uint64_t> forest_sizes;  // components of the complement
  std::uint64_t size_biased_component = 0;  // 0 when the forest is empty
  std::vector<std::uint32_t> top_degrees;   // largest out-degrees, descending
};

// Statistics of the subtree spanned by the root and k uniformly chosen
// vertices (labels are exchangeable, so uniform picks realise "labels 1..k").
TreeStatistics tree_statistics(const RootedTree& tree, const GrowthTrace& trace,
                               std::size_t k, std::size_t top, Rng& rng);

}  // namespace stabletree

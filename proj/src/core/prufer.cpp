#include "prufer.hpp"

#include <algorithm>
#include <stdexcept>

namespace stabletree {

std::vector<std::uint32_t> RootedTree::out_degrees() const {
  std::vector<std::uint32_t> deg(parent.size(), 0);
  for (std::uint32_t v = 0; v < parent.size(); ++v)
    if (v != root) ++deg[parent[v]];
  return deg;
}

std::vector<std::vector<std::uint32_t>> RootedTree::children() const {
  std::vector<std::vector<std::uint32_t>> ch(parent.size());
  for (std::uint32_t v = 0; v < parent.size(); ++v)
    if (v != root) ch[parent[v]].push_back(v);
  return ch;
}

std::uint32_t RootedTree::height() const {
  // parents may appear in any label order: resolve depths iteratively
  std::vector<std::uint32_t> depth(parent.size(), UINT32_MAX);
  depth[root] = 0;
  std::uint32_t h = 0;
  for (std::uint32_t v = 0; v < parent.size(); ++v) {
    std::vector<std::uint32_t> chain;
    std::uint32_t u = v;
    while (depth[u] == UINT32_MAX) {
      chain.push_back(u);
      u = parent[u];
    }
    std::uint32_t d = depth[u];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
    h = std::max(h, d);
  }
  return h;
}

void RootedTree::validate() const {
  const std::size_t n = parent.size();
  if (n == 0) throw std::invalid_argument("empty tree");
  if (root >= n || parent[root] != root)
    throw std::invalid_argument("malformed tree: bad root");
  std::vector<std::uint8_t> state(n, 0);  // 0 unseen, 1 in progress, 2 done
  state[root] = 2;
  for (std::uint32_t v = 0; v < n; ++v) {
    std::vector<std::uint32_t> chain;
    std::uint32_t u = v;
    while (state[u] == 0) {
      if (parent[u] >= n) throw std::invalid_argument("malformed tree: parent out of range");
      state[u] = 1;
      chain.push_back(u);
      u = parent[u];
    }
    if (state[u] == 1) throw std::invalid_argument("malformed tree: cycle");
    for (std::uint32_t w : chain) state[w] = 2;
  }
}

RootedTree prufer_decode(std::span<const std::uint32_t> word) {
  const std::size_t n = word.size() + 1;
  if (word.empty()) throw std::invalid_argument("codeword must be nonempty");
  for (std::uint32_t w : word)
    if (w >= n) throw std::invalid_argument("codeword entry out of range [0, n)");

  RootedTree t;
  t.parent.assign(n, 0);
  t.root = word[0];
  t.parent[t.root] = t.root;

  std::vector<std::uint8_t> in_tree(n, 0);
  in_tree[t.root] = 1;
  std::uint32_t lowest_unused = 0;
  auto advance_lowest = [&] {
    while (lowest_unused < n && in_tree[lowest_unused]) ++lowest_unused;
  };
  advance_lowest();

  std::uint32_t active = t.root;
  for (std::size_t k = 1; k < word.size(); ++k) {
    const std::uint32_t w = word[k];
    if (!in_tree[w]) {
      // fresh label: the branch keeps growing
      t.parent[w] = active;
      in_tree[w] = 1;
      active = w;
      advance_lowest();
    } else {
      // repeat: close the branch with the lowest unused label, jump to w
      const std::uint32_t leaf = lowest_unused;
      t.parent[leaf] = active;
      in_tree[leaf] = 1;
      active = w;
      advance_lowest();
    }
  }
  // the codeword is exhausted: one final leaf ends the last branch
  const std::uint32_t leaf = lowest_unused;
  t.parent[leaf] = active;
  return t;
}

std::vector<std::uint32_t> prufer_encode(const RootedTree& tree) {
  tree.validate();
  const std::size_t n = tree.size();
  if (n < 2) throw std::invalid_argument("tree must have at least two vertices");

  std::vector<std::uint32_t> word;
  word.reserve(n - 1);
  std::vector<std::uint8_t> revealed(n, 0);
  revealed[tree.root] = 1;
  std::size_t covered = 1;
  std::uint32_t next_label = 0;

  while (covered < n) {
    while (next_label < n && revealed[next_label]) ++next_label;
    // path from the revealed set down to the lowest unrevealed label
    std::vector<std::uint32_t> chain;
    std::uint32_t u = next_label;
    while (!revealed[u]) {
      chain.push_back(u);
      u = tree.parent[u];
    }
    // branch = (attachment vertex, new internal vertices...), then the leaf;
    // codeword records everything except the terminal label
    word.push_back(u);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (*it != next_label) word.push_back(*it);
      revealed[*it] = 1;
      ++covered;
    }
  }
  if (word.size() != n - 1) throw std::logic_error("codec internal error");
  return word;
}

}  // namespace stabletree

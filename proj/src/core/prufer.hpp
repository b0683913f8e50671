#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace stabletree {

// Rooted labelled tree on vertices 0..n-1; parent[root] == root.
struct RootedTree {
  std::uint32_t root = 0;
  std::vector<std::uint32_t> parent;

  std::size_t size() const { return parent.size(); }
  std::vector<std::uint32_t> out_degrees() const;
  std::vector<std::vector<std::uint32_t>> children() const;
  std::uint32_t height() const;
  void validate() const;  // throws on malformed input
};

// Codeword of length n-1 over labels 0..n-1 <-> rooted labelled tree on [n].
// Decoding reveals the tree branch by branch: the first entry is the root,
// a fresh label extends the current branch, a repeated (or previously
// revealed) label closes the branch and restarts from that vertex.
RootedTree prufer_decode(std::span<const std::uint32_t> word);
std::vector<std::uint32_t> prufer_encode(const RootedTree& tree);

}  // namespace stabletree

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "growth.hpp"
#include "linebreak.hpp"
#include "prufer.hpp"

namespace stabletree {

inline constexpr const char* kToolVersion = "0.1.0";

// shortest round-trip decimal form; locale-free and reproducible
std::string format_double(double v);

// CSV with '#' provenance comment lines, a header row and '\n' endings
class CsvWriter {
 public:
  CsvWriter(double alpha, std::uint64_t seed);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

nlohmann::json ensemble_to_json(const WeightedTreeEnsemble& ensemble);
nlohmann::json discrete_tree_to_json(double alpha, std::uint64_t seed,
                                     const RootedTree& tree, const GrowthTrace& trace,
                                     std::size_t top_degrees);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace stabletree

#include "serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stabletree {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(double alpha, std::uint64_t seed) {
  out_ += "# alpha=" + format_double(alpha) + "\n";
  out_ += "# seed=" + std::to_string(seed) + "\n";
  out_ += "# version=" + std::string(kToolVersion) + "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ += ',';
    out_ += columns[i];
  }
  out_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ += ',';
    out_ += format_double(values[i]);
  }
  out_ += '\n';
}

nlohmann::json ensemble_to_json(const WeightedTreeEnsemble& ensemble) {
  nlohmann::json j;
  j["alpha"] = ensemble.alpha;
  j["seed"] = ensemble.seed;
  j["version"] = kToolVersion;
  j["horizon"] = ensemble.horizon;
  j["epsilon"] = ensemble.epsilon;
  j["missing_mass"] = ensemble.missing_mass();
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& wt : ensemble.trees) {
    nlohmann::json t;
    t["cuts"] = wt.tree.cuts();
    t["attachments"] = wt.tree.attachments();
    t["parents"] = wt.tree.parent_segment();
    t["weight"] = wt.weight;
    t["complete"] = wt.complete;
    trees.push_back(std::move(t));
  }
  j["trees"] = std::move(trees);
  return j;
}

nlohmann::json discrete_tree_to_json(double alpha, std::uint64_t seed,
                                     const RootedTree& tree, const GrowthTrace& trace,
                                     std::size_t top_degrees) {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["seed"] = seed;
  j["version"] = kToolVersion;
  j["n"] = tree.size();
  j["root"] = tree.root;
  j["parent"] = tree.parent;
  j["events"] = {{"C", trace.branch_steps},
                 {"J", trace.attach_steps},
                 {"activations", trace.activation_steps}};
  auto deg = tree.out_degrees();
  std::sort(deg.begin(), deg.end(), std::greater<>());
  deg.resize(std::min(top_degrees, deg.size()));
  j["degrees_topk"] = deg;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stabletree

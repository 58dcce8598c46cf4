#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "balancer/graph.hpp"
#include "balancer/ingest.hpp"

namespace testing {

/// Path of a bundled file under data/.
std::string data_path(const std::string &name);

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &tag);
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const noexcept { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

std::vector<std::string> node_names(std::size_t n);

/// Complete graph with weights uniform in [-1, 1], never exactly zero.
balancer::SignedGraph random_graph(std::size_t n, std::uint64_t seed);

/// Random valid raw dataset: every ordered pair of `n` nations, in-domain values.
std::vector<balancer::FactorRecord> random_records(std::size_t n, std::uint64_t seed);

/// Minimal parser for the undirected DOT subset we emit: `graph ID { stmt* }`
/// with attribute, node and `--` edge statements. Throws std::runtime_error on
/// any grammar violation.
struct DotGraph {
  std::string id;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  struct Edge {
    std::string a, b;
    std::map<std::string, std::string> attrs;
  };
  std::vector<Edge> edges;
};
DotGraph parse_dot(const std::string &text);

/// Runs the CLI in-process, capturing stdout/stderr.
struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};
CliResult run(const std::vector<std::string> &args);

}  // namespace testing

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "balancer/graph.hpp"
#include "balancer/ingest.hpp"

namespace balancer {

/// Factor weights of the linear relationship score. The sign of each
/// contribution is fixed by score_directed; coefficients are magnitudes.
struct CoefficientSet {
  double e = 5.0;    // export
  double i = 5.0;    // import
  double r = 2.0;    // religious conflicts
  double d = 0.8;    // diplomatic relations
  double w = 3.0;    // past wars
  double b = 2.0;    // border movement
  double c = 0.5;    // international court cases
  double p = 0.125;  // peace treaties
  double x = 0.5;    // exchange rate ratio

  friend bool operator==(const CoefficientSet &, const CoefficientSet &) = default;
};

/// Parses `name = value` lines (blank lines and `#` comments allowed). All
/// nine names must appear exactly once; unknown names and negative values
/// are rejected.
CoefficientSet parse_coefficients(std::istream &in);
CoefficientSet load_coefficients(const std::string &path);
std::string format_coefficients(const CoefficientSet &coef);

struct DirectedScore {
  std::string source;
  std::string target;
  double value = 0.0;
};

DirectedScore score_directed(const NormalizedRecord &rec, const CoefficientSet &coef);

enum class MergeRule { Mean, Sum, Min };

MergeRule parse_merge_rule(std::string_view s);
std::string_view to_string(MergeRule m) noexcept;

/// Combines a->b and b->a into one undirected weight. Throws ValidationError
/// when the two scores are not reverse directions of one pair.
double merge_undirected(const DirectedScore &ab, const DirectedScore &ba, MergeRule rule = MergeRule::Mean);

struct ScoredGraph {
  SignedGraph graph;
  std::vector<DirectedScore> directed;  // in input record order
};

/// Scores every directed record and merges both directions of each pair into
/// a complete graph over the sorted set of nations. Throws ValidationError
/// listing missing directions when coverage is incomplete.
ScoredGraph build_graph(const std::vector<NormalizedRecord> &records, const CoefficientSet &coef,
                        MergeRule rule = MergeRule::Mean);

/// `source,target,score`
std::string format_directed_scores(const std::vector<DirectedScore> &scores);
/// `a,b,weight` over all pairs in pair-index order.
std::string format_edge_list(const SignedGraph &g);

/// Reads `a,b,weight` and rebuilds the complete graph; every unordered pair
/// must appear exactly once.
SignedGraph parse_edge_list(std::istream &in);
SignedGraph load_edge_list(const std::string &path);

}  // namespace balancer

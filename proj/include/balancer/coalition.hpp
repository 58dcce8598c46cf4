#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "balancer/evaluate.hpp"
#include "balancer/graph.hpp"

namespace balancer {

enum class Side : std::uint8_t { None, Set1, Set2 };

constexpr Side opposite(Side s) noexcept {
  return s == Side::Set1 ? Side::Set2 : s == Side::Set2 ? Side::Set1 : Side::None;
}

enum class AssignReason : std::uint8_t { Start, StrongestPositive, StrongestNegative, Leftover };
std::string_view to_string(AssignReason r) noexcept;

struct Assignment {
  std::size_t step = 0;
  std::string nation;
  Side side = Side::None;
  AssignReason reason = AssignReason::Start;
  std::string via;  // nation whose neighbourhood produced this placement; empty for start/leftover
};

struct CoalitionResult {
  std::vector<std::string> set1;  // sorted
  std::vector<std::string> set2;  // sorted
  std::string start;
  std::size_t eval_score = 0;
  std::vector<Assignment> assignment_order;

  Partition partition() const { return {set1, set2}; }
};

struct AppendResult {
  std::optional<NodeIndex> positive;
  std::optional<NodeIndex> negative;
};

/// Among still-unassigned neighbours of `country`, the one with the largest
/// weight > 0 joins the country's side and the one with the smallest
/// weight < 0 joins the other side. Equal weights go to the smaller name.
/// Throws std::logic_error when `country` itself is unassigned.
AppendResult single_append(const SignedGraph &g, NodeIndex country, std::vector<Side> &sides);

/// Double-queue expansion from `start` (placed in set 1), followed by the
/// leftover rule for nations never reached.
CoalitionResult see_coalitions(const SignedGraph &g, NodeIndex start);

struct StartScore {
  std::string start;
  std::size_t set1_size = 0;
  std::size_t set2_size = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

struct SweepResult {
  CoalitionResult best;
  EvaluationReport best_report;
  std::vector<StartScore> table;  // one row per start, in node order
};

/// Runs see_coalitions from every nation, scores each partition and keeps the
/// best (ties: smallest start name). `jobs` caps worker threads; results do
/// not depend on it.
SweepResult sweep_starts(const SignedGraph &g, const std::vector<EvaluationPair> &pairs, unsigned jobs = 1);

/// `{"set1": [...], "set2": [...], "start": ..., "eval_score": ...}`
std::string format_partition_json(const CoalitionResult &r);
/// `nation,set` sorted by nation.
std::string format_partition_csv(const CoalitionResult &r);
/// Reads partition JSON; `start` and `eval_score` are optional.
CoalitionResult load_partition_json(const std::string &path);
CoalitionResult parse_partition_json(std::string_view text);

std::string format_start_scores_csv(const std::vector<StartScore> &table);
std::string format_assignment_csv(const CoalitionResult &r);

}  // namespace balancer

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace balancer {

enum class Relation { Ally, Enemy };

std::string_view to_string(Relation r) noexcept;

/// Known relation between two nations; stored with a < b.
struct EvaluationPair {
  std::string a;
  std::string b;
  Relation relation = Relation::Ally;
  friend bool operator==(const EvaluationPair &, const EvaluationPair &) = default;
};

/// Canonicalizes the pair (normalized names, a < b). Throws ValidationError
/// when a == b.
EvaluationPair make_pair(std::string_view a, std::string_view b, Relation r);

/// Reads `a,b,relation` with relation in {ally, enemy}. Duplicates with the
/// same label collapse; conflicting labels are an error.
std::vector<EvaluationPair> parse_eval_set(std::istream &in);
std::vector<EvaluationPair> load_eval_set(const std::string &path);

/// Two-set partition by nation name; the minimal view scoring needs.
struct Partition {
  std::vector<std::string> set1;
  std::vector<std::string> set2;
};

enum class Placement { Same, Opposite, Missing };
enum class Verdict { Correct, Wrong, Missing };

std::string_view to_string(Placement p) noexcept;
std::string_view to_string(Verdict v) noexcept;

struct PairVerdict {
  EvaluationPair pair;
  Placement predicted = Placement::Missing;
  Verdict verdict = Verdict::Missing;
};

struct EvaluationReport {
  std::vector<PairVerdict> verdicts;  // in pair order
  std::size_t correct = 0;
  std::size_t wrong = 0;
  std::size_t missing = 0;
  std::size_t total = 0;
  double accuracy = 0.0;
};

/// Enemies are correct when split across sets, allies when together. Pairs
/// touching a nation outside both sets are missing and count against accuracy.
/// Throws ValidationError for an empty pair list.
EvaluationReport score_partition(const Partition &partition, const std::vector<EvaluationPair> &pairs);

/// `a,b,expected,predicted,verdict` with Same/Opposite wording.
std::string format_report_csv(const EvaluationReport &report);
/// `{correct, wrong, missing, total, accuracy}`
std::string format_report_json(const EvaluationReport &report);

}  // namespace balancer

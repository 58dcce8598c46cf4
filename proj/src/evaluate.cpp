#include "balancer/evaluate.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "balancer/csv.hpp"
#include "balancer/errors.hpp"
#include "balancer/graph.hpp"

namespace balancer {

std::string_view to_string(Relation r) noexcept { return r == Relation::Ally ? "ally" : "enemy"; }

std::string_view to_string(Placement p) noexcept {
  switch (p) {
  case Placement::Same: return "Same";
  case Placement::Opposite: return "Opposite";
  case Placement::Missing: return "Missing";
  }
  return "?";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
  case Verdict::Correct: return "Right";
  case Verdict::Wrong: return "Wrong";
  case Verdict::Missing: return "Missing";
  }
  return "?";
}

EvaluationPair make_pair(std::string_view a, std::string_view b, Relation r) {
  auto na = normalize_name(a);
  auto nb = normalize_name(b);
  if (na.empty() || nb.empty()) throw ValidationError("evaluation pair has an empty nation name");
  if (na == nb) throw ValidationError("evaluation pair repeats nation '" + na + "'");
  if (nb < na) std::swap(na, nb);
  return {std::move(na), std::move(nb), r};
}

std::vector<EvaluationPair> parse_eval_set(std::istream &in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty() || csv::trim(lines.front()) != "a,b,relation")
    throw ValidationError("row 1: evaluation set header must be 'a,b,relation'");
  std::vector<EvaluationPair> out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (csv::trim(lines[i]).empty()) continue;
    const std::string where = "row " + std::to_string(i + 1);
    const auto cells = csv::split_line(lines[i]);
    if (cells.size() != 3) throw ValidationError(where + ": malformed evaluation row");
    const std::string rel = normalize_name(cells[2]);
    Relation r;
    if (rel == "ally") r = Relation::Ally;
    else if (rel == "enemy") r = Relation::Enemy;
    else throw ValidationError(where + ": unknown relation '" + csv::trim(cells[2]) + "' (expected ally|enemy)");
    auto p = make_pair(cells[0], cells[1], r);
    auto [it, inserted] = seen.emplace(std::pair{p.a, p.b}, out.size());
    if (!inserted) {
      if (out[it->second].relation != r)
        throw ValidationError(where + ": conflicting labels for pair " + p.a + "," + p.b);
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<EvaluationPair> load_eval_set(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open evaluation set " + path);
  return parse_eval_set(in);
}

EvaluationReport score_partition(const Partition &partition, const std::vector<EvaluationPair> &pairs) {
  if (pairs.empty()) throw ValidationError("evaluation set is empty; accuracy is undefined");
  std::unordered_map<std::string, int> side;
  for (const auto &n : partition.set1) side[normalize_name(n)] = 1;
  for (const auto &n : partition.set2) {
    auto [it, inserted] = side.emplace(normalize_name(n), 2);
    if (!inserted) throw ValidationError("nation '" + it->first + "' appears in both sets");
  }

  EvaluationReport report;
  report.verdicts.reserve(pairs.size());
  for (const auto &p : pairs) {
    PairVerdict v{p, Placement::Missing, Verdict::Missing};
    const auto ia = side.find(p.a);
    const auto ib = side.find(p.b);
    if (ia != side.end() && ib != side.end()) {
      v.predicted = ia->second == ib->second ? Placement::Same : Placement::Opposite;
      const Placement expected = p.relation == Relation::Ally ? Placement::Same : Placement::Opposite;
      v.verdict = v.predicted == expected ? Verdict::Correct : Verdict::Wrong;
    }
    switch (v.verdict) {
    case Verdict::Correct: ++report.correct; break;
    case Verdict::Wrong: ++report.wrong; break;
    case Verdict::Missing: ++report.missing; break;
    }
    report.verdicts.push_back(std::move(v));
  }
  report.total = pairs.size();
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

std::string format_report_csv(const EvaluationReport &report) {
  std::ostringstream os;
  os << "a,b,expected,predicted,verdict\n";
  for (const auto &v : report.verdicts) {
    const auto expected = v.pair.relation == Relation::Ally ? Placement::Same : Placement::Opposite;
    os << csv::escape(v.pair.a) << ',' << csv::escape(v.pair.b) << ',' << to_string(expected) << ','
       << to_string(v.predicted) << ',' << to_string(v.verdict) << '\n';
  }
  return os.str();
}

std::string format_report_json(const EvaluationReport &report) {
  nlohmann::ordered_json j;
  j["correct"] = report.correct;
  j["wrong"] = report.wrong;
  j["missing"] = report.missing;
  j["total"] = report.total;
  j["accuracy"] = report.accuracy;
  return j.dump(2) + "\n";
}

}  // namespace balancer

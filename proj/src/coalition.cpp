#include "balancer/coalition.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "balancer/csv.hpp"
#include "balancer/errors.hpp"

namespace balancer {

std::string_view to_string(AssignReason r) noexcept {
  switch (r) {
  case AssignReason::Start: return "start";
  case AssignReason::StrongestPositive: return "strongest_positive";
  case AssignReason::StrongestNegative: return "strongest_negative";
  case AssignReason::Leftover: return "leftover";
  }
  return "?";
}

AppendResult single_append(const SignedGraph &g, NodeIndex country, std::vector<Side> &sides) {
  const Side own = sides.at(country);
  if (own == Side::None)
    throw std::logic_error("single_append: '" + g.name(country) + "' is not assigned to either set");

  const auto n = static_cast<NodeIndex>(g.node_count());
  AppendResult r;
  double best_pos = 0.0;
  double best_neg = 0.0;
  for (NodeIndex v = 0; v < n; ++v) {
    if (v == country || sides[v] != Side::None) continue;
    const double w = g.weight(country, v);
    if (w > 0.0 && (!r.positive || w > best_pos || (w == best_pos && g.name(v) < g.name(*r.positive)))) {
      r.positive = v;
      best_pos = w;
    } else if (w < 0.0 && (!r.negative || w < best_neg || (w == best_neg && g.name(v) < g.name(*r.negative)))) {
      r.negative = v;
      best_neg = w;
    }
  }
  if (r.positive) sides[*r.positive] = own;
  if (r.negative) sides[*r.negative] = opposite(own);
  return r;
}

CoalitionResult see_coalitions(const SignedGraph &g, NodeIndex start) {
  const std::size_t n = g.node_count();
  if (start >= n) throw std::out_of_range("start nation index out of range");

  CoalitionResult out;
  out.start = g.name(start);
  std::vector<Side> sides(n, Side::None);
  std::size_t step = 0;
  auto record = [&](NodeIndex v, AssignReason why, std::string via) {
    out.assignment_order.push_back({step++, g.name(v), sides[v], why, std::move(via)});
  };

  sides[start] = Side::Set1;
  record(start, AssignReason::Start, {});

  // to_pos holds set-1 members still to expand, to_neg set-2 members.
  std::deque<NodeIndex> to_pos{start};
  std::deque<NodeIndex> to_neg;
  auto expand = [&](std::deque<NodeIndex> &from, std::deque<NodeIndex> &same, std::deque<NodeIndex> &other) {
    if (from.empty()) return;
    const NodeIndex country = from.front();
    from.pop_front();
    const auto r = single_append(g, country, sides);
    if (r.positive) {
      record(*r.positive, AssignReason::StrongestPositive, g.name(country));
      same.push_back(*r.positive);
    }
    if (r.negative) {
      record(*r.negative, AssignReason::StrongestNegative, g.name(country));
      other.push_back(*r.negative);
    }
  };
  while (!to_pos.empty() || !to_neg.empty()) {
    expand(to_pos, to_pos, to_neg);
    expand(to_neg, to_neg, to_pos);
  }

  std::vector<NodeIndex> leftovers;
  for (NodeIndex v = 0; v < n; ++v)
    if (sides[v] == Side::None) leftovers.push_back(v);
  std::sort(leftovers.begin(), leftovers.end(), [&](NodeIndex x, NodeIndex y) { return g.name(x) < g.name(y); });
  for (NodeIndex v : leftovers) {
    double into1 = 0.0, into2 = 0.0;
    for (NodeIndex u = 0; u < n; ++u) {
      if (u == v) continue;
      if (sides[u] == Side::Set1) into1 += g.weight(u, v);
      else if (sides[u] == Side::Set2) into2 += g.weight(u, v);
    }
    sides[v] = into2 > into1 ? Side::Set2 : Side::Set1;
    record(v, AssignReason::Leftover, {});
  }

  for (NodeIndex v = 0; v < n; ++v) {
    if (sides[v] == Side::Set1) out.set1.push_back(g.name(v));
    else if (sides[v] == Side::Set2) out.set2.push_back(g.name(v));
    else throw InvariantViolation("nation '" + g.name(v) + "' left unassigned");
  }
  std::sort(out.set1.begin(), out.set1.end());
  std::sort(out.set2.begin(), out.set2.end());
  if (out.assignment_order.size() != n || out.set1.size() + out.set2.size() != n)
    throw InvariantViolation("coalition assignment did not place every nation exactly once");
  return out;
}

SweepResult sweep_starts(const SignedGraph &g, const std::vector<EvaluationPair> &pairs, unsigned jobs) {
  const std::size_t n = g.node_count();
  if (n == 0) throw ValidationError("cannot sweep an empty graph");
  std::vector<CoalitionResult> results(n);
  std::vector<EvaluationReport> reports(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t s = begin; s < n; s += stride) {
      results[s] = see_coalitions(g, static_cast<NodeIndex>(s));
      reports[s] = score_partition(results[s].partition(), pairs);
      results[s].eval_score = reports[s].correct;
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(jobs == 0 ? 1 : jobs, 1, n);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work, k, workers);
  }

  SweepResult out;
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    out.table.push_back({results[s].start, results[s].set1.size(), results[s].set2.size(), reports[s].correct,
                         reports[s].total, reports[s].accuracy});
    if (s == 0) continue;
    if (reports[s].correct > reports[best].correct ||
        (reports[s].correct == reports[best].correct && results[s].start < results[best].start))
      best = s;
  }
  out.best = std::move(results[best]);
  out.best_report = std::move(reports[best]);
  return out;
}

std::string format_partition_json(const CoalitionResult &r) {
  nlohmann::ordered_json j;
  j["set1"] = r.set1;
  j["set2"] = r.set2;
  j["start"] = r.start;
  j["eval_score"] = r.eval_score;
  return j.dump(2) + "\n";
}

std::string format_partition_csv(const CoalitionResult &r) {
  std::vector<std::pair<std::string, int>> rows;
  for (const auto &s : r.set1) rows.emplace_back(s, 1);
  for (const auto &s : r.set2) rows.emplace_back(s, 2);
  std::sort(rows.begin(), rows.end());
  std::ostringstream os;
  os << "nation,set\n";
  for (const auto &[name, set] : rows) os << csv::escape(name) << ',' << set << '\n';
  return os.str();
}

CoalitionResult parse_partition_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("partition JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("set1") || !j.contains("set2") || !j["set1"].is_array() || !j["set2"].is_array())
    throw ValidationError("partition JSON must be an object with 'set1' and 'set2' arrays");
  CoalitionResult r;
  auto names = [](const nlohmann::json &arr) {
    std::vector<std::string> out;
    for (const auto &v : arr) {
      if (!v.is_string()) throw ValidationError("partition JSON: nation names must be strings");
      out.push_back(normalize_name(v.get<std::string>()));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  r.set1 = names(j["set1"]);
  r.set2 = names(j["set2"]);
  std::vector<std::string> all = r.set1;
  all.insert(all.end(), r.set2.begin(), r.set2.end());
  std::sort(all.begin(), all.end());
  if (auto dup = std::adjacent_find(all.begin(), all.end()); dup != all.end())
    throw ValidationError("partition JSON: nation '" + *dup + "' listed more than once");
  if (j.contains("start") && j["start"].is_string()) r.start = normalize_name(j["start"].get<std::string>());
  if (j.contains("eval_score") && j["eval_score"].is_number_unsigned()) r.eval_score = j["eval_score"].get<std::size_t>();
  return r;
}

CoalitionResult load_partition_json(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open partition " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_partition_json(ss.str());
}

std::string format_start_scores_csv(const std::vector<StartScore> &table) {
  std::ostringstream os;
  os << "start,set1_size,set2_size,correct,total,accuracy\n";
  for (const auto &s : table)
    os << csv::escape(s.start) << ',' << s.set1_size << ',' << s.set2_size << ',' << s.correct << ',' << s.total
       << ',' << csv::format_double(s.accuracy) << '\n';
  return os.str();
}

std::string format_assignment_csv(const CoalitionResult &r) {
  std::ostringstream os;
  os << "step,nation,set,reason,via\n";
  for (const auto &a : r.assignment_order)
    os << a.step << ',' << csv::escape(a.nation) << ',' << (a.side == Side::Set1 ? 1 : 2) << ','
       << to_string(a.reason) << ',' << csv::escape(a.via) << '\n';
  return os.str();
}

}  // namespace balancer

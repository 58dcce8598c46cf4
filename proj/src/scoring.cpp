#include "balancer/scoring.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "balancer/csv.hpp"
#include "balancer/errors.hpp"

namespace balancer {

namespace {

double parse_real(std::string_view what, const std::string &text) {
  const std::string t = csv::trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ValidationError(std::string(what) + ": not a finite number: '" + t + "'");
  return v;
}

}  // namespace

CoefficientSet parse_coefficients(std::istream &in) {
  CoefficientSet coef;
  const std::map<std::string, double CoefficientSet::*> slots = {
      {"e", &CoefficientSet::e}, {"i", &CoefficientSet::i}, {"r", &CoefficientSet::r},
      {"d", &CoefficientSet::d}, {"w", &CoefficientSet::w}, {"b", &CoefficientSet::b},
      {"c", &CoefficientSet::c}, {"p", &CoefficientSet::p}, {"x", &CoefficientSet::x}};
  std::set<std::string> seen;
  std::size_t lineno = 0;
  for (const auto &raw : csv::read_lines(in)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    if (csv::trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "coefficients line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'name = value'");
    const std::string key = csv::trim(line.substr(0, eq));
    auto it = slots.find(key);
    if (it == slots.end()) throw ValidationError(where + ": unknown coefficient '" + key + "'");
    if (!seen.insert(key).second) throw ValidationError(where + ": duplicate coefficient '" + key + "'");
    const double v = parse_real(where, line.substr(eq + 1));
    if (v < 0) throw ValidationError(where + ": coefficient '" + key + "' must be nonnegative");
    coef.*(it->second) = v;
  }
  if (seen.size() != slots.size()) {
    std::string missing;
    for (const auto &[k, _] : slots)
      if (!seen.count(k)) missing += (missing.empty() ? "" : ",") + k;
    throw ValidationError("coefficients file is missing: " + missing);
  }
  return coef;
}

CoefficientSet load_coefficients(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coefficients file " + path);
  return parse_coefficients(in);
}

std::string format_coefficients(const CoefficientSet &coef) {
  std::ostringstream os;
  os << "e = " << csv::format_double(coef.e) << "\ni = " << csv::format_double(coef.i)
     << "\nr = " << csv::format_double(coef.r) << "\nd = " << csv::format_double(coef.d)
     << "\nw = " << csv::format_double(coef.w) << "\nb = " << csv::format_double(coef.b)
     << "\nc = " << csv::format_double(coef.c) << "\np = " << csv::format_double(coef.p)
     << "\nx = " << csv::format_double(coef.x) << '\n';
  return os.str();
}

DirectedScore score_directed(const NormalizedRecord &rec, const CoefficientSet &coef) {
  for (std::size_t k = 0; k < kFactorCount; ++k)
    if (!std::isfinite(rec.value(static_cast<Factor>(k))))
      throw ValidationError("non-finite '" + std::string(factor_column(static_cast<Factor>(k))) + "' for " +
                            rec.source + " -> " + rec.target);
  const double value = coef.e * rec.exports + coef.i * rec.imports + coef.b * rec.border + coef.d * rec.diplomatic +
                       coef.p * rec.peace_treaty + coef.x * rec.exchange_rate_ratio - coef.w * rec.war -
                       coef.c * rec.icj_case - coef.r * rec.religious_conflicts;
  return {rec.source, rec.target, value};
}

MergeRule parse_merge_rule(std::string_view s) {
  if (s == "mean") return MergeRule::Mean;
  if (s == "sum") return MergeRule::Sum;
  if (s == "min") return MergeRule::Min;
  throw ValidationError("unknown merge rule '" + std::string(s) + "' (expected mean|sum|min)");
}

std::string_view to_string(MergeRule m) noexcept {
  switch (m) {
  case MergeRule::Mean: return "mean";
  case MergeRule::Sum: return "sum";
  case MergeRule::Min: return "min";
  }
  return "?";
}

double merge_undirected(const DirectedScore &ab, const DirectedScore &ba, MergeRule rule) {
  if (ab.source != ba.target || ab.target != ba.source || ab.source == ab.target)
    throw ValidationError("cannot merge " + ab.source + "->" + ab.target + " with " + ba.source + "->" + ba.target);
  switch (rule) {
  case MergeRule::Mean: return (ab.value + ba.value) / 2.0;
  case MergeRule::Sum: return ab.value + ba.value;
  case MergeRule::Min: return std::min(ab.value, ba.value);
  }
  return 0.0;
}

ScoredGraph build_graph(const std::vector<NormalizedRecord> &records, const CoefficientSet &coef, MergeRule rule) {
  std::set<std::string> names;
  for (const auto &r : records) {
    names.insert(r.source);
    names.insert(r.target);
  }
  ScoredGraph out{SignedGraph(std::vector<std::string>(names.begin(), names.end())), {}};
  auto &g = out.graph;
  const std::size_t n = g.node_count();

  // directed slot a*n+b -> index into out.directed
  std::vector<std::ptrdiff_t> slot(n * n, -1);
  out.directed.reserve(records.size());
  for (const auto &r : records) {
    const auto a = g.index_of(r.source);
    const auto b = g.index_of(r.target);
    auto &s = slot[std::size_t{a} * n + b];
    if (s >= 0) throw ValidationError("duplicate directed score " + r.source + " -> " + r.target);
    s = static_cast<std::ptrdiff_t>(out.directed.size());
    out.directed.push_back(score_directed(r, coef));
  }

  std::vector<std::string> missing;
  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = 0; b < n; ++b)
      if (a != b && slot[std::size_t{a} * n + b] < 0) missing.push_back(g.name(a) + "->" + g.name(b));
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " directed pair(s) missing:";
    for (std::size_t k = 0; k < missing.size() && k < 10; ++k) msg += " " + missing[k];
    if (missing.size() > 10) msg += " ...";
    throw ValidationError(msg);
  }

  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = a + 1; b < n; ++b)
      g.set_weight(a, b,
                   merge_undirected(out.directed[slot[std::size_t{a} * n + b]],
                                    out.directed[slot[std::size_t{b} * n + a]], rule));
  return out;
}

std::string format_directed_scores(const std::vector<DirectedScore> &scores) {
  std::ostringstream os;
  os << "source,target,score\n";
  for (const auto &s : scores)
    os << csv::escape(s.source) << ',' << csv::escape(s.target) << ',' << csv::format_double(s.value) << '\n';
  return os.str();
}

std::string format_edge_list(const SignedGraph &g) {
  std::ostringstream os;
  os << "a,b,weight\n";
  for (const auto &e : g.edges())
    os << csv::escape(g.name(e.a)) << ',' << csv::escape(g.name(e.b)) << ',' << csv::format_double(e.weight) << '\n';
  return os.str();
}

SignedGraph parse_edge_list(std::istream &in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty() || csv::trim(lines.front()) != "a,b,weight")
    throw ValidationError("row 1: edge list header must be 'a,b,weight'");
  struct Row {
    std::string a, b;
    double w;
  };
  std::vector<Row> rows;
  std::set<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (csv::trim(lines[i]).empty()) continue;
    const auto cells = csv::split_line(lines[i]);
    const std::string where = "row " + std::to_string(i + 1);
    if (cells.size() != 3) throw ValidationError(where + ": malformed edge row");
    Row r{normalize_name(cells[0]), normalize_name(cells[1]), parse_real(where + ": field 'weight'", cells[2])};
    if (r.a.empty() || r.b.empty() || r.a == r.b) throw ValidationError(where + ": invalid endpoints");
    names.insert(r.a);
    names.insert(r.b);
    rows.push_back(std::move(r));
  }
  SignedGraph g(std::vector<std::string>(names.begin(), names.end()));
  std::vector<bool> filled(g.edge_count(), false);
  for (const auto &r : rows) {
    const auto p = g.pair_index(g.index_of(r.a), g.index_of(r.b));
    if (filled[p]) throw ValidationError("duplicate edge " + r.a + "," + r.b);
    filled[p] = true;
    g.set_weight_at(p, r.w);
  }
  for (PairIndex p = 0; p < filled.size(); ++p) {
    if (!filled[p]) {
      auto [a, b] = g.pair_nodes(p);
      throw ValidationError("edge list is not complete: missing " + g.name(a) + "," + g.name(b));
    }
  }
  return g;
}

SignedGraph load_edge_list(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open edge list " + path);
  return parse_edge_list(in);
}

}  // namespace balancer

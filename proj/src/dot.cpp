#include "balancer/dot.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "balancer/csv.hpp"
#include "balancer/errors.hpp"

namespace balancer {

namespace {

std::string quote(std::string_view id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_dot(const SignedGraph &g, const Partition &partition,
                       const std::optional<std::vector<std::string>> &subset) {
  std::vector<Side> side(g.node_count(), Side::None);
  for (const auto &name : partition.set1)
    if (auto v = g.find(name)) side[*v] = Side::Set1;
  for (const auto &name : partition.set2)
    if (auto v = g.find(name)) side[*v] = Side::Set2;

  std::vector<NodeIndex> nodes;
  if (subset) {
    for (const auto &name : *subset) {
      auto v = g.find(name);
      if (!v) throw ValidationError("subset nation '" + name + "' is not in the graph");
      nodes.push_back(*v);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  } else {
    for (NodeIndex v = 0; v < g.node_count(); ++v) nodes.push_back(v);
  }

  std::ostringstream os;
  os << "graph coalitions {\n";
  os << "  graph [overlap=false, splines=true];\n";
  os << "  node [style=filled, fontsize=10];\n";
  for (NodeIndex v : nodes) {
    os << "  " << quote(g.name(v));
    switch (side[v]) {
    case Side::Set1: os << " [coalition=1, fillcolor=yellow, shape=ellipse];\n"; break;
    case Side::Set2: os << " [coalition=2, fillcolor=palegreen, shape=box];\n"; break;
    case Side::None: os << " [coalition=0, fillcolor=lightgrey, shape=diamond];\n"; break;
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const NodeIndex a = nodes[i], b = nodes[j];
      const double w = g.weight(a, b);
      const bool positive = sign_of(w) == Sign::Positive;
      const bool intra = side[a] != Side::None && side[a] == side[b];
      os << "  " << quote(g.name(a)) << " -- " << quote(g.name(b)) << " [score=" << quote(csv::format_double(w))
         << ", sign=" << (positive ? "positive" : "negative") << ", color=" << (positive ? "blue" : "red")
         << ", style=" << (intra ? "solid" : "dashed") << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace balancer

#include "balancer/graph.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace balancer {

namespace {

// ASCII folds for U+00C0..U+00FF and U+0100..U+017F; '*' keeps the code point.
constexpr std::string_view kLatin1Fold = "aaaaaaaceeeeiiiidnooooo*ouuuuyts"
                                         "aaaaaaaceeeeiiiidnooooo*ouuuuyty";
constexpr std::string_view kLatinExtAFold = "aaaaaaccccccccddddeeeeeeeeeegggggggghhhhiiiiiiiiiiiijjkkk"
                                            "llllllllllnnnnnnnnnoooooooorrrrrrssssssssttttttuuuuuuuuuuuu"
                                            "wwyyyzzzzzzs";
static_assert(kLatin1Fold.size() == 64);
static_assert(kLatinExtAFold.size() == 128);

bool is_separator(char c) {
  return c == ' ' || c == '\t' || c == '_' || c == '-' || c == '\r' || c == '\n';
}

}  // namespace

std::string normalize_name(std::string_view raw) {
  std::string folded;
  folded.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c < 0x80) {
      folded.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    if ((c & 0xE0) == 0xC0 && i + 1 < raw.size()) {
      const auto c2 = static_cast<unsigned char>(raw[i + 1]);
      const unsigned cp = ((c & 0x1Fu) << 6) | (c2 & 0x3Fu);
      char repl = '*';
      if (cp >= 0xC0 && cp < 0x100) repl = kLatin1Fold[cp - 0xC0];
      else if (cp >= 0x100 && cp < 0x180) repl = kLatinExtAFold[cp - 0x100];
      if (repl != '*') {
        folded.push_back(repl);
        ++i;
        continue;
      }
    }
    folded.push_back(static_cast<char>(c));
  }

  std::string out;
  out.reserve(folded.size());
  bool pending_sep = false;
  for (char c : folded) {
    if (is_separator(c)) {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out.push_back('-');
    pending_sep = false;
    out.push_back(c);
  }
  return out;
}

std::string_view to_string(TriangleState s) noexcept {
  switch (s) {
  case TriangleState::PPP: return "PPP";
  case TriangleState::PPN: return "PPN";
  case TriangleState::PNN: return "PNN";
  case TriangleState::NNN: return "NNN";
  }
  return "?";
}

SignedGraph::SignedGraph(std::vector<std::string> names) : names_(std::move(names)) {
  const std::size_t n = names_.size();
  lookup_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    names_[v] = normalize_name(names_[v]);
    if (names_[v].empty()) throw std::invalid_argument("empty nation name at index " + std::to_string(v));
    if (!lookup_.emplace(names_[v], static_cast<NodeIndex>(v)).second)
      throw std::invalid_argument("duplicate nation name: " + names_[v]);
  }
  row_offset_.resize(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) row_offset_[a + 1] = row_offset_[a] + (n - 1 - a);
  weights_.assign(choose2(n), 0.0);
}

std::optional<NodeIndex> SignedGraph::find(std::string_view name) const {
  auto it = lookup_.find(normalize_name(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex SignedGraph::index_of(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw std::out_of_range("unknown nation: " + std::string(name));
}

PairIndex SignedGraph::pair_index(NodeIndex a, NodeIndex b) const {
  if (a == b || a >= names_.size() || b >= names_.size())
    throw std::out_of_range("invalid node pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
  if (a > b) std::swap(a, b);
  return row_offset_[a] + (b - a - 1);
}

std::pair<NodeIndex, NodeIndex> SignedGraph::pair_nodes(PairIndex p) const {
  if (p >= weights_.size()) throw std::out_of_range("pair index out of range");
  auto it = std::upper_bound(row_offset_.begin(), row_offset_.end(), p);
  const auto a = static_cast<NodeIndex>(std::distance(row_offset_.begin(), it) - 1);
  const auto b = static_cast<NodeIndex>(a + 1 + (p - row_offset_[a]));
  return {a, b};
}

std::vector<SignedEdge> SignedGraph::edges() const {
  std::vector<SignedEdge> out;
  out.reserve(weights_.size());
  const auto n = static_cast<NodeIndex>(names_.size());
  PairIndex p = 0;
  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = a + 1; b < n; ++b) out.push_back({a, b, weights_[p++]});
  return out;
}

std::array<PairIndex, 3> triangle_edges(const SignedGraph &g, const std::array<NodeIndex, 3> &nodes) {
  return {g.pair_index(nodes[0], nodes[1]), g.pair_index(nodes[0], nodes[2]),
          g.pair_index(nodes[1], nodes[2])};
}

TriangleState classify_triangle(const SignedGraph &g, const std::array<NodeIndex, 3> &nodes) {
  const auto e = triangle_edges(g, nodes);
  return classify(sign_of(g.weight_at(e[0])), sign_of(g.weight_at(e[1])), sign_of(g.weight_at(e[2])));
}

std::vector<Triangle> enumerate_triangles(const SignedGraph &g) {
  const auto n = static_cast<NodeIndex>(g.node_count());
  std::vector<Triangle> out;
  if (n < 3) return out;
  out.reserve(choose3(n));
  const auto w = g.weights();
  for (NodeIndex a = 0; a < n; ++a) {
    for (NodeIndex b = a + 1; b < n; ++b) {
      const Sign sab = sign_of(w[g.pair_index(a, b)]);
      const PairIndex ac0 = g.pair_index(a, b);  // (a,c) for c = b+1 is the next slot
      const PairIndex bc0 = b + 1 < n ? g.pair_index(b, b + 1) : 0;
      for (NodeIndex c = b + 1; c < n; ++c) {
        const Sign sac = sign_of(w[ac0 + (c - b)]);
        const Sign sbc = sign_of(w[bc0 + (c - b - 1)]);
        out.push_back({{a, b, c}, classify(sab, sac, sbc)});
      }
    }
  }
  return out;
}

TriangleIndexer::TriangleIndexer(std::size_t n) : first_offset_(n + 1, 0), prefix_(n + 1, 0) {
  for (std::size_t i = 0; i < n; ++i) {
    first_offset_[i + 1] = first_offset_[i] + choose2(n - 1 - i);
    prefix_[i + 1] = prefix_[i] + (n - 1 - i);
  }
  total_ = choose3(n);
}

BalanceCount count_unstable(const SignedGraph &g) {
  BalanceCount count;
  const auto n = static_cast<NodeIndex>(g.node_count());
  for (NodeIndex a = 0; a < n; ++a)
    for (NodeIndex b = a + 1; b < n; ++b)
      for (NodeIndex c = b + 1; c < n; ++c) {
        if (is_stable(classify_triangle(g, {a, b, c}))) ++count.stable;
        else ++count.unstable;
      }
  return count;
}

}  // namespace balancer

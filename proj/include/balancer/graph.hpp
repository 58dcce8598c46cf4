#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace balancer {

using NodeIndex = std::uint32_t;
using PairIndex = std::size_t;

/// Canonical nation name: trimmed, lowercase, Latin diacritics stripped,
/// runs of whitespace/underscores collapsed into a single hyphen.
/// Idempotent.
std::string normalize_name(std::string_view raw);

struct NationId {
  NodeIndex index = 0;
  std::string name;

  friend bool operator==(const NationId &, const NationId &) = default;
};

enum class Sign : std::uint8_t { Positive, Negative };

/// Zero counts as positive.
constexpr Sign sign_of(double weight) noexcept {
  return weight >= 0.0 ? Sign::Positive : Sign::Negative;
}

/// Named by sign multiset, independent of edge order.
enum class TriangleState : std::uint8_t { PPP, PPN, PNN, NNN };

constexpr bool is_stable(TriangleState s) noexcept {
  return s == TriangleState::PPP || s == TriangleState::PNN;
}

constexpr TriangleState classify(Sign s0, Sign s1, Sign s2) noexcept {
  const int negatives = (s0 == Sign::Negative) + (s1 == Sign::Negative) + (s2 == Sign::Negative);
  switch (negatives) {
  case 0: return TriangleState::PPP;
  case 1: return TriangleState::PPN;
  case 2: return TriangleState::PNN;
  default: return TriangleState::NNN;
  }
}

std::string_view to_string(TriangleState s) noexcept;

constexpr std::uint64_t choose2(std::uint64_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }
constexpr std::uint64_t choose3(std::uint64_t n) noexcept {
  return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6;
}

struct SignedEdge {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  double weight = 0.0;
};

/// Complete undirected weighted graph. Weights are stored densely, one slot
/// per unordered pair; slot order is lexicographic in (min, max).
class SignedGraph {
public:
  SignedGraph() = default;
  /// All weights start at 0. Names are normalized and must be unique.
  explicit SignedGraph(std::vector<std::string> names);

  std::size_t node_count() const noexcept { return names_.size(); }
  std::size_t edge_count() const noexcept { return weights_.size(); }

  const std::string &name(NodeIndex v) const { return names_.at(v); }
  const std::vector<std::string> &names() const noexcept { return names_; }
  std::optional<NodeIndex> find(std::string_view name) const;
  /// Throws std::out_of_range for unknown names.
  NodeIndex index_of(std::string_view name) const;

  PairIndex pair_index(NodeIndex a, NodeIndex b) const;
  std::pair<NodeIndex, NodeIndex> pair_nodes(PairIndex p) const;

  double weight(NodeIndex a, NodeIndex b) const { return weights_[pair_index(a, b)]; }
  double weight_at(PairIndex p) const { return weights_.at(p); }
  void set_weight(NodeIndex a, NodeIndex b, double w) { weights_[pair_index(a, b)] = w; }
  void set_weight_at(PairIndex p, double w) { weights_.at(p) = w; }

  std::span<const double> weights() const noexcept { return weights_; }
  std::vector<SignedEdge> edges() const;

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeIndex> lookup_;
  std::vector<double> weights_;
  std::vector<PairIndex> row_offset_;
};

struct Triangle {
  std::array<NodeIndex, 3> nodes{};  // strictly increasing
  TriangleState state = TriangleState::PPP;

  friend bool operator==(const Triangle &, const Triangle &) = default;
};

/// Pair slots of the triangle's edges: (n0,n1), (n0,n2), (n1,n2).
/// That is also ascending pair-index order.
std::array<PairIndex, 3> triangle_edges(const SignedGraph &g, const std::array<NodeIndex, 3> &nodes);

TriangleState classify_triangle(const SignedGraph &g, const std::array<NodeIndex, 3> &nodes);

/// All C(n,3) triangles in lexicographic order of sorted node triples,
/// classified against the current weights. Empty when n < 3.
std::vector<Triangle> enumerate_triangles(const SignedGraph &g);

/// Position of a sorted triple in the enumerate_triangles order.
class TriangleIndexer {
public:
  explicit TriangleIndexer(std::size_t n);
  std::size_t rank(NodeIndex a, NodeIndex b, NodeIndex c) const noexcept {
    return first_offset_[a] + (prefix_[b] - prefix_[a + 1]) + (c - b - 1);
  }
  std::size_t size() const noexcept { return total_; }

private:
  std::vector<std::size_t> first_offset_;
  std::vector<std::size_t> prefix_;
  std::size_t total_ = 0;
};

struct BalanceCount {
  std::uint64_t unstable = 0;
  std::uint64_t stable = 0;
  std::uint64_t total() const noexcept { return unstable + stable; }
  /// stable / total; 1.0 for graphs without triangles.
  double stable_ratio() const noexcept {
    return total() == 0 ? 1.0 : static_cast<double>(stable) / static_cast<double>(total());
  }
};

/// Full recount over every triangle.
BalanceCount count_unstable(const SignedGraph &g);

}  // namespace balancer

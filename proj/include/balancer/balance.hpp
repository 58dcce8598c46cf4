#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "balancer/graph.hpp"

namespace balancer {

/// 500,000 unstable triangles out of the 1,254,890 in a 197-nation graph.
inline constexpr double kDefaultThresholdFraction = 500000.0 / 1254890.0;

struct BalanceConfig {
  std::uint64_t seed = 0;
  /// Stop once unstable <= ceil(threshold_fraction * C(n,3)). 0 asks for full balance.
  double threshold_fraction = kDefaultThresholdFraction;
  /// Defaults to 10 * C(n,3) when unset.
  std::optional<std::uint64_t> max_flips;
  std::uint32_t max_rejections_per_draw = 64;
  /// Floor for the magnitude of a positive-to-negative flip.
  double min_magnitude = 1e-6;
  /// Trace sampling interval in flips.
  std::uint64_t trace_every = 1000;
  /// Full-recount audit interval in flips; 0 disables audits.
  std::uint64_t audit_every = 0;

  void validate() const;
};

enum class Termination { Threshold, Budget };
std::string_view to_string(Termination t) noexcept;

struct TracePoint {
  std::uint64_t flip_index = 0;
  std::uint64_t unstable = 0;
  friend bool operator==(const TracePoint &, const TracePoint &) = default;
};

struct BalanceTrace {
  std::uint64_t total_triangles = 0;
  std::uint64_t target_unstable = 0;
  std::uint64_t max_flips = 0;
  std::uint64_t initial_unstable = 0;
  std::uint64_t flips_applied = 0;
  std::uint64_t fallback_draws = 0;  // draws served by the unstable index after the rejection cap
  std::uint64_t audits_run = 0;
  std::vector<TracePoint> unstable_history;
  std::uint64_t final_unstable = 0;
  double final_ratio = 1.0;  // stable / total
  Termination terminated_by = Termination::Threshold;
};

/// Unstable-count target for a stopping fraction; an exact product (within
/// rounding noise) is not bumped up by ceil.
std::uint64_t threshold_count(double fraction, std::uint64_t total);

/// Result of toggling the least-magnitude edge of one triangle.
struct FlipResult {
  PairIndex edge = 0;
  double old_weight = 0.0;
  double new_weight = 0.0;
  double other_abs_sum = 0.0;  // |w_a| + |w_b| of the two untouched edges
};

/// Flips the edge of `nodes` with the least |weight| (ties: smaller pair
/// index). A negative edge becomes |w_a|+|w_b|; a non-negative edge becomes
/// -max(min_magnitude, |w_a|+|w_b|-|w_old|). Throws std::logic_error when the
/// triangle is already stable.
FlipResult flip_least_edge(SignedGraph &g, const std::array<NodeIndex, 3> &nodes, double min_magnitude = 1e-6);

struct FlipEvent {
  std::uint64_t flip_index = 0;  // 1-based
  std::size_t triangle = 0;
  std::array<NodeIndex, 3> nodes{};
  TriangleState state_before = TriangleState::PPP;
  TriangleState state_after = TriangleState::PPP;
  FlipResult flip;
  std::uint64_t unstable_after = 0;
};

/// Triangle list plus incrementally maintained unstable bookkeeping for one
/// graph. Single writer; not thread-safe.
class BalanceState {
public:
  explicit BalanceState(SignedGraph g);

  const SignedGraph &graph() const noexcept { return graph_; }
  SignedGraph release() && { return std::move(graph_); }
  const std::vector<Triangle> &triangles() const noexcept { return triangles_; }
  std::uint64_t unstable_count() const noexcept { return unstable_.size(); }
  std::uint64_t total() const noexcept { return triangles_.size(); }
  bool is_unstable(std::size_t t) const noexcept { return position_[t] != kAbsent; }

  /// Rejection-samples a uniform triangle index until an unstable one is hit;
  /// after `max_rejections` misses, draws uniformly from the unstable index
  /// instead. nullopt when nothing is unstable.
  std::optional<std::size_t> pick_unstable(std::mt19937_64 &rng, std::uint32_t max_rejections,
                                           bool *used_fallback = nullptr) const;

  struct Delta {
    std::size_t reclassified = 0;
    std::int64_t unstable_change = 0;
  };
  /// Reclassifies the n-2 triangles through `edge` after its weight changed.
  Delta incremental_update(PairIndex edge);

  /// flip_least_edge on triangle `t` followed by incremental_update.
  /// Throws InvariantViolation if the triangle is not stable afterwards.
  FlipEvent apply_flip(std::size_t t, double min_magnitude);

  /// Full recount; throws InvariantViolation when it disagrees with the
  /// maintained count or any stored triangle state.
  BalanceCount audit() const;

private:
  static constexpr std::uint32_t kAbsent = ~std::uint32_t{0};
  void mark(std::size_t t, bool unstable);

  SignedGraph graph_;
  TriangleIndexer indexer_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> unstable_;   // triangle indices
  std::vector<std::uint32_t> position_;   // triangle -> slot in unstable_, or kAbsent
  std::uint64_t flips_ = 0;
};

struct BalanceOutcome {
  SignedGraph graph;
  BalanceTrace trace;
};

/// Picks and flips unstable triangles until the threshold or the flip budget
/// is reached. Deterministic for a given graph and config.
BalanceOutcome run_balance(SignedGraph g, const BalanceConfig &cfg,
                           const std::function<void(const FlipEvent &)> &on_flip = {});

/// `flip_index,unstable_count`
std::string format_trace_csv(const BalanceTrace &trace);

}  // namespace balancer

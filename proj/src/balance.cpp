#include "balancer/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "balancer/errors.hpp"

namespace balancer {

void BalanceConfig::validate() const {
  if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
    throw ValidationError("threshold fraction must lie in [0, 1]");
  if (!(min_magnitude > 0.0) || !std::isfinite(min_magnitude))
    throw ValidationError("min magnitude must be a positive finite number");
  if (trace_every == 0) throw ValidationError("trace interval must be positive");
}

std::string_view to_string(Termination t) noexcept {
  return t == Termination::Threshold ? "threshold" : "budget";
}

std::uint64_t threshold_count(double fraction, std::uint64_t total) {
  const double exact = fraction * static_cast<double>(total);
  const double nearest = std::round(exact);
  if (std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(exact));
}

FlipResult flip_least_edge(SignedGraph &g, const std::array<NodeIndex, 3> &nodes, double min_magnitude) {
  const auto edges = triangle_edges(g, nodes);
  const std::array<double, 3> w = {g.weight_at(edges[0]), g.weight_at(edges[1]), g.weight_at(edges[2])};
  if (is_stable(classify(sign_of(w[0]), sign_of(w[1]), sign_of(w[2]))))
    throw std::logic_error("flip_least_edge called on a stable triangle");

  // edges[] is in ascending pair-index order, so strict < keeps the smaller index on ties
  std::size_t least = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(w[k]) < std::abs(w[least])) least = k;

  double others = 0.0;
  for (std::size_t k = 0; k < 3; ++k)
    if (k != least) others += std::abs(w[k]);

  // magnitudes can grow geometrically over long runs; saturate instead of reaching inf
  constexpr double kMaxMagnitude = std::numeric_limits<double>::max();
  FlipResult r{edges[least], w[least], 0.0, others};
  if (sign_of(w[least]) == Sign::Negative)
    r.new_weight = std::min(others, kMaxMagnitude);
  else
    r.new_weight = -std::clamp(others - std::abs(w[least]), min_magnitude, kMaxMagnitude);
  g.set_weight_at(r.edge, r.new_weight);
  return r;
}

BalanceState::BalanceState(SignedGraph g) : graph_(std::move(g)), indexer_(graph_.node_count()) {
  if (indexer_.size() >= kAbsent) throw ValidationError("graph too large for the triangle index");
  triangles_ = enumerate_triangles(graph_);
  position_.assign(triangles_.size(), kAbsent);
  for (std::size_t t = 0; t < triangles_.size(); ++t)
    if (!is_stable(triangles_[t].state)) mark(t, true);
}

void BalanceState::mark(std::size_t t, bool unstable) {
  const bool present = position_[t] != kAbsent;
  if (unstable == present) return;
  if (unstable) {
    position_[t] = static_cast<std::uint32_t>(unstable_.size());
    unstable_.push_back(static_cast<std::uint32_t>(t));
  } else {
    const std::uint32_t slot = position_[t];
    const std::uint32_t moved = unstable_.back();
    unstable_[slot] = moved;
    position_[moved] = slot;
    unstable_.pop_back();
    position_[t] = kAbsent;
  }
}

std::optional<std::size_t> BalanceState::pick_unstable(std::mt19937_64 &rng, std::uint32_t max_rejections,
                                                       bool *used_fallback) const {
  if (used_fallback) *used_fallback = false;
  if (unstable_.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> any(0, triangles_.size() - 1);
  for (std::uint32_t draw = 0; draw < max_rejections; ++draw) {
    const std::size_t t = any(rng);
    if (position_[t] != kAbsent) return t;
  }
  if (used_fallback) *used_fallback = true;
  std::uniform_int_distribution<std::size_t> among(0, unstable_.size() - 1);
  return unstable_[among(rng)];
}

BalanceState::Delta BalanceState::incremental_update(PairIndex edge) {
  const auto [a, b] = graph_.pair_nodes(edge);
  const auto n = static_cast<NodeIndex>(graph_.node_count());
  Delta d;
  const auto before = static_cast<std::int64_t>(unstable_.size());
  const auto w = graph_.weights();
  const Sign sab = sign_of(w[edge]);
  for (NodeIndex c = 0; c < n; ++c) {
    if (c == a || c == b) continue;
    const std::size_t t = c < a ? indexer_.rank(c, a, b) : c < b ? indexer_.rank(a, c, b) : indexer_.rank(a, b, c);
    const TriangleState s =
        classify(sab, sign_of(w[graph_.pair_index(a, c)]), sign_of(w[graph_.pair_index(b, c)]));
    triangles_[t].state = s;
    mark(t, !is_stable(s));
    ++d.reclassified;
  }
  d.unstable_change = static_cast<std::int64_t>(unstable_.size()) - before;
  return d;
}

FlipEvent BalanceState::apply_flip(std::size_t t, double min_magnitude) {
  FlipEvent ev;
  ev.flip_index = ++flips_;
  ev.triangle = t;
  ev.nodes = triangles_.at(t).nodes;
  ev.state_before = triangles_[t].state;
  ev.flip = flip_least_edge(graph_, ev.nodes, min_magnitude);
  incremental_update(ev.flip.edge);
  ev.state_after = triangles_[t].state;
  ev.unstable_after = unstable_.size();
  if (!is_stable(ev.state_after))
    throw InvariantViolation("triangle " + std::to_string(t) + " still unstable after flip " +
                             std::to_string(ev.flip_index));
  if (sign_of(ev.flip.old_weight) == sign_of(ev.flip.new_weight))
    throw InvariantViolation("flip " + std::to_string(ev.flip_index) + " did not toggle the edge sign");
  return ev;
}

BalanceCount BalanceState::audit() const {
  const BalanceCount full = count_unstable(graph_);
  if (full.unstable != unstable_.size())
    throw InvariantViolation("incremental unstable count " + std::to_string(unstable_.size()) +
                             " != full recount " + std::to_string(full.unstable));
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const bool unstable = !is_stable(classify_triangle(graph_, triangles_[t].nodes));
    if (unstable != (position_[t] != kAbsent) || unstable == is_stable(triangles_[t].state))
      throw InvariantViolation("stale classification for triangle " + std::to_string(t));
  }
  return full;
}

BalanceOutcome run_balance(SignedGraph g, const BalanceConfig &cfg,
                           const std::function<void(const FlipEvent &)> &on_flip) {
  cfg.validate();
  BalanceState state(std::move(g));
  BalanceTrace trace;
  trace.total_triangles = state.total();
  trace.target_unstable = threshold_count(cfg.threshold_fraction, trace.total_triangles);
  trace.max_flips = cfg.max_flips.value_or(10 * trace.total_triangles);
  trace.initial_unstable = state.unstable_count();
  trace.unstable_history.push_back({0, state.unstable_count()});

  std::mt19937_64 rng(cfg.seed);
  std::uint64_t flips = 0;
  while (state.unstable_count() > trace.target_unstable && flips < trace.max_flips) {
    bool fallback = false;
    const auto t = state.pick_unstable(rng, cfg.max_rejections_per_draw, &fallback);
    if (!t) break;
    if (fallback) ++trace.fallback_draws;
    const FlipEvent ev = state.apply_flip(*t, cfg.min_magnitude);
    ++flips;
    if (on_flip) on_flip(ev);
    if (flips % cfg.trace_every == 0) trace.unstable_history.push_back({flips, state.unstable_count()});
    if (cfg.audit_every != 0 && flips % cfg.audit_every == 0) {
      state.audit();
      ++trace.audits_run;
    }
  }
  if (cfg.audit_every != 0) {
    state.audit();
    ++trace.audits_run;
  }
  if (trace.unstable_history.back().flip_index != flips)
    trace.unstable_history.push_back({flips, state.unstable_count()});

  trace.flips_applied = flips;
  trace.final_unstable = state.unstable_count();
  trace.final_ratio = trace.total_triangles == 0
                          ? 1.0
                          : static_cast<double>(trace.total_triangles - trace.final_unstable) /
                                static_cast<double>(trace.total_triangles);
  trace.terminated_by =
      trace.final_unstable <= trace.target_unstable ? Termination::Threshold : Termination::Budget;
  return {std::move(state).release(), std::move(trace)};
}

std::string format_trace_csv(const BalanceTrace &trace) {
  std::ostringstream os;
  os << "flip_index,unstable_count\n";
  for (const auto &p : trace.unstable_history) os << p.flip_index << ',' << p.unstable << '\n';
  return os.str();
}

}  // namespace balancer

#include <doctest.h>

#include <cmath>

#include "balancer/balance.hpp"
#include "balancer/errors.hpp"
#include "support.hpp"

using namespace balancer;

namespace {

SignedGraph triangle(double ab, double ac, double bc) {
  SignedGraph g({"a", "b", "c"});
  g.set_weight(0, 1, ab);
  g.set_weight(0, 2, ac);
  g.set_weight(1, 2, bc);
  return g;
}

}  // namespace

TEST_CASE("flip examples") {
  {
    auto g = triangle(-0.2, -0.5, -0.9);
    const auto f = flip_least_edge(g, {0, 1, 2});
    CHECK(f.edge == g.pair_index(0, 1));
    CHECK(g.weight(0, 1) == doctest::Approx(1.4));
    CHECK(classify_triangle(g, {0, 1, 2}) == TriangleState::PNN);
  }
  {
    auto g = triangle(0.2, 0.5, -0.9);
    flip_least_edge(g, {0, 1, 2});
    CHECK(g.weight(0, 1) == doctest::Approx(-1.2));
    CHECK(classify_triangle(g, {0, 1, 2}) == TriangleState::PNN);
  }
  {
    auto g = triangle(1.0, 1.0, -0.1);
    flip_least_edge(g, {0, 1, 2});
    CHECK(g.weight(1, 2) == doctest::Approx(2.0));
    CHECK(classify_triangle(g, {0, 1, 2}) == TriangleState::PPP);
  }
}

TEST_CASE("flip edge cases") {
  auto stable = triangle(1, 1, 1);
  CHECK_THROWS_AS(flip_least_edge(stable, {0, 1, 2}), std::logic_error);

  // ties go to the smaller pair index
  auto tie = triangle(-0.5, -0.5, -0.5);
  CHECK(flip_least_edge(tie, {0, 1, 2}).edge == tie.pair_index(0, 1));

  // the positive-to-negative magnitude is floored so the sign really toggles
  auto floor = triangle(0.0, 0.0, -1e-9);
  const auto f = flip_least_edge(floor, {0, 1, 2}, 1e-6);
  CHECK(f.new_weight < 0);
  CHECK(f.new_weight == doctest::Approx(-1e-6));

  // the negative-to-positive magnitude saturates instead of overflowing
  auto huge = triangle(-1e308, -1e308, -1e308);
  flip_least_edge(huge, {0, 1, 2});
  CHECK(std::isfinite(huge.weight(0, 1)));
  CHECK(huge.weight(0, 1) > 0);
}

TEST_CASE("threshold count") {
  CHECK(threshold_count(kDefaultThresholdFraction, 1254890) == 500000);
  CHECK(threshold_count(0.5, 4) == 2);
  CHECK(threshold_count(0.3, 4) == 2);
  CHECK(threshold_count(0.0, 100) == 0);
  CHECK(threshold_count(1.0, 7) == 7);
}

TEST_CASE("config validation") {
  BalanceConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.threshold_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.threshold_fraction = 0.5;
  cfg.min_magnitude = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("picking unstable triangles") {
  std::mt19937_64 rng(1);
  BalanceState none(triangle(1, 1, 1));
  CHECK_FALSE(none.pick_unstable(rng, 64).has_value());

  BalanceState one(triangle(-1, -1, -1));
  CHECK(one.pick_unstable(rng, 64) == std::optional<std::size_t>{0});

  // the draw sequence replays for the same seed
  BalanceState big(testing::random_graph(15, 2));
  std::mt19937_64 r1(99), r2(99);
  for (int i = 0; i < 100; ++i) CHECK(big.pick_unstable(r1, 64) == big.pick_unstable(r2, 64));

  // with no rejection budget every draw comes from the unstable index
  bool fallback = false;
  const auto t = big.pick_unstable(r1, 0, &fallback);
  REQUIRE(t.has_value());
  CHECK(fallback);
  CHECK(big.is_unstable(*t));
}

TEST_CASE("an edge flip reclassifies n-2 triangles") {
  for (std::size_t n : {4u, 9u, 197u}) {
    BalanceState s(SignedGraph(testing::node_names(n)));
    const auto delta = s.incremental_update(0);
    CHECK(delta.reclassified == n - 2);
  }
}

TEST_CASE("incremental count equals the brute-force recount after every flip") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    BalanceState s(testing::random_graph(20, seed));
    std::mt19937_64 rng(seed);
    for (int flip = 0; flip < 1000; ++flip) {
      const auto t = s.pick_unstable(rng, 64);
      if (!t) break;
      const auto ev = s.apply_flip(*t, 1e-6);
      CHECK(is_stable(classify_triangle(s.graph(), ev.nodes)));
      REQUIRE(s.unstable_count() == count_unstable(s.graph()).unstable);
    }
  }
}

TEST_CASE("run_balance examples") {
  SUBCASE("already balanced graph takes no flips") {
    SignedGraph g(testing::node_names(8));
    for (PairIndex p = 0; p < g.edge_count(); ++p) g.set_weight_at(p, 1.0);
    const auto out = run_balance(g, {});
    CHECK(out.trace.flips_applied == 0);
    CHECK(out.trace.terminated_by == Termination::Threshold);
    CHECK(out.trace.final_ratio == 1.0);
  }
  SUBCASE("single all-negative triangle needs one flip to full balance") {
    BalanceConfig cfg;
    cfg.threshold_fraction = 0.0;
    const auto out = run_balance(triangle(-1, -1, -1), cfg);
    CHECK(out.trace.flips_applied == 1);
    CHECK(out.trace.final_unstable == 0);
    REQUIRE(out.trace.unstable_history.size() >= 2);
    CHECK(out.trace.unstable_history.front() == TracePoint{0, 1});
    CHECK(out.trace.unstable_history.back() == TracePoint{1, 0});
  }
  SUBCASE("budget stops the run") {
    BalanceConfig cfg;
    cfg.threshold_fraction = 0.0;
    cfg.max_flips = 5;
    const auto out = run_balance(testing::random_graph(20, 7), cfg);
    CHECK(out.trace.flips_applied == 5);
    CHECK(out.trace.terminated_by == Termination::Budget);
  }
}

TEST_CASE("run_balance is deterministic and audits pass") {
  BalanceConfig cfg;
  cfg.seed = 17;
  cfg.threshold_fraction = 0.2;
  cfg.max_flips = 3000;
  cfg.audit_every = 100;
  cfg.trace_every = 50;
  std::vector<PairIndex> edges_a, edges_b;
  const auto a = run_balance(testing::random_graph(16, 5), cfg, [&](const FlipEvent &e) { edges_a.push_back(e.flip.edge); });
  const auto b = run_balance(testing::random_graph(16, 5), cfg, [&](const FlipEvent &e) { edges_b.push_back(e.flip.edge); });
  CHECK(edges_a == edges_b);
  CHECK(a.trace.unstable_history == b.trace.unstable_history);
  CHECK(format_trace_csv(a.trace) == format_trace_csv(b.trace));
  CHECK(a.trace.audits_run > 0);
  CHECK(a.trace.final_unstable == count_unstable(a.graph).unstable);
  for (PairIndex p = 0; p < a.graph.edge_count(); ++p) CHECK(a.graph.weight_at(p) == b.graph.weight_at(p));

  cfg.seed = 18;
  std::vector<PairIndex> edges_c;
  run_balance(testing::random_graph(16, 5), cfg, [&](const FlipEvent &e) { edges_c.push_back(e.flip.edge); });
  CHECK(edges_c != edges_a);
}

TEST_CASE("trace csv") {
  BalanceConfig cfg;
  cfg.threshold_fraction = 0.0;
  const auto out = run_balance(triangle(-1, -1, -1), cfg);
  CHECK(format_trace_csv(out.trace) == "flip_index,unstable_count\n0,1\n1,0\n");
}

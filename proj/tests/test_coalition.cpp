#include <doctest.h>

#include <algorithm>

#include "balancer/coalition.hpp"
#include "balancer/errors.hpp"
#include "support.hpp"

using namespace balancer;

namespace {

using Names = std::vector<std::string>;

SignedGraph k4() {
  SignedGraph g({"a", "b", "c", "d"});
  g.set_weight(0, 1, 3.0);
  g.set_weight(0, 2, 1.0);
  g.set_weight(0, 3, -2.0);
  g.set_weight(1, 2, -0.7);
  g.set_weight(1, 3, -1.0);
  g.set_weight(2, 3, 0.5);
  return g;
}

void check_invariants(const SignedGraph &g, const CoalitionResult &r) {
  CHECK(r.set1.size() + r.set2.size() == g.node_count());
  CHECK(std::is_sorted(r.set1.begin(), r.set1.end()));
  CHECK(std::is_sorted(r.set2.begin(), r.set2.end()));
  Names all = r.set1;
  all.insert(all.end(), r.set2.begin(), r.set2.end());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(r.assignment_order.size() == g.node_count());
  CHECK(std::binary_search(r.set1.begin(), r.set1.end(), r.start));
}

}  // namespace

TEST_CASE("single append picks the strongest neighbours") {
  const auto g = k4();
  std::vector<Side> sides(4, Side::None);
  sides[0] = Side::Set1;
  const auto r = single_append(g, 0, sides);
  CHECK(r.positive == std::optional<NodeIndex>{1});
  CHECK(r.negative == std::optional<NodeIndex>{3});
  CHECK(sides[1] == Side::Set1);
  CHECK(sides[2] == Side::None);
  CHECK(sides[3] == Side::Set2);

  // everything assigned: nothing to add
  std::vector<Side> full(4, Side::Set1);
  const auto none = single_append(g, 0, full);
  CHECK_FALSE(none.positive.has_value());
  CHECK_FALSE(none.negative.has_value());

  // only positive candidates
  SignedGraph pos({"a", "b", "c"});
  pos.set_weight(0, 1, 1);
  pos.set_weight(0, 2, 2);
  std::vector<Side> s(3, Side::None);
  s[0] = Side::Set2;
  const auto only = single_append(pos, 0, s);
  CHECK(only.positive == std::optional<NodeIndex>{2});
  CHECK_FALSE(only.negative.has_value());
  CHECK(s[2] == Side::Set2);

  std::vector<Side> unassigned(4, Side::None);
  CHECK_THROWS_AS(single_append(g, 0, unassigned), std::logic_error);
}

TEST_CASE("zero weight edges qualify for neither side; ties go to the smaller name") {
  SignedGraph g({"a", "b", "c", "d"});
  g.set_weight(0, 1, 0.0);
  g.set_weight(0, 2, 2.0);
  g.set_weight(0, 3, 2.0);
  std::vector<Side> s(4, Side::None);
  s[0] = Side::Set1;
  const auto r = single_append(g, 0, s);
  CHECK(r.positive == std::optional<NodeIndex>{2});
  CHECK_FALSE(r.negative.has_value());
  CHECK(s[1] == Side::None);
}

TEST_CASE("hand trace on K3") {
  SignedGraph g({"A", "B", "C"});
  g.set_weight(0, 1, 1);
  g.set_weight(0, 2, -1);
  g.set_weight(1, 2, -1);
  const auto r = see_coalitions(g, 0);
  CHECK(r.set1 == Names{"a", "b"});
  CHECK(r.set2 == Names{"c"});
  check_invariants(g, r);
}

TEST_CASE("hand trace on K4") {
  // a: b(+3) joins set 1, d(-2) joins set 2; d: c(+0.5) joins d in set 2; b and c find nothing new.
  const auto g = k4();
  const auto r = see_coalitions(g, 0);
  CHECK(r.set1 == Names{"a", "b"});
  CHECK(r.set2 == Names{"c", "d"});
  REQUIRE(r.assignment_order.size() == 4);
  CHECK(r.assignment_order[0].nation == "a");
  CHECK(r.assignment_order[1].nation == "b");
  CHECK(r.assignment_order[2].nation == "d");
  CHECK(r.assignment_order[3].nation == "c");
  CHECK(r.assignment_order[3].via == "d");
  CHECK(r.assignment_order[3].reason == AssignReason::StrongestPositive);
}

TEST_CASE("single nation and unreached nations") {
  SignedGraph one({"solo"});
  const auto r = see_coalitions(one, 0);
  CHECK(r.set1 == Names{"solo"});
  CHECK(r.set2.empty());

  // all-zero graph: nothing is reachable, so every other nation is a leftover tied into set 1
  SignedGraph flat({"a", "b", "c"});
  const auto f = see_coalitions(flat, 1);
  CHECK(f.set1 == Names{"a", "b", "c"});
  CHECK(f.assignment_order[1].reason == AssignReason::Leftover);

}

TEST_CASE("property: random graphs keep the partition invariants") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing::random_graph(5 + seed % 17, seed);
    for (NodeIndex s = 0; s < g.node_count(); s += 3) {
      const auto r = see_coalitions(g, s);
      check_invariants(g, r);
      const auto again = see_coalitions(g, s);
      CHECK(again.set1 == r.set1);
      CHECK(again.set2 == r.set2);
    }
  }
}

TEST_CASE("sweep over starts") {
  const auto g = testing::random_graph(14, 21);
  const std::vector<EvaluationPair> pairs = {make_pair("n0000", "n0001", Relation::Enemy),
                                             make_pair("n0002", "n0003", Relation::Ally),
                                             make_pair("n0004", "n0009", Relation::Enemy)};
  const auto one = sweep_starts(g, pairs, 1);
  CHECK(one.table.size() == 14);
  const auto many = sweep_starts(g, pairs, 4);
  CHECK(one.best.start == many.best.start);
  CHECK(one.best.set1 == many.best.set1);
  for (std::size_t i = 0; i < one.table.size(); ++i) CHECK(one.table[i].correct == many.table[i].correct);
  for (const auto &row : one.table) CHECK(row.correct <= one.best.eval_score);
  // the best start is the lexicographically first among the maximal scores
  const auto first_best = std::find_if(one.table.begin(), one.table.end(),
                                       [&](const StartScore &s) { return s.correct == one.best.eval_score; });
  CHECK(first_best->start == one.best.start);

  SignedGraph pos(testing::node_names(6));
  for (PairIndex p = 0; p < pos.edge_count(); ++p) pos.set_weight_at(p, 1.0 + static_cast<double>(p));
  const auto all_pos = sweep_starts(pos, pairs, 2);
  for (const auto &row : all_pos.table) {
    CHECK(row.set2_size == 0);
    CHECK(row.correct == all_pos.table.front().correct);
  }
}

TEST_CASE("partition json round trip and csv") {
  const auto r = see_coalitions(k4(), 0);
  const auto back = parse_partition_json(format_partition_json(r));
  CHECK(back.set1 == r.set1);
  CHECK(back.set2 == r.set2);
  CHECK(back.start == r.start);
  CHECK(format_partition_csv(r) == "nation,set\na,1\nb,1\nc,2\nd,2\n");
  CHECK_THROWS_AS(parse_partition_json(R"({"set1":["a"],"set2":["a"]})"), ValidationError);
  CHECK_THROWS_AS(parse_partition_json("not json"), ValidationError);
}

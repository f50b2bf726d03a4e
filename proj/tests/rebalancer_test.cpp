// Copyright 2026 The coopnet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <coopnet/error.hpp>
#include <coopnet/optimizer.hpp>
#include <coopnet/rebalancer.hpp>

#include "support/demo.hpp"
#include "support/random_games.hpp"

namespace cn = coopnet;
namespace ct = coopnet::testing;
using cn::Rational;

namespace {

Rational q(std::int64_t num, std::int64_t den = 1) { return cn::make_rational(num, den); }

cn::SearchBounds bounded(cn::Count k) {
  cn::SearchBounds b;
  b.max_units_per_edge = k;
  return b;
}

}  // namespace

TEST_CASE("uniform rebalance of the demo pays the idle shipper") {
  const cn::Outcome baseline = ct::demo_baseline();
  const auto& game = baseline.game;
  const cn::GoodsFlow improved = ct::demo_both_via_s1(game);
  const cn::ValueFlow value = cn::pareto_rebalance(baseline, improved, cn::uniform_weights(game));
  const cn::Outcome after{game, improved, value};

  CHECK(cn::payoff(after, "c1") == q(9, 2));
  CHECK(cn::payoff(after, "c2") == q(9, 2));
  CHECK(cn::payoff(after, "s1") == q(7, 2));
  CHECK(cn::payoff(after, "s2") == q(7, 2));
  CHECK(cn::budget_identity_gap(after) == 0);

  // Hub c1 settles with everyone else. Before transfers: c1 earns 10, c2 12,
  // s1 -6 (two shipments at 3), s2 0.
  const cn::CompanyIndex c1 = game.company_index("c1");
  const cn::CompanyIndex c2 = game.company_index("c2");
  const cn::CompanyIndex s1 = game.company_index("s1");
  const cn::CompanyIndex s2 = game.company_index("s2");
  CHECK(value.size() == 3);
  CHECK(value.entries().at({c1, s1}) == q(19, 2));
  CHECK(value.entries().at({c1, s2}) == q(7, 2));
  CHECK(value.entries().at({c2, c1}) == q(15, 2));
  // s2 ships nothing yet is paid.
  CHECK(cn::node_flows(after, "s2").out.is_zero());
  CHECK(value.received_by(s2) == q(7, 2));
}

TEST_CASE("weighted rebalance of the demo") {
  const cn::Outcome baseline = ct::demo_baseline();
  const auto& game = baseline.game;
  cn::WeightVector w;
  w.weights = {{"c1", q(1, 2)}, {"c2", q(1, 6)}, {"s1", q(1, 6)}, {"s2", q(1, 6)}};
  const cn::GoodsFlow improved = ct::demo_both_via_s1(game);
  const cn::Outcome after{game, improved, cn::pareto_rebalance(baseline, improved, w)};
  CHECK(cn::payoff(after, "c1") == 5);
  CHECK(cn::payoff(after, "c2") == q(13, 3));
  CHECK(cn::payoff(after, "s1") == q(10, 3));
  CHECK(cn::payoff(after, "s2") == q(10, 3));
  for (cn::CompanyIndex c = 0; c < game.company_count(); ++c) CHECK(cn::payoff(after, c) > cn::payoff(baseline, c));
}

TEST_CASE("pareto_rebalance preconditions") {
  const cn::Outcome baseline = ct::demo_baseline();
  const auto& game = baseline.game;
  const auto uniform = cn::uniform_weights(game);

  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, baseline.goods, uniform), cn::NoSurplus);
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, cn::GoodsFlow{}, uniform), cn::NoSurplus);

  const cn::GoodsFlow improved = ct::demo_both_via_s1(game);
  cn::WeightVector w = uniform;
  w.weights["c1"] = q(1, 2);
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, improved, w), cn::BadWeights);
  w = uniform;
  w.weights["c1"] = 0;
  w.weights["c2"] = q(1, 2);
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, improved, w), cn::BadWeights);
  w = uniform;
  w.weights.erase("s2");
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, improved, w), cn::BadWeights);
  w = uniform;
  w.weights["zz"] = q(0);
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, improved, w), cn::BadWeights);

  cn::GoodsFlow leaky = improved;
  leaky.add_sale(game.company_index("c2"), game.good_index("deliv2"), 1);
  CHECK_THROWS_AS(cn::pareto_rebalance(baseline, leaky, uniform), cn::InvalidOutcome);
}

TEST_CASE("realize_payoffs") {
  const cn::Outcome baseline = ct::demo_baseline();
  const auto& game = baseline.game;
  const cn::GoodsFlow flow = ct::demo_both_via_s1(game);

  SUBCASE("targets equal to the transfer-free payoffs need no transfers") {
    std::map<std::string, Rational> targets;
    for (cn::CompanyIndex c = 0; c < game.company_count(); ++c) targets[game.company(c).id] = cn::external_net(game, flow, c);
    CHECK(cn::realize_payoffs(game, flow, targets).empty());
  }
  SUBCASE("targets must add up to the TNV") {
    const std::map<std::string, Rational> targets = {{"c1", q(5)}, {"c2", q(4)}, {"s1", q(4)}, {"s2", q(4)}};
    CHECK_THROWS_AS(cn::realize_payoffs(game, flow, targets), cn::TargetSumMismatch);
    CHECK_THROWS_AS(cn::realize_payoffs(game, flow, {{"c1", q(16)}}), cn::TargetSumMismatch);
    CHECK_THROWS_AS(cn::realize_payoffs(game, flow, {{"c1", q(16)}, {"c2", 0}, {"s1", 0}, {"s2", 0}, {"x", 0}}),
                    cn::UnknownCompany);
  }
  SUBCASE("arbitrary targets are met exactly, hub included") {
    ct::Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const cn::NetworkGame g = ct::random_game(rng);
      const cn::GoodsFlow f = ct::random_goods_flow(rng, g);
      std::map<std::string, Rational> targets;
      Rational sum;
      for (cn::CompanyIndex c = 1; c < g.company_count(); ++c) {
        targets[g.company(c).id] = q(ct::uniform(rng, -30, 30), ct::uniform(rng, 1, 6));
        sum += targets[g.company(c).id];
      }
      targets[g.company(0).id] = cn::tnv(g, f) - sum;
      const cn::ValueFlow value = cn::realize_payoffs(g, f, targets);
      CHECK(value.size() <= g.company_count() - 1);
      for (cn::CompanyIndex c = 0; c < g.company_count(); ++c) {
        CHECK(cn::payoff(g, f, value, c) == targets[g.company(c).id]);
      }
    }
  }
}

TEST_CASE("collapse_nodes on the demo") {
  const cn::Outcome baseline = ct::demo_baseline();

  SUBCASE("cargo owner with its shipper") {
    const cn::CollapsedOutcome merged = cn::collapse_nodes(baseline, "c1", "s1");
    CHECK(merged.outcome.game.company_count() == 3);
    CHECK(merged.provenance == std::pair<std::string, std::string>{"c1", "s1"});
    CHECK(cn::payoff(merged.outcome, merged.merged_id) == 7);
    CHECK(cn::tnv(merged.outcome) == 14);
    CHECK(cn::payoff(merged.outcome, "c2") == 4);
    CHECK(cn::payoff(merged.outcome, "s2") == 3);
    // The c1<->s1 shipment and fee are now internal.
    const auto& game = merged.outcome.game;
    const auto m = game.company_index(merged.merged_id);
    CHECK(merged.outcome.value.paid_by(m) == 0);
    CHECK(merged.outcome.value.received_by(m) == 0);
    const cn::CompanySpec& spec = game.company(m);
    CHECK(spec.producible == std::set<cn::GoodIndex>{game.good_index("deliv1"), game.good_index("svc1")});
    CHECK(spec.endowment[game.good_index("raw1")] == 1);
  }
  SUBCASE("both cargo owners") {
    const cn::CollapsedOutcome merged = cn::collapse_nodes(baseline, "c1", "c2");
    CHECK(cn::payoff(merged.outcome, merged.merged_id) == 8);
    CHECK(cn::tnv(merged.outcome) == 14);
    CHECK(cn::budget_identity_gap(merged.outcome) == 0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(cn::collapse_nodes(baseline, "c1", "c1"), cn::IdenticalNodes);
    CHECK_THROWS_AS(cn::collapse_nodes(baseline, "c1", "zz"), cn::UnknownCompany);
  }
}

TEST_CASE("collapsing two idle companies yields a zero payoff") {
  cn::CompanySpec a;
  a.id = "a";
  a.producible = {0};
  a.cost.fixed = q(3);
  cn::CompanySpec b = a;
  b.id = "b";
  const cn::Outcome outcome{cn::NetworkGame({{"g", "g"}}, {a, b}), {}, {}};
  const cn::CollapsedOutcome merged = cn::collapse_nodes(outcome, "b", "a");
  CHECK(merged.merged_id == "b+a");
  CHECK(merged.outcome.game.company_count() == 1);
  CHECK(cn::payoff(merged.outcome, merged.merged_id) == 0);
}

TEST_CASE("collapse preserves TNV and the pair's payoff sum") {
  ct::Rng rng(77);
  int checked = 0;
  while (checked < 150) {
    const cn::NetworkGame game = ct::random_searchable_game(rng, bounded(1), 5000);
    if (game.company_count() < 2) continue;
    const cn::Outcome outcome{game, ct::random_valid_flow(rng, game, bounded(1)), ct::random_value_flow(rng, game)};
    const int n = static_cast<int>(game.company_count());
    const auto i = static_cast<cn::CompanyIndex>(ct::uniform(rng, 0, n - 1));
    auto j = static_cast<cn::CompanyIndex>(ct::uniform(rng, 0, n - 2));
    if (j >= i) ++j;
    const cn::CollapsedOutcome merged = cn::collapse_nodes(outcome, game.company(i).id, game.company(j).id);
    CHECK(merged.outcome.game.company_count() == game.company_count() - 1);
    CHECK(cn::tnv(merged.outcome) == cn::tnv(outcome));
    CHECK(cn::payoff(merged.outcome, merged.merged_id) == cn::payoff(outcome, i) + cn::payoff(outcome, j));
    for (cn::CompanyIndex c = 0; c < game.company_count(); ++c) {
      if (c == i || c == j) continue;
      CHECK(cn::payoff(merged.outcome, game.company(c).id) == cn::payoff(outcome, c));
    }
    CHECK(cn::validate_game(merged.outcome.game).empty());
    ++checked;
  }
}

TEST_CASE("rebalancing any TNV gain makes every company strictly better off") {
  ct::Rng rng(99);
  int improved_cases = 0;
  for (int trial = 0; trial < 400 && improved_cases < 60; ++trial) {
    const cn::NetworkGame game = ct::random_searchable_game(rng, bounded(1), 5000);
    const cn::Outcome baseline{game, ct::random_valid_flow(rng, game, bounded(1)), ct::random_value_flow(rng, game)};
    const cn::SearchResult best = cn::brute_force_max_tnv(game, bounded(1));
    if (best.tnv <= cn::tnv(baseline)) {
      CHECK_THROWS_AS(cn::pareto_rebalance(baseline, best.flow, cn::uniform_weights(game)), cn::NoSurplus);
      continue;
    }
    const cn::ValueFlow value = cn::pareto_rebalance(baseline, best.flow, cn::uniform_weights(game));
    const cn::Outcome after{game, best.flow, value};
    for (cn::CompanyIndex c = 0; c < game.company_count(); ++c) CHECK(cn::payoff(after, c) > cn::payoff(baseline, c));
    CHECK(cn::budget_identity_gap(after) == 0);
    ++improved_cases;
  }
  CHECK(improved_cases >= 30);
}

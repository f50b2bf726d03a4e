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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Expected values for the demo are worked out by hand from
// the shipping parameters (10, 12, 3, 5, 6, 8).

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <coopnet/optimizer.hpp>
#include <coopnet/rebalancer.hpp>
#include <coopnet/scenario.hpp>

#include "support/demo.hpp"
#include "support/random_games.hpp"

namespace cn = coopnet;
namespace ct = coopnet::testing;
using cn::Rational;

namespace {

struct Verdict {
  bool ok = true;
  int cases = 0;
  std::string note;

  void expect(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      note = what;
    }
  }
};

cn::SearchBounds bounded(cn::Count k) {
  cn::SearchBounds b;
  b.max_units_per_edge = k;
  return b;
}

bool run_criterion(const char* name, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.ok = false;
    v.note = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && seconds >= limit_seconds) {
    v.expect(false, "took " + std::to_string(seconds) + " s");
    v.ok = false;
  }
  std::printf("%s %s: %s (%d cases, %.3f s%s%s)%s%s\n", name, v.ok ? "PASS" : "FAIL", title, v.cases, seconds,
              limit_seconds > 0 ? ", limit " : "", limit_seconds > 0 ? (std::to_string(limit_seconds).substr(0, 4) + " s").c_str() : "",
              v.note.empty() ? "" : ": ", v.note.c_str());
  std::fflush(stdout);
  return v.ok;
}

Verdict budget_identity() {
  Verdict v;
  ct::Rng rng(1001);
  for (int i = 0; i < 600; ++i) {
    const cn::NetworkGame game = ct::random_game(rng);
    const cn::Count bound = ct::uniform(rng, 1, 2);
    const cn::Outcome outcome{game, ct::random_goods_flow(rng, game, bound), ct::random_value_flow(rng, game)};
    v.expect(cn::budget_identity_gap(outcome) == 0, "nonzero gap in outcome " + std::to_string(i));
    ++v.cases;
  }
  return v;
}

Verdict demo_baseline() {
  Verdict v;
  const cn::Outcome o = ct::demo_baseline();
  // c_i: price - fee; s_i: fee - cost.
  v.expect(cn::payoff(o, "c1") == 10 - 6, "c1");
  v.expect(cn::payoff(o, "c2") == 12 - 8, "c2");
  v.expect(cn::payoff(o, "s1") == 6 - 3, "s1");
  v.expect(cn::payoff(o, "s2") == 8 - 5, "s2");
  v.expect(cn::tnv(o) == 14, "TNV");
  v.expect(cn::budget_identity_gap(o) == 0, "gap");
  v.expect(cn::check_conservation(o).empty(), "baseline conserves goods");
  v.cases = 1;
  return v;
}

Verdict demo_optimization() {
  Verdict v;
  const cn::Outcome base = ct::demo_baseline();
  const cn::NetworkGame& game = base.game;
  const cn::SearchResult brute = cn::brute_force_max_tnv(game, bounded(2));
  // Both deliveries sold (10 + 12) minus two shipments at the cheaper cost 3.
  v.expect(brute.tnv == 16, "brute force TNV " + cn::format_rational(brute.tnv));
  v.expect(brute.flow == ct::demo_both_via_s1(game), "brute force flow is not both-via-s1");
  const cn::SearchResult greedy = cn::greedy_improve(game, base.goods, bounded(2), 1000);
  v.expect(greedy.tnv == 16, "greedy TNV " + cn::format_rational(greedy.tnv));
  v.expect(cn::check_conservation(game, greedy.flow).empty(), "greedy flow conserves goods");
  v.cases = 2;
  return v;
}

Verdict strict_improvement() {
  Verdict v;
  {
    const cn::Outcome base = ct::demo_baseline();
    const cn::GoodsFlow improved = ct::demo_both_via_s1(base.game);
    const cn::Outcome after{base.game, improved, cn::pareto_rebalance(base, improved, cn::uniform_weights(base.game))};
    v.expect(cn::payoff(after, "s2") == cn::make_rational(7, 2), "demo: s2 not paid 7/2");
    v.expect(cn::node_flows(after, "s2").out.is_zero(), "demo: s2 ships");
    for (cn::CompanyIndex c = 0; c < base.game.company_count(); ++c) {
      v.expect(cn::payoff(after, c) > cn::payoff(base, c), "demo: not strictly better");
    }
    ++v.cases;
  }
  ct::Rng rng(4004);
  int attempts = 0;
  while (v.cases < 121 && attempts < 5000) {
    ++attempts;
    const cn::Count bound = ct::uniform(rng, 1, 2);
    const cn::NetworkGame game = ct::random_searchable_game(rng, bounded(bound), 4000);
    const cn::Outcome base{game, ct::random_valid_flow(rng, game, bounded(bound)), ct::random_value_flow(rng, game)};
    const cn::SearchResult best = cn::brute_force_max_tnv(game, bounded(bound));
    if (best.tnv <= cn::tnv(base)) continue;
    cn::WeightVector w = cn::uniform_weights(game);
    if (ct::chance(rng, 0.5)) {
      // Random positive weights summing to one.
      Rational total;
      for (auto& [id, weight] : w.weights) total += weight = ct::uniform(rng, 1, 9);
      for (auto& [id, weight] : w.weights) weight /= total;
    }
    const cn::Outcome after{game, best.flow, cn::pareto_rebalance(base, best.flow, w)};
    for (cn::CompanyIndex c = 0; c < game.company_count(); ++c) {
      v.expect(cn::payoff(after, c) > cn::payoff(base, c), "random case " + std::to_string(v.cases));
    }
    v.expect(cn::budget_identity_gap(after) == 0, "gap");
    ++v.cases;
  }
  v.expect(v.cases >= 101, "only " + std::to_string(v.cases) + " improvable games found");
  return v;
}

Verdict collapse_invariance() {
  Verdict v;
  ct::Rng rng(5005);
  while (v.cases < 150) {
    const cn::Count bound = ct::uniform(rng, 1, 2);
    const cn::NetworkGame game = ct::random_searchable_game(rng, bounded(bound), 4000);
    if (game.company_count() < 2) continue;
    const cn::Outcome o{game, ct::random_valid_flow(rng, game, bounded(bound)), ct::random_value_flow(rng, game)};
    const int n = static_cast<int>(game.company_count());
    const auto i = static_cast<cn::CompanyIndex>(ct::uniform(rng, 0, n - 1));
    auto j = static_cast<cn::CompanyIndex>(ct::uniform(rng, 0, n - 2));
    if (j >= i) ++j;
    const cn::CollapsedOutcome merged = cn::collapse_nodes(o, game.company(i).id, game.company(j).id);
    v.expect(cn::tnv(merged.outcome) == cn::tnv(o), "TNV changed");
    v.expect(cn::payoff(merged.outcome, merged.merged_id) == cn::payoff(o, i) + cn::payoff(o, j), "pair sum");
    ++v.cases;
  }
  return v;
}

Verdict oracle_agreement() {
  Verdict v;
  ct::Rng rng(6006);
  for (int k = 0; k < 60; ++k) {
    const cn::Count bound = k % 3 == 2 ? 2 : 1;
    const cn::NetworkGame game = ct::random_searchable_game(rng, bounded(bound), 20000);
    const std::vector<cn::GoodsFlow> flows = cn::collect_goods_flows(game, bounded(bound));
    Rational best = cn::tnv(game, cn::GoodsFlow{});
    for (const cn::GoodsFlow& f : flows) {
      v.expect(cn::check_conservation(game, f).empty(), "enumerated flow violates conservation");
      if (const Rational t = cn::tnv(game, f); t > best) best = t;
    }
    v.expect(cn::brute_force_max_tnv(game, bounded(bound)).tnv == best, "max disagrees on game " + std::to_string(k));
    v.expect(cn::brute_force_max_tnv(game, bounded(bound), 3).tnv == best, "threaded max disagrees");
    ++v.cases;
  }
  return v;
}

Verdict scale_linearity() {
  Verdict v;
  const Rational c = cn::make_rational(3, 7);
  auto check = [&](const cn::Outcome& o) {
    const cn::Outcome scaled{ct::scale_money(o.game, c), o.goods, ct::scale_value(o.value, c)};
    for (cn::CompanyIndex i = 0; i < o.game.company_count(); ++i) {
      v.expect(cn::payoff(scaled, i) == c * cn::payoff(o, i), "payoff not scaled");
    }
    v.expect(cn::tnv(scaled) == c * cn::tnv(o), "TNV not scaled");
    ++v.cases;
  };
  check(ct::demo_baseline());
  ct::Rng rng(7007);
  for (int k = 0; k < 50; ++k) {
    const cn::NetworkGame game = ct::random_game(rng);
    check(cn::Outcome{game, ct::random_goods_flow(rng, game), ct::random_value_flow(rng, game)});
  }
  return v;
}

Verdict round_trip() {
  Verdict v;
  auto check = [&](const cn::ScenarioDocument& doc) {
    const std::string bytes = cn::render_scenario(doc);
    v.expect(cn::render_scenario(cn::load_scenario(bytes)) == bytes, "scenario bytes differ");
    if (doc.baseline) {
      const std::string report = cn::render_report(*doc.baseline, cn::ReportFormat::Structured);
      const cn::ScenarioDocument back = cn::load_scenario(report);
      v.expect(cn::render_report(*back.baseline, cn::ReportFormat::Structured) == report, "report bytes differ");
    }
    ++v.cases;
  };
  check(ct::demo());
  ct::Rng rng(8008);
  for (int k = 0; k < 20; ++k) {
    cn::ScenarioDocument doc;
    doc.game = ct::random_game(rng);
    cn::GoodsFlow goods = ct::random_goods_flow(rng, doc.game);
    goods.normalize();
    doc.baseline = cn::Outcome{doc.game, goods, ct::random_value_flow(rng, doc.game)};
    doc.metadata["seed"] = std::to_string(k);
    check(doc);
  }
  return v;
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion("AC1", "budget identity on random outcomes", 10, budget_identity);
  all &= run_criterion("AC2", "shipping demo baseline payoffs and TNV", 1, demo_baseline);
  all &= run_criterion("AC3", "demo TNV optimum 16 by brute force and greedy", 5, demo_optimization);
  all &= run_criterion("AC4", "surplus split makes every company strictly better off", 60, strict_improvement);
  all &= run_criterion("AC5", "collapse preserves TNV and the pair payoff sum", 0, collapse_invariance);
  all &= run_criterion("AC6", "brute force agrees with the enumerated maximum", 0, oracle_agreement);
  all &= run_criterion("AC7", "money scaling by 3/7 scales payoffs and TNV", 0, scale_linearity);
  all &= run_criterion("AC8", "structured render/load/render is byte identical", 0, round_trip);
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}

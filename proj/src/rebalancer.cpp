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

#include <coopnet/rebalancer.hpp>

#include <algorithm>

#include <coopnet/error.hpp>

namespace coopnet {

WeightVector uniform_weights(const NetworkGame& game) {
  WeightVector w;
  if (game.company_count() == 0) return w;
  const Rational share = make_rational(1, static_cast<std::int64_t>(game.company_count()));
  for (const CompanySpec& company : game.companies()) w.weights[company.id] = share;
  return w;
}

void check_weights(const NetworkGame& game, const WeightVector& weights) {
  Rational sum;
  for (const auto& [id, weight] : weights.weights) {
    if (!game.find_company(id)) throw BadWeights("weight for unknown company '" + id + "'");
    if (weight <= 0) throw BadWeights("weight of '" + id + "' must be positive, got " + format_rational(weight));
    sum += weight;
  }
  for (const CompanySpec& company : game.companies()) {
    if (weights.weights.count(company.id) == 0) throw BadWeights("no weight for company '" + company.id + "'");
  }
  if (sum != 1) throw BadWeights("weights sum to " + format_rational(sum) + ", expected 1");
}

ValueFlow realize_payoffs(const NetworkGame& game, const GoodsFlow& flow,
                          const std::map<std::string, Rational>& targets) {
  Rational sum;
  for (const auto& [id, target] : targets) {
    game.company_index(id);
    sum += target;
  }
  for (const CompanySpec& company : game.companies()) {
    if (targets.count(company.id) == 0) throw TargetSumMismatch("no target for company '" + company.id + "'");
  }
  const Rational total = tnv(game, flow);
  if (sum != total) {
    throw TargetSumMismatch("targets sum to " + format_rational(sum) + " but TNV is " + format_rational(total));
  }

  ValueFlow value;
  if (game.company_count() == 0) return value;
  const CompanyIndex hub = game.companies_by_id().front();
  for (CompanyIndex c : game.companies_by_id()) {
    if (c == hub) continue;
    const Rational gap = targets.at(game.company(c).id) - external_net(game, flow, c);
    if (gap > 0) {
      value.add(hub, c, gap);
    } else if (gap < 0) {
      value.add(c, hub, -gap);
    }
  }
  return value;
}

ValueFlow pareto_rebalance(const Outcome& baseline, const GoodsFlow& improved_flow, const WeightVector& weights,
                           ConservationMode mode) {
  const NetworkGame& game = baseline.game;
  if (auto v = check_conservation(baseline, mode); !v.empty()) {
    throw InvalidOutcome("baseline violates conservation: " + describe(v.front()));
  }
  if (auto v = check_conservation(game, improved_flow, mode); !v.empty()) {
    throw InvalidOutcome("improved flow violates conservation: " + describe(v.front()));
  }
  const Rational before = tnv(baseline);
  const Rational after = tnv(game, improved_flow);
  const Rational delta = after - before;
  if (delta <= 0) {
    throw NoSurplus("improved TNV " + format_rational(after) + " does not exceed baseline TNV " +
                    format_rational(before));
  }
  check_weights(game, weights);

  std::map<std::string, Rational> targets;
  for (CompanyIndex c = 0; c < game.company_count(); ++c) {
    const std::string& id = game.company(c).id;
    targets[id] = payoff(baseline, c) + weights.weights.at(id) * delta;
  }
  return realize_payoffs(game, improved_flow, targets);
}

namespace {

std::string unique_merged_id(const NetworkGame& game, const std::string& a, const std::string& b) {
  std::string id = a + "+" + b;
  while (game.find_company(id)) id += "'";
  return id;
}

CompanySpec merge_specs(const NetworkGame& game, const GoodsFlow& goods, CompanyIndex i, CompanyIndex j,
                        std::string merged_id) {
  const CompanySpec& a = game.company(i);
  const CompanySpec& b = game.company(j);

  CompanySpec merged;
  merged.id = std::move(merged_id);
  merged.name = a.name + " + " + b.name;
  merged.producible = a.producible;
  merged.producible.insert(b.producible.begin(), b.producible.end());
  merged.endowment = a.endowment + b.endowment;

  int priority = 1;
  for (const CompanySpec* part : {&a, &b}) {
    std::vector<Recipe> recipes = part->transformation.recipes;
    std::stable_sort(recipes.begin(), recipes.end(),
                     [](const Recipe& x, const Recipe& y) { return x.priority < y.priority; });
    for (Recipe& recipe : recipes) {
      recipe.priority = priority++;
      merged.transformation.recipes.push_back(std::move(recipe));
    }
  }
  merged.transformation.passthrough = a.transformation.passthrough || b.transformation.passthrough;

  auto sales_of = [&](CompanyIndex c) {
    auto it = goods.external_sales.find(c);
    return it == goods.external_sales.end() ? GoodVector{} : it->second;
  };
  const GoodVector sales_a = sales_of(i);
  const GoodVector sales_b = sales_of(j);

  // Per good, keep an original price where only one side sells; where both
  // sell, fold their combined revenue into a single uncapped unit price.
  std::set<GoodIndex> priced;
  for (const auto& [g, unit] : a.benefit.per_good) priced.insert(g);
  for (const auto& [g, unit] : b.benefit.per_good) priced.insert(g);
  for (GoodIndex g : priced) {
    const auto ia = a.benefit.per_good.find(g);
    const auto ib = b.benefit.per_good.find(g);
    const bool has_a = ia != a.benefit.per_good.end();
    const bool has_b = ib != b.benefit.per_good.end();
    const Count units_a = sales_a[g];
    const Count units_b = sales_b[g];
    if (units_a + units_b == 0) {
      merged.benefit.per_good[g] = has_a ? ia->second : ib->second;
    } else if (units_b == 0) {
      if (has_a) merged.benefit.per_good[g] = ia->second;
    } else if (units_a == 0) {
      if (has_b) merged.benefit.per_good[g] = ib->second;
    } else {
      Rational revenue;
      if (has_a) revenue += ia->second.price * (ia->second.cap ? std::min(units_a, *ia->second.cap) : units_a);
      if (has_b) revenue += ib->second.price * (ib->second.cap ? std::min(units_b, *ib->second.cap) : units_b);
      if (revenue > 0) merged.benefit.per_good[g] = UnitPrice{revenue / (units_a + units_b), std::nullopt};
    }
  }

  const NodeFlows flows_a = node_flows(game, goods, i);
  const NodeFlows flows_b = node_flows(game, goods, j);
  merged.cost.overhead = external_cost(a, flows_a.in, flows_a.out) + external_cost(b, flows_b.in, flows_b.out);
  return merged;
}

}  // namespace

CollapsedOutcome collapse_nodes(const Outcome& outcome, std::string_view first, std::string_view second) {
  const NetworkGame& game = outcome.game;
  const CompanyIndex i = game.company_index(first);
  const CompanyIndex j = game.company_index(second);
  if (i == j) throw IdenticalNodes("cannot collapse company '" + std::string(first) + "' with itself");

  const std::string merged_id = unique_merged_id(game, game.company(i).id, game.company(j).id);
  const CompanyIndex slot = std::min(i, j);

  // The merged company takes the position of the earlier of the pair.
  std::vector<CompanySpec> companies;
  std::vector<CompanyIndex> remap(game.company_count());
  CompanyIndex merged_index = 0;
  for (CompanyIndex c = 0; c < game.company_count(); ++c) {
    if (c == i || c == j) {
      if (c == slot) {
        merged_index = companies.size();
        companies.push_back(merge_specs(game, outcome.goods, i, j, merged_id));
      }
      remap[c] = merged_index;
    } else {
      remap[c] = companies.size();
      companies.push_back(game.company(c));
    }
  }

  CollapsedOutcome result;
  result.merged_id = merged_id;
  result.provenance = {game.company(i).id, game.company(j).id};
  result.outcome.game = NetworkGame(game.goods(), std::move(companies));

  GoodsFlow& goods = result.outcome.goods;
  for (const auto& [edge, bundle] : outcome.goods.internal) {
    const CompanyIndex from = remap.at(edge.first);
    const CompanyIndex to = remap.at(edge.second);
    if (from == to || bundle.is_zero()) continue;
    goods.internal[{from, to}] += bundle;
  }
  for (const auto& [c, bundle] : outcome.goods.external_sales) {
    if (bundle.is_zero()) continue;
    goods.external_sales[remap.at(c)] += bundle;
  }
  for (const auto& [pair, amount] : outcome.value.entries()) {
    const CompanyIndex payer = remap.at(pair.first);
    const CompanyIndex payee = remap.at(pair.second);
    if (payer != payee) result.outcome.value.add(payer, payee, amount);
  }
  return result;
}

}  // namespace coopnet

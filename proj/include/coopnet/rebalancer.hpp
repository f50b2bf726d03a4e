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

/**
 * \file coopnet/rebalancer.hpp
 *
 * \brief Side-payment constructions: turning a TNV gain into a strict Pareto
 *  improvement, realizing an arbitrary payoff vector, and merging two
 *  companies into one.
 */

#ifndef COOPNET_REBALANCER_HPP
#define COOPNET_REBALANCER_HPP

#include <map>
#include <string>
#include <utility>

#include <coopnet/accounting.hpp>

namespace coopnet {

/// Share of the surplus per company id. Weights are positive and sum to one.
struct WeightVector {
  std::map<std::string, Rational> weights;
};

/// 1/n for every company.
WeightVector uniform_weights(const NetworkGame& game);

/// Throws BadWeights unless `weights` covers exactly the game's companies
/// with positive entries summing to one.
void check_weights(const NetworkGame& game, const WeightVector& weights);

/// Value flow for `improved_flow` giving every company its baseline payoff
/// plus its weighted share of delta = TNV(improved) - TNV(baseline).
///
/// Throws NoSurplus if delta <= 0, BadWeights for invalid weights and
/// InvalidOutcome if either flow violates conservation.
ValueFlow pareto_rebalance(const Outcome& baseline, const GoodsFlow& improved_flow, const WeightVector& weights,
                           ConservationMode mode = ConservationMode::Disposal);

/// Hub settlement: the company with the smallest id trades exactly one net
/// transfer with every other company so each ends at its target. The hub
/// lands on its own target through the budget identity.
///
/// Throws TargetSumMismatch if the targets do not sum to tnv(flow) or miss a
/// company, UnknownCompany for ids outside the game.
ValueFlow realize_payoffs(const NetworkGame& game, const GoodsFlow& flow,
                          const std::map<std::string, Rational>& targets);

struct CollapsedOutcome {
  Outcome outcome;
  std::string merged_id;
  std::pair<std::string, std::string> provenance;
};

/// Replaces companies `first` and `second` by one merged company. Goods and
/// value exchanged between the pair disappear; every other edge is re-pointed
/// to the merged node and parallel edges are summed. The merged company's
/// benefit reproduces the pair's combined external benefit on the merged
/// sales, and its cost carries the pair's combined external cost, so TNV and
/// the pair's payoff sum are preserved exactly.
///
/// The merged transformation concatenates both recipe lists; the reduced
/// outcome is not guaranteed to conserve goods.
///
/// Throws UnknownCompany or IdenticalNodes.
CollapsedOutcome collapse_nodes(const Outcome& outcome, std::string_view first, std::string_view second);

}  // namespace coopnet

#endif  // COOPNET_REBALANCER_HPP

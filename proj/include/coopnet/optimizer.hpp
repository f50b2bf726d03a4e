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
 * \file coopnet/optimizer.hpp
 *
 * \brief Search for goods flows with maximal Total Network Value.
 *
 * The search space is a list of slots (sender, receiver-or-sink, good) in
 * canonical order: senders by company id, receivers by company id followed by
 * the sink, goods by id. A sender only gets slots for goods in its producible
 * set, since conservation forbids shipping anything else. Every slot carries
 * at most `max_units_per_edge` units, and the units a company ships of a good
 * are further capped by an upper bound on what its recipes can produce.
 *
 * Flows are visited in lexicographic order of the slot vector, so the empty
 * flow always comes first.
 */

#ifndef COOPNET_OPTIMIZER_HPP
#define COOPNET_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include <coopnet/accounting.hpp>

namespace coopnet {

struct SearchBounds {
  Count max_units_per_edge = 1;
  /// Company-to-company edges allowed to carry goods; nullopt means all.
  /// Sink edges are always candidates.
  std::optional<std::set<CompanyPair>> candidate_edges;
  ConservationMode mode = ConservationMode::Disposal;
};

struct SearchResult {
  GoodsFlow flow;
  Rational tnv;
  std::uint64_t visited = 0;
  /// Improving moves applied (greedy only).
  std::uint64_t iterations = 0;
};

/// Receives each conservation-valid flow; return false to stop early.
using FlowVisitor = std::function<bool(const GoodsFlow&)>;

/// Streams every conservation-valid flow within `bounds` in canonical order.
/// Throws InvalidGame if validate_game reports defects.
void enumerate_goods_flows(const NetworkGame& game, const SearchBounds& bounds, const FlowVisitor& visit);

/// Collecting convenience over enumerate_goods_flows; only for small spaces.
std::vector<GoodsFlow> collect_goods_flows(const NetworkGame& game, const SearchBounds& bounds);

/// Number of raw slot assignments the enumerator walks before conservation
/// filtering, as a double since it overflows integers quickly.
double search_space_size(const NetworkGame& game, const SearchBounds& bounds);

/// Exhaustive maximum over enumerate_goods_flows. Ties go to the flow that
/// appears first in the enumeration. With `threads` > 1 the leaves are split
/// across workers; the result is identical to the sequential run.
SearchResult brute_force_max_tnv(const NetworkGame& game, const SearchBounds& bounds, unsigned threads = 1);

/// Steepest-ascent local search from `start`. The neighbourhood is every
/// single-slot +1 or -1 change, followed by every re-route (+1 on one slot,
/// -1 on another). The best strictly improving conservation-valid neighbour
/// is taken each step; ties go to the earliest move in that order.
///
/// Throws InvalidStartFlow if `start` violates conservation.
SearchResult greedy_improve(const NetworkGame& game, const GoodsFlow& start, const SearchBounds& bounds,
                            std::uint64_t max_iters);

}  // namespace coopnet

#endif  // COOPNET_OPTIMIZER_HPP

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

#include <coopnet/optimizer.hpp>

#include <algorithm>
#include <limits>
#include <thread>

#include <coopnet/error.hpp>

namespace coopnet {

namespace {

constexpr Count kUnbounded = std::numeric_limits<Count>::max() / 4;

struct Slot {
  CompanyIndex from;
  std::optional<CompanyIndex> to;  // nullopt: the sink
  GoodIndex good;
  Count max;
};

void require_valid(const NetworkGame& game, const SearchBounds& bounds) {
  const auto defects = validate_game(game);
  if (!defects.empty()) throw InvalidGame("invalid game: " + describe(defects.front()));
  if (bounds.max_units_per_edge < 1) throw InvalidGame("max_units_per_edge must be at least 1");
}

bool edge_allowed(const SearchBounds& bounds, CompanyIndex from, CompanyIndex to) {
  return !bounds.candidate_edges || bounds.candidate_edges->count({from, to}) != 0;
}

Count saturating_add(Count a, Count b) { return std::min(kUnbounded, a + b); }
Count saturating_mul(Count a, Count b) {
  if (a == 0 || b == 0) return 0;
  return a > kUnbounded / b ? kUnbounded : std::min(kUnbounded, a * b);
}

// The slot layout plus, per company and good, an upper bound on what the
// company can ever ship. The bounds come from a downward fixpoint: assume the
// most each neighbour could send, bound recipe uses by it, repeat.
class FlowSpace {
 public:
  FlowSpace(const NetworkGame& game, const SearchBounds& bounds) : game_(game), bounds_(bounds) {
    const std::size_t n = game.company_count();
    const std::size_t m = game.good_count();
    const Count k = bounds.max_units_per_edge;
    caps_.assign(n, std::vector<Count>(m, 0));
    for (CompanyIndex c = 0; c < n; ++c) {
      for (GoodIndex g : game.company(c).producible) caps_[c][g] = kUnbounded;
    }
    for (int round = 0; round < 64; ++round) {
      bool changed = false;
      for (CompanyIndex c = 0; c < n; ++c) {
        std::vector<Count> max_in(m, 0);
        for (GoodIndex g = 0; g < m; ++g) max_in[g] = game.company(c).endowment[g];
        for (CompanyIndex j = 0; j < n; ++j) {
          if (j == c || !edge_allowed(bounds, j, c)) continue;
          for (GoodIndex g : game.company(j).producible) {
            max_in[g] = saturating_add(max_in[g], std::min(k, caps_[j][g]));
          }
        }
        for (GoodIndex g : game.company(c).producible) {
          const Count cap = production_cap(game.company(c), max_in, g);
          if (cap < caps_[c][g]) {
            caps_[c][g] = cap;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }

    for (CompanyIndex from : game.companies_by_id()) {
      const CompanySpec& sender = game.company(from);
      std::vector<GoodIndex> goods;
      for (GoodIndex g : game.goods_by_id()) {
        if (sender.produces(g) && caps_[from][g] > 0) goods.push_back(g);
      }
      for (CompanyIndex to : game.companies_by_id()) {
        if (to == from || !edge_allowed(bounds, from, to)) continue;
        for (GoodIndex g : goods) slots_.push_back({from, to, g, std::min(k, caps_[from][g])});
      }
      for (GoodIndex g : goods) slots_.push_back({from, std::nullopt, g, std::min(k, caps_[from][g])});
    }
  }

  const std::vector<Slot>& slots() const noexcept { return slots_; }
  Count cap(CompanyIndex c, GoodIndex g) const { return caps_[c][g]; }

  GoodsFlow to_flow(const std::vector<Count>& values) const {
    GoodsFlow flow;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
      if (values[s] == 0) continue;
      const Slot& slot = slots_[s];
      if (slot.to) {
        flow.add_internal(slot.from, *slot.to, slot.good, values[s]);
      } else {
        flow.add_sale(slot.from, slot.good, values[s]);
      }
    }
    return flow;
  }

  double size() const {
    // Per company and good, count the ways to spread at most cap units over
    // its slots (each slot <= its max), then multiply.
    double total = 1.0;
    const std::size_t n = game_.company_count();
    for (CompanyIndex c = 0; c < n; ++c) {
      for (GoodIndex g = 0; g < game_.good_count(); ++g) {
        std::vector<Count> maxes;
        for (const Slot& slot : slots_) {
          if (slot.from == c && slot.good == g) maxes.push_back(slot.max);
        }
        if (maxes.empty()) continue;
        Count budget = 0;
        for (Count mx : maxes) budget = saturating_add(budget, mx);
        budget = std::min(budget, caps_[c][g]);
        // ways[t] = assignments summing to exactly t
        std::vector<double> ways(static_cast<std::size_t>(budget) + 1, 0.0);
        ways[0] = 1.0;
        for (Count mx : maxes) {
          std::vector<double> next(ways.size(), 0.0);
          for (std::size_t t = 0; t < ways.size(); ++t) {
            if (ways[t] == 0.0) continue;
            for (Count v = 0; v <= mx && t + static_cast<std::size_t>(v) < ways.size(); ++v) next[t + v] += ways[t];
          }
          ways = std::move(next);
        }
        double sum = 0.0;
        for (double w : ways) sum += w;
        total *= sum;
      }
    }
    return total;
  }

 private:
  static Count production_cap(const CompanySpec& company, const std::vector<Count>& max_in, GoodIndex g) {
    Count cap = 0;
    for (const Recipe& recipe : company.transformation.recipes) {
      if (recipe.outputs[g] == 0) continue;
      Count uses = recipe.max_uses.value_or(kUnbounded);
      for (GoodIndex h : recipe.inputs.support()) {
        uses = std::min(uses, h < max_in.size() ? max_in[h] / recipe.inputs[h] : 0);
      }
      cap = saturating_add(cap, saturating_mul(uses, recipe.outputs[g]));
    }
    if (company.transformation.passthrough) cap = saturating_add(cap, max_in[g]);
    return cap;
  }

  const NetworkGame& game_;
  const SearchBounds& bounds_;
  std::vector<std::vector<Count>> caps_;
  std::vector<Slot> slots_;
};

// Depth-first walk over slot assignments in lexicographic order. Calls
// `on_leaf(raw_index, values, node_in, node_out)` for each assignment that
// passes conservation; `on_leaf` returns false to stop.
class Walker {
 public:
  Walker(const NetworkGame& game, const FlowSpace& space, ConservationMode mode)
      : game_(game), space_(space), mode_(mode) {
    const std::size_t n = game.company_count();
    values_.assign(space.slots().size(), 0);
    used_.assign(n, std::vector<Count>(game.good_count(), 0));
    in_.resize(n);
    out_.resize(n);
    for (CompanyIndex c = 0; c < n; ++c) {
      in_[c] = game.company(c).endowment;
      out_[c] = GoodVector(game.good_count());
    }
  }

  template <typename Fn>
  void run(Fn&& on_leaf, std::uint64_t stride = 1, std::uint64_t offset = 0) {
    stride_ = stride;
    offset_ = offset;
    raw_ = 0;
    stopped_ = false;
    descend(0, on_leaf);
  }

 private:
  template <typename Fn>
  void descend(std::size_t s, Fn& on_leaf) {
    if (stopped_) return;
    const auto& slots = space_.slots();
    if (s == slots.size()) {
      const std::uint64_t index = raw_++;
      if (index % stride_ != offset_) return;
      if (conserves() && !on_leaf(index, values_, in_, out_)) stopped_ = true;
      return;
    }
    const Slot& slot = slots[s];
    Count& used = used_[slot.from][slot.good];
    const Count limit = std::min(slot.max, space_.cap(slot.from, slot.good) - used);
    for (Count v = 0; v <= limit && !stopped_; ++v) {
      set(s, v);
      descend(s + 1, on_leaf);
    }
    set(s, 0);
  }

  void set(std::size_t s, Count v) {
    const Slot& slot = space_.slots()[s];
    const Count delta = v - values_[s];
    if (delta == 0) return;
    values_[s] = v;
    used_[slot.from][slot.good] += delta;
    out_[slot.from].set(slot.good, out_[slot.from][slot.good] + delta);
    if (slot.to) in_[*slot.to].set(slot.good, in_[*slot.to][slot.good] + delta);
  }

  bool conserves() const {
    for (CompanyIndex c = 0; c < game_.company_count(); ++c) {
      const GoodVector produced = apply_transformation(game_, game_.company(c), in_[c]);
      const bool ok = mode_ == ConservationMode::Exact ? out_[c] == produced : out_[c].leq(produced);
      if (!ok) return false;
    }
    return true;
  }

  const NetworkGame& game_;
  const FlowSpace& space_;
  ConservationMode mode_;
  std::vector<Count> values_;
  std::vector<std::vector<Count>> used_;
  std::vector<GoodVector> in_;
  std::vector<GoodVector> out_;
  std::uint64_t stride_ = 1;
  std::uint64_t offset_ = 0;
  std::uint64_t raw_ = 0;
  bool stopped_ = false;
};

Rational node_tnv(const NetworkGame& game, const std::vector<GoodVector>& in, const std::vector<GoodVector>& out,
                  const FlowSpace& space, const std::vector<Count>& values) {
  std::vector<GoodVector> sales(game.company_count());
  const auto& slots = space.slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (!slots[s].to && values[s] > 0) sales[slots[s].from].set(slots[s].good, values[s]);
  }
  Rational total;
  for (CompanyIndex c = 0; c < game.company_count(); ++c) {
    const CompanySpec& company = game.company(c);
    total += external_benefit(company, sales[c]);
    total -= external_cost(company, in[c], out[c]);
  }
  return total;
}

struct Best {
  bool found = false;
  std::uint64_t index = 0;
  Rational tnv;
  std::vector<Count> values;
  std::uint64_t visited = 0;
};

Best search_partition(const NetworkGame& game, const FlowSpace& space, ConservationMode mode, std::uint64_t stride,
                      std::uint64_t offset) {
  Best best;
  Walker walker(game, space, mode);
  walker.run(
      [&](std::uint64_t index, const std::vector<Count>& values, const std::vector<GoodVector>& in,
          const std::vector<GoodVector>& out) {
        ++best.visited;
        Rational value = node_tnv(game, in, out, space, values);
        if (!best.found || value > best.tnv) {
          best.found = true;
          best.index = index;
          best.tnv = std::move(value);
          best.values = values;
        }
        return true;
      },
      stride, offset);
  return best;
}

}  // namespace

void enumerate_goods_flows(const NetworkGame& game, const SearchBounds& bounds, const FlowVisitor& visit) {
  require_valid(game, bounds);
  const FlowSpace space(game, bounds);
  Walker walker(game, space, bounds.mode);
  walker.run([&](std::uint64_t, const std::vector<Count>& values, const std::vector<GoodVector>&,
                 const std::vector<GoodVector>&) { return visit(space.to_flow(values)); });
}

std::vector<GoodsFlow> collect_goods_flows(const NetworkGame& game, const SearchBounds& bounds) {
  std::vector<GoodsFlow> flows;
  enumerate_goods_flows(game, bounds, [&](const GoodsFlow& flow) {
    flows.push_back(flow);
    return true;
  });
  return flows;
}

double search_space_size(const NetworkGame& game, const SearchBounds& bounds) {
  require_valid(game, bounds);
  return FlowSpace(game, bounds).size();
}

SearchResult brute_force_max_tnv(const NetworkGame& game, const SearchBounds& bounds, unsigned threads) {
  require_valid(game, bounds);
  const FlowSpace space(game, bounds);
  threads = std::max(1u, threads);

  std::vector<Best> partials(threads);
  if (threads == 1) {
    partials[0] = search_partition(game, space, bounds.mode, 1, 0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] { partials[w] = search_partition(game, space, bounds.mode, threads, w); });
    }
    for (auto& worker : workers) worker.join();
  }

  // Merge keeps the enumeration-order-first maximum.
  Best best;
  std::uint64_t visited = 0;
  for (Best& part : partials) {
    visited += part.visited;
    if (!part.found) continue;
    if (!best.found || part.tnv > best.tnv || (part.tnv == best.tnv && part.index < best.index)) {
      best = std::move(part);
    }
  }
  // The empty flow is always visited and valid, so a maximum exists.
  SearchResult result;
  result.flow = space.to_flow(best.values);
  result.tnv = best.tnv;
  result.visited = visited;
  return result;
}

SearchResult greedy_improve(const NetworkGame& game, const GoodsFlow& start, const SearchBounds& bounds,
                            std::uint64_t max_iters) {
  require_valid(game, bounds);
  if (const auto violations = check_conservation(game, start, bounds.mode); !violations.empty()) {
    throw InvalidStartFlow("start flow is not conservation-valid: " + describe(violations.front()));
  }
  const FlowSpace space(game, bounds);
  const auto& slots = space.slots();

  // Split the start flow into slot values and a residual the moves never touch
  // (edges outside the candidate set).
  std::vector<Count> values(slots.size(), 0);
  GoodsFlow residual = start;
  residual.normalize();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const Slot& slot = slots[s];
    GoodVector* bundle = nullptr;
    if (slot.to) {
      auto it = residual.internal.find({slot.from, *slot.to});
      if (it != residual.internal.end()) bundle = &it->second;
    } else {
      auto it = residual.external_sales.find(slot.from);
      if (it != residual.external_sales.end()) bundle = &it->second;
    }
    if (bundle == nullptr || (*bundle)[slot.good] == 0) continue;
    values[s] = (*bundle)[slot.good];
    bundle->set(slot.good, 0);
  }
  residual.normalize();

  auto assemble = [&](const std::vector<Count>& v) {
    GoodsFlow flow = residual;
    const GoodsFlow moved = space.to_flow(v);
    for (const auto& [edge, bundle] : moved.internal) flow.internal[edge] += bundle;
    for (const auto& [c, bundle] : moved.external_sales) flow.external_sales[c] += bundle;
    return flow;
  };

  SearchResult result;
  result.flow = start;
  result.tnv = tnv(game, start);
  const Count k = bounds.max_units_per_edge;

  while (result.iterations < max_iters) {
    std::optional<std::vector<Count>> best_values;
    Rational best_tnv = result.tnv;
    auto consider = [&](std::vector<Count>& candidate) {
      ++result.visited;
      const GoodsFlow flow = assemble(candidate);
      if (!check_conservation(game, flow, bounds.mode).empty()) return;
      Rational value = tnv(game, flow);
      if (value > best_tnv) {
        best_tnv = std::move(value);
        best_values = candidate;
      }
    };

    std::vector<Count> candidate = values;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (values[s] < k) {
        ++candidate[s];
        consider(candidate);
        --candidate[s];
      }
      if (values[s] > 0) {
        --candidate[s];
        consider(candidate);
        ++candidate[s];
      }
    }
    for (std::size_t up = 0; up < slots.size(); ++up) {
      if (values[up] >= k) continue;
      for (std::size_t down = 0; down < slots.size(); ++down) {
        if (down == up || values[down] == 0) continue;
        ++candidate[up];
        --candidate[down];
        consider(candidate);
        --candidate[up];
        ++candidate[down];
      }
    }

    if (!best_values) break;
    values = std::move(*best_values);
    result.tnv = std::move(best_tnv);
    result.flow = assemble(values);
    result.flow.normalize();
    ++result.iterations;
  }
  return result;
}

}  // namespace coopnet

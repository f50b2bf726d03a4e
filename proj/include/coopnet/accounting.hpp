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
 * \file coopnet/accounting.hpp
 *
 * \brief Outcome evaluation: goods flow conservation, payoffs, Total Network
 *  Value and the budget identity sum(payoff) == TNV.
 *
 * Money direction follows "the recipient of goods pays": a ValueFlow entry
 * (payer, payee, a) lowers the payer's payoff by a and raises the payee's by a.
 */

#ifndef COOPNET_ACCOUNTING_HPP
#define COOPNET_ACCOUNTING_HPP

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <coopnet/core_model.hpp>

namespace coopnet {

using CompanyPair = std::pair<CompanyIndex, CompanyIndex>;

/// Goods on company-to-company edges and on company-to-sink edges.
struct GoodsFlow {
  std::map<CompanyPair, GoodVector> internal;
  std::map<CompanyIndex, GoodVector> external_sales;

  /// Adds `count` units; zero-count edges are not stored.
  void add_internal(CompanyIndex from, CompanyIndex to, GoodIndex g, Count count);
  void add_sale(CompanyIndex from, GoodIndex g, Count count);

  /// Drops all-zero bundles so equal flows compare equal.
  void normalize();

  friend bool operator==(const GoodsFlow& a, const GoodsFlow& b);
};

/// Side payments between companies, keyed by (payer, payee).
class ValueFlow {
 public:
  /// Accumulates a positive amount; zero is ignored, negative amounts throw
  /// DomainError. Payer and payee must differ.
  void add(CompanyIndex payer, CompanyIndex payee, const Rational& amount);

  const std::map<CompanyPair, Rational>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  Rational paid_by(CompanyIndex c) const;
  Rational received_by(CompanyIndex c) const;

  friend bool operator==(const ValueFlow& a, const ValueFlow& b) { return a.entries_ == b.entries_; }

 private:
  std::map<CompanyPair, Rational> entries_;
};

struct Outcome {
  NetworkGame game;
  GoodsFlow goods;
  ValueFlow value;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct NodeFlows {
  GoodVector in;
  GoodVector out;
};

/// in = endowment + all inbound bundles; out = outbound bundles + external sales.
NodeFlows node_flows(const NetworkGame& game, const GoodsFlow& goods, CompanyIndex c);
NodeFlows node_flows(const Outcome& outcome, std::string_view company_id);

enum class ConservationMode {
  Disposal,  // out <= t(in)
  Exact,     // out == t(in)
};

struct Violation {
  std::string company;
  std::string good;  // first offending component; empty if the flow is malformed
  Count produced = 0;
  Count shipped = 0;
  std::string detail;
};

std::string describe(const Violation& violation);

/// One Violation per failing company, in company-id order. Structural
/// problems (unknown indices, self edges, sales outside the producible set)
/// are reported as violations as well.
std::vector<Violation> check_conservation(const NetworkGame& game, const GoodsFlow& goods,
                                          ConservationMode mode = ConservationMode::Disposal);
std::vector<Violation> check_conservation(const Outcome& outcome,
                                          ConservationMode mode = ConservationMode::Disposal);

/// Throws DomainError if `g` has goods outside the producible set.
Rational external_benefit(const CompanySpec& company, const GoodVector& g);
Rational external_cost(const CompanySpec& company, const GoodVector& g_in, const GoodVector& g_out);

/// external_benefit(sales) - external_cost(in, out): what the company earns
/// before side payments.
Rational external_net(const NetworkGame& game, const GoodsFlow& goods, CompanyIndex c);

Rational payoff(const NetworkGame& game, const GoodsFlow& goods, const ValueFlow& value, CompanyIndex c);
Rational payoff(const Outcome& outcome, CompanyIndex c);
Rational payoff(const Outcome& outcome, std::string_view company_id);

Rational tnv(const NetworkGame& game, const GoodsFlow& goods);
Rational tnv(const Outcome& outcome);

/// sum of payoffs - TNV. Zero for every outcome.
Rational budget_identity_gap(const Outcome& outcome);

}  // namespace coopnet

#endif  // COOPNET_ACCOUNTING_HPP

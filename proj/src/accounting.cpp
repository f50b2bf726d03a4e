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

#include <coopnet/accounting.hpp>

#include <algorithm>
#include <sstream>

#include <coopnet/error.hpp>

namespace coopnet {

void GoodsFlow::add_internal(CompanyIndex from, CompanyIndex to, GoodIndex g, Count count) {
  if (count == 0) return;
  internal[{from, to}].add(g, count);
}

void GoodsFlow::add_sale(CompanyIndex from, GoodIndex g, Count count) {
  if (count == 0) return;
  external_sales[from].add(g, count);
}

void GoodsFlow::normalize() {
  std::erase_if(internal, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(external_sales, [](const auto& kv) { return kv.second.is_zero(); });
}

bool operator==(const GoodsFlow& a, const GoodsFlow& b) {
  GoodsFlow x = a;
  GoodsFlow y = b;
  x.normalize();
  y.normalize();
  return x.internal == y.internal && x.external_sales == y.external_sales;
}

void ValueFlow::add(CompanyIndex payer, CompanyIndex payee, const Rational& amount) {
  if (payer == payee) throw DomainError("value transfer from a company to itself");
  if (amount < 0) throw DomainError("negative value transfer " + format_rational(amount));
  if (amount == 0) return;
  entries_[{payer, payee}] += amount;
}

Rational ValueFlow::paid_by(CompanyIndex c) const {
  Rational total;
  for (const auto& [pair, amount] : entries_) {
    if (pair.first == c) total += amount;
  }
  return total;
}

Rational ValueFlow::received_by(CompanyIndex c) const {
  Rational total;
  for (const auto& [pair, amount] : entries_) {
    if (pair.second == c) total += amount;
  }
  return total;
}

NodeFlows node_flows(const NetworkGame& game, const GoodsFlow& goods, CompanyIndex c) {
  if (c >= game.company_count()) throw UnknownCompany("company index " + std::to_string(c) + " out of range");
  NodeFlows flows{game.company(c).endowment, GoodVector{}};
  for (const auto& [edge, bundle] : goods.internal) {
    if (edge.second == c) flows.in += bundle;
    if (edge.first == c) flows.out += bundle;
  }
  if (auto it = goods.external_sales.find(c); it != goods.external_sales.end()) flows.out += it->second;
  return flows;
}

NodeFlows node_flows(const Outcome& outcome, std::string_view company_id) {
  return node_flows(outcome.game, outcome.goods, outcome.game.company_index(company_id));
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << "ConservationViolation [" << v.company << "]";
  if (!v.good.empty()) {
    os << ": ships " << v.shipped << " " << v.good << " but can produce " << v.produced;
  }
  if (!v.detail.empty()) os << (v.good.empty() ? ": " : " (") << v.detail << (v.good.empty() ? "" : ")");
  return os.str();
}

namespace {

std::string company_label(const NetworkGame& game, CompanyIndex c) {
  return c < game.company_count() ? game.company(c).id : "#" + std::to_string(c);
}

// Edges that no conservation check can make sense of.
void check_structure(const NetworkGame& game, const GoodsFlow& goods, std::vector<Violation>& out) {
  const std::size_t n = game.company_count();
  for (const auto& [edge, bundle] : goods.internal) {
    if (edge.first >= n || edge.second >= n) {
      out.push_back({company_label(game, edge.first), "", 0, 0,
                     "edge to or from unknown company " + company_label(game, std::max(edge.first, edge.second))});
    } else if (edge.first == edge.second && !bundle.is_zero()) {
      out.push_back({company_label(game, edge.first), "", 0, 0, "self edge"});
    }
  }
  for (const auto& [c, bundle] : goods.external_sales) {
    if (c >= n) {
      out.push_back({company_label(game, c), "", 0, 0, "sale by unknown company"});
      continue;
    }
    for (GoodIndex g : bundle.support()) {
      if (!game.company(c).produces(g)) {
        out.push_back({company_label(game, c), "", 0, 0,
                       "external sale of non-producible good " +
                           (g < game.good_count() ? game.good(g).id : "#" + std::to_string(g))});
        break;
      }
    }
  }
}

}  // namespace

std::vector<Violation> check_conservation(const NetworkGame& game, const GoodsFlow& goods, ConservationMode mode) {
  std::vector<Violation> violations;
  check_structure(game, goods, violations);
  if (!violations.empty()) return violations;

  for (CompanyIndex c : game.companies_by_id()) {
    const CompanySpec& company = game.company(c);
    const NodeFlows flows = node_flows(game, goods, c);
    const GoodVector produced = apply_transformation(game, company, flows.in);
    const std::size_t extent = std::max(produced.extent(), flows.out.extent());
    for (GoodIndex g = 0; g < extent; ++g) {
      const bool bad = mode == ConservationMode::Exact ? flows.out[g] != produced[g] : flows.out[g] > produced[g];
      if (bad) {
        violations.push_back({company.id, g < game.good_count() ? game.good(g).id : "#" + std::to_string(g),
                              produced[g], flows.out[g], ""});
        break;
      }
    }
  }
  return violations;
}

std::vector<Violation> check_conservation(const Outcome& outcome, ConservationMode mode) {
  return check_conservation(outcome.game, outcome.goods, mode);
}

Rational external_benefit(const CompanySpec& company, const GoodVector& g) {
  Rational total;
  for (GoodIndex good : g.support()) {
    if (!company.produces(good)) {
      throw DomainError("company '" + company.id + "' cannot sell good index " + std::to_string(good) +
                        " outside its producible set");
    }
    auto it = company.benefit.per_good.find(good);
    if (it == company.benefit.per_good.end()) continue;
    const Count units = it->second.cap ? std::min(g[good], *it->second.cap) : g[good];
    total += it->second.price * units;
  }
  return total;
}

Rational external_cost(const CompanySpec& company, const GoodVector& g_in, const GoodVector& g_out) {
  const CostSpec& cost = company.cost;
  Rational total = cost.overhead;
  for (const auto& [g, rate] : cost.per_input) total += rate * g_in[g];
  for (const auto& [g, rate] : cost.per_output) total += rate * g_out[g];
  if (!g_out.is_zero()) total += cost.fixed;
  return total;
}

Rational external_net(const NetworkGame& game, const GoodsFlow& goods, CompanyIndex c) {
  const CompanySpec& company = game.company(c);
  const NodeFlows flows = node_flows(game, goods, c);
  auto it = goods.external_sales.find(c);
  const Rational benefit = it == goods.external_sales.end() ? Rational{} : external_benefit(company, it->second);
  return benefit - external_cost(company, flows.in, flows.out);
}

Rational payoff(const NetworkGame& game, const GoodsFlow& goods, const ValueFlow& value, CompanyIndex c) {
  if (c >= game.company_count()) throw UnknownCompany("company index " + std::to_string(c) + " out of range");
  return value.received_by(c) + external_net(game, goods, c) - value.paid_by(c);
}

Rational payoff(const Outcome& outcome, CompanyIndex c) {
  return payoff(outcome.game, outcome.goods, outcome.value, c);
}

Rational payoff(const Outcome& outcome, std::string_view company_id) {
  return payoff(outcome, outcome.game.company_index(company_id));
}

Rational tnv(const NetworkGame& game, const GoodsFlow& goods) {
  Rational benefit;
  Rational cost;
  for (CompanyIndex c = 0; c < game.company_count(); ++c) {
    const CompanySpec& company = game.company(c);
    const NodeFlows flows = node_flows(game, goods, c);
    if (auto it = goods.external_sales.find(c); it != goods.external_sales.end()) {
      benefit += external_benefit(company, it->second);
    }
    cost += external_cost(company, flows.in, flows.out);
  }
  return benefit - cost;
}

Rational tnv(const Outcome& outcome) { return tnv(outcome.game, outcome.goods); }

Rational budget_identity_gap(const Outcome& outcome) {
  Rational total;
  for (CompanyIndex c = 0; c < outcome.game.company_count(); ++c) total += payoff(outcome, c);
  return total - tnv(outcome);
}

}  // namespace coopnet

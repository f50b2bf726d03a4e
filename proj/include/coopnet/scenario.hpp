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
 * \file coopnet/scenario.hpp
 *
 * \brief Scenario documents (JSON), reports and the two-shipper demo network.
 *
 * Layout of a scenario document, version "1":
 *
 * \code
 * {
 *   "version": "1",
 *   "metadata": {"key": "value"},
 *   "goods": [{"id": "raw1", "name": "cargo 1"}],
 *   "companies": [{
 *     "id": "c1", "name": "...", "producible": ["deliv1"],
 *     "endowment": {"raw1": 1}, "passthrough": false,
 *     "recipes": [{"inputs": {...}, "outputs": {...},
 *                  "max_uses": 2 | "unbounded", "priority": 1}],
 *     "benefit": {"deliv1": {"price": "10", "cap": 1 | "unbounded"}},
 *     "cost": {"per_input": {...}, "per_output": {...}, "fixed": "0"}
 *   }],
 *   "baseline": {
 *     "goods": {"internal": [{"from": "s1", "to": "c1", "bundle": {"svc1": 1}}],
 *               "external_sales": {"c1": {"deliv1": 1}}},
 *     "value": [{"payer": "c1", "payee": "s1", "amount": "6"}]
 *   },
 *   "improved": {"internal": [...], "external_sales": {...}},
 *   "report": {...}
 * }
 * \endcode
 *
 * Money is an integer or a "p/q" string; floating-point literals are
 * rejected. Unknown keys are rejected. "report" is derived output written by
 * structured reports; it is accepted and ignored on load.
 */

#ifndef COOPNET_SCENARIO_HPP
#define COOPNET_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <coopnet/accounting.hpp>

namespace coopnet {

inline constexpr std::string_view kScenarioVersion = "1";

struct ScenarioDocument {
  std::string version{kScenarioVersion};
  NetworkGame game;
  std::optional<Outcome> baseline;
  std::optional<GoodsFlow> improved;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

/// Throws ParseError (syntax, shape, field path), SemanticError (unresolved
/// ids) or VersionError.
ScenarioDocument load_scenario(std::string_view bytes);

/// Canonical structured form; load_scenario(render_scenario(d)) == d.
std::string render_scenario(const ScenarioDocument& doc);

/// A goods-flow file: either a bare {"internal", "external_sales"} object or
/// a full scenario whose "improved" block is taken.
GoodsFlow load_goods_flow(const NetworkGame& game, std::string_view bytes);
std::string render_goods_flow(const NetworkGame& game, const GoodsFlow& flow);

struct ShippingParams {
  Rational cargo1_price;    // sale price of delivered cargo 1
  Rational cargo2_price;
  Rational shipper1_cost;   // per shipment
  Rational shipper2_cost;
  Rational fee11;           // c1 pays s1
  Rational fee22;           // c2 pays s2
};

/// Two cargo owners c1, c2 and two shippers s1, s2. Each shipper can ship
/// twice; each cargo owner holds one unit of raw cargo and prefers shipper 1.
/// The baseline pairs c1 with s1 and c2 with s2.
///
/// Throws ConstraintViolation unless shipper cost < fee < cargo price for
/// both pairs.
ScenarioDocument build_shipping_demo(const ShippingParams& params);

/// (10, 12, 3, 5, 6, 8).
ShippingParams default_shipping_params();

struct ReportRow {
  std::string company;
  Rational payoff;
  std::string in;
  std::string out;
};

struct Report {
  std::vector<ReportRow> rows;  // sorted by company id
  Rational tnv;
  Rational identity_gap;
  std::vector<Violation> violations;
};

Report make_report(const Outcome& outcome, ConservationMode mode = ConservationMode::Disposal);

enum class ReportFormat { Text, Structured };

/// Text: fixed-width table ending in "TNV = x, identity gap = y".
/// Structured: a scenario document with the outcome as baseline plus a
/// derived "report" block; loads back with load_scenario.
std::string render_report(const Outcome& outcome, ReportFormat format,
                          ConservationMode mode = ConservationMode::Disposal);

/// "raw1:1 svc1:1" in good-id order, "-" when empty.
std::string summarize(const NetworkGame& game, const GoodVector& v);

}  // namespace coopnet

#endif  // COOPNET_SCENARIO_HPP

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

#include <coopnet/scenario.hpp>

#include <algorithm>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include <coopnet/error.hpp>

namespace coopnet {

using Json = nlohmann::ordered_json;

namespace {

// A JSON value plus the field path that leads to it, for error messages.
class Field {
 public:
  Field(const Json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const Json& json() const noexcept { return value_; }
  const std::string& path() const noexcept { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_.empty() ? "document" : path_, what); }

  const Field& expect_object(std::initializer_list<std::string_view> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    for (const auto& [key, _] : value_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail("unknown key '" + key + "'");
    }
    return *this;
  }

  bool has(std::string_view key) const { return value_.is_object() && value_.contains(key); }

  Field at(std::string_view key) const {
    if (!has(key)) fail("missing key '" + std::string(key) + "'");
    return Field(value_.at(std::string(key)), child_path(key));
  }

  std::vector<Field> elements() const {
    if (!value_.is_array()) fail("expected a list");
    std::vector<Field> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  std::vector<std::pair<std::string, Field>> members() const {
    if (!value_.is_object()) fail("expected an object");
    std::vector<std::pair<std::string, Field>> out;
    for (const auto& [key, val] : value_.items()) out.emplace_back(key, Field(val, child_path(key)));
    return out;
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  Count count() const {
    if (!value_.is_number_integer()) fail("expected an integer quantity");
    if (value_.is_number_unsigned()) {
      const auto v = value_.get<std::uint64_t>();
      if (v > static_cast<std::uint64_t>(std::numeric_limits<Count>::max())) fail("quantity out of range");
      return static_cast<Count>(v);
    }
    const auto v = value_.get<std::int64_t>();
    if (v < 0) fail("quantity must be nonnegative");
    return v;
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  Rational money() const {
    if (value_.is_number_integer()) {
      return value_.is_number_unsigned() ? Rational(value_.get<std::uint64_t>()) : Rational(value_.get<std::int64_t>());
    }
    if (!value_.is_string()) fail("expected an integer or a \"p/q\" string");
    try {
      return parse_rational(value_.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  Bound bound() const {
    if (value_.is_null() || (value_.is_string() && value_.get<std::string>() == "unbounded")) return std::nullopt;
    return count();
  }

 private:
  std::string child_path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json& value_;
  std::string path_;
};

Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, bytes.size());
    const auto line = 1 + std::count(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(upto > 0 ? upto - 1 : 0), '\n');
    throw ParseError("line " + std::to_string(line), "malformed JSON");
  }
}

class Resolver {
 public:
  explicit Resolver(const NetworkGame& game) : game_(game) {}

  GoodIndex good(const Field& f) const {
    const std::string id = f.string();
    return good(id, f.path());
  }

  GoodIndex good(const std::string& id, const std::string& path) const {
    if (auto g = game_.find_good(id)) return *g;
    throw SemanticError(path + ": unknown good '" + id + "'");
  }

  CompanyIndex company(const Field& f) const {
    const std::string id = f.string();
    return company(id, f.path());
  }

  CompanyIndex company(const std::string& id, const std::string& path) const {
    if (auto c = game_.find_company(id)) return *c;
    throw SemanticError(path + ": unknown company '" + id + "'");
  }

  GoodVector bundle(const Field& f) const {
    GoodVector v(game_.good_count());
    for (const auto& [id, count] : f.members()) v.add(good(id, count.path()), count.count());
    return v;
  }

 private:
  const NetworkGame& game_;
};

// Goods may be referenced before the companies section is read, so good ids
// resolve against a registry-only game.
CompanySpec read_company(const Field& f, const Resolver& goods) {
  f.expect_object({"id", "name", "producible", "endowment", "passthrough", "recipes", "benefit", "cost"});
  CompanySpec company;
  company.id = f.at("id").string();
  company.name = f.has("name") ? f.at("name").string() : company.id;
  if (f.has("producible")) {
    for (const Field& g : f.at("producible").elements()) company.producible.insert(goods.good(g));
  }
  if (f.has("endowment")) company.endowment = goods.bundle(f.at("endowment"));
  if (f.has("passthrough")) company.transformation.passthrough = f.at("passthrough").boolean();
  if (f.has("recipes")) {
    for (const Field& r : f.at("recipes").elements()) {
      r.expect_object({"inputs", "outputs", "max_uses", "priority"});
      Recipe recipe;
      if (r.has("inputs")) recipe.inputs = goods.bundle(r.at("inputs"));
      recipe.outputs = goods.bundle(r.at("outputs"));
      if (r.has("max_uses")) recipe.max_uses = r.at("max_uses").bound();
      recipe.priority = r.at("priority").integer();
      company.transformation.recipes.push_back(std::move(recipe));
    }
  }
  if (f.has("benefit")) {
    for (const auto& [id, entry] : f.at("benefit").members()) {
      entry.expect_object({"price", "cap"});
      UnitPrice unit{entry.at("price").money(), std::nullopt};
      if (entry.has("cap")) unit.cap = entry.at("cap").bound();
      company.benefit.per_good[goods.good(id, entry.path())] = unit;
    }
  }
  if (f.has("cost")) {
    const Field cost = f.at("cost");
    cost.expect_object({"per_input", "per_output", "fixed", "overhead"});
    if (cost.has("per_input")) {
      for (const auto& [id, rate] : cost.at("per_input").members()) {
        company.cost.per_input[goods.good(id, rate.path())] = rate.money();
      }
    }
    if (cost.has("per_output")) {
      for (const auto& [id, rate] : cost.at("per_output").members()) {
        company.cost.per_output[goods.good(id, rate.path())] = rate.money();
      }
    }
    if (cost.has("fixed")) company.cost.fixed = cost.at("fixed").money();
    if (cost.has("overhead")) company.cost.overhead = cost.at("overhead").money();
  }
  return company;
}

GoodsFlow read_goods_flow(const Field& f, const Resolver& resolve) {
  f.expect_object({"internal", "external_sales"});
  GoodsFlow flow;
  if (f.has("internal")) {
    for (const Field& e : f.at("internal").elements()) {
      e.expect_object({"from", "to", "bundle"});
      const CompanyIndex from = resolve.company(e.at("from"));
      const CompanyIndex to = resolve.company(e.at("to"));
      if (from == to) throw SemanticError(e.path() + ": edge from a company to itself");
      flow.internal[{from, to}] += resolve.bundle(e.at("bundle"));
    }
  }
  if (f.has("external_sales")) {
    for (const auto& [id, bundle] : f.at("external_sales").members()) {
      flow.external_sales[resolve.company(id, bundle.path())] += resolve.bundle(bundle);
    }
  }
  flow.normalize();
  return flow;
}

ValueFlow read_value_flow(const Field& f, const Resolver& resolve) {
  ValueFlow value;
  for (const Field& e : f.elements()) {
    e.expect_object({"payer", "payee", "amount"});
    const CompanyIndex payer = resolve.company(e.at("payer"));
    const CompanyIndex payee = resolve.company(e.at("payee"));
    const Rational amount = e.at("amount").money();
    if (payer == payee) throw SemanticError(e.path() + ": transfer from a company to itself");
    if (amount <= 0) throw SemanticError(e.path() + ": transfer amounts must be positive");
    value.add(payer, payee, amount);
  }
  return value;
}

void check_version(const Field& root) {
  const Field version = root.at("version");
  if (!version.json().is_string()) version.fail("expected a string");
  if (version.string() != kScenarioVersion) {
    throw VersionError("unsupported scenario version '" + version.string() + "'");
  }
}

// ---- rendering ----

Json money_json(const Rational& value) { return format_rational(value); }

Json bound_json(const Bound& bound) { return bound ? Json(*bound) : Json("unbounded"); }

Json bundle_json(const NetworkGame& game, const GoodVector& v) {
  Json out = Json::object();
  for (GoodIndex g : v.support()) out[game.good(g).id] = v[g];
  return out;
}

template <typename Map>
Json rate_json(const NetworkGame& game, const Map& rates) {
  Json out = Json::object();
  for (const auto& [g, rate] : rates) out[game.good(g).id] = money_json(rate);
  return out;
}

Json company_json(const NetworkGame& game, const CompanySpec& company) {
  Json j;
  j["id"] = company.id;
  j["name"] = company.name;
  Json producible = Json::array();
  for (GoodIndex g : company.producible) producible.push_back(game.good(g).id);
  j["producible"] = std::move(producible);
  j["endowment"] = bundle_json(game, company.endowment);
  j["passthrough"] = company.transformation.passthrough;
  Json recipes = Json::array();
  for (const Recipe& recipe : company.transformation.recipes) {
    Json r;
    r["inputs"] = bundle_json(game, recipe.inputs);
    r["outputs"] = bundle_json(game, recipe.outputs);
    r["max_uses"] = bound_json(recipe.max_uses);
    r["priority"] = recipe.priority;
    recipes.push_back(std::move(r));
  }
  j["recipes"] = std::move(recipes);
  Json benefit = Json::object();
  for (const auto& [g, unit] : company.benefit.per_good) {
    benefit[game.good(g).id] = Json{{"price", money_json(unit.price)}, {"cap", bound_json(unit.cap)}};
  }
  j["benefit"] = std::move(benefit);
  Json cost;
  cost["per_input"] = rate_json(game, company.cost.per_input);
  cost["per_output"] = rate_json(game, company.cost.per_output);
  cost["fixed"] = money_json(company.cost.fixed);
  if (company.cost.overhead != 0) cost["overhead"] = money_json(company.cost.overhead);
  j["cost"] = std::move(cost);
  return j;
}

Json goods_flow_json(const NetworkGame& game, const GoodsFlow& flow) {
  Json internal = Json::array();
  for (const auto& [edge, bundle] : flow.internal) {
    if (bundle.is_zero()) continue;
    internal.push_back(Json{{"from", game.company(edge.first).id},
                            {"to", game.company(edge.second).id},
                            {"bundle", bundle_json(game, bundle)}});
  }
  Json sales = Json::object();
  for (const auto& [c, bundle] : flow.external_sales) {
    if (!bundle.is_zero()) sales[game.company(c).id] = bundle_json(game, bundle);
  }
  return Json{{"internal", std::move(internal)}, {"external_sales", std::move(sales)}};
}

Json value_flow_json(const NetworkGame& game, const ValueFlow& value) {
  Json out = Json::array();
  for (const auto& [pair, amount] : value.entries()) {
    out.push_back(Json{{"payer", game.company(pair.first).id},
                       {"payee", game.company(pair.second).id},
                       {"amount", money_json(amount)}});
  }
  return out;
}

Json document_json(const ScenarioDocument& doc) {
  const NetworkGame& game = doc.game;
  Json j;
  j["version"] = doc.version;
  Json metadata = Json::object();
  for (const auto& [k, v] : doc.metadata) metadata[k] = v;
  j["metadata"] = std::move(metadata);
  Json goods = Json::array();
  for (const GoodType& good : game.goods()) goods.push_back(Json{{"id", good.id}, {"name", good.name}});
  j["goods"] = std::move(goods);
  Json companies = Json::array();
  for (const CompanySpec& company : game.companies()) companies.push_back(company_json(game, company));
  j["companies"] = std::move(companies);
  if (doc.baseline) {
    j["baseline"] = Json{{"goods", goods_flow_json(game, doc.baseline->goods)},
                         {"value", value_flow_json(game, doc.baseline->value)}};
  }
  if (doc.improved) j["improved"] = goods_flow_json(game, *doc.improved);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

ScenarioDocument load_scenario(std::string_view bytes) {
  const Json json = parse_json(bytes);
  const Field root(json, "");
  root.expect_object({"version", "metadata", "goods", "companies", "baseline", "improved", "report"});
  check_version(root);

  ScenarioDocument doc;
  doc.version = root.at("version").string();
  if (root.has("metadata")) {
    for (const auto& [key, value] : root.at("metadata").members()) doc.metadata[key] = value.string();
  }

  std::vector<GoodType> goods;
  for (const Field& g : root.at("goods").elements()) {
    g.expect_object({"id", "name"});
    GoodType good{g.at("id").string(), ""};
    good.name = g.has("name") ? g.at("name").string() : good.id;
    goods.push_back(std::move(good));
  }
  const NetworkGame registry(goods, {});
  const Resolver resolve_goods(registry);

  std::vector<CompanySpec> companies;
  for (const Field& c : root.at("companies").elements()) companies.push_back(read_company(c, resolve_goods));
  doc.game = NetworkGame(std::move(goods), std::move(companies));

  const Resolver resolve(doc.game);
  if (root.has("baseline")) {
    const Field baseline = root.at("baseline");
    baseline.expect_object({"goods", "value"});
    Outcome outcome{doc.game, {}, {}};
    if (baseline.has("goods")) outcome.goods = read_goods_flow(baseline.at("goods"), resolve);
    if (baseline.has("value")) outcome.value = read_value_flow(baseline.at("value"), resolve);
    doc.baseline = std::move(outcome);
  }
  if (root.has("improved")) doc.improved = read_goods_flow(root.at("improved"), resolve);
  if (root.has("report") && !root.at("report").json().is_object()) root.at("report").fail("expected an object");
  return doc;
}

std::string render_scenario(const ScenarioDocument& doc) { return dump(document_json(doc)); }

GoodsFlow load_goods_flow(const NetworkGame& game, std::string_view bytes) {
  const Json json = parse_json(bytes);
  const Field root(json, "");
  if (root.has("version")) {
    ScenarioDocument doc = load_scenario(bytes);
    if (!doc.improved) throw SemanticError("scenario has no 'improved' goods flow");
    if (!(doc.game == game)) throw SemanticError("flow file describes a different game");
    return *doc.improved;
  }
  return read_goods_flow(root, Resolver(game));
}

std::string render_goods_flow(const NetworkGame& game, const GoodsFlow& flow) {
  return dump(goods_flow_json(game, flow));
}

ShippingParams default_shipping_params() {
  return {Rational(10), Rational(12), Rational(3), Rational(5), Rational(6), Rational(8)};
}

ScenarioDocument build_shipping_demo(const ShippingParams& p) {
  auto gate = [](const Rational& cost, const Rational& fee, const Rational& price, int pair) {
    if (!(cost < fee && fee < price)) {
      throw ConstraintViolation("pair " + std::to_string(pair) + " needs shipper cost < fee < cargo price, got " +
                                format_rational(cost) + ", " + format_rational(fee) + ", " + format_rational(price));
    }
  };
  gate(p.shipper1_cost, p.fee11, p.cargo1_price, 1);
  gate(p.shipper2_cost, p.fee22, p.cargo2_price, 2);

  enum : GoodIndex { kRaw1, kRaw2, kSvc1, kSvc2, kDeliv1, kDeliv2, kGoodCount };
  std::vector<GoodType> goods = {
      {"raw1", "cargo of c1 awaiting shipment"}, {"raw2", "cargo of c2 awaiting shipment"},
      {"svc1", "shipping service by s1"},        {"svc2", "shipping service by s2"},
      {"deliv1", "delivered cargo of c1"},       {"deliv2", "delivered cargo of c2"},
  };

  auto unit = [](GoodIndex g, Count n = 1) {
    GoodVector v(kGoodCount);
    v.set(g, n);
    return v;
  };

  auto cargo_owner = [&](const std::string& id, GoodIndex raw, GoodIndex deliv, const Rational& price) {
    CompanySpec c;
    c.id = id;
    c.name = "cargo owner " + id;
    c.producible = {deliv};
    c.endowment = unit(raw);
    c.transformation.recipes = {
        {unit(raw) + unit(kSvc1), unit(deliv), std::nullopt, 1},
        {unit(raw) + unit(kSvc2), unit(deliv), std::nullopt, 2},
    };
    c.benefit.per_good[deliv] = {price, Count{1}};
    return c;
  };

  auto shipper = [&](const std::string& id, GoodIndex svc, const Rational& cost) {
    CompanySpec s;
    s.id = id;
    s.name = "shipper " + id;
    s.producible = {svc};
    s.transformation.recipes = {{GoodVector(kGoodCount), unit(svc), Count{2}, 1}};
    s.cost.per_output[svc] = cost;
    return s;
  };

  std::vector<CompanySpec> companies = {
      cargo_owner("c1", kRaw1, kDeliv1, p.cargo1_price),
      cargo_owner("c2", kRaw2, kDeliv2, p.cargo2_price),
      shipper("s1", kSvc1, p.shipper1_cost),
      shipper("s2", kSvc2, p.shipper2_cost),
  };

  ScenarioDocument doc;
  doc.game = NetworkGame(std::move(goods), std::move(companies));
  doc.metadata["scenario"] = "shipping";

  const CompanyIndex c1 = 0, c2 = 1, s1 = 2, s2 = 3;
  Outcome baseline{doc.game, {}, {}};
  baseline.goods.add_internal(s1, c1, kSvc1, 1);
  baseline.goods.add_internal(s2, c2, kSvc2, 1);
  baseline.goods.add_sale(c1, kDeliv1, 1);
  baseline.goods.add_sale(c2, kDeliv2, 1);
  baseline.value.add(c1, s1, p.fee11);
  baseline.value.add(c2, s2, p.fee22);
  doc.baseline = std::move(baseline);
  return doc;
}

std::string summarize(const NetworkGame& game, const GoodVector& v) {
  std::string out;
  for (GoodIndex g : game.goods_by_id()) {
    if (v[g] == 0) continue;
    if (!out.empty()) out += ' ';
    out += game.good(g).id + ":" + std::to_string(v[g]);
  }
  return out.empty() ? "-" : out;
}

Report make_report(const Outcome& outcome, ConservationMode mode) {
  Report report;
  const NetworkGame& game = outcome.game;
  for (CompanyIndex c : game.companies_by_id()) {
    const NodeFlows flows = node_flows(game, outcome.goods, c);
    report.rows.push_back({game.company(c).id, payoff(outcome, c), summarize(game, flows.in), summarize(game, flows.out)});
  }
  report.tnv = tnv(outcome);
  report.identity_gap = budget_identity_gap(outcome);
  report.violations = check_conservation(outcome, mode);
  return report;
}

std::string render_report(const Outcome& outcome, ReportFormat format, ConservationMode mode) {
  const Report report = make_report(outcome, mode);
  if (format == ReportFormat::Structured) {
    ScenarioDocument doc;
    doc.game = outcome.game;
    doc.baseline = outcome;
    Json j = document_json(doc);
    Json payoffs = Json::object();
    for (const ReportRow& row : report.rows) payoffs[row.company] = money_json(row.payoff);
    Json violations = Json::array();
    for (const Violation& v : report.violations) violations.push_back(describe(v));
    j["report"] = Json{{"payoffs", std::move(payoffs)},
                       {"tnv", money_json(report.tnv)},
                       {"identity_gap", money_json(report.identity_gap)},
                       {"violations", std::move(violations)}};
    return dump(j);
  }

  const std::vector<std::string> header = {"company", "payoff", "in", "out"};
  std::vector<std::vector<std::string>> cells;
  for (const ReportRow& row : report.rows) cells.push_back({row.company, format_rational(row.payoff), row.in, row.out});
  std::vector<std::size_t> width(header.size());
  for (std::size_t k = 0; k < header.size(); ++k) {
    width[k] = header[k].size();
    for (const auto& line : cells) width[k] = std::max(width[k], line[k].size());
  }
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& line) {
    std::string text;
    for (std::size_t k = 0; k < line.size(); ++k) {
      text += line[k];
      if (k + 1 < line.size()) text += std::string(width[k] - line[k].size() + 2, ' ');
    }
    os << text << '\n';
  };
  emit(header);
  for (const auto& line : cells) emit(line);
  for (const Violation& v : report.violations) os << describe(v) << '\n';
  os << "TNV = " << format_rational(report.tnv) << ", identity gap = " << format_rational(report.identity_gap)
     << '\n';
  return os.str();
}

}  // namespace coopnet

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

#include <coopnet/core_model.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include <coopnet/error.hpp>

namespace coopnet {

void GoodVector::set(GoodIndex g, Count count) {
  if (count < 0) {
    throw DomainError("negative good count " + std::to_string(count));
  }
  if (g >= counts_.size()) {
    if (count == 0) return;
    counts_.resize(g + 1, 0);
  }
  counts_[g] = count;
}

void GoodVector::add(GoodIndex g, Count count) { set(g, (*this)[g] + count); }

GoodVector& GoodVector::operator+=(const GoodVector& other) {
  if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
  for (std::size_t g = 0; g < other.counts_.size(); ++g) counts_[g] += other.counts_[g];
  return *this;
}

GoodVector operator+(GoodVector a, const GoodVector& b) {
  a += b;
  return a;
}

bool GoodVector::is_zero() const noexcept {
  return std::all_of(counts_.begin(), counts_.end(), [](Count c) { return c == 0; });
}

std::vector<GoodIndex> GoodVector::support() const {
  std::vector<GoodIndex> result;
  for (std::size_t g = 0; g < counts_.size(); ++g) {
    if (counts_[g] > 0) result.push_back(g);
  }
  return result;
}

bool GoodVector::leq(const GoodVector& other) const noexcept {
  for (std::size_t g = 0; g < counts_.size(); ++g) {
    if (counts_[g] > other[g]) return false;
  }
  return true;
}

bool operator==(const GoodVector& a, const GoodVector& b) noexcept {
  const std::size_t n = std::max(a.counts_.size(), b.counts_.size());
  for (std::size_t g = 0; g < n; ++g) {
    if (a[g] != b[g]) return false;
  }
  return true;
}

NetworkGame::NetworkGame(std::vector<GoodType> goods, std::vector<CompanySpec> companies)
    : goods_(std::move(goods)), companies_(std::move(companies)) {
  // Duplicates are tolerated here so validate_game can report them; lookups
  // resolve to the first declaration.
  for (GoodIndex g = 0; g < goods_.size(); ++g) good_lookup_.emplace(goods_[g].id, g);
  for (CompanyIndex c = 0; c < companies_.size(); ++c) {
    company_lookup_.emplace(companies_[c].id, c);
  }
  good_order_.resize(goods_.size());
  std::iota(good_order_.begin(), good_order_.end(), GoodIndex{0});
  std::stable_sort(good_order_.begin(), good_order_.end(),
                   [&](GoodIndex a, GoodIndex b) { return goods_[a].id < goods_[b].id; });
  company_order_.resize(companies_.size());
  std::iota(company_order_.begin(), company_order_.end(), CompanyIndex{0});
  std::stable_sort(company_order_.begin(), company_order_.end(), [&](CompanyIndex a, CompanyIndex b) {
    return companies_[a].id < companies_[b].id;
  });
}

std::optional<GoodIndex> NetworkGame::find_good(std::string_view id) const {
  auto it = good_lookup_.find(std::string(id));
  if (it == good_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<CompanyIndex> NetworkGame::find_company(std::string_view id) const {
  auto it = company_lookup_.find(std::string(id));
  if (it == company_lookup_.end()) return std::nullopt;
  return it->second;
}

GoodIndex NetworkGame::good_index(std::string_view id) const {
  if (auto g = find_good(id)) return *g;
  throw UnknownGoodType("unknown good type '" + std::string(id) + "'");
}

CompanyIndex NetworkGame::company_index(std::string_view id) const {
  if (auto c = find_company(id)) return *c;
  throw UnknownCompany("unknown company '" + std::string(id) + "'");
}

GoodVector apply_transformation(const NetworkGame& game, const CompanySpec& company,
                                const GoodVector& g_in) {
  for (GoodIndex g = game.good_count(); g < g_in.extent(); ++g) {
    if (g_in[g] > 0) {
      throw UnknownGoodType("input references unregistered good index " + std::to_string(g));
    }
  }

  const auto& recipes = company.transformation.recipes;
  std::vector<std::size_t> order(recipes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return recipes[a].priority < recipes[b].priority;
  });

  GoodVector available = g_in;
  GoodVector out(game.good_count());
  for (std::size_t r : order) {
    const Recipe& recipe = recipes[r];
    Count uses = recipe.max_uses.value_or(std::numeric_limits<Count>::max());
    for (GoodIndex g : recipe.inputs.support()) {
      uses = std::min(uses, available[g] / recipe.inputs[g]);
    }
    // An input-free recipe without max_uses is rejected by validate_game.
    if (uses <= 0 || uses == std::numeric_limits<Count>::max()) continue;
    for (GoodIndex g : recipe.inputs.support()) {
      available.set(g, available[g] - uses * recipe.inputs[g]);
    }
    for (GoodIndex g : recipe.outputs.support()) {
      if (company.produces(g)) out.add(g, uses * recipe.outputs[g]);
    }
  }
  if (company.transformation.passthrough) {
    for (GoodIndex g : company.producible) out.add(g, available[g]);
  }
  return out;
}

std::string_view to_string(DefectKind kind) {
  switch (kind) {
    case DefectKind::NoCompanies: return "NoCompanies";
    case DefectKind::DuplicateGoodId: return "DuplicateGoodId";
    case DefectKind::DuplicateCompanyId: return "DuplicateCompanyId";
    case DefectKind::UnknownGoodReference: return "UnknownGoodReference";
    case DefectKind::ProducibleViolation: return "ProducibleViolation";
    case DefectKind::ZeroOutputRecipe: return "ZeroOutputRecipe";
    case DefectKind::DuplicatePriority: return "DuplicatePriority";
    case DefectKind::UnboundedFreeRecipe: return "UnboundedFreeRecipe";
    case DefectKind::BenefitOutsideProducible: return "BenefitOutsideProducible";
    case DefectKind::NegativeMoney: return "NegativeMoney";
  }
  return "Unknown";
}

std::string describe(const Defect& defect) {
  std::ostringstream os;
  os << to_string(defect.kind);
  if (!defect.company.empty()) os << " [" << defect.company << "]";
  if (!defect.detail.empty()) os << ": " << defect.detail;
  return os.str();
}

namespace {

class DefectCollector {
 public:
  DefectCollector(const NetworkGame& game, std::vector<Defect>& out) : game_(game), out_(out) {}

  void report(DefectKind kind, const std::string& company, std::string detail) {
    out_.push_back({kind, company, std::move(detail)});
  }

  std::string good_name(GoodIndex g) const {
    return g < game_.good_count() ? game_.good(g).id : "#" + std::to_string(g);
  }

  void check_vector(const std::string& company, const GoodVector& v, const std::string& what) {
    for (GoodIndex g : v.support()) {
      if (g >= game_.good_count()) {
        report(DefectKind::UnknownGoodReference, company, what + " references " + good_name(g));
      }
    }
  }

  void check_money(const std::string& company, const Rational& value, const std::string& what) {
    if (value < 0) {
      report(DefectKind::NegativeMoney, company, what + " is " + format_rational(value));
    }
  }

 private:
  const NetworkGame& game_;
  std::vector<Defect>& out_;
};

}  // namespace

std::vector<Defect> validate_game(const NetworkGame& game) {
  std::vector<Defect> defects;
  DefectCollector collect(game, defects);

  if (game.company_count() == 0) collect.report(DefectKind::NoCompanies, "", "game has no companies");

  std::set<std::string> seen;
  for (const GoodType& good : game.goods()) {
    if (!seen.insert(good.id).second) collect.report(DefectKind::DuplicateGoodId, "", good.id);
  }
  seen.clear();
  for (const CompanySpec& company : game.companies()) {
    if (!seen.insert(company.id).second) {
      collect.report(DefectKind::DuplicateCompanyId, company.id, company.id);
    }
  }

  for (const CompanySpec& company : game.companies()) {
    const std::string& id = company.id;
    for (GoodIndex g : company.producible) {
      if (g >= game.good_count()) {
        collect.report(DefectKind::UnknownGoodReference, id, "producible set references " + collect.good_name(g));
      }
    }
    collect.check_vector(id, company.endowment, "endowment");

    std::set<int> priorities;
    const auto& recipes = company.transformation.recipes;
    for (std::size_t r = 0; r < recipes.size(); ++r) {
      const Recipe& recipe = recipes[r];
      const std::string where = "recipe " + std::to_string(r);
      collect.check_vector(id, recipe.inputs, where + " inputs");
      collect.check_vector(id, recipe.outputs, where + " outputs");
      if (recipe.outputs.is_zero()) collect.report(DefectKind::ZeroOutputRecipe, id, where);
      for (GoodIndex g : recipe.outputs.support()) {
        if (!company.produces(g)) {
          collect.report(DefectKind::ProducibleViolation, id,
                         where + " outputs " + collect.good_name(g) + " outside the producible set");
        }
      }
      if (!priorities.insert(recipe.priority).second) {
        collect.report(DefectKind::DuplicatePriority, id,
                       where + " reuses priority " + std::to_string(recipe.priority));
      }
      if (recipe.inputs.is_zero() && !recipe.max_uses) {
        collect.report(DefectKind::UnboundedFreeRecipe, id, where + " has no inputs and no max_uses");
      }
    }

    for (const auto& [g, unit] : company.benefit.per_good) {
      if (!company.produces(g)) {
        collect.report(DefectKind::BenefitOutsideProducible, id,
                       "price on " + collect.good_name(g) + " outside the producible set");
      }
      collect.check_money(id, unit.price, "price of " + collect.good_name(g));
    }
    for (const auto& [g, rate] : company.cost.per_input) {
      collect.check_money(id, rate, "input rate of " + collect.good_name(g));
    }
    for (const auto& [g, rate] : company.cost.per_output) {
      collect.check_money(id, rate, "output rate of " + collect.good_name(g));
    }
    collect.check_money(id, company.cost.fixed, "fixed cost");
    collect.check_money(id, company.cost.overhead, "overhead");
  }
  return defects;
}

}  // namespace coopnet

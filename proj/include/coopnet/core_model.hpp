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
 * \file coopnet/core_model.hpp
 *
 * \brief Domain types of a business network game: good types, good vectors,
 *  companies with their transformation, benefit and cost specifications.
 *
 * Goods and companies are addressed by their position in the game's
 * registry (GoodIndex, CompanyIndex); string ids are resolved through
 * NetworkGame lookups.
 */

#ifndef COOPNET_CORE_MODEL_HPP
#define COOPNET_CORE_MODEL_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <coopnet/rational.hpp>

namespace coopnet {

using GoodIndex = std::size_t;
using CompanyIndex = std::size_t;

/// Absent bound means unbounded.
using Bound = std::optional<Count>;

struct GoodType {
  std::string id;
  std::string name;

  friend bool operator==(const GoodType&, const GoodType&) = default;
};

/// Nonnegative integer quantity per good type. Missing entries read as zero,
/// so vectors of different stored lengths compare as if zero-extended.
class GoodVector {
 public:
  GoodVector() = default;
  explicit GoodVector(std::size_t size) : counts_(size, 0) {}

  Count operator[](GoodIndex g) const noexcept {
    return g < counts_.size() ? counts_[g] : 0;
  }

  /// Throws DomainError for negative counts.
  void set(GoodIndex g, Count count);
  void add(GoodIndex g, Count count);

  GoodVector& operator+=(const GoodVector& other);

  /// One past the highest index that may be nonzero.
  std::size_t extent() const noexcept { return counts_.size(); }

  bool is_zero() const noexcept;

  /// Indices with a positive count, ascending.
  std::vector<GoodIndex> support() const;

  /// Componentwise <= over the union of keys.
  bool leq(const GoodVector& other) const noexcept;

  friend bool operator==(const GoodVector& a, const GoodVector& b) noexcept;

 private:
  std::vector<Count> counts_;
};

GoodVector operator+(GoodVector a, const GoodVector& b);

struct Recipe {
  GoodVector inputs;
  GoodVector outputs;
  Bound max_uses;
  int priority = 0;

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

/// Priority-ordered greedy recipes. With passthrough set, unconsumed units of
/// producible goods are carried into the output.
struct Transformation {
  std::vector<Recipe> recipes;
  bool passthrough = false;

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

struct UnitPrice {
  Rational price;
  Bound cap;

  friend bool operator==(const UnitPrice&, const UnitPrice&) = default;
};

/// Linear external benefit: sum over goods of price * min(count, cap).
struct BenefitSpec {
  std::map<GoodIndex, UnitPrice> per_good;

  friend bool operator==(const BenefitSpec&, const BenefitSpec&) = default;
};

/// Linear external cost on the actual node flows plus a fixed charge levied
/// whenever the output is nonzero. `overhead` is charged unconditionally; it
/// is zero for declared companies and only set by collapse_nodes to carry the
/// internal cost of a merged pair.
struct CostSpec {
  std::map<GoodIndex, Rational> per_input;
  std::map<GoodIndex, Rational> per_output;
  Rational fixed;
  Rational overhead;

  friend bool operator==(const CostSpec&, const CostSpec&) = default;
};

struct CompanySpec {
  std::string id;
  std::string name;
  std::set<GoodIndex> producible;
  Transformation transformation;
  BenefitSpec benefit;
  CostSpec cost;
  GoodVector endowment;

  bool produces(GoodIndex g) const { return producible.count(g) != 0; }

  friend bool operator==(const CompanySpec&, const CompanySpec&) = default;
};

/// The players plus the global good-type registry.
class NetworkGame {
 public:
  NetworkGame() = default;
  NetworkGame(std::vector<GoodType> goods, std::vector<CompanySpec> companies);

  const std::vector<GoodType>& goods() const noexcept { return goods_; }
  const std::vector<CompanySpec>& companies() const noexcept { return companies_; }
  std::size_t good_count() const noexcept { return goods_.size(); }
  std::size_t company_count() const noexcept { return companies_.size(); }

  const GoodType& good(GoodIndex g) const { return goods_.at(g); }
  const CompanySpec& company(CompanyIndex c) const { return companies_.at(c); }

  /// Throws UnknownGoodType / UnknownCompany.
  GoodIndex good_index(std::string_view id) const;
  CompanyIndex company_index(std::string_view id) const;
  std::optional<GoodIndex> find_good(std::string_view id) const;
  std::optional<CompanyIndex> find_company(std::string_view id) const;

  /// Indices sorted by id; the canonical iteration order for searches and
  /// reports.
  const std::vector<CompanyIndex>& companies_by_id() const noexcept { return company_order_; }
  const std::vector<GoodIndex>& goods_by_id() const noexcept { return good_order_; }

  friend bool operator==(const NetworkGame& a, const NetworkGame& b) {
    return a.goods_ == b.goods_ && a.companies_ == b.companies_;
  }

 private:
  std::vector<GoodType> goods_;
  std::vector<CompanySpec> companies_;
  std::unordered_map<std::string, GoodIndex> good_lookup_;
  std::unordered_map<std::string, CompanyIndex> company_lookup_;
  std::vector<CompanyIndex> company_order_;
  std::vector<GoodIndex> good_order_;
};

/// Evaluates t_i(g_in). Recipes run in ascending priority, each as many times
/// as the remaining inputs and its max_uses allow. Output support is always a
/// subset of the company's producible set.
///
/// Throws UnknownGoodType if `g_in` has a positive entry outside the registry.
GoodVector apply_transformation(const NetworkGame& game, const CompanySpec& company,
                                const GoodVector& g_in);

enum class DefectKind {
  NoCompanies,
  DuplicateGoodId,
  DuplicateCompanyId,
  UnknownGoodReference,
  ProducibleViolation,
  ZeroOutputRecipe,
  DuplicatePriority,
  UnboundedFreeRecipe,
  BenefitOutsideProducible,
  NegativeMoney,
};

std::string_view to_string(DefectKind kind);

struct Defect {
  DefectKind kind;
  std::string company;  // empty when the defect is game-wide
  std::string detail;
};

/// Empty iff every type-level invariant holds.
std::vector<Defect> validate_game(const NetworkGame& game);

std::string describe(const Defect& defect);

}  // namespace coopnet

#endif  // COOPNET_CORE_MODEL_HPP

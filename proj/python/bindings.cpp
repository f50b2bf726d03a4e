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

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <coopnet/cli.hpp>
#include <coopnet/error.hpp>
#include <coopnet/optimizer.hpp>
#include <coopnet/rebalancer.hpp>
#include <coopnet/scenario.hpp>

namespace py = pybind11;
namespace cn = coopnet;

namespace {

// Money crosses the boundary as fractions.Fraction; inputs may also be int
// or "p/q" strings.
py::object to_fraction(const cn::Rational& value) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(cn::format_rational(value));
}

cn::Rational from_python(const py::handle& value) {
  if (py::isinstance<py::float_>(value)) throw py::type_error("floats are not exact; pass int, str or Fraction");
  return cn::parse_rational(py::str(value).cast<std::string>());
}

cn::ConservationMode parse_mode(const std::string& mode) {
  if (mode == "disposal") return cn::ConservationMode::Disposal;
  if (mode == "exact") return cn::ConservationMode::Exact;
  throw py::value_error("conservation must be 'disposal' or 'exact'");
}

const cn::Outcome& baseline_of(const cn::ScenarioDocument& doc) {
  if (!doc.baseline) throw py::value_error("scenario has no baseline");
  return *doc.baseline;
}

py::dict payoffs_of(const cn::Outcome& outcome) {
  py::dict out;
  for (cn::CompanyIndex c : outcome.game.companies_by_id()) {
    out[py::str(outcome.game.company(c).id)] = to_fraction(cn::payoff(outcome, c));
  }
  return out;
}

cn::SearchBounds make_bounds(cn::Count bound, const std::string& conservation) {
  cn::SearchBounds bounds;
  bounds.max_units_per_edge = bound;
  bounds.mode = parse_mode(conservation);
  return bounds;
}

struct PySearchResult {
  cn::NetworkGame game;
  cn::SearchResult result;
};

}  // namespace

PYBIND11_MODULE(coopnet, m) {
  m.doc() = "Business network games: payoffs, TNV search and Pareto rebalancing";

  py::register_exception<cn::DomainFailure>(m, "DomainFailure");
  py::register_exception<cn::InputFailure>(m, "InputFailure");

  py::class_<cn::ScenarioDocument>(m, "Scenario")
      .def_property_readonly("company_ids",
                             [](const cn::ScenarioDocument& d) {
                               std::vector<std::string> ids;
                               for (const auto& c : d.game.companies()) ids.push_back(c.id);
                               return ids;
                             })
      .def_property_readonly("good_ids",
                             [](const cn::ScenarioDocument& d) {
                               std::vector<std::string> ids;
                               for (const auto& g : d.game.goods()) ids.push_back(g.id);
                               return ids;
                             })
      .def_property_readonly("metadata", [](const cn::ScenarioDocument& d) { return d.metadata; })
      .def("render", &cn::render_scenario)
      .def("defects",
           [](const cn::ScenarioDocument& d) {
             std::vector<std::string> out;
             for (const auto& defect : cn::validate_game(d.game)) out.push_back(cn::describe(defect));
             return out;
           })
      .def(
          "violations",
          [](const cn::ScenarioDocument& d, const std::string& conservation) {
            std::vector<std::string> out;
            for (const auto& v : cn::check_conservation(baseline_of(d), parse_mode(conservation))) {
              out.push_back(cn::describe(v));
            }
            return out;
          },
          py::arg("conservation") = "disposal")
      .def("payoffs", [](const cn::ScenarioDocument& d) { return payoffs_of(baseline_of(d)); })
      .def("tnv", [](const cn::ScenarioDocument& d) { return to_fraction(cn::tnv(baseline_of(d))); })
      .def("identity_gap",
           [](const cn::ScenarioDocument& d) { return to_fraction(cn::budget_identity_gap(baseline_of(d))); })
      .def(
          "report",
          [](const cn::ScenarioDocument& d, const std::string& format) {
            return cn::render_report(baseline_of(d),
                                     format == "structured" ? cn::ReportFormat::Structured : cn::ReportFormat::Text);
          },
          py::arg("format") = "text");

  py::class_<PySearchResult>(m, "SearchResult")
      .def_property_readonly("tnv", [](const PySearchResult& r) { return to_fraction(r.result.tnv); })
      .def_property_readonly("visited", [](const PySearchResult& r) { return r.result.visited; })
      .def_property_readonly("iterations", [](const PySearchResult& r) { return r.result.iterations; })
      .def("flow_json", [](const PySearchResult& r) { return cn::render_goods_flow(r.game, r.result.flow); });

  m.def("load_scenario", [](const std::string& text) { return cn::load_scenario(text); }, py::arg("text"));

  m.def(
      "build_shipping_demo",
      [](const py::object& params) {
        cn::ShippingParams p = cn::default_shipping_params();
        if (!params.is_none()) {
          const auto values = params.cast<std::vector<py::object>>();
          if (values.size() != 6) throw py::value_error("expected six values p_c1,p_c2,p_s1,p_s2,v11,v22");
          p = {from_python(values[0]), from_python(values[1]), from_python(values[2]),
               from_python(values[3]), from_python(values[4]), from_python(values[5])};
        }
        return cn::build_shipping_demo(p);
      },
      py::arg("params") = py::none());

  m.def(
      "brute_force",
      [](const cn::ScenarioDocument& d, cn::Count bound, unsigned threads, const std::string& conservation) {
        py::gil_scoped_release release;
        return PySearchResult{d.game, cn::brute_force_max_tnv(d.game, make_bounds(bound, conservation), threads)};
      },
      py::arg("scenario"), py::arg("bound") = 2, py::arg("threads") = 1, py::arg("conservation") = "disposal");

  m.def(
      "greedy",
      [](const cn::ScenarioDocument& d, cn::Count bound, std::uint64_t max_iters, const std::string& conservation) {
        const cn::GoodsFlow start = d.baseline ? d.baseline->goods : cn::GoodsFlow{};
        return PySearchResult{d.game,
                              cn::greedy_improve(d.game, start, make_bounds(bound, conservation), max_iters)};
      },
      py::arg("scenario"), py::arg("bound") = 2, py::arg("max_iters") = 1000, py::arg("conservation") = "disposal");

  m.def(
      "rebalance",
      [](const cn::ScenarioDocument& d, const PySearchResult& improved, const py::object& weights) {
        cn::WeightVector w = cn::uniform_weights(d.game);
        if (!weights.is_none()) {
          w.weights.clear();
          for (const auto& [key, value] : weights.cast<py::dict>()) w.weights[py::str(key)] = from_python(value);
        }
        const cn::ValueFlow value = cn::pareto_rebalance(baseline_of(d), improved.result.flow, w);
        return payoffs_of(cn::Outcome{d.game, improved.result.flow, value});
      },
      py::arg("scenario"), py::arg("improved"), py::arg("weights") = py::none(),
      "Payoffs after splitting the TNV gain of `improved` over the baseline.");

  m.def(
      "collapse",
      [](const cn::ScenarioDocument& d, const std::string& first, const std::string& second) {
        const cn::CollapsedOutcome collapsed = cn::collapse_nodes(baseline_of(d), first, second);
        return py::make_tuple(collapsed.merged_id, to_fraction(cn::tnv(collapsed.outcome)),
                              to_fraction(cn::payoff(collapsed.outcome, collapsed.merged_id)));
      },
      py::arg("scenario"), py::arg("first"), py::arg("second"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cn::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

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

#include <coopnet/cli.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <coopnet/error.hpp>
#include <coopnet/optimizer.hpp>
#include <coopnet/rebalancer.hpp>
#include <coopnet/scenario.hpp>

namespace coopnet {

namespace {

struct GlobalOptions {
  std::string format = "text";
  std::string conservation = "disposal";

  ReportFormat report_format() const { return format == "structured" ? ReportFormat::Structured : ReportFormat::Text; }
  ConservationMode mode() const {
    return conservation == "exact" ? ConservationMode::Exact : ConservationMode::Disposal;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFailure("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << bytes)) throw InputFailure("cannot write '" + path + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

Rational parse_money_arg(const std::string& text, const std::string& what) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw InputFailure(what + ": " + e.what());
  }
}

WeightVector parse_weights(const std::string& text) {
  WeightVector w;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw BadWeights("expected id=p/q in --weights, got '" + item + "'");
    w.weights[item.substr(0, eq)] = parse_money_arg(item.substr(eq + 1), "--weights");
  }
  return w;
}

ShippingParams parse_params(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 6) throw InputFailure("--params needs six values p_c1,p_c2,p_s1,p_s2,v11,v22");
  std::vector<Rational> v;
  for (const auto& part : parts) v.push_back(parse_money_arg(part, "--params"));
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

int cmd_validate(const GlobalOptions& opts, const std::string& file, std::ostream& out) {
  const ScenarioDocument doc = load_scenario(read_file(file));
  const auto defects = validate_game(doc.game);
  for (const Defect& d : defects) out << describe(d) << '\n';
  std::size_t violations = 0;
  if (defects.empty() && doc.baseline) {
    for (const Violation& v : check_conservation(*doc.baseline, opts.mode())) {
      out << describe(v) << '\n';
      ++violations;
    }
  }
  if (defects.empty() && violations == 0) {
    out << "ok: " << doc.game.company_count() << " companies, " << doc.game.good_count() << " good types\n";
    return kExitOk;
  }
  return kExitDomain;
}

int cmd_evaluate(const GlobalOptions& opts, const std::string& file, std::ostream& out) {
  const ScenarioDocument doc = load_scenario(read_file(file));
  if (const auto defects = validate_game(doc.game); !defects.empty()) {
    for (const Defect& d : defects) out << describe(d) << '\n';
    return kExitDomain;
  }
  const Outcome outcome = doc.baseline ? *doc.baseline : Outcome{doc.game, {}, {}};
  out << render_report(outcome, opts.report_format(), opts.mode());
  return check_conservation(outcome, opts.mode()).empty() ? kExitOk : kExitDomain;
}

struct OptimizeArgs {
  std::string file;
  Count bound = 2;
  std::string method = "brute";
  std::uint64_t max_iters = 1000;
  unsigned threads = 1;
  std::string out;
};

int cmd_optimize(const GlobalOptions& opts, const OptimizeArgs& args, std::ostream& out) {
  ScenarioDocument doc = load_scenario(read_file(args.file));
  SearchBounds bounds;
  bounds.max_units_per_edge = args.bound;
  bounds.mode = opts.mode();

  const GoodsFlow start = doc.baseline ? doc.baseline->goods : GoodsFlow{};
  const SearchResult result = args.method == "greedy" ? greedy_improve(doc.game, start, bounds, args.max_iters)
                                                      : brute_force_max_tnv(doc.game, bounds, args.threads);
  doc.improved = result.flow;
  doc.metadata["optimizer"] = args.method;
  doc.metadata["optimizer_bound"] = std::to_string(args.bound);
  if (!args.out.empty()) write_file(args.out, render_scenario(doc));

  if (opts.report_format() == ReportFormat::Structured) {
    out << render_scenario(doc);
    return kExitOk;
  }
  out << "method: " << args.method << '\n';
  if (doc.baseline) out << "baseline TNV = " << format_rational(tnv(*doc.baseline)) << '\n';
  out << "best TNV = " << format_rational(result.tnv) << '\n';
  out << "flows evaluated: " << result.visited << '\n';
  if (args.method == "greedy") out << "improving moves: " << result.iterations << '\n';
  out << render_report(Outcome{doc.game, result.flow, {}}, ReportFormat::Text, opts.mode());
  return kExitOk;
}

struct RebalanceArgs {
  std::string file;
  std::string improved;
  std::string weights;
  std::string out;
};

int cmd_rebalance(const GlobalOptions& opts, const RebalanceArgs& args, std::ostream& out) {
  ScenarioDocument doc = load_scenario(read_file(args.file));
  if (!doc.baseline) throw SemanticError("scenario has no baseline outcome to rebalance");
  GoodsFlow improved;
  if (!args.improved.empty()) {
    improved = load_goods_flow(doc.game, read_file(args.improved));
  } else if (doc.improved) {
    improved = *doc.improved;
  } else {
    throw SemanticError("no improved flow: pass --improved or add an 'improved' block");
  }
  const WeightVector weights = args.weights.empty() ? uniform_weights(doc.game) : parse_weights(args.weights);

  const Rational before = tnv(*doc.baseline);
  const ValueFlow value = pareto_rebalance(*doc.baseline, improved, weights, opts.mode());
  const Outcome rebalanced{doc.game, improved, value};

  if (!args.out.empty()) {
    ScenarioDocument next = doc;
    next.baseline = rebalanced;
    next.improved.reset();
    next.metadata["rebalanced_from_tnv"] = format_rational(before);
    write_file(args.out, render_scenario(next));
  }
  if (opts.report_format() == ReportFormat::Text) {
    out << "baseline TNV = " << format_rational(before) << ", improved TNV = " << format_rational(tnv(rebalanced))
        << '\n';
    for (CompanyIndex c : doc.game.companies_by_id()) {
      out << doc.game.company(c).id << ": " << format_rational(payoff(*doc.baseline, c)) << " -> "
          << format_rational(payoff(rebalanced, c)) << '\n';
    }
  }
  out << render_report(rebalanced, opts.report_format(), opts.mode());
  return kExitOk;
}

int cmd_demo(const GlobalOptions& opts, const std::string& name, const std::string& params, const std::string& path,
             std::ostream& out) {
  if (name != "shipping") throw InputFailure("unknown demo '" + name + "' (available: shipping)");
  const ScenarioDocument doc = build_shipping_demo(params.empty() ? default_shipping_params() : parse_params(params));
  if (path.empty()) {
    out << (opts.report_format() == ReportFormat::Text ? render_report(*doc.baseline, ReportFormat::Text, opts.mode())
                                                       : render_scenario(doc));
  } else {
    write_file(path, render_scenario(doc));
    out << "wrote " << path << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Business network games: payoffs, TNV search and Pareto rebalancing", "coopnet"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--conservation", opts.conservation, "Goods conservation rule")
      ->check(CLI::IsMember({"disposal", "exact"}));

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check game invariants and baseline conservation");
  validate->add_option("file", file, "Scenario file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Report payoffs, TNV and the budget identity");
  evaluate->add_option("file", file, "Scenario file")->required();

  OptimizeArgs opt_args;
  auto* optimize = app.add_subcommand("optimize", "Search for a TNV-maximizing goods flow");
  optimize->add_option("file", opt_args.file, "Scenario file")->required();
  optimize->add_option("--bound", opt_args.bound, "Max units per edge and good")->check(CLI::PositiveNumber);
  optimize->add_option("--method", opt_args.method, "brute or greedy")->check(CLI::IsMember({"brute", "greedy"}));
  optimize->add_option("--max-iters", opt_args.max_iters, "Greedy iteration limit");
  optimize->add_option("--threads", opt_args.threads, "Worker threads for brute force")->check(CLI::PositiveNumber);
  optimize->add_option("--out", opt_args.out, "Write the scenario with the found flow as 'improved'");

  RebalanceArgs reb_args;
  auto* rebalance = app.add_subcommand("rebalance", "Split a TNV gain so every company strictly gains");
  rebalance->add_option("file", reb_args.file, "Scenario file with a baseline")->required();
  rebalance->add_option("--improved", reb_args.improved, "Goods-flow or scenario file with the improved flow");
  rebalance->add_option("--weights", reb_args.weights, "Surplus shares, e.g. c1=1/2,c2=1/6,s1=1/6,s2=1/6");
  rebalance->add_option("--out", reb_args.out, "Write the rebalanced scenario");

  std::string demo_name;
  std::string demo_params;
  std::string demo_out;
  auto* demo = app.add_subcommand("demo", "Build a demo scenario");
  demo->add_option("name", demo_name, "Demo name (shipping)")->required();
  demo->add_option("--params", demo_params, "p_c1,p_c2,p_s1,p_s2,v11,v22");
  demo->add_option("--out", demo_out, "Scenario file to write");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "coopnet: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(opts, file, out);
    if (*evaluate) return cmd_evaluate(opts, file, out);
    if (*optimize) return cmd_optimize(opts, opt_args, out);
    if (*rebalance) return cmd_rebalance(opts, reb_args, out);
    if (*demo) return cmd_demo(opts, demo_name, demo_params, demo_out, out);
  } catch (const DomainFailure& e) {
    err << "coopnet: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "coopnet: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace coopnet

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

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <coopnet/cli.hpp>
#include <coopnet/scenario.hpp>

#include "support/demo.hpp"

namespace cn = coopnet;
namespace ct = coopnet::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cn::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("coopnet_cli_" + std::to_string(counter_++) + "_" +
                                                  std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& bytes) const {
    const fs::path p = path_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cli evaluate and validate") {
  TempDir dir;
  const std::string demo = dir.write("demo.json", cn::render_scenario(ct::demo()));

  const Run eval = run({"evaluate", demo});
  CHECK(eval.code == cn::kExitOk);
  CHECK(eval.out.find("TNV = 14, identity gap = 0") != std::string::npos);

  const Run ok = run({"validate", demo});
  CHECK(ok.code == cn::kExitOk);
  CHECK(ok.out.rfind("ok: 4 companies, 6 good types", 0) == 0);

  CHECK(run({"--conservation", "exact", "validate", demo}).code == cn::kExitDomain);

  auto broken = nlohmann::ordered_json::parse(cn::render_scenario(ct::demo()));
  broken["companies"][0]["recipes"][1]["priority"] = 1;
  const Run bad = run({"validate", dir.write("broken.json", broken.dump())});
  CHECK(bad.code == cn::kExitDomain);
  CHECK_FALSE(bad.out.empty());

  const Run structured = run({"--format", "structured", "evaluate", demo});
  CHECK(structured.code == cn::kExitOk);
  CHECK(cn::load_scenario(structured.out).baseline == ct::demo().baseline);
}

TEST_CASE("cli optimize then rebalance") {
  TempDir dir;
  const std::string demo = dir.write("demo.json", cn::render_scenario(ct::demo()));
  const std::string optimized = dir.file("optimized.json");

  const Run opt = run({"optimize", demo, "--bound", "1", "--out", optimized});
  CHECK(opt.code == cn::kExitOk);
  CHECK(opt.out.find("best TNV = 16") != std::string::npos);
  const cn::ScenarioDocument doc = cn::load_scenario(slurp(optimized));
  REQUIRE(doc.improved);
  CHECK(cn::tnv(doc.game, *doc.improved) == 16);

  const Run greedy = run({"optimize", demo, "--method", "greedy"});
  CHECK(greedy.code == cn::kExitOk);
  CHECK(greedy.out.find("best TNV = 16") != std::string::npos);

  const std::string rebalanced = dir.file("rebalanced.json");
  const Run reb = run({"rebalance", optimized, "--out", rebalanced});
  CHECK(reb.code == cn::kExitOk);
  CHECK(reb.out.find("s2: 3 -> 7/2") != std::string::npos);
  const cn::ScenarioDocument after = cn::load_scenario(slurp(rebalanced));
  CHECK(cn::payoff(*after.baseline, "c1") == cn::make_rational(9, 2));
  CHECK(after.metadata.at("rebalanced_from_tnv") == "14");

  const Run weighted = run({"rebalance", optimized, "--weights", "c1=1/2,c2=1/6,s1=1/6,s2=1/6"});
  CHECK(weighted.code == cn::kExitOk);
  CHECK(weighted.out.find("c2: 4 -> 13/3") != std::string::npos);

  CHECK(run({"rebalance", optimized, "--weights", "c1=1/2,c2=1/2"}).code == cn::kExitUsage);
}

TEST_CASE("cli domain failures exit 1") {
  TempDir dir;
  const std::string demo = dir.write("demo.json", cn::render_scenario(ct::demo()));
  // The baseline flow itself brings no surplus.
  const std::string same = dir.write("same.json", cn::render_goods_flow(ct::demo().game, ct::demo_baseline().goods));
  const Run reb = run({"rebalance", demo, "--improved", same});
  CHECK(reb.code == cn::kExitDomain);
  CHECK(reb.err.find("coopnet:") == 0);

  CHECK(run({"demo", "shipping", "--params", "10,12,3,5,2,8"}).code == cn::kExitDomain);
}

TEST_CASE("cli usage errors exit 2") {
  TempDir dir;
  CHECK(run({}).code == cn::kExitUsage);
  CHECK(run({"frobnicate"}).code == cn::kExitUsage);
  CHECK(run({"evaluate", dir.file("missing.json")}).code == cn::kExitUsage);
  CHECK(run({"evaluate", dir.write("junk.json", "{ nope")}).code == cn::kExitUsage);
  CHECK(run({"optimize", dir.write("d.json", cn::render_scenario(ct::demo())), "--bound", "0"}).code ==
        cn::kExitUsage);
  CHECK(run({"--format", "yaml", "demo", "shipping"}).code == cn::kExitUsage);
  CHECK(run({"demo", "shipping", "--params", "1,2"}).code == cn::kExitUsage);
  CHECK(run({"demo", "trains"}).code == cn::kExitUsage);
}

TEST_CASE("cli demo writes a loadable scenario") {
  TempDir dir;
  const std::string path = dir.file("out.json");
  const Run r = run({"demo", "shipping", "--out", path});
  CHECK(r.code == cn::kExitOk);
  CHECK(cn::load_scenario(slurp(path)) == ct::demo());
  CHECK(run({"demo", "shipping"}).out.find("TNV = 14") != std::string::npos);
}

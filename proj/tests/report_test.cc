// Copyright 2026 The fpselect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fpselect/report.h"

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_util.h"

namespace fpselect {
namespace {

RunInfo Info() {
  RunInfo info;
  info.method = "greedy";
  info.alpha = 0.2;
  info.beta = 1;
  info.k = 1;
  info.seed = 7;
  info.knowledge = "population";
  info.dataset_path = "d.jsonl";
  info.catalog_path = "c.json";
  return info;
}

TEST(ReportTest, SelectionReportFields) {
  Dataset dataset = testing::LoadSixUsers();
  SelectionConfig config;
  config.alpha = 0.2;
  config.threads = 1;
  SelectionResult result =
      SelectGreedy(dataset, AttackerInstance::Strongest(dataset, 1), config);
  nlohmann::json doc = nlohmann::json::parse(
      SelectionReportToJson(result, dataset.catalog(), Info(), std::nullopt));
  EXPECT_EQ(doc["status"], "ok");
  EXPECT_EQ(doc["chosen"], nlohmann::json({"Language", "Screen"}));
  EXPECT_EQ(doc["cost_breakdown"]["total_points"], 6.0);
  EXPECT_EQ(doc["sensitivity"], 1.0 / 6.0);
  EXPECT_EQ(doc["explored_count"], 7);
  EXPECT_EQ(doc["trace"].size(), 3u);
  EXPECT_EQ(doc["trace"][0]["min_cost"], "inf");
  EXPECT_TRUE(doc["runtime_ms"].is_null());
  EXPECT_EQ(doc["config"]["seed"], 7);
  EXPECT_EQ(doc["config"]["weights"], nlohmann::json({1.0, 10.0, 10000.0}));
  EXPECT_EQ(doc["config"]["method"], "greedy");
  EXPECT_EQ(doc["config"]["k"], 1);
  EXPECT_EQ(doc["config"]["beta"], 1);
  EXPECT_EQ(doc["config"]["alpha"], 0.2);

  nlohmann::json timed = nlohmann::json::parse(
      SelectionReportToJson(result, dataset.catalog(), Info(), 12.5));
  EXPECT_EQ(timed["runtime_ms"], 12.5);
}

TEST(ReportTest, NoSolutionReportCarriesFullSensitivity) {
  Dataset dataset = testing::LoadSixUsers();
  SelectionConfig config;
  config.alpha = 0.1;
  SelectionResult result =
      SelectGreedy(dataset, AttackerInstance::Strongest(dataset, 1), config);
  nlohmann::json doc = nlohmann::json::parse(
      SelectionReportToJson(result, dataset.catalog(), Info(), std::nullopt));
  EXPECT_EQ(doc["status"], "no_solution");
  EXPECT_TRUE(doc["chosen"].is_null());
  EXPECT_EQ(doc["full_sensitivity"], 1.0 / 6.0);
}

TEST(ReportTest, TraceCsvRows) {
  testing::TableProblem problem = testing::WorkedLattice();
  SelectionConfig config;
  config.alpha = 0.15;
  config.k = 2;
  SelectionResult result = SelectGreedy(problem, config);
  AttributeCatalog catalog({testing::Category("1"), testing::Category("2"),
                            testing::Category("3")});
  std::string csv = TraceToCsv(result, catalog);
  EXPECT_EQ(csv,
            "stage,collection,attributes,min_cost\n"
            "1,E,1,inf\n"
            "1,E,2,inf\n"
            "1,E,3,inf\n"
            "1,S,3,inf\n"
            "1,S,1,inf\n"
            "2,E,1;2,20\n"
            "2,E,1;3,20\n"
            "2,E,2;3,20\n"
            "2,T,1;2,20\n"
            "2,S,1;3,20\n"
            "2,I,2;3,20\n"
            "3,T,1;2,20\n"
            "3,I,2;3,20\n");
}

TEST(ReportTest, BaselineCsvAndEvaluation) {
  Dataset dataset = testing::LoadSixUsers();
  SelectionConfig config;
  config.alpha = 0.2;
  AttackerInstance attacker = AttackerInstance::Strongest(dataset, 1);
  SelectionResult result = SelectCondEntropyBaseline(dataset, attacker, config);
  std::string csv = TraceToCsv(result, dataset.catalog());
  EXPECT_EQ(csv.rfind("step,attribute,score,sensitivity,cost\n1,Language,", 0),
            0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  AttributeSet set{1, 2};
  Evaluation evaluation = Evaluate(set, dataset, attacker, config.weights);
  nlohmann::json doc = nlohmann::json::parse(
      EvaluationToJson(evaluation, set, dataset.catalog(), Info()));
  EXPECT_EQ(doc["impersonated"], nlohmann::json({"u5"}));
  EXPECT_EQ(EvaluationToCsv(evaluation, set, dataset.catalog()),
            "attributes,memory_bytes,time_ms,instability_changes,"
            "total_points,sensitivity,impersonated\n"
            "Language;Screen,6,0,0,6,0.16666666666666666,1\n");
}

TEST(ReportTest, CsvQuoting) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace fpselect

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

#include "fpselect/dataset.h"

#include <cmath>
#include <functional>
#include <sstream>

#include <gtest/gtest.h>

#include "fpselect/error.h"
#include "test_util.h"

namespace fpselect {
namespace {

using testing::Category;
using testing::LoadSixUsers;
using testing::Obs;

const char kCatalog[] = R"([
  {"name": "b", "kind": "category", "async": false},
  {"name": "a", "kind": "number", "async": true, "match_threshold": 2.5}
])";

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kPrecondition;
}

std::string MessageOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return "";
}

TEST(CatalogTest, ParsesAndSortsByName) {
  AttributeCatalog catalog = ParseCatalog(kCatalog);
  ASSERT_EQ(catalog.size(), 2u);
  EXPECT_EQ(catalog[0].name, "a");
  EXPECT_EQ(catalog[0].kind, AttributeKind::kNumber);
  EXPECT_TRUE(catalog[0].is_async);
  EXPECT_DOUBLE_EQ(catalog[0].match_threshold, 2.5);
  EXPECT_EQ(catalog[1].name, "b");
  EXPECT_EQ(catalog.IndexOf("b"), 1u);
  EXPECT_FALSE(catalog.Find("zzz").has_value());
}

TEST(CatalogTest, RoundTripsThroughJson) {
  AttributeCatalog catalog = ParseCatalog(kCatalog);
  AttributeCatalog again = ParseCatalog(CatalogToJson(catalog));
  ASSERT_EQ(again.size(), catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    EXPECT_EQ(again[i].name, catalog[i].name);
    EXPECT_EQ(again[i].kind, catalog[i].kind);
    EXPECT_EQ(again[i].is_async, catalog[i].is_async);
    EXPECT_EQ(again[i].match_threshold, catalog[i].match_threshold);
    EXPECT_EQ(again[i].set_separator, catalog[i].set_separator);
  }
}

TEST(CatalogTest, RejectsInvalidDocuments) {
  EXPECT_EQ(CodeOf([] { ParseCatalog("{"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { ParseCatalog("{}"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseCatalog(R"([{"name":"a","kind":"colour","async":false}])");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseCatalog(R"([{"name":"a","kind":"text","async":false},
                               {"name":"a","kind":"text","async":false}])");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseCatalog(
                  R"([{"name":"a","kind":"text","async":false,"x":1}])");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseCatalog(R"([{"name":"a","kind":"category","async":false,
                                "match_threshold":1.0}])");
            }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] {
              ParseCatalog(R"([{"name":"a","kind":"text","async":false,
                                "match_threshold":-1}])");
            }),
            ErrorCode::kSchema);
}

TEST(CatalogTest, SetOfUnknownNameIsConfigError) {
  AttributeCatalog catalog = ParseCatalog(kCatalog);
  EXPECT_EQ(catalog.SetOf({"b", "a"}), (AttributeSet{0, 1}));
  EXPECT_EQ(catalog.NamesOf(AttributeSet{0, 1}),
            (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(CodeOf([&] { catalog.SetOf({"nope"}); }), ErrorCode::kConfig);
}

TEST(DatasetTest, SixUsersUsers) {
  Dataset dataset = LoadSixUsers();
  EXPECT_EQ(dataset.size(), 6u);
  EXPECT_EQ(dataset.num_users(), 6u);
  EXPECT_EQ(dataset.user_ids().front(), "u1");
  EXPECT_TRUE(dataset.consecutive_observation_pairs().empty());
  EXPECT_EQ(dataset.StoredFingerprint(0),
            (Fingerprint{"True", "fr", "1080", "-1"}));
}

TEST(DatasetTest, StoredFingerprintIsFirstObservation) {
  AttributeCatalog catalog({Category("x")});
  Dataset dataset(catalog, {Obs("b", 0, {"old"}), Obs("a", 0, {"p"}),
                            Obs("b", 5, {"new"}), Obs("b", 9, {"newer"})});
  EXPECT_EQ(dataset.user_ids(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(dataset.StoredFingerprint(1), (Fingerprint{"old"}));
  auto pairs = ConsecutivePairs(dataset);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].first, (Fingerprint{"old"}));
  EXPECT_EQ(pairs[0].second, (Fingerprint{"new"}));
  EXPECT_EQ(pairs[1].second, (Fingerprint{"newer"}));
}

TEST(DatasetTest, RejectsInvalidObservations) {
  AttributeCatalog catalog({Category("x")});
  EXPECT_EQ(CodeOf([&] { Dataset(catalog, {}); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Dataset(catalog, {Obs("b", 0, {"1", "2"})}); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Dataset(catalog, {Obs("b", 0, {"1"}, {-1.0})}); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] {
              Dataset(catalog, {Obs("b", 3, {"1"}), Obs("b", 3, {"2"})});
            }),
            ErrorCode::kSchema);
}

TEST(DatasetTest, ParseErrorsNameTheLine) {
  AttributeCatalog catalog = ParseCatalog(kCatalog);
  std::istringstream rows(
      R"({"browser_id":"x","seq":0,"values":{"a":"1","b":"q"}})"
      "\n"
      R"({"browser_id":"x","seq":1,"values":{"a":"1","Foo":"q"}})"
      "\n");
  std::string message = MessageOf([&] { ParseDataset(rows, catalog); });
  EXPECT_NE(message.find("line 2"), std::string::npos) << message;
  EXPECT_NE(message.find("Foo"), std::string::npos) << message;

  std::istringstream broken("{\"browser_id\": \n");
  EXPECT_EQ(CodeOf([&] { ParseDataset(broken, catalog); }),
            ErrorCode::kSchema);
  std::istringstream missing(R"({"browser_id":"x","seq":0,"values":{"a":"1"}})");
  EXPECT_EQ(CodeOf([&] { ParseDataset(missing, catalog); }),
            ErrorCode::kSchema);
}

TEST(DatasetTest, CollectTimesDefaultToZero) {
  AttributeCatalog catalog = ParseCatalog(kCatalog);
  std::istringstream rows(
      R"({"browser_id":"x","seq":0,"values":{"a":"1","b":"q"},"collect_ms":{"a":2.5}})");
  Dataset dataset = ParseDataset(rows, catalog);
  EXPECT_EQ(dataset.observations()[0].collect_ms,
            (std::vector<double>{2.5, 0.0}));
}

TEST(DatasetTest, WriteThenParseRoundTrips) {
  Dataset dataset = LoadSixUsers();
  std::stringstream buffer;
  WriteDataset(dataset, buffer);
  Dataset again = ParseDataset(buffer, dataset.catalog());
  ASSERT_EQ(again.size(), dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    EXPECT_EQ(again.observations()[i].values, dataset.observations()[i].values);
    EXPECT_EQ(again.observations()[i].browser_id,
              dataset.observations()[i].browser_id);
  }
}

TEST(PmfTest, SixUsersLanguageDistribution) {
  Dataset dataset = LoadSixUsers();
  Pmf pmf = ComputePmf(dataset, AttributeSet{1});
  ASSERT_EQ(pmf.entries().size(), 4u);
  EXPECT_EQ(pmf.entries()[0].values, (Fingerprint{"en"}));
  EXPECT_DOUBLE_EQ(pmf.entries()[0].probability, 2.0 / 6.0);
  // H = 2 * (1/3) log2 3 + 2 * (1/6) log2 6.
  double expected = 2.0 / 3.0 * std::log2(3.0) + 1.0 / 3.0 * std::log2(6.0);
  EXPECT_NEAR(Entropy(pmf), expected, 1e-12);
  EXPECT_NEAR(Entropy(pmf), 1.918, 5e-4);
  EXPECT_DOUBLE_EQ(Entropy(ComputePmf(dataset, AttributeSet{0})), 0.0);
  EXPECT_DOUBLE_EQ(Entropy(ComputePmf(dataset, AttributeSet())), 0.0);
}

TEST(PmfTest, ProjectionMatchesDirectComputation) {
  Dataset dataset = LoadSixUsers();
  Pmf full = ComputePmf(dataset, dataset.catalog().All());
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<AttributeIndex> indices;
    for (AttributeIndex a = 0; a < 4; ++a) {
      if (mask & (1u << a)) indices.push_back(a);
    }
    AttributeSet set(indices);
    Pmf projected = full.Project(set);
    Pmf direct = ComputePmf(dataset, set);
    ASSERT_EQ(projected.entries().size(), direct.entries().size());
    for (std::size_t i = 0; i < direct.entries().size(); ++i) {
      EXPECT_EQ(projected.entries()[i].values, direct.entries()[i].values);
      EXPECT_NEAR(projected.entries()[i].probability,
                  direct.entries()[i].probability, 1e-12);
    }
  }
}

TEST(PmfTest, RejectsInvalidMass) {
  AttributeSet set{0};
  EXPECT_EQ(CodeOf([&] { Pmf(set, {{{"a"}, 0.5}}); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Pmf(set, {{{"a"}, 0.5}, {{"a"}, 0.5}}); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Pmf(set, {{{"a"}, 0.0}, {{"b"}, 1.0}}); }),
            ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { Pmf(set, {{{"a", "b"}, 1.0}}); }),
            ErrorCode::kSchema);
}

}  // namespace
}  // namespace fpselect

//
// Copyright 2026 The unlearnaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "unlearnaudit/data.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "gtest/gtest.h"

namespace unlearnaudit {
namespace {

TEST(CsvTest, ParsesRowsInOrder) {
  auto data = ParseCsv("a,b,label\n1,2,x\n3,4,y\n5,6,x\n", {});
  ASSERT_TRUE(data.ok()) << data.status();
  EXPECT_EQ(data->dataset.size(), 3u);
  EXPECT_EQ(data->dataset[0].label.class_id, 0);
  EXPECT_EQ(data->dataset[1].label.class_id, 1);
  EXPECT_EQ(data->dataset[2].label.class_id, 0);
  EXPECT_EQ(data->class_names, (std::vector<std::string>{"x", "y"}));
  EXPECT_DOUBLE_EQ(data->dataset[1].instance.coords()[0], 0.5);
}

TEST(CsvTest, ConstantColumnNormalizesToZero) {
  auto data = ParseCsv("a,b,y\n7,1,0\n7,2,1\n", {});
  ASSERT_TRUE(data.ok());
  for (const Example& e : data->dataset.examples) {
    EXPECT_DOUBLE_EQ(e.instance.coords()[0], 0.0);
  }
}

TEST(CsvTest, DenormalizeRoundTrip) {
  auto data = ParseCsv("a,b,y\n-1.5,10,0\n2.25,30,1\n0.1,17,0\n", {});
  ASSERT_TRUE(data.ok());
  auto raw = Denormalize(*data, data->dataset[2].instance.coords());
  EXPECT_NEAR(raw[0], 0.1, 1e-9);
  EXPECT_NEAR(raw[1], 17.0, 1e-9);
}

TEST(CsvTest, Errors) {
  auto bad_row = ParseCsv("a,y\n1,0\n2\n", {});
  EXPECT_NE(bad_row.status().message().find("line 3"), absl::string_view::npos);
  auto non_numeric = ParseCsv("a,y\nfoo,0\n", {});
  EXPECT_NE(non_numeric.status().message().find("NonNumericFeature"),
            absl::string_view::npos);
  CsvSchema schema;
  schema.label_column = "missing";
  auto mismatch = ParseCsv("a,y\n1,0\n", schema);
  EXPECT_NE(mismatch.status().message().find("SchemaMismatch"),
            absl::string_view::npos);
  EXPECT_EQ(LoadCsv("/nonexistent.csv", {}).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(CsvTest, IrisFormatClassCounts) {
  std::string text = "sl,sw,pl,pw,species\n";
  const char* names[] = {"setosa", "versicolor", "virginica"};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 50; ++i) {
      text +=
          std::to_string(4 + c + i * 0.01) + ",3,1.5,0.2," + names[c] + "\n";
    }
  }
  auto data = ParseCsv(text, {});
  ASSERT_TRUE(data.ok());
  std::vector<int> counts(3, 0);
  for (const Example& e : data->dataset.examples) ++counts[e.label.class_id];
  EXPECT_EQ(counts, (std::vector<int>{50, 50, 50}));
}

TEST(CorpusTest, CountsWords) {
  auto corpus = ParseCorpus("The cat\na dog\n");
  ASSERT_TRUE(corpus.ok());
  EXPECT_EQ(corpus->unique_words, 4);
  EXPECT_EQ(corpus->dictionary.size(), 6u);
  EXPECT_EQ(corpus->token_count, 4);
  EXPECT_EQ(corpus->dictionary.Word(kStartToken), "<s>");
  EXPECT_EQ(corpus->dictionary.Word(kEndToken), "</s>");
  // Words are assigned in sorted order after the boundary tokens.
  EXPECT_EQ(corpus->dictionary.Find("a"), 2);
  EXPECT_EQ(corpus->dictionary.Find("the"), 5);
  EXPECT_EQ(corpus->dictionary.Decode(corpus->sentences[0].instance.tokens()),
            "the cat");
}

TEST(CorpusTest, EmptyCorpus) {
  auto corpus = ParseCorpus("\n  \n");
  EXPECT_NE(corpus.status().message().find("EmptyCorpus"),
            absl::string_view::npos);
}

TEST(CorpusTest, BundledCorpusScale) {
  auto corpus =
      LoadCorpus(std::string(UNLEARNAUDIT_SOURCE_DIR) + "/data/corpus.txt");
  ASSERT_TRUE(corpus.ok()) << corpus.status();
  EXPECT_GE(corpus->sentences.size(), 200u);
  EXPECT_LE(corpus->dictionary.size(), 300u);
}

TEST(HypercubeTest, SingletonsCoverSmallCube) {
  auto d = GenUniformHypercube(4, 2, 0, 1);
  ASSERT_TRUE(d.ok());
  std::set<std::vector<double>> corners;
  std::set<int> labels;
  for (const Example& e : d->examples) {
    corners.insert(e.instance.coords());
    labels.insert(e.label.class_id);
  }
  EXPECT_EQ(corners.size(), 4u);
  EXPECT_EQ(labels.size(), 4u);
}

TEST(HypercubeTest, InfeasibleSingleton) {
  auto d = GenUniformHypercube(5, 2, 0, 1);
  EXPECT_NE(d.status().message().find("InfeasibleSingleton"),
            absl::string_view::npos);
}

TEST(HypercubeTest, CoordinateMeans) {
  auto d = GenUniformHypercube(10000, 8, 2, 4);
  ASSERT_TRUE(d.ok());
  for (int j = 0; j < 8; ++j) {
    double sum = 0;
    for (const Example& e : d->examples) sum += e.instance.coords()[j];
    EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
  }
}

TEST(LinearRegressionTest, LabelsWithinTail) {
  const double sigma = 0.1;
  Dataset d = GenLinearRegression(10000, 1, sigma, 2, 7);
  const double w = LinearRegressionWeights(1, 7)[0];
  int outside = 0;
  for (const Example& e : d.examples) {
    if (std::abs(e.label.value - w * e.instance.coords()[0]) > 4 * sigma) {
      ++outside;
    }
  }
  EXPECT_LE(outside, 2);
}

TEST(BlobsTest, RemainderRule) {
  auto d = GenBlobs(10, 2, 3, 0.5, 1);
  ASSERT_TRUE(d.ok());
  std::vector<int> counts(3, 0);
  for (const Example& e : d->examples) ++counts[e.label.class_id];
  EXPECT_EQ(counts, (std::vector<int>{4, 3, 3}));
}

TEST(BlobsTest, Deterministic) {
  auto a = GenBlobs(30, 3, 3, 0.5, 9);
  auto b = GenBlobs(30, 3, 3, 0.5, 9);
  EXPECT_EQ(a->examples, b->examples);
  auto c = GenBlobs(30, 3, 3, 0.5, 10);
  EXPECT_NE(a->examples, c->examples);
}

TEST(DistributionTest, SampleOneMatchesKind) {
  auto dist = UniformKClasses(20, 6, 3);
  auto e = dist.SampleOne(4);
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->instance.dimension(), 6u);
  EXPECT_EQ(dist.NumClasses(), 3);
}

}  // namespace
}  // namespace unlearnaudit

/* Copyright 2026 The incnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "incnet/dataset.hpp"
#include "incnet/tensor_io.hpp"

namespace incnet {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = (std::filesystem::temp_directory_path() / "incnet_cli_test").string();
    std::filesystem::remove_all(dir_);
    write_dataset(make_synthetic_dataset(4, 2, 64, 80, 3), dir_ + "/data");
  }
  static void TearDownTestSuite() { std::filesystem::remove_all(dir_); }
  static std::string dir_;
};
std::string CliTest::dir_;

TEST_F(CliTest, UsageErrorsExitTwoWithHelp) {
  const CliResult none = run({});
  EXPECT_EQ(none.code, kExitUsage);
  EXPECT_NE(none.err.find("Subcommands"), std::string::npos);
  const CliResult flag = run({"count", "--no-such-flag"});
  EXPECT_EQ(flag.code, kExitUsage);
  EXPECT_NE(flag.err.find("--compare-table1"), std::string::npos);
  EXPECT_EQ(run({"eval", "--models", "m", "--crops", "7", "--data", "d", "--labels", "l"}).code,
            kExitUsage);
  EXPECT_EQ(run({"train", "--data", "d"}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliResult r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("gradcheck"), std::string::npos);
}

TEST_F(CliTest, ShapesMatchesAllOutputSizeRows) {
  const CliResult r = run({"shapes"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("output-size rows matched: 16/16"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("inception_4e    14x14x832       14x14x832       yes"), std::string::npos);
}

TEST_F(CliTest, CountCompareFlagsStemAndReportsRows) {
  const CliResult r = run({"count", "--compare-table1"});
  EXPECT_NE(r.out.find("conv1 is flagged discrepant"), std::string::npos) << r.out;
  for (const char* row : {"inception_3a", "inception_3b", "inception_4a", "inception_4b",
                          "inception_4c", "inception_4d", "inception_4e", "inception_5a",
                          "inception_5b"}) {
    EXPECT_NE(r.out.find(row), std::string::npos) << row;
  }
  // Only unexpected discrepant rows (beyond 15%) fail the command.
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_EQ(r.out.find("discrepant: "), std::string::npos) << r.out;
}

TEST_F(CliTest, CountCsvHasHeader) {
  const CliResult r = run({"count", "--format", "csv"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("row,head,", 0), 0u) << r.out.substr(0, 80);
}

TEST_F(CliTest, DescribeMini) {
  const CliResult r = run({"describe", "--mini", "8", "--classes", "10", "--aux"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("parameterised depth: 22"), std::string::npos) << r.out.substr(0, 400);
  EXPECT_NE(r.out.find("aux1="), std::string::npos);
}

TEST_F(CliTest, GradcheckPasses) {
  const CliResult r = run({"gradcheck", "--points", "2"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("inception (reduced)"), std::string::npos);
}

TEST_F(CliTest, TrainEvalRoundTrip) {
  const std::string data = dir_ + "/data";
  const std::string model = dir_ + "/m.incm";
  const CliResult t = run({"train", "--data", data, "--labels", data + "/labels.csv", "--base-lr",
                           "0.01", "--epochs", "2", "--seed", "4", "--mini", "8", "--aux",
                           "--polyak-start", "0", "--out", model, "--metrics", dir_ + "/metrics.csv"});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  EXPECT_TRUE(std::filesystem::exists(model));
  EXPECT_TRUE(std::filesystem::exists(model + ".manifest"));
  EXPECT_NE(t.out.find("Polyak-averaged"), std::string::npos);

  const CliResult e = run({"eval", "--models", model, "--crops", "144", "--pooling", "mean",
                           "--data", data, "--labels", data + "/labels.csv", "--format", "csv"});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_NE(e.out.find("1,144,144,mean,4,"), std::string::npos) << e.out;
  EXPECT_NE(e.err.find("dropped"), std::string::npos);
}

TEST_F(CliTest, TrainIsSeedDeterministic) {
  const std::string data = dir_ + "/data";
  std::string bytes[2];
  for (int i = 0; i < 2; ++i) {
    const std::string model = dir_ + "/det" + std::to_string(i) + ".incm";
    ASSERT_EQ(run({"train", "--data", data, "--labels", data + "/labels.csv", "--base-lr", "0.01",
                   "--epochs", "1", "--seed", "9", "--data-seed", "2", "--mini", "8", "--augment",
                   "--out", model})
                  .code,
              kExitOk);
    std::ifstream in(model, std::ios::binary);
    bytes[i].assign(std::istreambuf_iterator<char>(in), {});
  }
  EXPECT_EQ(bytes[0], bytes[1]);
}

TEST_F(CliTest, CropsDumpsNamedFiles) {
  const std::string out = dir_ + "/crops";
  const CliResult r = run({"crops", "--image", dir_ + "/data/img_0000.ppm", "--dump", out, "--mode", "c10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& f : std::filesystem::directory_iterator(out)) ++n;
  EXPECT_EQ(n, 10u);
  EXPECT_TRUE(std::filesystem::exists(out + "/256_center_tl_m.ppm"));
}

TEST_F(CliTest, BadInputsExitOne) {
  EXPECT_EQ(run({"crops", "--image", dir_ + "/missing.ppm", "--dump", dir_ + "/x"}).code, kExitValidation);
  const std::string bad = dir_ + "/bad.incm";
  write_file(bad, "XXXX");
  EXPECT_EQ(run({"eval", "--models", bad, "--data", dir_ + "/data", "--labels",
                 dir_ + "/data/labels.csv"}).code,
            kExitValidation);
  EXPECT_EQ(run({"eval", "--models", bad, "--data", dir_ + "/data", "--labels",
                 dir_ + "/data/labels.csv", "--mean", "1,2"}).code,
            kExitValidation);
}

}  // namespace
}  // namespace incnet

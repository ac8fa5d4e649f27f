/*
   Copyright 2026 The maxmart Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace maxmart::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
            ("maxmart-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string out(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const fs::path& p)
    {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static nlohmann::json summary(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

    fs::path dir_;
};

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(dispatch({}), kExitUsage);
    EXPECT_EQ(dispatch({"no-such-command"}), kExitUsage);
    EXPECT_EQ(dispatch({"embed", "--target", "dirac:0"}), kExitUsage);
    EXPECT_EQ(dispatch({"embed", "--method", "ay", "--target", "[[0, 0.3]]", "--out", out("e")}), kExitUsage);
    EXPECT_EQ(dispatch({"doob-enum", "--n", "25", "--out", out("d")}), kExitUsage);
    EXPECT_EQ(dispatch({"doob-enum", "--bogus"}), kExitUsage);
}

TEST_F(CliTest, DoobEnum)
{
    ASSERT_EQ(dispatch({"doob-enum", "--n", "8", "--out", out("d")}), kExitPass);
    EXPECT_TRUE(fs::exists(dir_ / "d" / "doob-enum.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "d" / "doob-enum-maximal.csv"));
    const auto j = summary(dir_ / "d" / "doob-enum.json");
    // Exhaustive enumeration draws nothing.
    EXPECT_EQ(j["seed"], 0);
    EXPECT_TRUE(j.contains("wall_time"));
}

TEST_F(CliTest, EmbedInlineTarget)
{
    ASSERT_EQ(dispatch({"embed", "--method", "ay", "--target", "[[-1, 0.5], [1, 0.5]]", "--paths", "500",
                  "--dt", "1e-3", "--dump-paths", "3", "--out", out("e")}),
        kExitPass);
    const auto j = summary(dir_ / "e" / "embed.json");
    EXPECT_LT(j["wasserstein"].get<double>(), 0.1);
    EXPECT_TRUE(fs::exists(dir_ / "e" / "paths" / "path-002.csv"));
    const std::string csv = slurp(dir_ / "e" / "embed.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "x,empirical_cdf,target_cdf");
}

TEST_F(CliTest, SummaryPathEndingInJson)
{
    ASSERT_EQ(dispatch({"doob-enum", "--n", "4", "--out", out("run.json")}), kExitPass);
    EXPECT_TRUE(fs::exists(dir_ / "run.json"));
    EXPECT_TRUE(fs::exists(dir_ / "run.csv"));
}

TEST_F(CliTest, DeterministicAcrossThreads)
{
    const std::vector<std::string> base{"mart-drift", "--f", "indicator:1", "--paths", "2000", "--dt", "1e-2"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1", "--out", out("a")});
    auto three = base;
    three.insert(three.end(), {"--threads", "3", "--out", out("b")});
    const int rc = dispatch(one);
    EXPECT_EQ(dispatch(three), rc);
    EXPECT_EQ(slurp(dir_ / "a" / "mart-drift.csv"), slurp(dir_ / "b" / "mart-drift.csv"));
}

TEST_F(CliTest, BoundsSubcommands)
{
    EXPECT_EQ(dispatch({"bounds", "expect", "--paths", "2000", "--dt", "1e-2", "--out", out("x")}), kExitPass);
    EXPECT_EQ(dispatch({"bounds", "sup", "--target", "uniform:-1:1:100", "--paths", "2000", "--dt", "1e-3",
                  "--out", out("s")}),
        kExitPass);
    EXPECT_EQ(dispatch({"bounds", "nonsense", "--out", out("n")}), kExitUsage);
}

TEST_F(CliTest, BalayageCheck)
{
    EXPECT_EQ(dispatch({"balayage-check", "--n", "8", "--out", out("b")}), kExitPass);
}

} // namespace
} // namespace maxmart::cli

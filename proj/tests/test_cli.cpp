#include "cli.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using smtlab::cli::run;

namespace
{

std::string scene(const std::string &name)
{
    return std::string(SMTLAB_SCENES) + "/" + name;
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("smtlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
    }
    void TearDown() override
    {
        fs::remove_all(dir);
    }
    int call(std::vector<std::string> args)
    {
        args.push_back("--out-dir");
        args.push_back(dir.string());
        out.str("");
        err.str("");
        return run(args, out, err);
    }
    json read(const std::string &name) const
    {
        std::ifstream in(dir / name);
        return json::parse(in);
    }
    std::vector<std::string> lines(const std::string &name) const
    {
        std::ifstream in(dir / name);
        std::vector<std::string> v;
        for (std::string l; std::getline(in, l);) {
            v.push_back(l);
        }
        return v;
    }

    fs::path dir;
    std::ostringstream out;
    std::ostringstream err;
};

} // namespace

TEST_F(Cli, AnalyzeConcurrentLines)
{
    ASSERT_EQ(call({"analyze", "--scene", scene("concurrent_lines.json")}), 0) << err.str();
    const json r = read("analyze.json");
    EXPECT_EQ(r["delta"]["value"], "3/2");
    EXPECT_EQ(r["position_level"], 3);
    EXPECT_EQ(r["subgeneral"][0]["holds"], false);
    EXPECT_EQ(r["subgeneral"][1]["holds"], true);
    EXPECT_EQ(r["weak_bezout"]["holds"], true);
    EXPECT_EQ(r["settings"]["convention"], "skip-empty");
    EXPECT_TRUE(r.contains("bezout_selection"));
    EXPECT_FALSE(r.contains("timestamp"));
    EXPECT_TRUE(read("metadata.json").contains("timestamp"));

    ASSERT_EQ(call({"analyze", "--scene", scene("concurrent_lines.json"), "--convention", "literal"}), 0);
    EXPECT_EQ(read("analyze.json")["settings"]["convention"], "literal");
}

TEST_F(Cli, ReportsAreDeterministic)
{
    ASSERT_EQ(call({"analyze", "--scene", scene("concurrent_lines.json")}), 0);
    const std::string first = read("analyze.json").dump();
    ASSERT_EQ(call({"analyze", "--scene", scene("concurrent_lines.json")}), 0);
    EXPECT_EQ(read("analyze.json").dump(), first);
}

TEST_F(Cli, SchemaErrors)
{
    EXPECT_EQ(call({"analyze", "--scene", scene("empty_family.json")}), 1);
    EXPECT_NE(err.str().find("/family"), std::string::npos);
    EXPECT_NE(err.str().find("empty_family.json"), std::string::npos);
    EXPECT_EQ(read("error.json")["code"], "schema");

    fs::create_directories(dir);
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << R"({"version": 1, "ambient": 2, "family": ["x0"], "colour": 1})";
    EXPECT_EQ(call({"analyze", "--scene", bad.string()}), 1);
    EXPECT_NE(err.str().find("/colour"), std::string::npos);
    std::ofstream(bad) << R"({"version": 1, "ambient": 2, "family": ["x0 +"]})";
    EXPECT_EQ(call({"analyze", "--scene", bad.string()}), 1);
    EXPECT_NE(err.str().find("/family/0"), std::string::npos);
    EXPECT_EQ(call({"analyze", "--scene", scene("missing.json")}), 1);
    EXPECT_EQ(call({"analyze"}), 1);
    EXPECT_EQ(call({"frobnicate"}), 1);
}

TEST_F(Cli, BoundsRow)
{
    ASSERT_EQ(call({"bounds", "--k", "1", "--N", "2", "--d", "1", "--v", "1", "--eps", "1"}), 0) << err.str();
    const auto csv = lines("bounds.csv");
    ASSERT_EQ(csv.size(), 2u);
    EXPECT_EQ(csv[0], "k,N,tau,u,L,D,F,1.1new,HL,M0");
    EXPECT_EQ(csv[1], "1,2,2,60,190,4,5,5,6,");
    const json r = read("bounds.json");
    EXPECT_EQ(r["rows"][0]["L"], "190");
    EXPECT_EQ(r["settings"]["eps"], "1");

    ASSERT_EQ(call({"bounds", "--k", "1", "--N", "2", "--eps", "1", "--q", "3"}), 0);
    EXPECT_EQ(read("bounds.json")["rows"][0]["M0"], "391");
    ASSERT_EQ(call({"bounds", "--table", "5"}), 0);
    EXPECT_EQ(lines("bounds.csv").size(), 11u);
    // Levels above about 1e30 move under the 1e-30 widening of e.
    EXPECT_EQ(call({"bounds", "--table", "10", "--q", "4"}), 2);
    const json t = read("bounds.json");
    EXPECT_EQ(t["uncertified_rows"], 7);
    EXPECT_EQ(t["rows"].back()["L"], nullptr);
    EXPECT_EQ(t["rows"].back()["uncertified"], json({"L", "M0"}));
    EXPECT_EQ(call({"bounds", "--k", "8", "--N", "9", "--q", "4"}), 1);
    EXPECT_NE(err.str().find("[precision]"), std::string::npos);
    EXPECT_EQ(call({"bounds", "--k", "2", "--N", "2"}), 1);
    EXPECT_EQ(call({"bounds", "--k", "1", "--N", "2", "--eps", "0"}), 1);
}

TEST_F(Cli, HilbertVeronese)
{
    ASSERT_EQ(call({"hilbert", "--scene", scene("veronese.json")}), 0) << err.str();
    const json r = read("hilbert.json");
    EXPECT_EQ(r["embedding"]["delta"], "2");
    EXPECT_EQ(r["levels"][1]["H"], "5");
    EXPECT_EQ(r["levels"][0]["ef"], nullptr);
    EXPECT_FALSE(r["levels"][2]["ef"].is_null());
    EXPECT_TRUE(r.contains("chow_lower_bound"));
    EXPECT_EQ(r["flagged"], false);
    EXPECT_EQ(lines("hilbert.csv").size(), 5u);

    ASSERT_EQ(call({"hilbert", "--scene", scene("veronese.json"), "--u", "3", "--c", "2,0,1"}), 0) << err.str();
    EXPECT_EQ(call({"hilbert", "--scene", scene("veronese.json"), "--u", "3", "--c", "0,1,0"}), 1);
    EXPECT_NE(err.str().find("hypothesis (1)"), std::string::npos);
    EXPECT_EQ(call({"hilbert", "--scene", scene("veronese.json"), "--c", "1,1"}), 1);
}

TEST_F(Cli, CurveOnConic)
{
    ASSERT_EQ(call({"curve", "--scene", scene("conic_exponential.json")}), 0) << err.str() << out.str();
    const json r = read("curve.json");
    EXPECT_EQ(r["smt"]["mode"], "1.2-plane");
    EXPECT_EQ(r["smt"]["passed"], true);
    EXPECT_EQ(r["smt"]["coefficient"]["exact"], "1/2");
    ASSERT_EQ(r["fmt"].size(), 3u);
    for (const auto &e : r["fmt"]) {
        EXPECT_EQ(e["passed"], true);
    }
    EXPECT_EQ(lines("characteristic.csv").size(), 11u);
    EXPECT_TRUE(fs::exists(dir / "smt.csv"));
}

TEST_F(Cli, CurveOnAnnulus)
{
    ASSERT_EQ(call({"curve", "--scene", scene("annulus_line.json")}), 0) << err.str() << out.str();
    const json r = read("curve.json");
    EXPECT_EQ(r["smt"]["mode"], "1.1-annulus");
    EXPECT_EQ(r["smt_general"]["flagged"], false);
    EXPECT_EQ(r["smt_general"]["independent_subsets"], 6);
}

TEST_F(Cli, PointsConics)
{
    ASSERT_EQ(call({"points", "--scene", scene("points_conics.json")}), 0) << err.str();
    const json r = read("points.json");
    EXPECT_EQ(r["points"], 302);
    EXPECT_EQ(r["l"], 3);
    EXPECT_EQ(r["identity_holds"], true);
    EXPECT_EQ(lines("points.csv").size(), 303u);

    ASSERT_EQ(call({"points", "--scene", scene("points_conics.json"), "--mode", "b", "--sample", "0", "--S", "inf"}),
              0);
    EXPECT_EQ(read("points.json")["points"], 2);
    EXPECT_EQ(read("points.json")["mode"], "b");
    EXPECT_EQ(call({"points", "--scene", scene("concurrent_lines.json")}), 1);

    ASSERT_EQ(call({"points", "--scene", scene("points_flagged.json")}), 2) << err.str();
    const json f = read("points.json");
    EXPECT_EQ(f["flagged"], 1);
    EXPECT_EQ(f["flagged_points"][0]["x"], "(1000:1001:1)");
}

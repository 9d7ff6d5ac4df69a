#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsp/cli.hpp"

using namespace fsp;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
    Json record() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = fs::temp_directory_path() / ("fsp_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
        write("kt6.txt", family_to_text(kt_construction(6)));
        write("one.txt", "n=4\n1,2\n");
        write("bad.txt", "n=4\n1,9\n");
        write("kt_pair.json", serialize(build_named(ConfigId::kt_pair())));
    }
    static void TearDownTestSuite() { fs::remove_all(dir_); }

    static void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }
    static std::string path(const std::string& name) { return (dir_ / name).string(); }

    static std::vector<std::string> localize(std::vector<std::string> args) {
        for (auto& a : args)
            if (fs::exists(dir_ / a)) a = path(a);
        return args;
    }

    static fs::path dir_;
};

fs::path CliTest::dir_;

bool type_matches(const Json& value, const std::string& expected) {
    std::istringstream alternatives(expected);
    for (std::string t; std::getline(alternatives, t, '|');) {
        if ((t == "string" && value.is_string()) || (t == "number" && value.is_number()) || (t == "boolean" && value.is_boolean()) ||
            (t == "null" && value.is_null()) || (t == "array" && value.is_array()) || (t == "object" && value.is_object()))
            return true;
    }
    return false;
}

void expect_schema(const Json& value, const Json& schema, const std::string& where) {
    if (schema.is_string()) {
        EXPECT_TRUE(type_matches(value, schema.get<std::string>())) << where << ": " << value.dump();
        return;
    }
    ASSERT_TRUE(value.is_object()) << where;
    for (auto it = schema.begin(); it != schema.end(); ++it) {
        ASSERT_TRUE(value.contains(it.key())) << where << "." << it.key() << " missing";
        expect_schema(value[it.key()], *it, where + "." + it.key());
    }
    for (auto it = value.begin(); it != value.end(); ++it) EXPECT_TRUE(schema.contains(it.key())) << where << "." << it.key() << " not in schema";
}

Json strip_wall_time(Json record) {
    record.erase("wall_time");
    return record;
}

} // namespace

TEST_F(CliTest, OutputsMatchGoldenSchemas) {
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(FSP_GOLDEN_DIR)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        const Json golden = Json::parse(in);
        const auto r = run(localize(golden["argv"].get<std::vector<std::string>>()));
        ASSERT_EQ(r.code, 0) << entry.path() << " " << r.err;
        expect_schema(r.record(), golden["schema"], entry.path().stem().string());
        ++seen;
    }
    EXPECT_EQ(seen, 10);
}

TEST_F(CliTest, Examples) {
    const auto bound = run({"bound", "kt", "--n", "9"});
    ASSERT_EQ(bound.code, 0);
    EXPECT_EQ(bound.record()["outputs"]["value"], "140");
    EXPECT_EQ(bound.record()["outputs"]["exactness"], "exact");

    const auto check = run({"check", "--family", path("kt6.txt"), "--config", "kt_pair"});
    ASSERT_EQ(check.code, 0);
    EXPECT_EQ(check.record()["outputs"]["avoiding"], true);

    const auto slow = run({"search", "--n", "7", "--config", "kt_pair"});
    EXPECT_EQ(slow.code, 2);
    EXPECT_TRUE(slow.out.empty());
    EXPECT_FALSE(slow.err.empty());
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"bound", "kt"}).code, 2);
    EXPECT_EQ(run({"bound", "no_such_bound", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"bound", "kt", "--n", "0"}).code, 1);
    EXPECT_EQ(run({"bound", "fork_explicit", "--n", "6"}).code, 1);
    EXPECT_EQ(run({"check", "--family", path("missing.txt"), "--config", "kt_pair"}).code, 1);
    EXPECT_EQ(run({"check", "--family", path("bad.txt"), "--config", "kt_pair"}).code, 1);
    EXPECT_EQ(run({"check", "--family", path("kt6.txt"), "--config", "not_a_config"}).code, 1);
    EXPECT_EQ(run({"search", "--n", "13", "--config", "kt_pair", "--allow-slow"}).code, 1);
    EXPECT_EQ(run({"search", "--n", "3", "--config", "kt_pair", "--time-limit", "0"}).code, 2);
    EXPECT_EQ(run({"audit", "fork", "--family", path("kt6.txt")}).code, 2);
    write("bdc.txt", "n=4\n1\n2\n1,3\n");
    EXPECT_EQ(run({"audit", "slemma", "--family", path("bdc.txt")}).code, 1);
    EXPECT_EQ(run({"construct", "middle", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"lubell"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, CheckReportsViolation) {
    const auto r = run({"check", "--family", path("kt6.txt"), "--config", "j_config"});
    ASSERT_EQ(r.code, 0);
    const Json v = r.record()["outputs"];
    EXPECT_EQ(v["avoiding"], true);
    write("full3.txt", family_to_text(power_set(GroundSet(3))));
    const auto bad = run({"check", "--family", path("full3.txt"), "--config", "kt_pair"});
    ASSERT_EQ(bad.code, 0);
    EXPECT_EQ(bad.record()["outputs"]["avoiding"], false);
    EXPECT_EQ(bad.record()["outputs"]["violation"]["images"].size(), 3u);
}

TEST_F(CliTest, ConfigFileInputMatchesNamed) {
    const auto file = run({"check", "--family", path("kt6.txt"), "--config", path("kt_pair.json")});
    ASSERT_EQ(file.code, 0) << file.err;
    EXPECT_EQ(file.record()["outputs"], run({"check", "--family", path("kt6.txt"), "--config", "kt_pair"}).record()["outputs"]);
    EXPECT_TRUE(file.record()["inputs"]["config"]["digest"].get<std::string>().starts_with("fnv1a64:"));
}

TEST_F(CliTest, ReplayIsByteIdenticalApartFromWallTime) {
    for (const auto& args : {std::vector<std::string>{"search", "--n", "4", "--config", "butterfly_pair"},
                                                std::vector<std::string>{"audit", "lubell", "--family", path("kt6.txt"), "--trials", "5000", "--seed", "9"},
                                                std::vector<std::string>{"bound", "glu_diamond", "--n", "10", "--m", "5"}}) {
        const auto a = run(args), b = run(args);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(strip_wall_time(a.record()).dump(), strip_wall_time(b.record()).dump());
    }
}

TEST_F(CliTest, SeedsDetermineSampling) {
    write("rand.txt", "n=6\n1\n1,2\n2,3,4\n5\n1,2,3,4,5\n");
    const auto a = run({"audit", "lubell", "--family", path("rand.txt"), "--trials", "5000", "--seed", "1"});
    const auto b = run({"audit", "lubell", "--family", path("rand.txt"), "--trials", "5000", "--seed", "2"});
    EXPECT_EQ(a.record()["seed"], 1);
    EXPECT_NE(a.record()["outputs"]["mean"], b.record()["outputs"]["mean"]);
}

TEST_F(CliTest, RationalsAreExactStrings) {
    const auto r = run({"lubell", "--family", path("one.txt")});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.record()["outputs"]["lubell"], "1/6");
    EXPECT_EQ(r.record()["outputs"]["lub_bound"], "1");
    const auto direct = run({"lubell", "--n", "10", "--x", "0", "--y", "3/2"});
    ASSERT_EQ(direct.code, 0);
    EXPECT_EQ(direct.record()["outputs"]["lub_bound"], "378");
    EXPECT_EQ(run({"bound", "fork_main", "--n", "10", "--s", "3"}).record()["outputs"]["value"], "1764/5");
}

TEST_F(CliTest, ConstructTextRoundTrips) {
    const auto r = run({"construct", "kt", "--n", "7", "--format", "text"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(family_from_text(r.out), kt_construction(7));
    const auto c = run({"construct", "complement", "--family", path("one.txt")});
    ASSERT_EQ(c.code, 0);
    EXPECT_EQ(family_from_json(c.record()["outputs"]["family"]), Family(GroundSet(4), {SubsetMask::of({3, 4})}));
}

TEST_F(CliTest, SearchWithTheoremBoundAndSlowMode) {
    const auto r = run({"search", "--n", "5", "--config", "kt_pair", "--theorem-bound", "kt"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.record()["outputs"]["best_size"], 12);
    EXPECT_EQ(r.record()["outputs"]["status"], "optimal-assuming-theorem");
    EXPECT_EQ(run({"search", "--n", "5", "--config", "butterfly_pair", "--theorem-bound", "butterfly"}).code, 1);
    const auto slow = run({"search", "--n", "7", "--config", "chain(10)", "--allow-slow"});
    ASSERT_EQ(slow.code, 0);
    EXPECT_EQ(slow.record()["outputs"]["status"], "lower-bound-only");
    EXPECT_EQ(slow.record()["outputs"]["best_size"], 128);
}

TEST_F(CliTest, WorkerEnvironmentVariable) {
    const std::vector<std::string> args{"search", "--n", "4", "--config", "kt_pair"};
    const auto one = run(args);
    ::setenv("FSP_WORKERS", "3", 1);
    const auto three = run(args);
    ::unsetenv("FSP_WORKERS");
    EXPECT_EQ(three.record()["inputs"]["workers"], 3);
    EXPECT_EQ(one.record()["outputs"], three.record()["outputs"]);
}

TEST_F(CliTest, TextFormat) {
    const auto r = run({"bound", "kt", "--n", "9", "--format", "text"});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("value: 140\n"), std::string::npos);
}

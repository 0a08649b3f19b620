#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;
using traceforge::cli::run_cli;

namespace {

const std::string kFixture = TRACEFORGE_FIXTURE_DIR;
const std::string kData = TRACEFORGE_TEST_DATA_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

auto run(std::vector<std::string> args) -> Run {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("traceforge-cli-" + std::to_string(::getpid()) + "-" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    auto path(const std::string& name) const -> std::string { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ParseStrictFailureExitsTwoWithJson) {
    auto r = run({"parse", kData + "/correctness_3of4.events", "--strict"});
    EXPECT_EQ(r.code, 2);
    auto err = nlohmann::json::parse(r.err);
    EXPECT_EQ(err["error"], "MalformedLine");
    EXPECT_EQ(err["location"], 3);
}

TEST_F(Cli, ParseLenientWritesNormalizedOutput) {
    auto r = run({"parse", kData + "/correctness_3of4.events", "-o", path("norm.events")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["accepted_events"], 3);
    EXPECT_EQ(report["rejected_lines"][0]["line"], 3);
    EXPECT_EQ(traceforge::io::read_file(path("norm.events")),
              "event System processes ADD\nevent Process name SET\nevent Process ports ADD\n");
}

TEST_F(Cli, ParseXesToXes) {
    auto r = run({"parse", kFixture + "/human.xes", "-o", path("h.xes")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["traces"], 20);
    auto [a, ra] = traceforge::parse_xes(traceforge::io::read_file(kFixture + "/human.xes"));
    auto [b, rb] = traceforge::parse_xes(traceforge::io::read_file(path("h.xes")));
    EXPECT_EQ(a, b);
}

TEST_F(Cli, ValidateReportsSchemaStatus) {
    auto r = run({"validate", kData + "/halluc_synthetic.events", "--schema", kFixture + "/schema.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["events"], 6);
    EXPECT_EQ(j["schema_valid_events"], 5);
    EXPECT_EQ(j["traces"][0]["events"][5]["status"], "unknown_class");
}

TEST_F(Cli, MetricsOnIdenticalSetsIsAllOnes) {
    auto r = run({"metrics", kFixture + "/human.xes", kFixture + "/human.xes", "--schema", kFixture + "/schema.json"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    for (const char* m : {"lcs", "jaro", "cosine", "jaccard", "dice", "qgram", "hallucination"}) {
        EXPECT_DOUBLE_EQ(j["summary"][m]["mean"].get<double>(), 1.0) << m;
    }
}

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    auto r = run({"mix", kFixture + "/human.xes", kFixture + "/human.xes", "--ratio", "1.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "UsageError");
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, MissingInputIsRuntimeError) {
    auto r = run({"parse", path("absent.xes")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "IoError");
}

TEST_F(Cli, UnreachableLlmIsRuntimeError) {
    std::ofstream(path("config.json")) << R"({"llm": {"endpoint": "http://127.0.0.1:9/v1", "timeout_ms": 500}})";
    auto r = run({"-j", "8", "generate", kFixture + "/models.json", "--demos", kFixture + "/demos.json", "--config",
                  path("config.json"), "-o", path("gen")});
    ASSERT_EQ(r.code, 0) << r.err;  // client failures are recorded per model
    EXPECT_EQ(nlohmann::json::parse(r.out)["accepted"], 0);
    auto records = nlohmann::json::parse(traceforge::io::read_file(path("gen/records.json")));
    EXPECT_TRUE(records[0]["error"].get<std::string>().starts_with("TransportError"));
}

TEST_F(Cli, TrainRecommendRoundTrip) {
    ASSERT_EQ(run({"train", kFixture + "/human.xes", "--schema", kFixture + "/schema.json", "-o", path("index.json")}).code, 0);
    auto r = run({"recommend", path("index.json"), "--context", kFixture + "/context.events", "--co", "3", "--kind", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["recommendations"]["class"].size(), 3u);
    EXPECT_EQ(j["recommendations"]["attribute"].size(), 3u);
    auto again = run({"recommend", path("index.json"), "--context", kFixture + "/context.events", "--co", "3", "--kind", "both"});
    EXPECT_EQ(again.out, r.out);
}

TEST_F(Cli, XvalWithTrainOrIndex) {
    auto a = run({"xval", "--train", kFixture + "/human.xes", "--validate", kFixture + "/validation.xes", "--config",
                  "C3.3", "--schema", kFixture + "/schema.json"});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(run({"train", kFixture + "/human.xes", "--schema", kFixture + "/schema.json", "-o", path("index.json")}).code, 0);
    auto b = run({"xval", "--index", path("index.json"), "--validate", kFixture + "/validation.xes", "--config", "C3.3",
                  "--schema", kFixture + "/schema.json"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find(",class,C3.3,avg,"), std::string::npos);
}

TEST_F(Cli, PipelineConfigRejectsMissingPaths) {
    std::ofstream(path("config.json")) << R"({"schema_path": "nope.json"})";
    auto r = run({"--pipeline", path("config.json"), "evaluate", kFixture + "/human.xes", "--seed", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "InvalidConfig");
}

TEST_F(Cli, EvaluateRequiresSeed) {
    auto r = run({"evaluate", kFixture + "/human.xes", "--schema", kFixture + "/schema.json"});
    EXPECT_EQ(r.code, 2);
}

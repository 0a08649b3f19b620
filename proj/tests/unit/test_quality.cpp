#include <traceforge/io.hpp>
#include <traceforge/quality.hpp>

#include <gtest/gtest.h>

using namespace traceforge;

namespace {

const std::string kData = TRACEFORGE_TEST_DATA_DIR;
const std::string kFixture = TRACEFORGE_FIXTURE_DIR;

auto fixture_schema() -> MetamodelSchema {
    return nlohmann::json::parse(io::read_file(kFixture + "/schema.json")).get<MetamodelSchema>();
}

auto lines_trace(std::string_view text, std::string id) -> Trace {
    LineParseOptions o;
    o.lenient = true;
    o.trace_id = std::move(id);
    return parse_event_lines(text, o).first;
}

}  // namespace

TEST(Correctness, CraftedRatios) {
    EXPECT_DOUBLE_EQ(correctness(io::read_file(kData + "/correctness_3of4.events")), 0.75);
    EXPECT_DOUBLE_EQ(correctness(io::read_file(kData + "/gate_half.events")), 0.5);
    EXPECT_DOUBLE_EQ(correctness(io::read_file(kData + "/gate_valid.events")), 1.0);
    EXPECT_DOUBLE_EQ(correctness("\n\n"), 1.0);
    EXPECT_DOUBLE_EQ(correctness("event A b SET\n\nevent A b\n"), 0.5);
}

TEST(Hallucination, IdentityIsOne) {
    auto schema = fixture_schema();
    auto ref = lines_trace(io::read_file(kData + "/halluc_reference.events"), "r");
    EXPECT_DOUBLE_EQ(hallucination(ref, ref, schema), 1.0);
}

TEST(Hallucination, FiveValidOfSixOverFour) {
    auto schema = fixture_schema();
    auto ref = lines_trace(io::read_file(kData + "/halluc_reference.events"), "r");
    auto syn = lines_trace(io::read_file(kData + "/halluc_synthetic.events"), "s");
    EXPECT_DOUBLE_EQ(hallucination(syn, ref, schema), 1.25);
}

TEST(Hallucination, DegenerateReference) {
    auto schema = fixture_schema();
    auto ref = lines_trace("event System processes REMOVE\n", "r");
    try {
        hallucination(ref, ref, schema);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::degenerate_reference);
    }
}

TEST(Diversity, IdenticalTracesAreAllOnes) {
    auto t = lines_trace(io::read_file(kData + "/gate_valid.events"), "t");
    for (double v : diversity(t, t).values()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Diversity, UsesCharactersAndEventTokens) {
    auto a = lines_trace("event A b SET\n", "a");
    auto b = lines_trace("event A b ADD\n", "b");
    auto d = diversity(a, b);
    EXPECT_GT(d.lcs, 0.5);  // most characters shared
    EXPECT_DOUBLE_EQ(d.jaccard, 0.0);  // distinct event tokens
}

TEST(AssessDataset, SummaryColumnsAndPairs) {
    auto schema = fixture_schema();
    TraceSet syn, ref;
    for (int i = 0; i < 2; ++i) {
        auto t = lines_trace(io::read_file(kData + "/gate_valid.events"), "s" + std::to_string(i));
        syn.traces.push_back(t);
        t.id = "r" + std::to_string(i);
        ref.traces.push_back(t);
    }
    auto report = assess_dataset(syn, ref, schema, {{"s0", "r0"}, {"s1", "r1"}});
    ASSERT_EQ(report.per_trace.size(), 2u);
    const auto& h = report.summary.at("hallucination");
    EXPECT_EQ(h.n, 2u);
    EXPECT_DOUBLE_EQ(h.mean, 1.0);
    EXPECT_DOUBLE_EQ(*h.sd, 0.0);
    EXPECT_DOUBLE_EQ(h.iqr, 0.0);

    auto csv = summary_table_csv(report);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,N,mean,SE,CI-L,CI-U,Median,SD,Variance,IQR");
    nlohmann::json j = report;
    for (const char* key : {"N", "mean", "SE", "CI-L", "CI-U", "median", "SD", "variance", "IQR"}) {
        EXPECT_TRUE(j["summary"]["lcs"].contains(key)) << key;
    }
}

TEST(AssessDataset, UnpairedTrace) {
    auto schema = fixture_schema();
    TraceSet syn, ref;
    syn.traces.push_back(lines_trace("event System name SET\n", "s"));
    ref.traces.push_back(lines_trace("event System name SET\n", "r"));
    EXPECT_THROW(assess_dataset(syn, ref, schema, {}), Error);
    EXPECT_THROW(assess_dataset(syn, ref, schema, {{"s", "missing"}}), Error);
    EXPECT_THROW(assess_dataset(syn, ref, schema, {{"s", "r"}, {"ghost", "r"}}), Error);
}

TEST(AssessDataset, RawTextDrivesCorrectness) {
    auto schema = fixture_schema();
    TraceSet syn, ref;
    syn.traces.push_back(lines_trace("event System name SET\n", "s"));
    ref.traces.push_back(lines_trace("event System name SET\n", "r"));
    AssessOptions o;
    o.raw_texts["s"] = "Here you go\nevent System name SET\n";
    auto report = assess_dataset(syn, ref, schema, {{"s", "r"}}, o);
    EXPECT_DOUBLE_EQ(report.per_trace[0].correctness, 0.5);
}

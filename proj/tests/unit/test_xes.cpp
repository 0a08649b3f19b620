#include <traceforge/xes.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace traceforge;

namespace {

constexpr std::string_view kLog = R"(<?xml version="1.0"?>
<log xes.version="1.0">
  <string key="traceforge:metamodel" value="mm"/>
  <trace>
    <string key="concept:name" value="t1"/>
    <event>
      <string key="class" value="Process"/>
      <string key="featureName" value="name"/>
      <string key="eventType" value="SET"/>
      <date key="time:timestamp" value="2024-03-01T09:00:00.000+00:00"/>
    </event>
    <event>
      <string key="class" value="Process"/>
      <string key="eventType" value="ADD"/>
    </event>
    <event>
      <string key="class" value="Process"/>
      <string key="featureName" value="ports"/>
      <string key="eventType" value="ADD"/>
    </event>
  </trace>
</log>
)";

}  // namespace

TEST(Xes, StrictMissingAttributeFails) {
    try {
        parse_xes(kLog);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::missing_attribute);
    }
}

TEST(Xes, LenientDropsAndReportsLine) {
    XesParseOptions options;
    options.lenient = true;
    auto [set, report] = parse_xes(kLog, options);
    ASSERT_EQ(set.traces.size(), 1u);
    EXPECT_EQ(set.metamodel_id, "mm");
    EXPECT_EQ(set.traces[0].events.size(), 2u);
    ASSERT_EQ(report.rejected_lines.size(), 1u);
    EXPECT_EQ(report.rejected_lines[0].line_number, 12u);
    ASSERT_TRUE(set.traces[0].events[0].timestamp);
    EXPECT_EQ(format_timestamp(*set.traces[0].events[0].timestamp), "2024-03-01T09:00:00.000+00:00");
}

TEST(Xes, MalformedXmlIsXmlError) {
    try {
        parse_xes("<log><trace></log>");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::xml_error);
        EXPECT_GT(e.location(), 0u);
    }
}

TEST(Xes, DuplicateTraceIdsAreRejected) {
    const std::string trace = "<trace><string key=\"concept:name\" value=\"x\"/><event>"
                              "<string key=\"class\" value=\"A\"/><string key=\"featureName\" value=\"b\"/>"
                              "<string key=\"eventType\" value=\"SET\"/></event></trace>";
    try {
        parse_xes("<log>" + trace + trace + "</log>");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::duplicate_trace_id);
    }
}

TEST(Xes, EmptyTraceStrictVsLenient) {
    std::string doc = "<log><trace><string key=\"concept:name\" value=\"x\"/></trace></log>";
    try {
        parse_xes(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::empty_trace);
    }
    XesParseOptions options;
    options.lenient = true;
    auto [set, report] = parse_xes(doc, options);
    EXPECT_TRUE(set.traces.empty());
    EXPECT_EQ(report.rejected_lines.size(), 1u);
}

TEST(Xes, MissingTraceNameFallsBackToOrdinal) {
    std::string doc = "<log><trace><event><string key=\"class\" value=\"A\"/><string key=\"featureName\" value=\"b\"/>"
                      "<string key=\"eventType\" value=\"SET\"/></event></trace></log>";
    auto [set, report] = parse_xes(doc);
    EXPECT_EQ(set.traces.at(0).id, "trace-1");
}

TEST(Xes, RemappedKeys) {
    std::string doc = "<log><trace><string key=\"concept:name\" value=\"x\"/><event>"
                      "<string key=\"org:class\" value=\"A\"/><string key=\"org:feature\" value=\"b\"/>"
                      "<string key=\"lifecycle:transition\" value=\"set\"/></event></trace></log>";
    XesParseOptions options;
    options.keys = nlohmann::json{{"class", "org:class"}, {"featureName", "org:feature"},
                                  {"eventType", "lifecycle:transition"}}
                       .get<XesKeyMap>();
    auto [set, report] = parse_xes(doc, options);
    EXPECT_EQ(set.traces.at(0).events.at(0).render(), "event A b SET");
}

TEST(Xes, EscapingSurvivesRoundTrip) {
    TraceSet set;
    set.metamodel_id = "m&m<\"x\">";
    set.traces.push_back({"id'&<", "model>\"", {ModelingEvent("A", "b", EventType::move)}, Origin::synthetic("g&t")});
    auto [back, report] = parse_xes(write_xes(set));
    EXPECT_EQ(back, set);
}

TEST(Xes, DatasetAttributesRoundTrip) {
    std::mt19937_64 rng(5);
    TraceSet set;
    set.metamodel_id = "mm";
    for (int i = 0; i < 4; ++i) {
        auto t = oracle::random_trace(rng, "t" + std::to_string(i), 1, 5, true);
        t.origin = i % 2 ? Origin::synthetic("mock") : Origin::human();
        set.traces.push_back(std::move(t));
    }
    auto dataset = Dataset::from_traces("d", set, 99);
    auto [back, report] = parse_dataset_xes(write_dataset_xes(dataset));
    EXPECT_EQ(back.name, "d");
    EXPECT_EQ(back.seed, 99u);
    EXPECT_DOUBLE_EQ(back.synthetic_ratio, 0.5);
    EXPECT_EQ(back.trace_set, set);
}

TEST(Xes, OriginOverride) {
    TraceSet set;
    set.traces.push_back({"a", "a", {ModelingEvent("A", "b", EventType::set)}, Origin::human()});
    XesParseOptions options;
    options.origin_override = Origin::synthetic("llm");
    auto [back, report] = parse_xes(write_xes(set), options);
    EXPECT_EQ(back.traces[0].origin, Origin::synthetic("llm"));
}

TEST(Xes, DecreasingTimestampsRejected) {
    TraceSet set;
    Trace t{"a", "a", {}, {}};
    t.events.emplace_back("A", "b", EventType::set, Timestamp{std::chrono::milliseconds(2000)});
    t.events.emplace_back("A", "b", EventType::set, Timestamp{std::chrono::milliseconds(1000)});
    set.traces.push_back(t);
    try {
        parse_xes(write_xes(set));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::invalid_trace);
    }
}

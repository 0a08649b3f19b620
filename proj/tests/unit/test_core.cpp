#include <traceforge/event_lines.hpp>
#include <traceforge/schema.hpp>
#include <traceforge/trace.hpp>

#include <gtest/gtest.h>

using namespace traceforge;
using namespace std::chrono;

namespace {

auto code_of(auto&& fn) -> std::optional<Errc> {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

}  // namespace

TEST(EventType, ParsesCaseInsensitively) {
    EXPECT_EQ(parse_event_type("add_many"), EventType::add_many);
    EXPECT_EQ(parse_event_type("Set"), EventType::set);
    EXPECT_EQ(parse_event_type("EXPLODE"), std::nullopt);
    for (auto t : kAllEventTypes) EXPECT_EQ(parse_event_type(to_string_view(t)), t);
}

TEST(EventType, AdditiveTypes) {
    EXPECT_TRUE(is_additive(EventType::add));
    EXPECT_TRUE(is_additive(EventType::add_many));
    EXPECT_TRUE(is_additive(EventType::set));
    EXPECT_FALSE(is_additive(EventType::remove));
    EXPECT_FALSE(is_additive(EventType::unset));
    EXPECT_FALSE(is_additive(EventType::move));
    EXPECT_FALSE(is_additive(EventType::remove_many));
}

TEST(Timestamp, ParsesOffsetsAndFractions) {
    auto a = parse_timestamp("2024-03-01T09:00:00.250+01:00");
    auto b = parse_timestamp("2024-03-01T08:00:00.25Z");
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
    EXPECT_EQ(format_timestamp(*a), "2024-03-01T08:00:00.250+00:00");
    EXPECT_FALSE(parse_timestamp("2024-13-01T00:00:00Z"));
    EXPECT_FALSE(parse_timestamp("yesterday"));
}

TEST(Timestamp, FormatRoundTrips) {
    Timestamp t{milliseconds(1'709'283'600'123LL)};
    EXPECT_EQ(parse_timestamp(format_timestamp(t)), t);
}

TEST(ModelingEvent, RejectsBadIdentifiers) {
    EXPECT_EQ(code_of([] { ModelingEvent("", "name", EventType::set); }), Errc::invalid_trace);
    EXPECT_EQ(code_of([] { ModelingEvent("Pro cess", "name", EventType::set); }), Errc::invalid_trace);
}

TEST(ModelingEvent, RenderAndToken) {
    ModelingEvent e("Process", "name", EventType::set);
    EXPECT_EQ(e.render(), "event Process name SET");
    EXPECT_EQ(e.token(), "Process.name.SET");
}

TEST(OperationKey, OrdersByClassFeatureTypeName) {
    OperationKey a{"A", "f", EventType::set}, b{"A", "f", EventType::add}, c{"A", "g", EventType::add};
    EXPECT_LT(b, a);  // "ADD" < "SET"
    EXPECT_LT(a, c);
}

TEST(EventLines, ParsesCanonicalForm) {
    auto [trace, report] = parse_event_lines("event System name SET\n\nevent Process ports add\n");
    ASSERT_EQ(trace.events.size(), 2u);
    EXPECT_EQ(trace.events[1].event_type, EventType::add);
    EXPECT_EQ(report.accepted_events, 2u);
    EXPECT_TRUE(report.rejected_lines.empty());
    EXPECT_EQ(trace.origin.kind, Origin::Kind::human);
}

TEST(EventLines, StrictReportsLineNumber) {
    try {
        parse_event_lines("event A b SET\nevent A b\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::malformed_line);
        EXPECT_EQ(e.location(), 2u);
    }
}

TEST(EventLines, LenientRecordsRejections) {
    LineParseOptions options;
    options.lenient = true;
    auto [trace, report] = parse_event_lines("noise\nevent A b SET\nevent A b EXPLODE\nEVENT A b SET\n", options);
    EXPECT_EQ(trace.events.size(), 1u);
    ASSERT_EQ(report.rejected_lines.size(), 3u);
    EXPECT_EQ(report.rejected_lines[0].line_number, 1u);
    EXPECT_EQ(report.rejected_lines[1].line_number, 3u);
    EXPECT_EQ(report.rejected_lines[2].line_number, 4u);
}

TEST(EventLines, EmptyInputIsEmptyTrace) {
    EXPECT_EQ(code_of([] { parse_event_lines("\n  \n"); }), Errc::empty_trace);
    LineParseOptions options;
    options.lenient = true;
    EXPECT_EQ(code_of([&] { parse_event_lines("hello\n", options); }), Errc::empty_trace);
}

TEST(EventLines, CrLfAndExtraWhitespace) {
    auto [trace, report] = parse_event_lines("event\tA  b   SET\r\nevent A c ADD\r\n");
    EXPECT_EQ(trace.events.size(), 2u);
    EXPECT_EQ(render_event_lines(trace), "event A b SET\nevent A c ADD\n");
}

TEST(EventLines, RejectsExtraTokens) {
    EXPECT_FALSE(is_valid_event_line("event A b SET extra"));
    EXPECT_FALSE(is_valid_event_line("events A b SET"));
    EXPECT_TRUE(is_valid_event_line("  event A b remove_many  "));
}

TEST(Origin, StringForm) {
    EXPECT_EQ(Origin::synthetic("gpt4").to_string(), "synthetic:gpt4");
    EXPECT_EQ(Origin::parse("synthetic:gpt4"), Origin::synthetic("gpt4"));
    EXPECT_EQ(Origin::parse("human"), Origin::human());
    EXPECT_EQ(Origin::parse("mixed"), Origin::mixed());
    EXPECT_FALSE(Origin::parse("alien"));
}

TEST(Trace, ValidateChecksMonotoneTimestamps) {
    Trace t{"t", "m", {}, {}};
    EXPECT_EQ(code_of([&] { t.validate(); }), Errc::invalid_trace);
    t.events.emplace_back("A", "b", EventType::set, Timestamp{milliseconds(10)});
    t.events.emplace_back("A", "b", EventType::set, Timestamp{milliseconds(10)});
    EXPECT_NO_THROW(t.validate());
    t.events.emplace_back("A", "b", EventType::set, Timestamp{milliseconds(5)});
    EXPECT_EQ(code_of([&] { t.validate(); }), Errc::invalid_trace);
}

TEST(TraceSet, DuplicateIds) {
    TraceSet s{"mm", {Trace{"a", "a", {ModelingEvent("A", "b", EventType::set)}, {}},
                      Trace{"a", "a", {ModelingEvent("A", "b", EventType::set)}, {}}}};
    EXPECT_EQ(code_of([&] { s.validate(); }), Errc::duplicate_trace_id);
}

TEST(Dataset, RatioFollowsOrigins) {
    TraceSet s{"mm", {}};
    for (int i = 0; i < 4; ++i) {
        s.traces.push_back({"t" + std::to_string(i), "m", {ModelingEvent("A", "b", EventType::set)},
                            i < 1 ? Origin::synthetic("g") : Origin::human()});
    }
    auto d = Dataset::from_traces("d", s);
    EXPECT_DOUBLE_EQ(d.synthetic_ratio, 0.25);
    EXPECT_TRUE(d.ratio_consistent());
    d.synthetic_ratio = 0.9;
    EXPECT_FALSE(d.ratio_consistent());
}

TEST(Schema, LookupAndClassification) {
    MetamodelSchema s;
    s.id = "mm";
    s.add("Process", "name", FeatureKind::attribute).add("Process", "ports", FeatureKind::reference);
    EXPECT_EQ(lookup_feature("Process", "name", s).status, SchemaLookup::Status::valid);
    EXPECT_EQ(lookup_feature("Process", "color", s).status, SchemaLookup::Status::unknown_feature);
    EXPECT_EQ(lookup_feature("Widget", "name", s).status, SchemaLookup::Status::unknown_class);
    EXPECT_EQ(classify_operation("Process", "ports", s), OperationKind::class_op);
    EXPECT_EQ(classify_operation("Process", "name", s), OperationKind::attribute_op);
    EXPECT_EQ(classify_operation("Widget", "x", s), OperationKind::unknown);
}

TEST(Schema, EmptySchemaIsRejected) {
    MetamodelSchema empty;
    ModelingEvent e("A", "b", EventType::set);
    EXPECT_EQ(code_of([&] { validate_event_against_schema(e, empty); }), Errc::invalid_schema);
}

TEST(Schema, JsonRoundTrip) {
    MetamodelSchema s;
    s.id = "mm";
    s.add("Process", "name", FeatureKind::attribute).add("Port", "peer", FeatureKind::reference);
    nlohmann::json j = s;
    EXPECT_EQ(j.get<MetamodelSchema>(), s);
    j["classes"]["Port"]["peer"] = "method";
    EXPECT_EQ(code_of([&] { (void)j.get<MetamodelSchema>(); }), Errc::invalid_schema);
}

#include <traceforge/recommender.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace traceforge;

namespace {

auto events(std::initializer_list<const char*> lines) -> std::vector<ModelingEvent> {
    std::vector<ModelingEvent> out;
    for (const char* l : lines) out.push_back(*match_event_line(l).event);
    return out;
}

auto set_of(std::vector<Trace> traces) -> TraceSet { return {"mini", std::move(traces)}; }

}  // namespace

TEST(Encoding, LabelsAndBaseTotal) {
    auto e = encode_events("t", events({"event System processes ADD", "event Process name SET"}));
    EXPECT_EQ(e.base_label_total(), 2u);
    EXPECT_EQ(e.label_histogram.at("System.processes.ADD [Process.name.SET]"), 1u);
    EXPECT_EQ(e.label_histogram.at("Process.name.SET [System.processes.ADD]"), 1u);
}

TEST(Kernel, IdentityAndDisjoint) {
    auto a = encode_events("a", events({"event System processes ADD", "event Process name SET"}));
    auto b = encode_events("b", events({"event Channel width SET"}));
    EXPECT_DOUBLE_EQ(kernel(a, a), 1.0);
    EXPECT_DOUBLE_EQ(kernel(a, b), 0.0);
    EXPECT_EQ(kernel(a, b), kernel(b, a));
}

TEST(Recommend, SuffixOfSingleTrace) {
    auto schema = oracle::small_schema();
    Trace t{"t", "t", events({"event System processes ADD", "event Process name SET", "event Process ports ADD",
                              "event Channel source SET", "event Port direction SET"}),
            {}};
    auto index = train(set_of({t}), schema);
    std::span<const ModelingEvent> ctx(t.events.data(), 2);
    auto rec = recommend(ctx, index, {0.4, 10, 5}, RecommendationKind::class_ops);
    ASSERT_EQ(rec.items.size(), 2u);
    EXPECT_EQ(rec.items[0].operation.token(), "Channel.source.SET");
    EXPECT_EQ(rec.items[1].operation.token(), "Process.ports.ADD");
    auto attr = recommend(ctx, index, {0.4, 10, 5}, RecommendationKind::attribute_ops);
    ASSERT_EQ(attr.items.size(), 1u);
    EXPECT_EQ(attr.items[0].operation.token(), "Port.direction.SET");
}

TEST(Recommend, Errors) {
    auto schema = oracle::small_schema();
    EXPECT_THROW(train(set_of({}), schema), Error);
    Trace t{"t", "t", events({"event System name SET"}), {}};
    EXPECT_THROW(train(set_of({t, t}), schema), Error);
    auto index = train(set_of({t}), schema);
    try {
        recommend({}, index, {}, RecommendationKind::class_ops);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::empty_context);
    }
    EXPECT_THROW(recommend(t.events, index, {0.5, 0, 5}, RecommendationKind::class_ops), Error);
}

TEST(Recommend, MatchesBruteForceOracle) {
    auto schema = oracle::small_schema();
    std::mt19937_64 rng(77);
    for (int round = 0; round < 200; ++round) {
        std::vector<Trace> traces;
        const std::size_t n = 1 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) traces.push_back(oracle::random_trace(rng, "t" + std::to_string(i), 1, 20, false, 8, 3));
        auto index = train(set_of(traces), schema);
        auto context = oracle::random_trace(rng, "q", 1, 8, false, 8, 3).events;
        const std::size_t k = 1 + rng() % 6, cutoff = 1 + rng() % 6;
        for (auto kind : kRecommendationKinds) {
            auto got = recommend(context, index, {0.5, cutoff, k}, kind);
            auto want = oracle::recommend(traces, context, schema, kind, k, cutoff);
            ASSERT_EQ(got.items.size(), want.size()) << round;
            for (std::size_t i = 0; i < want.size(); ++i) {
                EXPECT_EQ(got.items[i].operation.class_name, want[i].cls);
                EXPECT_EQ(got.items[i].operation.feature_name, want[i].feat);
                EXPECT_EQ(got.items[i].operation.event_type, want[i].type);
                EXPECT_NEAR(got.items[i].score, want[i].score, 1e-12);
            }
        }
    }
}

TEST(Recommend, CutoffListsArePrefixes) {
    auto schema = oracle::small_schema();
    std::mt19937_64 rng(8);
    std::vector<Trace> traces;
    for (int i = 0; i < 8; ++i) traces.push_back(oracle::random_trace(rng, "t" + std::to_string(i), 5, 20, false));
    auto index = train(set_of(traces), schema);
    auto context = oracle::random_trace(rng, "q", 3, 6, false).events;
    auto longest = recommend(context, index, {0.5, 10, 5}, RecommendationKind::attribute_ops).items;
    for (std::size_t co = 1; co < 10; ++co) {
        auto shorter = recommend(context, index, {0.5, co, 5}, RecommendationKind::attribute_ops).items;
        ASSERT_LE(shorter.size(), longest.size());
        for (std::size_t i = 0; i < shorter.size(); ++i) EXPECT_EQ(shorter[i], longest[i]);
    }
}

TEST(Index, JsonRoundTripAndValidation) {
    auto schema = oracle::small_schema();
    std::mt19937_64 rng(9);
    std::vector<Trace> traces;
    for (int i = 0; i < 5; ++i) traces.push_back(oracle::random_trace(rng, "t" + std::to_string(i), 2, 10, false));
    auto index = train(set_of(traces), schema, {"2024-01-01T00:00:00Z", 5});
    nlohmann::json j = index;
    auto back = index_from_json(j);
    EXPECT_EQ(back.encodings(), index.encodings());
    EXPECT_EQ(back.schema(), schema);
    EXPECT_EQ(back.build_info().seed, 5u);
    EXPECT_EQ(back.build_info().trained_at, "2024-01-01T00:00:00Z");
    auto context = traces[0].events;
    context.resize(1);
    EXPECT_EQ(recommend(context, back, {}, RecommendationKind::class_ops).items,
              recommend(context, index, {}, RecommendationKind::class_ops).items);

    auto stale = j;
    stale["traces"][0]["encoding"] = nlohmann::json::object();
    EXPECT_THROW(index_from_json(stale), Error);
    auto wrong = j;
    wrong["version"] = 99;
    EXPECT_THROW(index_from_json(wrong), Error);
}

#include <traceforge/eval.hpp>
#include <traceforge/io.hpp>
#include <traceforge/xes.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace traceforge;
using namespace traceforge::eval;

namespace {

const std::string kFixture = TRACEFORGE_FIXTURE_DIR;

auto trace_of(std::string id, std::initializer_list<const char*> lines) -> Trace {
    Trace t{std::move(id), "m", {}, {}};
    for (const char* l : lines) t.events.push_back(*match_event_line(l).event);
    return t;
}

auto numbered(std::size_t n) -> Dataset {
    TraceSet s{"mini", {}};
    for (std::size_t i = 0; i < n; ++i) s.traces.push_back(trace_of("t" + std::to_string(i), {"event System name SET"}));
    return Dataset::from_traces("d", s);
}

auto fixture() -> std::pair<Dataset, MetamodelSchema> {
    auto [d, r] = parse_dataset_xes(io::read_file(kFixture + "/human.xes"));
    return {d, nlohmann::json::parse(io::read_file(kFixture + "/schema.json")).get<MetamodelSchema>()};
}

}  // namespace

TEST(Grid, NamesAndValidation) {
    ConfigGrid g;
    EXPECT_NO_THROW(g.validate());
    EXPECT_EQ(ConfigGrid::name(2, 1), "C3.2");
    auto c = g.by_name("C3.2");
    EXPECT_DOUBLE_EQ(c.context_ratio, 0.6);
    EXPECT_EQ(c.cutoff, 3u);
    EXPECT_THROW((void)g.by_name("C4.1"), Error);
    g.co_levels = {1, 5, 3};
    EXPECT_THROW(g.validate(), Error);
    EXPECT_THROW(nlohmann::json::parse(R"({"cr_levels": [0.2, 0.4]})").get<ConfigGrid>(), Error);
}

TEST(KFold, TenTracesFiveFolds) {
    auto folds = kfold_split(numbered(10), 5, 1);
    ASSERT_EQ(folds.size(), 5u);
    for (const auto& f : folds) {
        EXPECT_EQ(f.test.traces.size(), 2u);
        EXPECT_EQ(f.train.traces.size(), 8u);
    }
    EXPECT_THROW(kfold_split(numbered(3), 5, 1), Error);
}

TEST(KFold, PartitionPropertyAndDeterminism) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 5 + seed % 23, k = 2 + seed % 4;
        auto d = numbered(n);
        auto folds = kfold_split(d, k, seed);
        std::multiset<std::string> tested;
        std::size_t smallest = n, largest = 0;
        for (const auto& f : folds) {
            std::set<std::string> train_ids;
            for (const auto& t : f.train.traces) train_ids.insert(t.id);
            for (const auto& t : f.test.traces) {
                tested.insert(t.id);
                EXPECT_FALSE(train_ids.contains(t.id));
            }
            EXPECT_EQ(f.train.traces.size() + f.test.traces.size(), n);
            smallest = std::min(smallest, f.test.traces.size());
            largest = std::max(largest, f.test.traces.size());
        }
        EXPECT_EQ(tested.size(), n);
        EXPECT_EQ(std::set<std::string>(tested.begin(), tested.end()).size(), n);
        EXPECT_LE(largest - smallest, 1u);
        auto again = kfold_split(d, k, seed);
        for (std::size_t f = 0; f < k; ++f) EXPECT_EQ(again[f].test, folds[f].test);
    }
}

TEST(ContextLength, Bounds) {
    EXPECT_EQ(context_length(0.6, 5), 3u);
    EXPECT_EQ(context_length(0.2, 3), 1u);
    EXPECT_EQ(context_length(0.9, 4), 3u);
    EXPECT_EQ(context_length(0.6, 2), 1u);
    EXPECT_EQ(context_length(0.5, 1), 0u);
    EXPECT_EQ(context_length(0.4, 10), 4u);
}

TEST(EvaluateFold, PerfectAndDisjoint) {
    auto schema = oracle::small_schema();
    auto t = trace_of("t", {"event System name SET", "event System processes ADD", "event Process ports ADD"});
    TraceSet train{"mini", {t}}, test{"mini", {t}};
    auto m = evaluate_fold(train, test, schema, {0.3, 5, 5}, RecommendationKind::class_ops);
    EXPECT_DOUBLE_EQ(m.precision, 1.0);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.f1, 1.0);

    auto other = trace_of("o", {"event System name SET", "event Channel source SET"});
    auto q = trace_of("q", {"event System name SET", "event System processes ADD", "event Process ports ADD"});
    m = evaluate_fold({"mini", {other}}, {"mini", {q}}, schema, {0.3, 5, 5}, RecommendationKind::class_ops);
    EXPECT_DOUBLE_EQ(m.precision, 0.0);
    EXPECT_DOUBLE_EQ(m.recall, 0.0);
    EXPECT_DOUBLE_EQ(m.f1, 0.0);
}

TEST(EvaluateFold, HandEnumeratedThreeTraces) {
    auto schema = oracle::small_schema();
    // Training traces share the first event with every test trace, so both are neighbors.
    auto a = trace_of("a", {"event System name SET", "event System processes ADD", "event Process ports ADD"});
    auto b = trace_of("b", {"event System name SET", "event Channel source SET"});
    // Test traces; CR 0.4 gives ceil(0.4 N) context events.
    auto x = trace_of("x", {"event System name SET", "event System processes ADD", "event Channel source SET"});
    auto y = trace_of("y", {"event System name SET", "event Process ports ADD", "event Port direction SET",
                            "event Channel source SET"});
    auto z = trace_of("z", {"event System name SET", "event Port direction SET"});
    // x: context [SN, SP], truth {CS}. Labels shared with a: SN, SP, "SN [SP]" -> 3/sqrt(4*6);
    //    with b: SN -> 1/4. Ranked class ops: Process.ports.ADD (0.612), Channel.source.SET (0.25).
    //    CO 2 keeps both: p = 1/2, r = 1.
    // y: context [SN, PP], truth {CS} (Port.direction is an attribute). a: SN, PP -> 2/sqrt(24);
    //    b: SN -> 1/4. Ranked: System.processes.ADD, Channel.source.SET: p = 1/2, r = 1.
    // z: context [SN], no class-op ground truth -> skipped.
    auto m = evaluate_fold({"mini", {a, b}}, {"mini", {x, y, z}}, schema, {0.4, 2, 5}, RecommendationKind::class_ops);
    EXPECT_EQ(m.scored_traces, 2u);
    EXPECT_EQ(m.skipped_traces, 1u);
    EXPECT_DOUBLE_EQ(m.precision, 0.5);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
    auto top1 = evaluate_fold({"mini", {a, b}}, {"mini", {x, y, z}}, schema, {0.4, 1, 5}, RecommendationKind::class_ops);
    EXPECT_DOUBLE_EQ(top1.precision, 0.0);
    EXPECT_DOUBLE_EQ(top1.recall, 0.0);
}

TEST(EvaluateFold, NoScorableTraces) {
    auto schema = oracle::small_schema();
    auto t = trace_of("t", {"event System name SET"});
    try {
        evaluate_fold({"mini", {t}}, {"mini", {t}}, schema, {}, RecommendationKind::class_ops);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::no_scorable_traces);
    }
}

TEST(RunGrid, ShapeAveragesF1AndMonotoneRecall) {
    auto [dataset, schema] = fixture();
    auto report = run_grid(dataset, schema, ConfigGrid{}, {5, 7, 4});
    EXPECT_EQ(report.rows.size(), 2u * 9u * 6u);
    for (const auto& row : report.rows) {
        if (row.fold) {
            EXPECT_NEAR(row.f1, f1_score(row.precision, row.recall), 1e-12);
        }
    }
    for (auto kind : kRecommendationKinds) {
        for (const auto& config : report.configs) {
            double p = 0, r = 0, f = 0;
            for (std::size_t fold = 1; fold <= 5; ++fold) {
                const auto* row = report.find(kind, config, fold);
                ASSERT_NE(row, nullptr);
                p += row->precision;
                r += row->recall;
                f += row->f1;
            }
            const auto* avg = report.find(kind, config, std::nullopt);
            ASSERT_NE(avg, nullptr);
            EXPECT_NEAR(avg->precision, p / 5, 1e-12);
            EXPECT_NEAR(avg->recall, r / 5, 1e-12);
            EXPECT_NEAR(avg->f1, f / 5, 1e-12);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t fold = 1; fold <= 5; ++fold) {
                double last = -1;
                for (std::size_t j = 0; j < 3; ++j) {
                    double r = report.find(kind, ConfigGrid::name(i, j), fold)->recall;
                    EXPECT_GE(r, last);
                    last = r;
                }
            }
        }
    }
}

TEST(RunGrid, DeterministicAcrossJobCounts) {
    auto [dataset, schema] = fixture();
    auto a = to_csv(run_grid(dataset, schema, ConfigGrid{}, {5, 11, 1}));
    auto b = to_csv(run_grid(dataset, schema, ConfigGrid{}, {5, 11, 8}));
    EXPECT_EQ(a, b);
    auto j1 = to_json(run_grid(dataset, schema, ConfigGrid{}, {5, 11, 2}), false);
    auto j2 = to_json(run_grid(dataset, schema, ConfigGrid{}, {5, 11, 3}), false);
    EXPECT_EQ(j1.dump(), j2.dump());
}

TEST(CrossDataset, SelfRetrievalAndPrebuiltIndex) {
    auto [dataset, schema] = fixture();
    RecConfig config{0.2, 200, 50};
    auto report = cross_dataset_eval(dataset, dataset, schema, config, "self");
    for (const auto& row : report.rows) {
        EXPECT_DOUBLE_EQ(row.recall, 1.0);
    }
    auto index = train(dataset.trace_set, schema);
    auto reused = cross_dataset_eval(Dataset{}, dataset, schema, config, "self", &index);
    EXPECT_EQ(to_csv(reused), to_csv(report));
    EXPECT_THROW(cross_dataset_eval(dataset, Dataset{}, schema, config), Error);
}

TEST(Report, CsvLayout) {
    auto [dataset, schema] = fixture();
    auto csv = to_csv(run_grid(dataset, schema, ConfigGrid{}, {5, 1, 2}));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,kind,config,fold,precision,recall,f1");
    EXPECT_NE(csv.find("\nfixture-human,class,C1.1,1,"), std::string::npos);
    EXPECT_NE(csv.find("\nfixture-human,attribute,C3.3,avg,"), std::string::npos);
}

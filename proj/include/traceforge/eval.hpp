#pragma once

#include <traceforge/detail/parallel.hpp>
#include <traceforge/detail/random.hpp>
#include <traceforge/error.hpp>
#include <traceforge/recommender.hpp>
#include <traceforge/trace.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace traceforge::eval {

/// Context-ratio and cutoff levels; configuration C<i>.<j> pairs cr_levels[i-1] with
/// co_levels[j-1].
struct ConfigGrid {
    std::vector<double> cr_levels{0.2, 0.4, 0.6};
    std::vector<std::size_t> co_levels{1, 3, 5};
    std::size_t neighbors{5};

    void validate() const {
        if (cr_levels.size() != 3 || co_levels.size() != 3) {
            throw Error(Errc::invalid_config, "grid needs exactly three CR levels and three CO levels");
        }
        for (std::size_t i = 1; i < 3; ++i) {
            if (!(cr_levels[i] > cr_levels[i - 1]) || !(co_levels[i] > co_levels[i - 1])) {
                throw Error(Errc::invalid_config, "grid levels must be strictly increasing");
            }
        }
        for (std::size_t i = 0; i < 3; ++i) config(i, 0).validate();
    }

    [[nodiscard]] auto config(std::size_t cr_index, std::size_t co_index) const -> RecConfig {
        return {cr_levels.at(cr_index), co_levels.at(co_index), neighbors};
    }

    static auto name(std::size_t cr_index, std::size_t co_index) -> std::string {
        return "C" + std::to_string(cr_index + 1) + "." + std::to_string(co_index + 1);
    }

    /// Looks up a configuration by its `C<i>.<j>` name.
    [[nodiscard]] auto by_name(std::string_view name) const -> RecConfig {
        for (std::size_t i = 0; i < cr_levels.size(); ++i) {
            for (std::size_t j = 0; j < co_levels.size(); ++j) {
                if (ConfigGrid::name(i, j) == name) return config(i, j);
            }
        }
        throw Error(Errc::invalid_config, "unknown configuration '" + std::string(name) + "'");
    }
};

inline void from_json(const nlohmann::json& j, ConfigGrid& grid) {
    grid = ConfigGrid{};
    if (j.contains("cr_levels")) grid.cr_levels = j.at("cr_levels").get<std::vector<double>>();
    if (j.contains("co_levels")) grid.co_levels = j.at("co_levels").get<std::vector<std::size_t>>();
    grid.neighbors = j.value("neighbors", grid.neighbors);
    grid.validate();
}

inline void to_json(nlohmann::json& j, const ConfigGrid& grid) {
    j = nlohmann::json{{"cr_levels", grid.cr_levels}, {"co_levels", grid.co_levels}, {"neighbors", grid.neighbors}};
}

struct Fold {
    TraceSet train;
    TraceSet test;
};

/// Seeded shuffle into k near-equal test partitions; every trace is tested exactly once.
inline auto kfold_split(const Dataset& dataset, std::size_t k, std::uint64_t seed) -> std::vector<Fold> {
    const auto& traces = dataset.trace_set.traces;
    if (k < 2) throw Error(Errc::invalid_config, "k must be at least 2");
    if (traces.size() < k) {
        throw Error(Errc::too_few_traces, std::to_string(traces.size()) + " traces cannot fill " + std::to_string(k) + " folds");
    }
    std::vector<std::size_t> order(traces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    traceforge::detail::seeded_shuffle(order, rng);

    std::vector<std::size_t> fold_of(traces.size());
    const std::size_t base = traces.size() / k, extra = traces.size() % k;
    for (std::size_t f = 0, pos = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t n = 0; n < size; ++n) fold_of[order[pos++]] = f;
    }
    std::vector<Fold> folds(k);
    for (auto& fold : folds) {
        fold.train.metamodel_id = dataset.trace_set.metamodel_id;
        fold.test.metamodel_id = dataset.trace_set.metamodel_id;
    }
    for (std::size_t idx : order) {
        for (std::size_t f = 0; f < k; ++f) {
            (fold_of[idx] == f ? folds[f].test : folds[f].train).traces.push_back(traces[idx]);
        }
    }
    return folds;
}

inline auto f1_score(double precision, double recall) -> double {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

/// Number of leading events revealed as context: ceil(CR * N) clamped to [1, N - 1].
inline auto context_length(double context_ratio, std::size_t event_count) -> std::size_t {
    if (event_count < 2) return 0;
    // the epsilon keeps products such as 0.6 * 5 from rounding up past an integer
    auto raw = static_cast<std::size_t>(std::ceil(context_ratio * static_cast<double>(event_count) - 1e-9));
    return std::clamp<std::size_t>(raw, 1, event_count - 1);
}

/// Operations still to come after the context, restricted to `kind` and excluding
/// operations the context already contains.
inline auto ground_truth(std::span<const ModelingEvent> events, std::size_t context_len, const MetamodelSchema& schema,
                         RecommendationKind kind) -> std::set<OperationKey> {
    std::set<OperationKey> seen;
    for (std::size_t i = 0; i < context_len; ++i) seen.insert(events[i].key());
    std::set<OperationKey> truth;
    for (std::size_t i = context_len; i < events.size(); ++i) {
        auto key = events[i].key();
        if (seen.contains(key)) continue;
        if (!matches(classify_operation(key.class_name, key.feature_name, schema), kind)) continue;
        truth.insert(std::move(key));
    }
    return truth;
}

struct FoldMetrics {
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
    std::size_t scored_traces{0};
    std::size_t skipped_traces{0};  ///< Too short, or no ground truth of the requested kind.
};

/// Per-trace precision and recall macro-averaged over the scorable test traces; f1 is the
/// harmonic mean of the averaged precision and recall.
inline auto evaluate_with_index(const TraceSet& test, const RecommenderIndex& index, const MetamodelSchema& schema,
                                const RecConfig& config, RecommendationKind kind) -> FoldMetrics {
    config.validate();
    FoldMetrics out;
    double precision_sum = 0.0, recall_sum = 0.0;
    for (const auto& trace : test.traces) {
        const auto n = trace.events.size();
        const auto ctx = context_length(config.context_ratio, n);
        if (ctx == 0) {
            ++out.skipped_traces;
            continue;
        }
        std::span<const ModelingEvent> events(trace.events);
        auto truth = ground_truth(events, ctx, schema, kind);
        if (truth.empty()) {
            ++out.skipped_traces;
            continue;
        }
        auto rec = recommend(events.first(ctx), index, config, kind);
        std::size_t hits = 0;
        for (const auto& item : rec.items) hits += truth.contains(item.operation) ? 1 : 0;
        precision_sum += rec.items.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rec.items.size());
        recall_sum += static_cast<double>(hits) / static_cast<double>(truth.size());
        ++out.scored_traces;
    }
    if (out.scored_traces == 0) {
        throw Error(Errc::no_scorable_traces,
                    std::string("no test trace has ") + std::string(to_string_view(kind)) + " ground truth");
    }
    out.precision = precision_sum / static_cast<double>(out.scored_traces);
    out.recall = recall_sum / static_cast<double>(out.scored_traces);
    out.f1 = f1_score(out.precision, out.recall);
    return out;
}

inline auto evaluate_fold(const TraceSet& train_set, const TraceSet& test, const MetamodelSchema& schema,
                          const RecConfig& config, RecommendationKind kind) -> FoldMetrics {
    auto index = traceforge::train(train_set, schema);
    return evaluate_with_index(test, index, schema, config, kind);
}

struct EvalRow {
    RecommendationKind kind{RecommendationKind::class_ops};
    std::string config;
    std::optional<std::size_t> fold;  ///< 1-based; absent on the average row.
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
    std::size_t scored_traces{0};
};

struct EvalTiming {
    std::vector<std::chrono::microseconds> train_per_fold;
    std::chrono::microseconds recommend_total{0};
};

struct EvalReport {
    std::string dataset;
    std::size_t folds{0};
    std::optional<std::uint64_t> seed;
    std::vector<std::string> configs;
    std::vector<EvalRow> rows;  ///< Ordered by kind, config, fold, with the average row last per config.
    EvalTiming timing;
    std::size_t training_traces{0};

    [[nodiscard]] auto find(RecommendationKind kind, std::string_view config, std::optional<std::size_t> fold) const
        -> const EvalRow* {
        for (const auto& row : rows) {
            if (row.kind == kind && row.config == config && row.fold == fold) return &row;
        }
        return nullptr;
    }
};

namespace detail {

/// Appends the fold rows of one (kind, config) cell and their average row. The average
/// row holds the arithmetic means of the fold precision, recall and f1 columns.
inline void append_cell(EvalReport& report, RecommendationKind kind, const std::string& config,
                        const std::vector<FoldMetrics>& folds) {
    double p = 0.0, r = 0.0, f = 0.0;
    std::size_t scored = 0;
    for (std::size_t i = 0; i < folds.size(); ++i) {
        report.rows.push_back({kind, config, i + 1, folds[i].precision, folds[i].recall, folds[i].f1, folds[i].scored_traces});
        p += folds[i].precision;
        r += folds[i].recall;
        f += folds[i].f1;
        scored += folds[i].scored_traces;
    }
    const auto n = static_cast<double>(folds.size());
    report.rows.push_back({kind, config, std::nullopt, p / n, r / n, f / n, scored});
}

}  // namespace detail

struct GridOptions {
    std::size_t k{5};
    std::uint64_t seed{0};
    std::size_t jobs{1};
};

/// k-fold evaluation of every grid configuration for class and attribute operations.
inline auto run_grid(const Dataset& dataset, const MetamodelSchema& schema, const ConfigGrid& grid,
                     const GridOptions& options = {}) -> EvalReport {
    grid.validate();
    auto folds = kfold_split(dataset, options.k, options.seed);

    EvalReport report;
    report.dataset = dataset.name;
    report.folds = options.k;
    report.seed = options.seed;
    report.training_traces = dataset.trace_set.traces.size();

    std::vector<std::optional<RecommenderIndex>> indices(folds.size());
    report.timing.train_per_fold.resize(folds.size());
    traceforge::detail::parallel_for(folds.size(), options.jobs, [&](std::size_t f) {
        const auto start = std::chrono::steady_clock::now();
        indices[f].emplace(traceforge::train(folds[f].train, schema, {std::nullopt, options.seed}));
        report.timing.train_per_fold[f] =
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    });

    struct Cell {
        RecommendationKind kind;
        std::size_t cr, co, fold;
    };
    std::vector<Cell> cells;
    for (auto kind : kRecommendationKinds) {
        for (std::size_t i = 0; i < grid.cr_levels.size(); ++i) {
            for (std::size_t j = 0; j < grid.co_levels.size(); ++j) {
                for (std::size_t f = 0; f < folds.size(); ++f) cells.push_back({kind, i, j, f});
            }
        }
    }
    std::vector<FoldMetrics> results(cells.size());
    std::vector<std::chrono::microseconds> spent(cells.size());
    traceforge::detail::parallel_for(cells.size(), options.jobs, [&](std::size_t c) {
        const auto& cell = cells[c];
        const auto start = std::chrono::steady_clock::now();
        results[c] = evaluate_with_index(folds[cell.fold].test, *indices[cell.fold], schema,
                                         grid.config(cell.cr, cell.co), cell.kind);
        spent[c] = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start);
    });
    for (auto s : spent) report.timing.recommend_total += s;

    for (std::size_t i = 0; i < grid.cr_levels.size(); ++i) {
        for (std::size_t j = 0; j < grid.co_levels.size(); ++j) report.configs.push_back(ConfigGrid::name(i, j));
    }
    for (std::size_t c = 0; c < cells.size(); c += folds.size()) {
        std::vector<FoldMetrics> cell_folds(results.begin() + static_cast<std::ptrdiff_t>(c),
                                            results.begin() + static_cast<std::ptrdiff_t>(c + folds.size()));
        detail::append_cell(report, cells[c].kind, ConfigGrid::name(cells[c].cr, cells[c].co), cell_folds);
    }
    return report;
}

/// Trains once on `train` (or reuses a prebuilt index) and scores every validation trace.
/// The report holds one fold row per kind plus the matching average row.
inline auto cross_dataset_eval(const Dataset& train_set, const Dataset& validation, const MetamodelSchema& schema,
                               const RecConfig& config, std::string_view config_name = "C3.3",
                               const RecommenderIndex* prebuilt = nullptr) -> EvalReport {
    EvalReport report;
    report.dataset = validation.name;
    report.folds = 1;
    report.configs.emplace_back(config_name);
    report.training_traces = prebuilt ? prebuilt->size() : train_set.trace_set.traces.size();
    if (validation.trace_set.traces.empty()) throw Error(Errc::no_scorable_traces, "validation set is empty");

    std::optional<RecommenderIndex> built;
    const auto start = std::chrono::steady_clock::now();
    if (prebuilt == nullptr) built.emplace(traceforge::train(train_set.trace_set, schema));
    const RecommenderIndex& index = prebuilt ? *prebuilt : *built;
    report.timing.train_per_fold.push_back(
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start));

    for (auto kind : kRecommendationKinds) {
        const auto t0 = std::chrono::steady_clock::now();
        auto metrics = evaluate_with_index(validation.trace_set, index, schema, config, kind);
        report.timing.recommend_total +=
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0);
        detail::append_cell(report, kind, std::string(config_name), {metrics});
    }
    return report;
}

/// Shortest representation that parses back to the same double.
inline auto format_number(double value) -> std::string {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

/// Columns dataset, kind, config, fold, precision, recall, f1; average rows use fold `avg`.
inline auto to_csv(const EvalReport& report) -> std::string {
    std::string out = "dataset,kind,config,fold,precision,recall,f1\n";
    for (const auto& row : report.rows) {
        out += report.dataset + ',' + std::string(to_string_view(row.kind)) + ',' + row.config + ',' +
               (row.fold ? std::to_string(*row.fold) : std::string("avg")) + ',' + format_number(row.precision) + ',' +
               format_number(row.recall) + ',' + format_number(row.f1) + '\n';
    }
    return out;
}

/// JSON form of the report. Timing is the only part that varies between identical runs.
inline auto to_json(const EvalReport& report, bool include_timing = true) -> nlohmann::json {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        rows.push_back({{"kind", to_string_view(row.kind)},
                        {"config", row.config},
                        {"fold", row.fold ? nlohmann::json(*row.fold) : nlohmann::json("avg")},
                        {"precision", row.precision},
                        {"recall", row.recall},
                        {"f1", row.f1},
                        {"scored_traces", row.scored_traces}});
    }
    nlohmann::json j{{"dataset", report.dataset},
                     {"folds", report.folds},
                     {"seed", report.seed ? nlohmann::json(*report.seed) : nlohmann::json()},
                     {"configs", report.configs},
                     {"build_info", {{"training_traces", report.training_traces}}},
                     {"rows", std::move(rows)}};
    if (include_timing) {
        nlohmann::json per_fold = nlohmann::json::array();
        for (auto t : report.timing.train_per_fold) per_fold.push_back(static_cast<double>(t.count()) / 1e6);
        j["timing"] = {{"train_per_fold_s", std::move(per_fold)},
                       {"recommend_total_s", static_cast<double>(report.timing.recommend_total.count()) / 1e6}};
    }
    return j;
}

}  // namespace traceforge::eval

#pragma once

// Similarity-based next-operation recommender. Traces are encoded as label histograms
// over their event sequence (base labels plus one round of neighborhood relabeling) and
// compared with a cosine-normalized histogram kernel. Recommendations are the operations
// of the most similar training traces, weighted by similarity and frequency.

#include <traceforge/error.hpp>
#include <traceforge/event.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/schema.hpp>
#include <traceforge/trace.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace traceforge {

struct TraceEncoding {
    std::string trace_id;
    std::map<std::string, std::size_t> label_histogram;

    auto operator==(const TraceEncoding&) const -> bool = default;

    /// Base labels are bare tokens; refined labels always contain a space.
    [[nodiscard]] auto base_label_total() const -> std::size_t {
        std::size_t total = 0;
        for (const auto& [label, count] : label_histogram) {
            if (label.find(' ') == std::string::npos) total += count;
        }
        return total;
    }
};

/// Refined label of an event: its token followed by the sorted tokens of its sequence
/// neighbors, e.g. `Process.name.SET [Process.ports.ADD System.processes.ADD]`.
inline auto refined_label(std::string_view token, std::vector<std::string> neighbors) -> std::string {
    std::sort(neighbors.begin(), neighbors.end());
    std::string label(token);
    label += " [";
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        if (i > 0) label += ' ';
        label += neighbors[i];
    }
    label += ']';
    return label;
}

inline auto encode_events(std::string trace_id, std::span<const ModelingEvent> events) -> TraceEncoding {
    TraceEncoding encoding{std::move(trace_id), {}};
    std::vector<std::string> tokens;
    tokens.reserve(events.size());
    for (const auto& event : events) tokens.push_back(event.token());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        ++encoding.label_histogram[tokens[i]];
        std::vector<std::string> neighbors;
        if (i > 0) neighbors.push_back(tokens[i - 1]);
        if (i + 1 < tokens.size()) neighbors.push_back(tokens[i + 1]);
        ++encoding.label_histogram[refined_label(tokens[i], std::move(neighbors))];
    }
    return encoding;
}

inline auto encode_trace(const Trace& trace) -> TraceEncoding { return encode_events(trace.id, trace.events); }

/// Cosine similarity of the combined base and refined label counts.
inline auto kernel(const TraceEncoding& a, const TraceEncoding& b) -> double {
    const auto& ha = a.label_histogram;
    const auto& hb = b.label_histogram;
    if (ha.empty() && hb.empty()) return 1.0;
    if (ha.empty() || hb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [label, count] : ha) {
        const auto c = static_cast<double>(count);
        na += c * c;
        if (auto it = hb.find(label); it != hb.end()) dot += c * static_cast<double>(it->second);
    }
    for (const auto& [label, count] : hb) nb += static_cast<double>(count) * static_cast<double>(count);
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

struct BuildInfo {
    std::optional<std::string> trained_at;
    std::size_t trace_count{0};
    std::optional<std::uint64_t> seed;
    std::chrono::microseconds build_duration{0};
};

/// Trained, immutable index: one encoding and one event list per training trace.
class RecommenderIndex {
public:
    RecommenderIndex(std::string metamodel_id, MetamodelSchema schema, std::vector<TraceEncoding> encodings,
                     std::map<std::string, std::vector<ModelingEvent>> event_store, BuildInfo info)
        : metamodel_id_(std::move(metamodel_id)),
          schema_(std::move(schema)),
          encodings_(std::move(encodings)),
          event_store_(std::move(event_store)),
          info_(std::move(info)) {
        if (encodings_.size() != event_store_.size()) {
            throw Error(Errc::format_error, "index encodings and event store cover different traces");
        }
        for (const auto& encoding : encodings_) {
            if (!event_store_.contains(encoding.trace_id)) {
                throw Error(Errc::format_error, "index has no events for '" + encoding.trace_id + "'");
            }
        }
    }

    [[nodiscard]] auto metamodel_id() const -> const std::string& { return metamodel_id_; }
    [[nodiscard]] auto schema() const -> const MetamodelSchema& { return schema_; }
    [[nodiscard]] auto encodings() const -> const std::vector<TraceEncoding>& { return encodings_; }
    [[nodiscard]] auto events_of(const std::string& trace_id) const -> const std::vector<ModelingEvent>& {
        return event_store_.at(trace_id);
    }
    [[nodiscard]] auto event_store() const -> const std::map<std::string, std::vector<ModelingEvent>>& {
        return event_store_;
    }
    [[nodiscard]] auto build_info() const -> const BuildInfo& { return info_; }
    [[nodiscard]] auto size() const -> std::size_t { return encodings_.size(); }

private:
    std::string metamodel_id_;
    MetamodelSchema schema_;
    std::vector<TraceEncoding> encodings_;
    std::map<std::string, std::vector<ModelingEvent>> event_store_;
    BuildInfo info_;
};

struct TrainOptions {
    std::optional<std::string> trained_at{};  ///< Recorded verbatim; callers pass a clock reading if wanted.
    std::optional<std::uint64_t> seed{};
};

inline auto train(const TraceSet& traces, const MetamodelSchema& schema, const TrainOptions& options = {})
    -> RecommenderIndex {
    if (traces.traces.empty()) throw Error(Errc::empty_training_set, "no training traces");
    const auto start = std::chrono::steady_clock::now();
    std::vector<TraceEncoding> encodings;
    std::map<std::string, std::vector<ModelingEvent>> store;
    encodings.reserve(traces.traces.size());
    for (const auto& trace : traces.traces) {
        if (!store.emplace(trace.id, trace.events).second) {
            throw Error(Errc::duplicate_trace_id, "training trace id '" + trace.id + "' is not unique");
        }
        encodings.push_back(encode_trace(trace));
    }
    BuildInfo info{options.trained_at, traces.traces.size(), options.seed,
                   std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start)};
    return RecommenderIndex(traces.metamodel_id, schema, std::move(encodings), std::move(store), std::move(info));
}

enum class RecommendationKind : std::uint8_t { class_ops, attribute_ops };

inline constexpr std::array<RecommendationKind, 2> kRecommendationKinds = {RecommendationKind::class_ops,
                                                                          RecommendationKind::attribute_ops};

constexpr auto to_string_view(RecommendationKind kind) noexcept -> std::string_view {
    return kind == RecommendationKind::class_ops ? "class" : "attribute";
}

inline auto parse_recommendation_kind(std::string_view text) -> std::optional<RecommendationKind> {
    if (text == "class" || text == "classes" || text == "class_ops") return RecommendationKind::class_ops;
    if (text == "attribute" || text == "attributes" || text == "attribute_ops") return RecommendationKind::attribute_ops;
    return std::nullopt;
}

constexpr auto matches(OperationKind op, RecommendationKind kind) noexcept -> bool {
    return (kind == RecommendationKind::class_ops && op == OperationKind::class_op) ||
           (kind == RecommendationKind::attribute_ops && op == OperationKind::attribute_op);
}

/// Context ratio CR, cutoff CO and neighbor count k.
struct RecConfig {
    double context_ratio{0.6};
    std::size_t cutoff{5};
    std::size_t neighbors{5};

    void validate() const {
        if (!(context_ratio > 0.0 && context_ratio < 1.0)) {
            throw Error(Errc::invalid_config, "context ratio must lie in (0, 1)");
        }
        if (cutoff < 1) throw Error(Errc::invalid_config, "cutoff must be at least 1");
        if (neighbors < 1) throw Error(Errc::invalid_config, "neighbor count must be at least 1");
    }
};

struct RecommendedOperation {
    OperationKey operation;
    double score{0.0};

    auto operator==(const RecommendedOperation&) const -> bool = default;
};

struct Recommendation {
    std::vector<RecommendedOperation> items;
    RecommendationKind kind{RecommendationKind::class_ops};
};

struct Neighbor {
    double similarity{0.0};
    const std::vector<ModelingEvent>* events{nullptr};
};

/// Scores candidate operations from ranked neighbors: each operation collects
/// similarity x frequency from every neighbor that contains it. Operations already in
/// the context and operations of the other kind are skipped. Sorted by score, then by
/// (class, feature, type); truncated at `cutoff`.
inline auto rank_candidates(std::span<const Neighbor> neighbors, const std::set<OperationKey>& context_keys,
                            const MetamodelSchema& schema, RecommendationKind kind, std::size_t cutoff)
    -> std::vector<RecommendedOperation> {
    std::map<OperationKey, double> scores;
    std::map<OperationKey, std::size_t> frequency;
    for (const auto& neighbor : neighbors) {
        frequency.clear();
        for (const auto& event : *neighbor.events) {
            auto key = event.key();
            if (context_keys.contains(key)) continue;
            if (!matches(classify_operation(key.class_name, key.feature_name, schema), kind)) continue;
            ++frequency[std::move(key)];
        }
        for (const auto& [key, count] : frequency) scores[key] += neighbor.similarity * static_cast<double>(count);
    }
    std::vector<RecommendedOperation> ranked;
    ranked.reserve(scores.size());
    for (auto& [key, score] : scores) ranked.push_back({key, score});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.operation < b.operation;
    });
    if (ranked.size() > cutoff) ranked.resize(cutoff);
    return ranked;
}

/// The k most similar training traces with positive similarity, ties broken by trace id.
inline auto nearest_neighbors(const TraceEncoding& query, const RecommenderIndex& index, std::size_t k)
    -> std::vector<Neighbor> {
    struct Scored {
        double similarity;
        const TraceEncoding* encoding;
    };
    std::vector<Scored> scored;
    scored.reserve(index.size());
    for (const auto& encoding : index.encodings()) {
        double s = kernel(query, encoding);
        if (s > 0.0) scored.push_back({s, &encoding});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.encoding->trace_id < b.encoding->trace_id;
    });
    if (scored.size() > k) scored.resize(k);
    std::vector<Neighbor> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back({s.similarity, &index.events_of(s.encoding->trace_id)});
    return out;
}

inline auto recommend(std::span<const ModelingEvent> context, const RecommenderIndex& index, const RecConfig& config,
                      RecommendationKind kind) -> Recommendation {
    if (context.empty()) throw Error(Errc::empty_context, "recommendation context has no events");
    if (index.size() == 0) throw Error(Errc::empty_index, "recommender index is empty");
    config.validate();
    auto query = encode_events("<context>", context);
    auto neighbors = nearest_neighbors(query, index, config.neighbors);
    std::set<OperationKey> context_keys;
    for (const auto& event : context) context_keys.insert(event.key());
    return {rank_candidates(neighbors, context_keys, index.schema(), kind, config.cutoff), kind};
}

inline constexpr std::string_view kIndexFormat = "traceforge-index";
inline constexpr int kIndexVersion = 1;

inline void to_json(nlohmann::json& j, const RecommenderIndex& index) {
    nlohmann::json traces = nlohmann::json::array();
    for (const auto& encoding : index.encodings()) {
        nlohmann::json events = nlohmann::json::array();
        for (const auto& event : index.events_of(encoding.trace_id)) events.push_back(event.render());
        traces.push_back({{"id", encoding.trace_id}, {"events", std::move(events)}, {"encoding", encoding.label_histogram}});
    }
    const auto& info = index.build_info();
    j = nlohmann::json{{"format", kIndexFormat},
                       {"version", kIndexVersion},
                       {"metamodel_id", index.metamodel_id()},
                       {"schema", index.schema()},
                       {"build_info",
                        {{"trained_at", info.trained_at ? nlohmann::json(*info.trained_at) : nlohmann::json()},
                         {"trace_count", info.trace_count},
                         {"seed", info.seed ? nlohmann::json(*info.seed) : nlohmann::json()}}},
                       {"traces", std::move(traces)}};
}

/// Loads a serialized index, rejecting unknown formats, versions, or encodings that do
/// not match their stored events.
inline auto index_from_json(const nlohmann::json& j) -> RecommenderIndex {
    if (j.value("format", std::string{}) != kIndexFormat) throw Error(Errc::format_error, "not a recommender index");
    if (j.value("version", 0) != kIndexVersion) {
        throw Error(Errc::format_error, "unsupported index version " + std::to_string(j.value("version", 0)));
    }
    auto schema = j.at("schema").get<MetamodelSchema>();
    std::vector<TraceEncoding> encodings;
    std::map<std::string, std::vector<ModelingEvent>> store;
    for (const auto& t : j.at("traces")) {
        auto id = t.at("id").get<std::string>();
        std::vector<ModelingEvent> events;
        for (const auto& line : t.at("events")) {
            auto match = match_event_line(line.get<std::string>());
            if (!match.event) throw Error(Errc::format_error, "index trace '" + id + "': " + match.reason);
            events.push_back(std::move(*match.event));
        }
        auto encoding = encode_events(id, events);
        if (t.contains("encoding") &&
            t.at("encoding").get<std::map<std::string, std::size_t>>() != encoding.label_histogram) {
            throw Error(Errc::format_error, "index trace '" + id + "' has a stale encoding");
        }
        encodings.push_back(std::move(encoding));
        store.emplace(std::move(id), std::move(events));
    }
    const auto& b = j.at("build_info");
    BuildInfo info;
    if (!b.at("trained_at").is_null()) info.trained_at = b.at("trained_at").get<std::string>();
    info.trace_count = b.at("trace_count").get<std::size_t>();
    if (!b.at("seed").is_null()) info.seed = b.at("seed").get<std::uint64_t>();
    return RecommenderIndex(j.at("metamodel_id").get<std::string>(), std::move(schema), std::move(encodings),
                            std::move(store), info);
}

}  // namespace traceforge

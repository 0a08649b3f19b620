#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/schema.hpp>
#include <traceforge/similarity.hpp>
#include <traceforge/stats/stats.hpp>
#include <traceforge/trace.hpp>

#include <json.hpp>

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace traceforge {

/// Share of non-blank lines that match the event grammar; 1 for text without such lines.
inline auto correctness(std::string_view raw_trace_text) -> double {
    std::size_t total = 0, valid = 0;
    for (auto line : detail::split_lines(raw_trace_text)) {
        if (detail::is_blank(line)) continue;
        ++total;
        valid += is_valid_event_line(line) ? 1 : 0;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(valid) / static_cast<double>(total);
}

struct DiversityVector {
    double lcs{0.0};
    double jaro{0.0};
    double cosine{0.0};
    double jaccard{0.0};
    double dice{0.0};
    double qgram{0.0};

    auto operator==(const DiversityVector&) const -> bool = default;

    [[nodiscard]] auto values() const -> std::array<double, 6> { return {lcs, jaro, cosine, jaccard, dice, qgram}; }
};

inline constexpr std::array<std::string_view, 6> kDiversityNames = {"lcs", "jaro", "cosine", "jaccard", "dice", "qgram"};

inline auto event_tokens(const Trace& trace) -> std::vector<std::string> {
    std::vector<std::string> tokens;
    tokens.reserve(trace.events.size());
    for (const auto& event : trace.events) tokens.push_back(event.token());
    return tokens;
}

/// Edit-style measures (LCS, Jaro) run over the characters of the rendered trace text;
/// set and profile measures run over `class.feature.TYPE` event tokens.
inline auto diversity(const Trace& synthetic, const Trace& reference, int q = 2) -> DiversityVector {
    const auto text_s = render_event_lines(synthetic);
    const auto text_r = render_event_lines(reference);
    const auto tok_s = event_tokens(synthetic);
    const auto tok_r = event_tokens(reference);
    using namespace similarity;
    return {lcs_similarity(text_s, text_r),      jaro_similarity(text_s, text_r),
            cosine_similarity(tok_s, tok_r),     jaccard_similarity(tok_s, tok_r),
            dice_similarity(tok_s, tok_r),       qgram_similarity(tok_s, tok_r, q)};
}

/// Schema-valid additive synthetic events relative to the reference's additive events.
inline auto hallucination(const Trace& synthetic, const Trace& reference, const MetamodelSchema& schema) -> double {
    std::size_t reference_additive = 0;
    for (const auto& event : reference.events) reference_additive += is_additive(event.event_type) ? 1 : 0;
    if (reference_additive == 0) {
        throw Error(Errc::degenerate_reference, "reference trace '" + reference.id + "' has no additive events");
    }
    std::size_t plausible = 0;
    for (const auto& event : synthetic.events) {
        if (is_additive(event.event_type) && lookup_feature(event.class_name, event.feature_name, schema).valid()) {
            ++plausible;
        }
    }
    return static_cast<double>(plausible) / static_cast<double>(reference_additive);
}

struct QualityRow {
    std::string trace_id;
    std::string reference_id;
    double correctness{1.0};
    DiversityVector diversity;
    std::optional<double> hallucination;  ///< Absent when the reference has no additive events.
};

struct QualityReport {
    std::vector<QualityRow> per_trace;
    std::map<std::string, stats::DescriptiveStats> summary;
};

struct AssessOptions {
    int q{2};
    /// Raw generator output per synthetic trace id; correctness falls back to the rendered trace.
    std::map<std::string, std::string> raw_texts{};
};

inline auto assess_dataset(const TraceSet& synthetic, const TraceSet& reference, const MetamodelSchema& schema,
                           const std::map<std::string, std::string>& pairing, const AssessOptions& options = {})
    -> QualityReport {
    QualityReport report;
    for (const auto& trace : synthetic.traces) {
        auto pair = pairing.find(trace.id);
        if (pair == pairing.end()) throw Error(Errc::unpaired_trace, "synthetic trace '" + trace.id + "' has no pair");
        const Trace* ref = reference.find(pair->second);
        if (ref == nullptr) {
            throw Error(Errc::unpaired_trace, "reference '" + pair->second + "' for '" + trace.id + "' not found");
        }
        QualityRow row;
        row.trace_id = trace.id;
        row.reference_id = ref->id;
        auto raw = options.raw_texts.find(trace.id);
        row.correctness = correctness(raw != options.raw_texts.end() ? raw->second : render_event_lines(trace));
        row.diversity = diversity(trace, *ref, options.q);
        try {
            row.hallucination = hallucination(trace, *ref, schema);
        } catch (const Error& e) {
            if (e.code() != Errc::degenerate_reference) throw;
        }
        report.per_trace.push_back(std::move(row));
    }
    for (const auto& [synthetic_id, reference_id] : pairing) {
        if (synthetic.find(synthetic_id) == nullptr) {
            throw Error(Errc::unpaired_trace, "paired synthetic trace '" + synthetic_id + "' not found");
        }
    }
    if (report.per_trace.empty()) return report;

    std::vector<double> column;
    auto summarize = [&](const std::string& name, auto&& pick) {
        column.clear();
        for (const auto& row : report.per_trace) {
            if (auto v = pick(row)) column.push_back(*v);
        }
        if (!column.empty()) report.summary[name] = stats::describe(column);
    };
    summarize("correctness", [](const QualityRow& r) { return std::optional<double>(r.correctness); });
    for (std::size_t m = 0; m < kDiversityNames.size(); ++m) {
        summarize(std::string(kDiversityNames[m]),
                  [m](const QualityRow& r) { return std::optional<double>(r.diversity.values()[m]); });
    }
    summarize("hallucination", [](const QualityRow& r) { return r.hallucination; });
    return report;
}

inline void to_json(nlohmann::json& j, const QualityReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.per_trace) {
        nlohmann::json diversity = nlohmann::json::object();
        auto values = row.diversity.values();
        for (std::size_t m = 0; m < kDiversityNames.size(); ++m) diversity[std::string(kDiversityNames[m])] = values[m];
        rows.push_back({{"trace_id", row.trace_id},
                        {"reference_id", row.reference_id},
                        {"correctness", row.correctness},
                        {"diversity", std::move(diversity)},
                        {"hallucination", row.hallucination ? nlohmann::json(*row.hallucination) : nlohmann::json()}});
    }
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [name, s] : report.summary) summary[name] = s;
    j = nlohmann::json{{"per_trace", std::move(rows)}, {"summary", std::move(summary)}};
}

/// One row per metric with the columns N, mean, SE, CI-L, CI-U, Median, SD, Variance, IQR.
inline auto summary_table_csv(const QualityReport& report) -> std::string {
    std::ostringstream out;
    out.precision(6);
    out << "metric,N,mean,SE,CI-L,CI-U,Median,SD,Variance,IQR\n";
    auto opt = [&](const std::optional<double>& v) {
        if (v) out << *v;
    };
    for (const auto& [name, s] : report.summary) {
        out << name << ',' << s.n << ',' << s.mean << ',';
        opt(s.se);
        out << ',';
        opt(s.ci_low);
        out << ',';
        opt(s.ci_high);
        out << ',' << s.median << ',';
        opt(s.sd);
        out << ',';
        opt(s.variance);
        out << ',' << s.iqr << '\n';
    }
    return out.str();
}

}  // namespace traceforge

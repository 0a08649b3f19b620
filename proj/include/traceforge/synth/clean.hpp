#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/quality.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace traceforge::synth {

/// Normalizes raw model output to event lines: drops fences and prose (anything whose
/// first token is not `event`), collapses whitespace, lower-cases the keyword and
/// upper-cases the event type token. Idempotent.
inline auto clean(std::string_view raw) -> std::string {
    std::string out;
    for (auto line : traceforge::detail::split_lines(raw)) {
        auto tokens = traceforge::detail::split_whitespace(line);
        if (tokens.empty()) continue;
        std::string keyword(tokens[0]);
        std::transform(keyword.begin(), keyword.end(), keyword.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (keyword != "event") continue;
        out += keyword;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            std::string token(tokens[i]);
            if (i == 3) {
                std::transform(token.begin(), token.end(), token.begin(),
                               [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            }
            out.append(" ").append(token);
        }
        out.push_back('\n');
    }
    return out;
}

inline constexpr double kDefaultGateThreshold = 0.99;

struct GateResult {
    bool accepted{false};
    double correctness{0.0};
    std::optional<Trace> trace;  ///< Present iff accepted.
};

struct GateOptions {
    double threshold{kDefaultGateThreshold};
    std::string trace_id{"synthetic-1"};
    std::string model_id{};
    std::string generator_id{"unknown"};
};

/// Admits cleaned text whose correctness reaches the threshold and that yields at least
/// one event. The admitted trace carries synthetic origin.
inline auto quality_gate(std::string_view cleaned, const GateOptions& options = {}) -> GateResult {
    if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
        throw Error(Errc::invalid_config, "gate threshold must lie in (0, 1]");
    }
    GateResult result;
    result.correctness = correctness(cleaned);
    if (result.correctness < options.threshold) return result;
    LineParseOptions parse;
    parse.lenient = true;
    parse.trace_id = options.trace_id;
    parse.model_id = options.model_id;
    parse.source = options.trace_id;
    parse.origin = Origin::synthetic(options.generator_id);
    try {
        result.trace = parse_event_lines(cleaned, parse).first;
    } catch (const Error& e) {
        if (e.code() != Errc::empty_trace) throw;
        return result;
    }
    result.accepted = true;
    return result;
}

}  // namespace traceforge::synth

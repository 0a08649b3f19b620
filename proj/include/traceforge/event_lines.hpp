#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event.hpp>
#include <traceforge/trace.hpp>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace traceforge {

struct RejectedLine {
    std::size_t line_number;  ///< 1-based
    std::string reason;

    auto operator==(const RejectedLine&) const -> bool = default;
};

struct ParseReport {
    std::size_t accepted_events{0};
    std::vector<RejectedLine> rejected_lines;
    std::string source;
};

namespace detail {

inline auto split_whitespace(std::string_view line) -> std::vector<std::string_view> {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

inline auto is_blank(std::string_view line) -> bool {
    for (char c : line) {
        if (!is_space(c)) return false;
    }
    return true;
}

/// Splits on '\n' and drops a trailing '\r' from each line. A final newline does not
/// produce an extra empty line.
inline auto split_lines(std::string_view text) -> std::vector<std::string_view> {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

}  // namespace detail

struct LineMatch {
    std::optional<ModelingEvent> event;
    std::string reason;  ///< Why the line did not match; empty on success.
};

/// Matches one line against `event <class> <feature> <TYPE>`.
inline auto match_event_line(std::string_view line) -> LineMatch {
    auto tokens = detail::split_whitespace(line);
    if (tokens.size() != 4) {
        return {std::nullopt, "expected 4 tokens, found " + std::to_string(tokens.size())};
    }
    if (tokens[0] != "event") return {std::nullopt, "line does not start with 'event'"};
    auto type = parse_event_type(tokens[3]);
    if (!type) return {std::nullopt, "unknown event type '" + std::string(tokens[3]) + "'"};
    return {ModelingEvent(std::string(tokens[1]), std::string(tokens[2]), *type, std::nullopt, std::string(line)),
            {}};
}

inline auto is_valid_event_line(std::string_view line) -> bool {
    return match_event_line(line).event.has_value();
}

struct LineParseOptions {
    bool lenient{false};
    std::string trace_id{"trace-1"};
    std::string model_id{};  ///< Defaults to trace_id when empty.
    std::string source{"<stream>"};
    Origin origin{};
};

/// Parses event-line text into a single trace. Blank lines are skipped. Strict mode
/// throws MalformedLine on the first non-matching line; lenient mode records and skips it.
inline auto parse_event_lines(std::string_view text, const LineParseOptions& options = {})
    -> std::pair<Trace, ParseReport> {
    Trace trace;
    trace.id = options.trace_id;
    trace.model_id = options.model_id.empty() ? options.trace_id : options.model_id;
    trace.origin = options.origin;
    ParseReport report;
    report.source = options.source;

    auto lines = detail::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = lines[i];
        if (detail::is_blank(line)) continue;
        auto match = match_event_line(line);
        if (match.event) {
            trace.events.push_back(std::move(*match.event));
            ++report.accepted_events;
        } else if (options.lenient) {
            report.rejected_lines.push_back({i + 1, std::move(match.reason)});
        } else {
            throw Error(Errc::malformed_line, "line " + std::to_string(i + 1) + ": " + match.reason, i + 1);
        }
    }
    if (trace.events.empty()) throw Error(Errc::empty_trace, "no events parsed from " + options.source);
    return {std::move(trace), std::move(report)};
}

/// One canonical line per event, each newline-terminated.
inline auto render_event_lines(const Trace& trace) -> std::string {
    std::string out;
    for (const auto& event : trace.events) {
        out.append(event.render()).push_back('\n');
    }
    return out;
}

}  // namespace traceforge

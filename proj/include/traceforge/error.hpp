#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace traceforge {

/// Failure categories raised across the toolkit.
enum class Errc : std::uint8_t {
    malformed_line,
    empty_trace,
    xml_error,
    missing_attribute,
    duplicate_trace_id,
    invalid_trace,
    invalid_schema,
    invalid_q,
    degenerate_reference,
    unpaired_trace,
    empty_sample,
    degenerate_sample,
    too_few_groups,
    transport_error,
    auth_error,
    timeout_error,
    incompatible_metamodels,
    insufficient_traces,
    empty_training_set,
    empty_context,
    empty_index,
    too_few_traces,
    no_scorable_traces,
    invalid_config,
    io_error,
    format_error,
};

constexpr auto to_string_view(Errc code) noexcept -> std::string_view {
    switch (code) {
        case Errc::malformed_line:          return "MalformedLine";
        case Errc::empty_trace:             return "EmptyTrace";
        case Errc::xml_error:               return "XmlError";
        case Errc::missing_attribute:       return "MissingAttribute";
        case Errc::duplicate_trace_id:      return "DuplicateTraceId";
        case Errc::invalid_trace:           return "InvalidTrace";
        case Errc::invalid_schema:          return "InvalidSchema";
        case Errc::invalid_q:               return "InvalidQ";
        case Errc::degenerate_reference:    return "DegenerateReference";
        case Errc::unpaired_trace:          return "UnpairedTrace";
        case Errc::empty_sample:            return "EmptySample";
        case Errc::degenerate_sample:       return "DegenerateSample";
        case Errc::too_few_groups:          return "TooFewGroups";
        case Errc::transport_error:         return "TransportError";
        case Errc::auth_error:              return "AuthError";
        case Errc::timeout_error:           return "TimeoutError";
        case Errc::incompatible_metamodels: return "IncompatibleMetamodels";
        case Errc::insufficient_traces:     return "InsufficientTraces";
        case Errc::empty_training_set:      return "EmptyTrainingSet";
        case Errc::empty_context:           return "EmptyContext";
        case Errc::empty_index:             return "EmptyIndex";
        case Errc::too_few_traces:          return "TooFewTraces";
        case Errc::no_scorable_traces:      return "NoScorableTraces";
        case Errc::invalid_config:          return "InvalidConfig";
        case Errc::io_error:                return "IoError";
        case Errc::format_error:            return "FormatError";
    }
    return "Unknown";
}

/// Exception carrying an error category and, where meaningful, a 1-based
/// location (line number or event ordinal).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::size_t location = 0)
        : std::runtime_error(std::string(to_string_view(code)) + ": " + message),
          code_(code),
          location_(location) {}

    [[nodiscard]] auto code() const noexcept -> Errc { return code_; }
    [[nodiscard]] auto location() const noexcept -> std::size_t { return location_; }

private:
    Errc code_;
    std::size_t location_;
};

}  // namespace traceforge

#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace traceforge {

/// Provenance of a trace: recorded from a human, emitted by a generator, or mixed.
struct Origin {
    enum class Kind : std::uint8_t { human, synthetic, mixed };

    Kind kind{Kind::human};
    std::string generator_id{};  ///< Set only for synthetic traces.

    static auto human() -> Origin { return {Kind::human, {}}; }
    static auto synthetic(std::string generator) -> Origin { return {Kind::synthetic, std::move(generator)}; }
    static auto mixed() -> Origin { return {Kind::mixed, {}}; }

    [[nodiscard]] auto is_synthetic() const noexcept -> bool { return kind == Kind::synthetic; }

    auto operator==(const Origin&) const -> bool = default;

    /// `human`, `mixed` or `synthetic:<generator>`.
    [[nodiscard]] auto to_string() const -> std::string {
        switch (kind) {
            case Kind::human: return "human";
            case Kind::mixed: return "mixed";
            case Kind::synthetic: return "synthetic:" + generator_id;
        }
        return "human";
    }

    static auto parse(std::string_view text) -> std::optional<Origin> {
        if (text == "human") return human();
        if (text == "mixed") return mixed();
        constexpr std::string_view prefix = "synthetic";
        if (text.substr(0, prefix.size()) == prefix) {
            auto rest = text.substr(prefix.size());
            if (rest.empty()) return synthetic({});
            if (rest.front() == ':') return synthetic(std::string(rest.substr(1)));
        }
        return std::nullopt;
    }
};

struct Trace {
    std::string id;
    std::string model_id;
    std::vector<ModelingEvent> events;
    Origin origin{};

    auto operator==(const Trace&) const -> bool = default;

    [[nodiscard]] auto has_monotone_timestamps() const -> bool {
        std::optional<Timestamp> last;
        for (const auto& event : events) {
            if (!event.timestamp) return true;  // only enforced when every event is stamped
            if (last && *event.timestamp < *last) return false;
            last = event.timestamp;
        }
        return true;
    }

    /// Throws InvalidTrace when the trace is empty or its timestamps run backwards.
    void validate() const {
        if (events.empty()) throw Error(Errc::invalid_trace, "trace '" + id + "' has no events");
        if (!has_monotone_timestamps()) {
            throw Error(Errc::invalid_trace, "trace '" + id + "' has decreasing timestamps");
        }
    }
};

struct TraceSet {
    std::string metamodel_id;
    std::vector<Trace> traces;

    auto operator==(const TraceSet&) const -> bool = default;

    [[nodiscard]] auto find(std::string_view id) const -> const Trace* {
        for (const auto& trace : traces) {
            if (trace.id == id) return &trace;
        }
        return nullptr;
    }

    [[nodiscard]] auto event_count() const -> std::size_t {
        std::size_t total = 0;
        for (const auto& trace : traces) total += trace.events.size();
        return total;
    }

    void validate() const {
        std::unordered_set<std::string> seen;
        for (const auto& trace : traces) {
            if (!seen.insert(trace.id).second) {
                throw Error(Errc::duplicate_trace_id, "trace id '" + trace.id + "' is not unique");
            }
            trace.validate();
        }
    }
};

inline auto synthetic_fraction(const TraceSet& set) -> double {
    if (set.traces.empty()) return 0.0;
    std::size_t synthetic = 0;
    for (const auto& trace : set.traces) synthetic += trace.origin.is_synthetic() ? 1 : 0;
    return static_cast<double>(synthetic) / static_cast<double>(set.traces.size());
}

/// A named trace set with the fraction of synthetic-origin traces it contains.
struct Dataset {
    std::string name;
    TraceSet trace_set;
    double synthetic_ratio{0.0};
    std::optional<std::uint64_t> seed{};

    /// Builds a dataset whose ratio is recomputed from trace origins.
    static auto from_traces(std::string name, TraceSet set, std::optional<std::uint64_t> seed = std::nullopt)
        -> Dataset {
        double ratio = synthetic_fraction(set);
        return Dataset{std::move(name), std::move(set), ratio, seed};
    }

    [[nodiscard]] auto ratio_consistent() const -> bool {
        if (trace_set.traces.empty()) return synthetic_ratio == 0.0;
        double tolerance = 1.0 / static_cast<double>(trace_set.traces.size());
        return std::abs(synthetic_fraction(trace_set) - synthetic_ratio) <= tolerance;
    }
};

}  // namespace traceforge

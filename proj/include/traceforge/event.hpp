#pragma once

#include <traceforge/error.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace traceforge {

/// Notification kinds a modeling editor can emit for a feature change.
enum class EventType : std::uint8_t {
    add,
    remove,
    set,
    unset,
    add_many,
    remove_many,
    move,
};

inline constexpr std::array<EventType, 7> kAllEventTypes = {
    EventType::add,   EventType::remove,      EventType::set,  EventType::unset,
    EventType::add_many, EventType::remove_many, EventType::move,
};

constexpr auto to_string_view(EventType type) noexcept -> std::string_view {
    switch (type) {
        case EventType::add:         return "ADD";
        case EventType::remove:      return "REMOVE";
        case EventType::set:         return "SET";
        case EventType::unset:       return "UNSET";
        case EventType::add_many:    return "ADD_MANY";
        case EventType::remove_many: return "REMOVE_MANY";
        case EventType::move:        return "MOVE";
    }
    return "UNKNOWN";
}

/// Case-insensitive parse of an event type name.
inline auto parse_event_type(std::string_view text) noexcept -> std::optional<EventType> {
    for (auto type : kAllEventTypes) {
        auto name = to_string_view(type);
        if (name.size() != text.size()) continue;
        bool same = std::equal(name.begin(), name.end(), text.begin(), [](char a, char b) {
            return a == std::toupper(static_cast<unsigned char>(b));
        });
        if (same) return type;
    }
    return std::nullopt;
}

/// True for operations that introduce content: ADD, ADD_MANY and SET.
constexpr auto is_additive(EventType type) noexcept -> bool {
    return type == EventType::add || type == EventType::add_many || type == EventType::set;
}

inline auto is_space(char c) noexcept -> bool {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

/// Identifiers are non-empty and whitespace-free so the line grammar stays unambiguous.
inline auto is_valid_identifier(std::string_view name) noexcept -> bool {
    return !name.empty() && std::none_of(name.begin(), name.end(), is_space);
}

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses an ISO-8601 instant such as `2024-03-01T10:15:30.250+01:00`.
/// Fractional digits beyond milliseconds are truncated; a missing offset means UTC.
inline auto parse_timestamp(std::string_view text) -> std::optional<Timestamp> {
    using namespace std::chrono;
    auto digits = [&](std::size_t pos, std::size_t count) -> std::optional<int> {
        if (pos + count > text.size()) return std::nullopt;
        int value = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
        if (ec != std::errc{} || ptr != text.data() + pos + count) return std::nullopt;
        return value;
    };
    if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    auto y = digits(0, 4), mo = digits(5, 2), d = digits(8, 2);
    auto h = digits(11, 2), mi = digits(14, 2), s = digits(17, 2);
    if (!y || !mo || !d || !h || !mi || !s) return std::nullopt;
    year_month_day date{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!date.ok() || *h > 23 || *mi > 59 || *s > 60) return std::nullopt;

    std::size_t pos = 19;
    int millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int scale = 100;
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            millis += (text[pos] - '0') * scale;
            scale /= 10;
            ++pos;
        }
        if (pos == start) return std::nullopt;
    }
    minutes offset{0};
    if (pos < text.size()) {
        if (text[pos] == 'Z' || text[pos] == 'z') {
            ++pos;
        } else if (text[pos] == '+' || text[pos] == '-') {
            int sign = text[pos] == '-' ? -1 : 1;
            auto oh = digits(pos + 1, 2);
            auto om = digits(pos + 4, 2);
            if (!oh || !om || pos + 3 >= text.size() || text[pos + 3] != ':') return std::nullopt;
            offset = minutes{sign * (*oh * 60 + *om)};
            pos += 6;
        } else {
            return std::nullopt;
        }
    }
    if (pos != text.size()) return std::nullopt;
    auto tp = sys_days{date} + hours{*h} + minutes{*mi} + seconds{*s} + milliseconds{millis} - offset;
    return time_point_cast<milliseconds>(tp);
}

/// Renders a UTC instant as `YYYY-MM-DDTHH:MM:SS.mmm+00:00`.
inline auto format_timestamp(Timestamp ts) -> std::string {
    using namespace std::chrono;
    auto day_point = floor<days>(ts);
    year_month_day date{day_point};
    auto since_midnight = ts - day_point;
    auto h = duration_cast<hours>(since_midnight);
    auto mi = duration_cast<minutes>(since_midnight - h);
    auto s = duration_cast<seconds>(since_midnight - h - mi);
    auto ms = since_midnight - h - mi - s;
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d.%03d+00:00",
                  static_cast<int>(date.year()), static_cast<unsigned>(date.month()),
                  static_cast<unsigned>(date.day()), static_cast<int>(h.count()),
                  static_cast<int>(mi.count()), static_cast<int>(s.count()),
                  static_cast<int>(ms.count()));
    return buf.data();
}

/// The (class, feature, event type) identity of an operation, ordered lexicographically.
struct OperationKey {
    std::string class_name;
    std::string feature_name;
    EventType event_type{EventType::add};

    auto operator==(const OperationKey&) const -> bool = default;
    auto operator<=>(const OperationKey& other) const -> std::strong_ordering {
        if (auto c = class_name <=> other.class_name; c != 0) return c;
        if (auto c = feature_name <=> other.feature_name; c != 0) return c;
        return to_string_view(event_type) <=> to_string_view(other.event_type);
    }

    /// Composite token `class.feature.TYPE`.
    [[nodiscard]] auto token() const -> std::string {
        std::string out;
        out.reserve(class_name.size() + feature_name.size() + 12);
        out.append(class_name).append(".").append(feature_name).append(".").append(to_string_view(event_type));
        return out;
    }
};

/// One recorded modeling operation.
struct ModelingEvent {
    std::string class_name;
    std::string feature_name;
    EventType event_type{EventType::add};
    std::optional<Timestamp> timestamp{};
    std::string raw{};  ///< Source line or element as read; not part of identity.

    ModelingEvent() = default;
    ModelingEvent(std::string cls, std::string feature, EventType type,
                  std::optional<Timestamp> ts = std::nullopt, std::string raw_text = {})
        : class_name(std::move(cls)),
          feature_name(std::move(feature)),
          event_type(type),
          timestamp(ts),
          raw(std::move(raw_text)) {
        if (!is_valid_identifier(class_name) || !is_valid_identifier(feature_name)) {
            throw Error(Errc::invalid_trace, "event identifiers must be non-empty and whitespace-free");
        }
    }

    auto operator==(const ModelingEvent& other) const -> bool {
        return class_name == other.class_name && feature_name == other.feature_name &&
               event_type == other.event_type && timestamp == other.timestamp;
    }

    [[nodiscard]] auto key() const -> OperationKey { return {class_name, feature_name, event_type}; }
    [[nodiscard]] auto token() const -> std::string { return key().token(); }

    /// Canonical `event <class> <feature> <TYPE>` rendering.
    [[nodiscard]] auto render() const -> std::string {
        std::string out = "event ";
        out.append(class_name).append(" ").append(feature_name).append(" ").append(to_string_view(event_type));
        return out;
    }
};

}  // namespace traceforge

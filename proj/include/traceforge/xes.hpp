#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/trace.hpp>

#include <expat.h>
#include <json.hpp>

#include <charconv>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace traceforge {

/// Attribute keys used to read and write XES payloads. Foreign recorder exports can be
/// consumed by remapping these.
struct XesKeyMap {
    std::string class_key{"class"};
    std::string feature_key{"featureName"};
    std::string event_type_key{"eventType"};
    std::string timestamp_key{"time:timestamp"};
    std::string name_key{"concept:name"};
    std::string model_key{"traceforge:model"};
    std::string origin_key{"traceforge:origin"};
    std::string metamodel_key{"traceforge:metamodel"};
    std::string ratio_key{"traceforge:syntheticRatio"};
    std::string seed_key{"traceforge:seed"};
};

inline void from_json(const nlohmann::json& j, XesKeyMap& keys) {
    auto read = [&](const char* name, std::string& field) {
        if (j.contains(name)) field = j.at(name).get<std::string>();
    };
    read("class", keys.class_key);
    read("featureName", keys.feature_key);
    read("eventType", keys.event_type_key);
    read("timestamp", keys.timestamp_key);
    read("name", keys.name_key);
    read("model", keys.model_key);
    read("origin", keys.origin_key);
    read("metamodel", keys.metamodel_key);
}

struct XesParseOptions {
    bool lenient{false};
    XesKeyMap keys{};
    std::string source{"<xes>"};
    std::optional<Origin> origin_override{};
};

/// Log-level attributes that are not part of TraceSet itself.
struct XesLogInfo {
    std::optional<std::string> name;
    std::optional<double> synthetic_ratio;
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline auto is_attribute_element(std::string_view name) -> bool {
    return name == "string" || name == "date" || name == "int" || name == "float" || name == "boolean" ||
           name == "id" || name == "list" || name == "container";
}

class XesReader {
public:
    explicit XesReader(const XesParseOptions& options) : options_(options) { report_.source = options.source; }

    auto run(std::string_view bytes) -> std::tuple<TraceSet, ParseReport, XesLogInfo> {
        std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
            XML_ParserCreate("UTF-8"), &XML_ParserFree);
        if (!parser) throw Error(Errc::xml_error, "cannot allocate XML parser");
        parser_ = parser.get();
        XML_SetUserData(parser_, this);
        XML_SetElementHandler(parser_, &XesReader::on_start, &XesReader::on_end);
        constexpr std::size_t chunk = 1 << 20;
        std::size_t offset = 0;
        do {
            auto len = std::min(chunk, bytes.size() - offset);
            bool final = offset + len == bytes.size();
            if (XML_Parse(parser_, bytes.data() + offset, static_cast<int>(len), final ? 1 : 0) == XML_STATUS_ERROR) {
                if (pending_) std::rethrow_exception(pending_);
                auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_));
                throw Error(Errc::xml_error,
                            options_.source + ":" + std::to_string(line) + ": " +
                                XML_ErrorString(XML_GetErrorCode(parser_)),
                            line);
            }
            offset += len;
        } while (offset < bytes.size());
        if (bytes.empty()) throw Error(Errc::xml_error, options_.source + ": empty document");
        return {std::move(set_), std::move(report_), std::move(info_)};
    }

private:
    enum class Scope { root, log, trace, event, ignored };

    static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
        auto* self = static_cast<XesReader*>(data);
        if (self->pending_) return;
        try {
            self->start(name, attrs);
        } catch (...) {
            self->pending_ = std::current_exception();
            XML_StopParser(self->parser_, XML_FALSE);
        }
    }

    static void on_end(void* data, const XML_Char* name) {
        auto* self = static_cast<XesReader*>(data);
        if (self->pending_) return;
        try {
            self->end(name);
        } catch (...) {
            self->pending_ = std::current_exception();
            XML_StopParser(self->parser_, XML_FALSE);
        }
    }

    auto line() const -> std::size_t { return static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_)); }

    static auto local_name(std::string_view qname) -> std::string_view {
        auto colon = qname.rfind(':');
        return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
    }

    void start(std::string_view qname, const XML_Char** attrs) {
        auto name = local_name(qname);
        Scope parent = scopes_.empty() ? Scope::root : scopes_.back();
        Scope scope = Scope::ignored;
        if (parent == Scope::root) {
            if (name == "log") {
                scope = Scope::log;
            } else if (options_.lenient) {
                reject(line(), "root element is <" + std::string(name) + ">, expected <log>");
            }
        } else if (parent == Scope::log && name == "trace") {
            scope = Scope::trace;
            current_trace_ = Trace{};
            trace_attrs_.clear();
            ++trace_ordinal_;
        } else if (parent == Scope::trace && name == "event") {
            scope = Scope::event;
            event_attrs_.clear();
            ++event_ordinal_;
            event_line_ = line();
        } else if (is_attribute_element(name) && parent != Scope::ignored && parent != Scope::root) {
            std::optional<std::string> key, value;
            for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
                std::string_view attr = attrs[i];
                if (attr == "key") key = attrs[i + 1];
                if (attr == "value") value = attrs[i + 1];
            }
            if (key && value) {
                auto& target = parent == Scope::event ? event_attrs_ : parent == Scope::trace ? trace_attrs_ : log_attrs_;
                target[*key] = *value;
            }
        }
        scopes_.push_back(scope);
    }

    void end(std::string_view /*qname*/) {
        Scope scope = scopes_.back();
        scopes_.pop_back();
        if (scope == Scope::event) {
            finish_event();
        } else if (scope == Scope::trace) {
            finish_trace();
        } else if (scope == Scope::log) {
            finish_log();
        }
    }

    void reject(std::size_t at, std::string reason) {
        if (!report_.rejected_lines.empty() && report_.rejected_lines.back().line_number >= at) {
            report_.rejected_lines.back().reason += "; " + reason;
            return;
        }
        report_.rejected_lines.push_back({at, std::move(reason)});
    }

    void finish_event() {
        const auto& keys = options_.keys;
        for (const auto* key : {&keys.class_key, &keys.feature_key, &keys.event_type_key}) {
            if (!event_attrs_.contains(*key)) {
                if (!options_.lenient) {
                    throw Error(Errc::missing_attribute,
                                "event " + std::to_string(event_ordinal_) + " lacks key '" + *key + "'",
                                event_ordinal_);
                }
                reject(event_line_, "event " + std::to_string(event_ordinal_) + ": missing '" + *key + "'");
                return;
            }
        }
        auto fail = [&](const std::string& reason) {
            if (!options_.lenient) throw Error(Errc::malformed_line, reason, event_line_);
            reject(event_line_, reason);
        };
        const auto& cls = event_attrs_.at(keys.class_key);
        const auto& feature = event_attrs_.at(keys.feature_key);
        auto type = parse_event_type(event_attrs_.at(keys.event_type_key));
        if (!type) return fail("event " + std::to_string(event_ordinal_) + ": unknown event type '" +
                               event_attrs_.at(keys.event_type_key) + "'");
        if (!is_valid_identifier(cls) || !is_valid_identifier(feature)) {
            return fail("event " + std::to_string(event_ordinal_) + ": invalid identifier");
        }
        std::optional<Timestamp> ts;
        if (auto it = event_attrs_.find(keys.timestamp_key); it != event_attrs_.end()) {
            ts = parse_timestamp(it->second);
            if (!ts) return fail("event " + std::to_string(event_ordinal_) + ": bad timestamp '" + it->second + "'");
        }
        ModelingEvent event(cls, feature, *type, ts);
        event.raw = event.render();
        current_trace_.events.push_back(std::move(event));
        ++report_.accepted_events;
    }

    void finish_trace() {
        const auto& keys = options_.keys;
        auto& trace = current_trace_;
        auto name = trace_attrs_.find(keys.name_key);
        trace.id = name != trace_attrs_.end() ? name->second : "trace-" + std::to_string(trace_ordinal_);
        auto model = trace_attrs_.find(keys.model_key);
        trace.model_id = model != trace_attrs_.end() ? model->second : trace.id;
        if (auto origin = trace_attrs_.find(keys.origin_key); origin != trace_attrs_.end()) {
            if (auto parsed = Origin::parse(origin->second)) trace.origin = *parsed;
        }
        if (options_.origin_override) trace.origin = *options_.origin_override;

        auto drop = [&](Errc code, const std::string& reason) {
            report_.accepted_events -= trace.events.size();
            if (!options_.lenient) throw Error(code, reason, line());
            reject(line(), reason);
        };
        if (trace.events.empty()) return drop(Errc::empty_trace, "trace '" + trace.id + "' has no events");
        if (!trace.has_monotone_timestamps()) {
            return drop(Errc::invalid_trace, "trace '" + trace.id + "' has decreasing timestamps");
        }
        if (!seen_ids_.insert(trace.id).second) {
            return drop(Errc::duplicate_trace_id, "duplicate trace id '" + trace.id + "'");
        }
        set_.traces.push_back(std::move(trace));
    }

    void finish_log() {
        const auto& keys = options_.keys;
        if (auto it = log_attrs_.find(keys.metamodel_key); it != log_attrs_.end()) set_.metamodel_id = it->second;
        if (auto it = log_attrs_.find(keys.name_key); it != log_attrs_.end()) info_.name = it->second;
        if (auto it = log_attrs_.find(keys.ratio_key); it != log_attrs_.end()) {
            try {
                info_.synthetic_ratio = std::stod(it->second);
            } catch (const std::exception&) {
                // left unset; the ratio is recomputable from trace origins
            }
        }
        if (auto it = log_attrs_.find(keys.seed_key); it != log_attrs_.end()) {
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), seed);
            if (ec == std::errc{} && ptr == it->second.data() + it->second.size()) info_.seed = seed;
        }
    }

    const XesParseOptions& options_;
    XML_Parser parser_{nullptr};
    std::exception_ptr pending_{};
    std::vector<Scope> scopes_;
    std::map<std::string, std::string> log_attrs_, trace_attrs_, event_attrs_;
    Trace current_trace_;
    std::size_t trace_ordinal_{0};
    std::size_t event_ordinal_{0};
    std::size_t event_line_{0};
    std::unordered_set<std::string> seen_ids_;
    TraceSet set_;
    ParseReport report_;
    XesLogInfo info_;
};

inline void append_escaped(std::string& out, std::string_view text) {
    for (char c : text) {
        switch (c) {
            case '&':  out += "&amp;"; break;
            case '<':  out += "&lt;"; break;
            case '>':  out += "&gt;"; break;
            case '"':  out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            case '\t': out += "&#9;"; break;
            case '\n': out += "&#10;"; break;
            case '\r': out += "&#13;"; break;
            default:   out += c;
        }
    }
}

inline void append_attribute(std::string& out, std::string_view indent, std::string_view type,
                             std::string_view key, std::string_view value) {
    out.append(indent).append("<").append(type).append(" key=\"");
    append_escaped(out, key);
    out += "\" value=\"";
    append_escaped(out, value);
    out += "\"/>\n";
}

}  // namespace detail

/// Reads a full XES document. Returns the traces plus any log-level dataset attributes.
inline auto parse_xes_log(std::string_view bytes, const XesParseOptions& options = {})
    -> std::tuple<TraceSet, ParseReport, XesLogInfo> {
    detail::XesReader reader(options);
    return reader.run(bytes);
}

inline auto parse_xes(std::string_view bytes, const XesParseOptions& options = {}) -> std::pair<TraceSet, ParseReport> {
    auto [set, report, info] = parse_xes_log(bytes, options);
    return {std::move(set), std::move(report)};
}

/// Serializes a trace set, optionally with dataset-level attributes on the log element.
inline auto write_xes(const TraceSet& set, const XesLogInfo& info = {}, const XesKeyMap& keys = {}) -> std::string {
    std::string out;
    out.reserve(256 + set.event_count() * 220);
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<log xes.version=\"1.0\" xes.features=\"nested-attributes\" xmlns=\"http://www.xes-standard.org/\">\n";
    out += "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
    out += "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
    if (info.name) detail::append_attribute(out, "  ", "string", keys.name_key, *info.name);
    detail::append_attribute(out, "  ", "string", keys.metamodel_key, set.metamodel_id);
    if (info.synthetic_ratio) {
        std::array<char, 32> buf{};
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), *info.synthetic_ratio);
        detail::append_attribute(out, "  ", "float", keys.ratio_key, std::string_view(buf.data(), ptr - buf.data()));
    }
    if (info.seed) detail::append_attribute(out, "  ", "int", keys.seed_key, std::to_string(*info.seed));
    for (const auto& trace : set.traces) {
        out += "  <trace>\n";
        detail::append_attribute(out, "    ", "string", keys.name_key, trace.id);
        detail::append_attribute(out, "    ", "string", keys.model_key, trace.model_id);
        detail::append_attribute(out, "    ", "string", keys.origin_key, trace.origin.to_string());
        for (const auto& event : trace.events) {
            out += "    <event>\n";
            detail::append_attribute(out, "      ", "string", keys.class_key, event.class_name);
            detail::append_attribute(out, "      ", "string", keys.feature_key, event.feature_name);
            detail::append_attribute(out, "      ", "string", keys.event_type_key, to_string_view(event.event_type));
            if (event.timestamp) {
                detail::append_attribute(out, "      ", "date", keys.timestamp_key, format_timestamp(*event.timestamp));
            }
            out += "    </event>\n";
        }
        out += "  </trace>\n";
    }
    out += "</log>\n";
    return out;
}

inline auto write_dataset_xes(const Dataset& dataset, const XesKeyMap& keys = {}) -> std::string {
    return write_xes(dataset.trace_set, XesLogInfo{dataset.name, dataset.synthetic_ratio, dataset.seed}, keys);
}

/// Reads a dataset; the synthetic ratio is always recomputed from trace origins.
inline auto parse_dataset_xes(std::string_view bytes, const XesParseOptions& options = {})
    -> std::pair<Dataset, ParseReport> {
    auto [set, report, info] = parse_xes_log(bytes, options);
    auto name = info.name.value_or(options.source);
    auto dataset = Dataset::from_traces(std::move(name), std::move(set), info.seed);
    return {std::move(dataset), std::move(report)};
}

}  // namespace traceforge

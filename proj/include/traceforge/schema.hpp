#pragma once

#include <traceforge/error.hpp>
#include <traceforge/event.hpp>

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace traceforge {

enum class FeatureKind : std::uint8_t { attribute, reference };

constexpr auto to_string_view(FeatureKind kind) noexcept -> std::string_view {
    return kind == FeatureKind::attribute ? "attribute" : "reference";
}

struct ClassDef {
    std::string name;
    std::map<std::string, FeatureKind> features;

    auto operator==(const ClassDef&) const -> bool = default;
};

/// Classes of a metamodel and the kind of each of their features.
struct MetamodelSchema {
    std::string id;
    std::map<std::string, ClassDef> classes;

    auto operator==(const MetamodelSchema&) const -> bool = default;

    [[nodiscard]] auto empty() const -> bool {
        for (const auto& [name, cls] : classes) {
            if (!cls.features.empty()) return false;
        }
        return true;
    }

    auto add(std::string class_name, std::string feature_name, FeatureKind kind) -> MetamodelSchema& {
        auto& cls = classes[class_name];
        cls.name = class_name;
        cls.features[std::move(feature_name)] = kind;
        return *this;
    }
};

struct SchemaLookup {
    enum class Status : std::uint8_t { valid, unknown_class, unknown_feature };

    Status status{Status::unknown_class};
    std::optional<FeatureKind> kind{};  ///< Present iff status is valid.

    [[nodiscard]] auto valid() const noexcept -> bool { return status == Status::valid; }
    auto operator==(const SchemaLookup&) const -> bool = default;
};

inline auto lookup_feature(std::string_view class_name, std::string_view feature_name,
                           const MetamodelSchema& schema) -> SchemaLookup {
    auto cls = schema.classes.find(std::string(class_name));
    if (cls == schema.classes.end()) return {SchemaLookup::Status::unknown_class, std::nullopt};
    auto feature = cls->second.features.find(std::string(feature_name));
    if (feature == cls->second.features.end()) return {SchemaLookup::Status::unknown_feature, std::nullopt};
    return {SchemaLookup::Status::valid, feature->second};
}

inline auto validate_event_against_schema(const ModelingEvent& event, const MetamodelSchema& schema)
    -> SchemaLookup {
    if (schema.empty()) throw Error(Errc::invalid_schema, "schema '" + schema.id + "' has no features");
    return lookup_feature(event.class_name, event.feature_name, schema);
}

enum class OperationKind : std::uint8_t { class_op, attribute_op, unknown };

constexpr auto to_string_view(OperationKind kind) noexcept -> std::string_view {
    switch (kind) {
        case OperationKind::class_op:     return "class";
        case OperationKind::attribute_op: return "attribute";
        case OperationKind::unknown:      return "unknown";
    }
    return "unknown";
}

/// Reference features drive class operations, attribute features drive attribute operations.
inline auto classify_operation(std::string_view class_name, std::string_view feature_name,
                               const MetamodelSchema& schema) -> OperationKind {
    auto found = lookup_feature(class_name, feature_name, schema);
    if (!found.valid()) return OperationKind::unknown;
    return *found.kind == FeatureKind::attribute ? OperationKind::attribute_op : OperationKind::class_op;
}

inline auto classify_operation(const ModelingEvent& event, const MetamodelSchema& schema) -> OperationKind {
    return classify_operation(event.class_name, event.feature_name, schema);
}

// JSON form: {"id": "...", "classes": {"Process": {"name": "attribute", "ports": "reference"}}}

inline void to_json(nlohmann::json& j, const MetamodelSchema& schema) {
    nlohmann::json classes = nlohmann::json::object();
    for (const auto& [name, cls] : schema.classes) {
        nlohmann::json features = nlohmann::json::object();
        for (const auto& [feature, kind] : cls.features) features[feature] = to_string_view(kind);
        classes[name] = std::move(features);
    }
    j = nlohmann::json{{"id", schema.id}, {"classes", std::move(classes)}};
}

inline void from_json(const nlohmann::json& j, MetamodelSchema& schema) {
    schema = MetamodelSchema{};
    schema.id = j.at("id").get<std::string>();
    for (const auto& [class_name, features] : j.at("classes").items()) {
        if (!is_valid_identifier(class_name)) {
            throw Error(Errc::invalid_schema, "invalid class name '" + class_name + "'");
        }
        auto& cls = schema.classes[class_name];
        cls.name = class_name;
        for (const auto& [feature, kind] : features.items()) {
            if (!is_valid_identifier(feature)) {
                throw Error(Errc::invalid_schema, "invalid feature name '" + feature + "'");
            }
            auto text = kind.get<std::string>();
            if (text == "attribute") {
                cls.features[feature] = FeatureKind::attribute;
            } else if (text == "reference") {
                cls.features[feature] = FeatureKind::reference;
            } else {
                throw Error(Errc::invalid_schema, "feature kind must be attribute or reference, got '" + text + "'");
            }
        }
    }
    if (schema.empty()) throw Error(Errc::invalid_schema, "schema '" + schema.id + "' has no features");
}

}  // namespace traceforge

#pragma once

#include <traceforge/error.hpp>
#include <traceforge/quality.hpp>

#include <json.hpp>

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace traceforge::synth {

/// Natural-language description of one model, used as prompt input.
struct ModelSummary {
    std::string model_id;
    std::string metamodel_id;
    std::string description;

    auto operator==(const ModelSummary&) const -> bool = default;
};

/// An input/output example: a model and the event-line trace that builds it.
struct Demonstration {
    ModelSummary model;
    std::string trace_text;
};

inline constexpr std::string_view kDefaultInstructions =
    "You emulate a human designer working in a graphical modeling editor. For each MODEL "
    "description, list the modeling operations the designer performs, in order, to build that "
    "model. Use only the classes and features that appear in the examples.";

inline constexpr std::string_view kDefaultFormatNote =
    "Answer with one operation per line, exactly in the form: event <class> <featureName> <eventType>. "
    "<eventType> is one of ADD, REMOVE, SET, UNSET, ADD_MANY, REMOVE_MANY, MOVE. Write nothing else.";

inline constexpr std::string_view kDefaultTemplate = "{instructions}\n\n{demonstrations}{target}\n{format_note}\n";

struct PromptSpec {
    std::string task_instructions{kDefaultInstructions};
    std::vector<Demonstration> demonstrations;
    ModelSummary target;
    std::string output_format_note{kDefaultFormatNote};

    /// Throws InvalidConfig unless there is at least one grammar-clean demonstration and a
    /// described target.
    void validate() const {
        if (demonstrations.empty()) throw Error(Errc::invalid_config, "few-shot prompt needs at least one demonstration");
        if (target.description.empty()) throw Error(Errc::invalid_config, "target model description is empty");
        for (const auto& demo : demonstrations) {
            if (demo.model.description.empty()) {
                throw Error(Errc::invalid_config, "demonstration '" + demo.model.model_id + "' has no description");
            }
            if (correctness(demo.trace_text) != 1.0) {
                throw Error(Errc::invalid_config, "demonstration '" + demo.model.model_id + "' has malformed trace lines");
            }
        }
    }
};

namespace prompt_text {

inline auto with_newline(std::string text) -> std::string {
    if (!text.empty() && text.back() != '\n') text.push_back('\n');
    return text;
}

/// Single-pass replacement of {instructions}, {demonstrations}, {target}, {format_note}.
/// Inserted values are never rescanned; other braces are copied through.
inline auto fill_template(std::string_view tmpl, const std::array<std::pair<std::string_view, std::string>, 4>& values)
    -> std::string {
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            bool replaced = false;
            for (const auto& [name, value] : values) {
                if (tmpl.substr(i + 1, name.size()) == name && i + 1 + name.size() < tmpl.size() &&
                    tmpl[i + 1 + name.size()] == '}') {
                    out += value;
                    i += name.size() + 2;
                    replaced = true;
                    break;
                }
            }
            if (replaced) continue;
        }
        out.push_back(tmpl[i++]);
    }
    return out;
}

}  // namespace prompt_text

inline auto render_demonstrations(const std::vector<Demonstration>& demos) -> std::string {
    std::string out;
    for (const auto& demo : demos) {
        out += "MODEL: " + demo.model.description + "\nTRACE:\n" + prompt_text::with_newline(demo.trace_text) + "\n";
    }
    return out;
}

/// Renders the few-shot prompt: instructions, each demonstration as a MODEL/TRACE block,
/// the target MODEL with an open TRACE, then the output format note.
inline auto build_prompt(const PromptSpec& spec, std::string_view prompt_template = kDefaultTemplate) -> std::string {
    spec.validate();
    return prompt_text::fill_template(prompt_template,
                                 {{{"instructions", spec.task_instructions},
                                   {"demonstrations", render_demonstrations(spec.demonstrations)},
                                   {"target", "MODEL: " + spec.target.description + "\nTRACE:"},
                                   {"format_note", spec.output_format_note}}});
}

inline void to_json(nlohmann::json& j, const ModelSummary& m) {
    j = nlohmann::json{{"model_id", m.model_id}, {"metamodel_id", m.metamodel_id}, {"description", m.description}};
}

inline void from_json(const nlohmann::json& j, ModelSummary& m) {
    m.model_id = j.at("model_id").get<std::string>();
    m.metamodel_id = j.value("metamodel_id", std::string{});
    m.description = j.at("description").get<std::string>();
    if (m.description.empty()) throw Error(Errc::invalid_config, "model '" + m.model_id + "' has an empty description");
}

inline void to_json(nlohmann::json& j, const Demonstration& d) {
    j = nlohmann::json{{"model", d.model}, {"trace_text", d.trace_text}};
}

inline void from_json(const nlohmann::json& j, Demonstration& d) {
    d.model = j.at("model").get<ModelSummary>();
    d.trace_text = j.at("trace_text").get<std::string>();
}

}  // namespace traceforge::synth

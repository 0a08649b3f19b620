#pragma once

#include <traceforge/detail/parallel.hpp>
#include <traceforge/synth/clean.hpp>
#include <traceforge/synth/llm_client.hpp>
#include <traceforge/synth/prompt.hpp>
#include <traceforge/trace.hpp>

#include <json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace traceforge::synth {

/// Audit entry for one generation attempt.
struct GenerationRecord {
    std::string model_id;
    std::size_t attempt{0};
    PromptSpec prompt;
    std::string prompt_text;
    std::string raw_response;
    std::string cleaned_text;
    std::optional<Trace> cleaned_trace;
    double correctness{0.0};
    bool accepted{false};
    std::string generator_id;
    std::chrono::milliseconds elapsed{0};
    std::optional<std::string> error;  ///< Client failure, if the attempt never got a response.
};

struct SynthesisOptions {
    double gate_threshold{kDefaultGateThreshold};
    std::size_t shots{2};
    std::size_t retries{0};  ///< Extra attempts for a model whose output the gate rejects.
    std::size_t jobs{1};
    std::string prompt_template{kDefaultTemplate};
    std::string instructions{kDefaultInstructions};
    std::string format_note{kDefaultFormatNote};
    RetryPolicy transport_retry{};
    std::string metamodel_id{};  ///< Defaults to the first model's metamodel.
};

/// Picks the first `shots` demonstrations that do not describe the target itself; falls
/// back to the target's own demonstrations when nothing else is available.
inline auto select_demonstrations(const std::vector<Demonstration>& demos, const ModelSummary& target,
                                  std::size_t shots) -> std::vector<Demonstration> {
    std::vector<Demonstration> chosen;
    for (const auto& demo : demos) {
        if (chosen.size() == shots) break;
        if (demo.model.model_id != target.model_id) chosen.push_back(demo);
    }
    for (const auto& demo : demos) {
        if (chosen.size() == shots) break;
        if (demo.model.model_id == target.model_id) chosen.push_back(demo);
    }
    return chosen;
}

inline auto synthetic_trace_id(const ModelSummary& model) -> std::string { return "syn-" + model.model_id; }

/// Generates one trace per model. Client failures and gate rejections are recorded and
/// never abort the batch; accepted traces keep the order of `models`. With jobs > 1 the
/// client's complete() is called concurrently.
inline auto synthesize_dataset(const std::vector<ModelSummary>& models, const std::vector<Demonstration>& demos,
                               LlmClient& client, const SynthesisOptions& options = {})
    -> std::pair<TraceSet, std::vector<GenerationRecord>> {
    if (demos.empty()) throw Error(Errc::invalid_config, "at least one demonstration is required");
    if (options.shots == 0) throw Error(Errc::invalid_config, "shots must be at least 1");

    std::vector<std::optional<Trace>> accepted(models.size());
    std::vector<std::vector<GenerationRecord>> per_model(models.size());

    traceforge::detail::parallel_for(models.size(), options.jobs, [&](std::size_t index) {
        const auto& model = models[index];
        PromptSpec spec;
        spec.task_instructions = options.instructions;
        spec.output_format_note = options.format_note;
        spec.demonstrations = select_demonstrations(demos, model, options.shots);
        spec.target = model;
        const std::string prompt = build_prompt(spec, options.prompt_template);

        for (std::size_t attempt = 0; attempt <= options.retries; ++attempt) {
            GenerationRecord record;
            record.model_id = model.model_id;
            record.attempt = attempt;
            record.prompt = spec;
            record.prompt_text = prompt;
            record.generator_id = client.id();
            try {
                auto generation = generate(prompt, client, options.transport_retry, attempt);
                record.raw_response = std::move(generation.text);
                record.elapsed = generation.elapsed;
            } catch (const Error& e) {
                record.error = e.what();
                per_model[index].push_back(std::move(record));
                break;
            }
            record.cleaned_text = clean(record.raw_response);
            auto gate = quality_gate(record.cleaned_text, {options.gate_threshold, synthetic_trace_id(model),
                                                          model.model_id, record.generator_id});
            record.correctness = gate.correctness;
            record.accepted = gate.accepted;
            record.cleaned_trace = gate.trace;
            per_model[index].push_back(std::move(record));
            if (gate.accepted) {
                accepted[index] = std::move(gate.trace);
                break;
            }
        }
    });

    TraceSet set;
    set.metamodel_id = !options.metamodel_id.empty() ? options.metamodel_id
                       : models.empty()              ? std::string{}
                                                     : models.front().metamodel_id;
    std::vector<GenerationRecord> records;
    for (std::size_t i = 0; i < models.size(); ++i) {
        if (accepted[i]) set.traces.push_back(std::move(*accepted[i]));
        for (auto& record : per_model[i]) records.push_back(std::move(record));
    }
    return {std::move(set), std::move(records)};
}

inline void to_json(nlohmann::json& j, const GenerationRecord& r) {
    nlohmann::json demos = nlohmann::json::array();
    for (const auto& d : r.prompt.demonstrations) demos.push_back(d.model.model_id);
    j = nlohmann::json{{"model_id", r.model_id},
                       {"attempt", r.attempt},
                       {"demonstrations", std::move(demos)},
                       {"prompt", r.prompt_text},
                       {"raw_response", r.raw_response},
                       {"cleaned_text", r.cleaned_text},
                       {"correctness", r.correctness},
                       {"accepted", r.accepted},
                       {"trace_id", r.cleaned_trace ? nlohmann::json(r.cleaned_trace->id) : nlohmann::json()},
                       {"generator_id", r.generator_id},
                       {"elapsed_ms", r.elapsed.count()},
                       {"error", r.error ? nlohmann::json(*r.error) : nlohmann::json()}};
}

}  // namespace traceforge::synth

#pragma once

#include <traceforge/detail/random.hpp>
#include <traceforge/event_lines.hpp>
#include <traceforge/synth/llm_client.hpp>

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace traceforge::synth {

struct MockSettings {
    std::uint64_t seed{42};
    double swap_rate{0.15};           ///< Per adjacent pair.
    double drop_rate{0.05};           ///< Per event.
    double duplicate_rate{0.05};      ///< Per event.
    double hallucination_rate{0.05};  ///< Per event: insert an operation on an invented class.
    double prose_rate{0.5};           ///< Chance of wrapping the answer in chatter and code fences.
    double garbage_rate{0.0};         ///< Chance of answering with prose only.
};

inline void from_json(const nlohmann::json& j, MockSettings& s) {
    s.seed = j.value("seed", s.seed);
    s.swap_rate = j.value("swap_rate", s.swap_rate);
    s.drop_rate = j.value("drop_rate", s.drop_rate);
    s.duplicate_rate = j.value("duplicate_rate", s.duplicate_rate);
    s.hallucination_rate = j.value("hallucination_rate", s.hallucination_rate);
    s.prose_rate = j.value("prose_rate", s.prose_rate);
    s.garbage_rate = j.value("garbage_rate", s.garbage_rate);
}

/// Offline stand-in for an LLM. It reads the demonstration traces out of the few-shot
/// prompt, picks one, and perturbs it with seeded edits. Output depends only on the
/// settings, the prompt bytes and the attempt number.
class MockLlmClient final : public LlmClient {
public:
    explicit MockLlmClient(MockSettings settings = {}) : settings_(settings) {}

    auto complete(const LlmRequest& request) -> std::string override {
        std::mt19937_64 rng(detail::stable_hash(request.prompt, settings_.seed * 0x9e3779b97f4a7c15ULL + 1) ^
                            (request.attempt * 0xbf58476d1ce4e5b9ULL));
        auto demos = demonstration_traces(request.prompt);
        if (demos.empty() || detail::uniform_unit(rng) < settings_.garbage_rate) {
            return "I'm sorry, I could not infer the modeling operations for this model.";
        }
        auto events = demos[detail::uniform_below(rng, demos.size())];
        perturb(events, rng);

        std::string body;
        for (const auto& line : events) body += line + "\n";
        if (detail::uniform_unit(rng) < settings_.prose_rate) {
            return "Sure! Here are the modeling operations:\n```\n" + body + "```\nHope this helps!";
        }
        return body;
    }

    [[nodiscard]] auto id() const -> std::string override { return "mock"; }

    /// Event lines of each TRACE block in the prompt, in order of appearance.
    static auto demonstration_traces(std::string_view prompt) -> std::vector<std::vector<std::string>> {
        std::vector<std::vector<std::string>> traces;
        bool in_trace = false;
        for (auto line : traceforge::detail::split_lines(prompt)) {
            if (line.rfind("TRACE:", 0) == 0) {
                traces.emplace_back();
                in_trace = true;
            } else if (line.rfind("MODEL:", 0) == 0) {
                in_trace = false;
            } else if (in_trace && is_valid_event_line(line)) {
                traces.back().emplace_back(line);
            }
        }
        std::erase_if(traces, [](const auto& t) { return t.empty(); });
        return traces;
    }

private:
    void perturb(std::vector<std::string>& events, std::mt19937_64& rng) const {
        for (std::size_t i = 0; i + 1 < events.size(); ++i) {
            if (detail::uniform_unit(rng) < settings_.swap_rate) std::swap(events[i], events[i + 1]);
        }
        std::vector<std::string> out;
        out.reserve(events.size() + 4);
        for (const auto& line : events) {
            const double roll = detail::uniform_unit(rng);
            if (roll < settings_.drop_rate) continue;
            out.push_back(line);
            if (roll < settings_.drop_rate + settings_.duplicate_rate) out.push_back(line);
            if (detail::uniform_unit(rng) < settings_.hallucination_rate) {
                static constexpr std::array<std::string_view, 3> invented = {
                    "event Widget label SET", "event Scheduler quantum SET", "event Bus channels ADD"};
                out.emplace_back(invented[detail::uniform_below(rng, invented.size())]);
            }
        }
        if (out.empty() && !events.empty()) out.push_back(events.front());
        events = std::move(out);
    }

    MockSettings settings_;
};

}  // namespace traceforge::synth

#pragma once

#include <traceforge/detail/random.hpp>
#include <traceforge/error.hpp>
#include <traceforge/trace.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>

namespace traceforge::synth {

/// Traces drawn from each side by mix_datasets.
struct MixPlan {
    std::size_t total{0};
    std::size_t synthetic{0};
    std::size_t human{0};
};

/// The mixed set has as many traces as the smaller contributing side (all humans for a
/// ratio of 0, all synthetic traces for a ratio of 1), split by round(ratio * total).
inline auto plan_mix(std::size_t humans, std::size_t synthetics, double ratio) -> MixPlan {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error(Errc::invalid_config, "synthetic ratio must lie in [0, 1]");
    std::size_t total = ratio == 0.0 ? humans : ratio == 1.0 ? synthetics : std::min(humans, synthetics);
    auto synthetic = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(total)));
    MixPlan plan{total, synthetic, total - synthetic};
    if (plan.total == 0 || plan.synthetic > synthetics || plan.human > humans) {
        throw Error(Errc::insufficient_traces, "cannot reach ratio " + std::to_string(ratio) + " with " +
                                                   std::to_string(humans) + " human and " +
                                                   std::to_string(synthetics) + " synthetic traces");
    }
    return plan;
}

/// Seeded random mix of human and synthetic traces. Colliding synthetic ids get a `syn:`
/// prefix so the result never repeats an id.
inline auto mix_datasets(const TraceSet& human, const TraceSet& synthetic, double synthetic_ratio,
                         std::uint64_t seed, std::string name = "mixed") -> Dataset {
    if (human.metamodel_id != synthetic.metamodel_id) {
        throw Error(Errc::incompatible_metamodels,
                    "'" + human.metamodel_id + "' vs '" + synthetic.metamodel_id + "'");
    }
    auto plan = plan_mix(human.traces.size(), synthetic.traces.size(), synthetic_ratio);
    std::mt19937_64 rng(seed);

    std::vector<std::size_t> human_order(human.traces.size()), synthetic_order(synthetic.traces.size());
    for (std::size_t i = 0; i < human_order.size(); ++i) human_order[i] = i;
    for (std::size_t i = 0; i < synthetic_order.size(); ++i) synthetic_order[i] = i;
    traceforge::detail::seeded_shuffle(human_order, rng);
    traceforge::detail::seeded_shuffle(synthetic_order, rng);

    TraceSet mixed;
    mixed.metamodel_id = human.metamodel_id;
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < plan.human; ++i) {
        mixed.traces.push_back(human.traces[human_order[i]]);
        ids.insert(mixed.traces.back().id);
    }
    for (std::size_t i = 0; i < plan.synthetic; ++i) {
        Trace trace = synthetic.traces[synthetic_order[i]];
        if (!trace.origin.is_synthetic()) trace.origin = Origin::synthetic("unknown");
        while (ids.contains(trace.id)) trace.id = "syn:" + trace.id;
        ids.insert(trace.id);
        mixed.traces.push_back(std::move(trace));
    }
    traceforge::detail::seeded_shuffle(mixed.traces, rng);
    return Dataset::from_traces(std::move(name), std::move(mixed), seed);
}

}  // namespace traceforge::synth

// Loads the bundled fixture, synthesizes traces offline, scores them, and asks the
// recommender for the next operations of a partial trace.
#include <traceforge/traceforge.hpp>

#include <iostream>

namespace tf = traceforge;

int main() {
    const std::string dir = TRACEFORGE_FIXTURE_DIR;
    auto schema = nlohmann::json::parse(tf::io::read_file(dir + "/schema.json")).get<tf::MetamodelSchema>();
    auto [human, report] = tf::parse_dataset_xes(tf::io::read_file(dir + "/human.xes"));
    std::cout << "human traces: " << human.trace_set.traces.size() << " (" << report.accepted_events << " events)\n";

    auto models = nlohmann::json::parse(tf::io::read_file(dir + "/models.json")).get<std::vector<tf::synth::ModelSummary>>();
    auto demos =
        nlohmann::json::parse(tf::io::read_file(dir + "/demos.json")).get<std::vector<tf::synth::Demonstration>>();
    tf::synth::MockLlmClient mock({.seed = 7});
    auto [synthetic, records] = tf::synth::synthesize_dataset(models, demos, mock);
    std::cout << "synthetic traces accepted: " << synthetic.traces.size() << " of " << models.size() << "\n";

    std::map<std::string, std::string> pairs;
    for (const auto& t : synthetic.traces) pairs[t.id] = t.model_id;
    auto quality = tf::assess_dataset(synthetic, human.trace_set, schema, pairs);
    std::cout << tf::summary_table_csv(quality);

    auto index = tf::train(human.trace_set, schema);
    const auto& probe = human.trace_set.traces.front().events;
    std::span<const tf::ModelingEvent> context(probe.data(), probe.size() / 2);
    auto rec = tf::recommend(context, index, {0.5, 3, 5}, tf::RecommendationKind::class_ops);
    std::cout << "next class operations:\n";
    for (const auto& item : rec.items) std::cout << "  " << item.operation.token() << "  " << item.score << "\n";
}

#pragma once

#include <traceforge/traceforge.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace traceforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Pipeline settings shared by the subcommands. Relative paths resolve against the
/// directory of the config file.
struct PipelineConfig {
    std::optional<fs::path> schema_path;
    std::map<std::string, fs::path> datasets;
    synth::HttpLlmSettings llm{};
    synth::MockSettings mock{};
    std::optional<fs::path> prompt_template_path;
    double gate_threshold{synth::kDefaultGateThreshold};
    std::size_t shots{2};
    std::size_t retries{0};
    eval::ConfigGrid grid{};
    std::size_t k_folds{5};
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> output_dir;

    static auto load(const fs::path& path) -> PipelineConfig {
        json j = json::parse(io::read_file(path), nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw Error(Errc::invalid_config, "'" + path.string() + "' is not a JSON object");
        }
        const fs::path base = path.parent_path();
        auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
        auto existing = [&](const std::string& p) {
            auto full = resolve(p);
            if (!fs::exists(full)) throw Error(Errc::invalid_config, "referenced path '" + full.string() + "' does not exist");
            return full;
        };
        PipelineConfig c;
        try {
            if (j.contains("schema_path")) c.schema_path = existing(j.at("schema_path").get<std::string>());
            if (j.contains("datasets")) {
                for (const auto& [name, p] : j.at("datasets").items()) c.datasets[name] = existing(p.get<std::string>());
            }
            if (j.contains("llm")) c.llm = j.at("llm").get<synth::HttpLlmSettings>();
            if (j.contains("mock")) c.mock = j.at("mock").get<synth::MockSettings>();
            if (j.contains("prompt_template_path")) {
                c.prompt_template_path = existing(j.at("prompt_template_path").get<std::string>());
            }
            c.gate_threshold = j.value("gate_threshold", c.gate_threshold);
            c.shots = j.value("shots", c.shots);
            c.retries = j.value("retries", c.retries);
            if (j.contains("grid")) c.grid = j.at("grid").get<eval::ConfigGrid>();
            c.k_folds = j.value("k_folds", c.k_folds);
            if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("output_dir")) c.output_dir = resolve(j.at("output_dir").get<std::string>());
        } catch (const json::exception& e) {
            throw Error(Errc::invalid_config, path.string() + ": " + e.what());
        }
        return c;
    }
};

/// Exit status for an error category: 1 for environment and runtime failures, 2 for
/// problems with the caller's input.
inline auto exit_code(Errc code) -> int {
    switch (code) {
        case Errc::transport_error:
        case Errc::auth_error:
        case Errc::timeout_error:
        case Errc::io_error:
            return 1;
        default:
            return 2;
    }
}

inline auto error_json(std::string_view name, std::string_view message, std::size_t location = 0) -> std::string {
    json j{{"error", name}, {"message", message}};
    if (location != 0) j["location"] = location;
    return j.dump();
}

enum class InputFormat : std::uint8_t { automatic, xes, lines };

inline auto is_xes_path(const fs::path& path) -> bool {
    auto ext = path.extension().string();
    return ext == ".xes" || ext == ".xml";
}

struct LoadedTraces {
    Dataset dataset;
    ParseReport report;
    bool from_xes{false};
    std::string raw;
};

/// Reads an XES log or a single event-line trace (named after the file stem).
inline auto load_traces(const fs::path& path, InputFormat format, bool lenient,
                        std::optional<Origin> origin = std::nullopt) -> LoadedTraces {
    LoadedTraces out;
    out.raw = io::read_file(path);
    out.from_xes = format == InputFormat::xes || (format == InputFormat::automatic && is_xes_path(path));
    if (out.from_xes) {
        XesParseOptions options;
        options.lenient = lenient;
        options.source = path.string();
        options.origin_override = origin;
        std::tie(out.dataset, out.report) = parse_dataset_xes(out.raw, options);
        if (out.dataset.name == options.source) out.dataset.name = path.stem().string();
    } else {
        LineParseOptions options;
        options.lenient = lenient;
        options.trace_id = path.stem().string();
        options.source = path.string();
        if (origin) options.origin = *origin;
        auto [trace, report] = parse_event_lines(out.raw, options);
        TraceSet set;
        set.traces.push_back(std::move(trace));
        out.dataset = Dataset::from_traces(path.stem().string(), std::move(set));
        out.report = std::move(report);
    }
    return out;
}

inline auto load_schema(const fs::path& path) -> MetamodelSchema {
    json j = json::parse(io::read_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(Errc::invalid_schema, "'" + path.string() + "' is not valid JSON");
    try {
        return j.get<MetamodelSchema>();
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_schema, path.string() + ": " + e.what());
    }
}

inline auto load_json(const fs::path& path) -> json {
    json j = json::parse(io::read_file(path), nullptr, false);
    if (j.is_discarded()) throw Error(Errc::format_error, "'" + path.string() + "' is not valid JSON");
    return j;
}

inline auto report_json(const ParseReport& report) -> json {
    json rejected = json::array();
    for (const auto& r : report.rejected_lines) rejected.push_back({{"line", r.line_number}, {"reason", r.reason}});
    return {{"source", report.source}, {"accepted_events", report.accepted_events}, {"rejected_lines", rejected}};
}

/// Traces from a lines file carry no metamodel id; adopt the schema's.
inline void adopt_metamodel(Dataset& dataset, const MetamodelSchema& schema) {
    if (dataset.trace_set.metamodel_id.empty()) dataset.trace_set.metamodel_id = schema.id;
}

inline void emit(std::ostream& out, const std::optional<fs::path>& path, const std::string& content) {
    if (path) {
        io::write_file_atomic(*path, content);
    } else {
        out << content;
    }
}

struct Options {
    std::optional<fs::path> pipeline;
    std::size_t jobs{1};

    std::string input;
    std::string second_input;
    bool xes{false};
    bool lines{false};
    bool strict{false};
    std::optional<fs::path> output;
    std::optional<fs::path> report;
    std::optional<std::string> to_format;
    std::optional<std::string> synthetic_generator;

    std::optional<fs::path> schema;
    std::optional<fs::path> pairs;
    std::optional<fs::path> records;
    int q{2};
    std::optional<fs::path> csv;

    std::optional<fs::path> demos;
    bool mock{false};
    std::optional<std::uint64_t> seed;

    double ratio{0.5};
    std::optional<std::string> name;

    std::optional<std::string> trained_at;
    std::optional<fs::path> context;
    std::optional<double> cr;
    std::size_t co{5};
    std::size_t neighbors{5};
    std::string kind{"class"};

    std::optional<fs::path> grid;
    std::optional<std::size_t> k;
    std::optional<fs::path> index;
    std::string config_name{"C3.3"};
    bool no_timing{false};
};

class Runner {
public:
    Runner(Options options, std::ostream& out, std::ostream& err)
        : o_(std::move(options)), out_(out), err_(err) {
        if (o_.pipeline) cfg_ = PipelineConfig::load(*o_.pipeline);
    }

    auto parse() -> int {
        auto format = o_.xes ? InputFormat::xes : o_.lines ? InputFormat::lines : InputFormat::automatic;
        std::optional<Origin> origin;
        if (o_.synthetic_generator) origin = Origin::synthetic(*o_.synthetic_generator);
        auto loaded = load_traces(o_.input, format, !o_.strict, origin);
        const bool to_lines = o_.to_format ? *o_.to_format == "lines" : !loaded.from_xes;
        std::string normalized;
        if (to_lines) {
            for (const auto& trace : loaded.dataset.trace_set.traces) {
                normalized += render_event_lines(trace);
                if (loaded.dataset.trace_set.traces.size() > 1) normalized += '\n';
            }
        } else {
            normalized = write_dataset_xes(loaded.dataset);
        }
        if (o_.output) io::write_file_atomic(*o_.output, normalized);
        json report = report_json(loaded.report);
        report["traces"] = loaded.dataset.trace_set.traces.size();
        if (o_.report) {
            io::write_file_atomic(*o_.report, report.dump(2) + "\n");
        } else if (o_.output) {
            out_ << report.dump(2) << "\n";
        } else {
            out_ << normalized;
            err_ << report.dump() << "\n";
        }
        return 0;
    }

    auto validate() -> int {
        auto schema = load_schema(require_schema());
        auto loaded = load_traces(o_.input, InputFormat::automatic, true);
        json traces = json::array();
        std::size_t total = 0, valid = 0;
        for (const auto& trace : loaded.dataset.trace_set.traces) {
            json events = json::array();
            std::size_t trace_valid = 0;
            for (std::size_t i = 0; i < trace.events.size(); ++i) {
                const auto& event = trace.events[i];
                auto status = validate_event_against_schema(event, schema);
                const char* label = status.status == SchemaLookup::Status::valid           ? "valid"
                                    : status.status == SchemaLookup::Status::unknown_class ? "unknown_class"
                                                                                           : "unknown_feature";
                trace_valid += status.valid() ? 1 : 0;
                events.push_back({{"index", i + 1}, {"event", event.render()}, {"status", label}});
            }
            total += trace.events.size();
            valid += trace_valid;
            double corr = loaded.from_xes ? 1.0 : correctness(loaded.raw);
            traces.push_back({{"trace_id", trace.id},
                              {"correctness", corr},
                              {"schema_valid_events", trace_valid},
                              {"events", std::move(events)}});
        }
        json report{{"source", o_.input},
                    {"schema", schema.id},
                    {"rejected_lines", report_json(loaded.report)["rejected_lines"]},
                    {"events", total},
                    {"schema_valid_events", valid},
                    {"schema_validity", total == 0 ? 0.0 : static_cast<double>(valid) / static_cast<double>(total)},
                    {"traces", std::move(traces)}};
        emit(out_, o_.output, report.dump(2) + "\n");
        return 0;
    }

    auto metrics() -> int {
        auto schema = load_schema(require_schema());
        auto synthetic = load_traces(o_.input, InputFormat::automatic, true);
        auto reference = load_traces(o_.second_input, InputFormat::automatic, true);
        std::map<std::string, std::string> pairing;
        if (o_.pairs) {
            auto j = load_json(*o_.pairs);
            if (j.is_array()) {
                for (const auto& p : j) pairing[p.at(0).get<std::string>()] = p.at(1).get<std::string>();
            } else {
                pairing = j.get<std::map<std::string, std::string>>();
            }
        } else {
            for (const auto& t : synthetic.dataset.trace_set.traces) pairing[t.id] = t.id;
        }
        AssessOptions options;
        options.q = o_.q;
        if (o_.records) {
            for (const auto& r : load_json(*o_.records)) {
                if (r.value("accepted", false) && r.at("trace_id").is_string()) {
                    options.raw_texts[r.at("trace_id").get<std::string>()] = r.at("raw_response").get<std::string>();
                }
            }
        }
        auto report = assess_dataset(synthetic.dataset.trace_set, reference.dataset.trace_set, schema, pairing, options);
        json j = report;
        j["tests"] = json::object();
        std::vector<double> h;
        for (const auto& row : report.per_trace) {
            if (row.hallucination) h.push_back(*row.hallucination);
        }
        try {
            j["tests"]["hallucination_vs_1"] = stats::one_sample_t_test(h, 1.0);
        } catch (const Error&) {
            j["tests"]["hallucination_vs_1"] = nullptr;
        }
        if (o_.csv) io::write_file_atomic(*o_.csv, summary_table_csv(report));
        emit(out_, o_.output, j.dump(2) + "\n");
        return 0;
    }

    auto generate() -> int {
        if (!o_.demos) throw Error(Errc::invalid_config, "--demos is required");
        auto models = load_json(o_.input).get<std::vector<synth::ModelSummary>>();
        auto demos = load_json(*o_.demos).get<std::vector<synth::Demonstration>>();
        synth::SynthesisOptions options;
        options.gate_threshold = cfg_.gate_threshold;
        options.shots = cfg_.shots;
        options.retries = cfg_.retries;
        options.jobs = o_.jobs;
        if (cfg_.prompt_template_path) options.prompt_template = io::read_file(*cfg_.prompt_template_path);

        std::unique_ptr<synth::LlmClient> client;
        if (o_.mock) {
            auto settings = cfg_.mock;
            if (auto seed = effective_seed()) settings.seed = *seed;
            client = std::make_unique<synth::MockLlmClient>(settings);
        } else {
            client = std::make_unique<synth::HttpLlmClient>(cfg_.llm);
        }
        auto [set, records] = synth::synthesize_dataset(models, demos, *client, options);

        const fs::path dir = output_dir();
        Dataset dataset = Dataset::from_traces(o_.name.value_or("synthetic"), std::move(set), effective_seed());
        json pairs = json::object();
        for (const auto& trace : dataset.trace_set.traces) pairs[trace.id] = trace.model_id;
        io::write_file_atomic(dir / "synthetic.xes", write_dataset_xes(dataset));
        io::write_file_atomic(dir / "records.json", json(records).dump(2) + "\n");
        io::write_file_atomic(dir / "pairs.json", pairs.dump(2) + "\n");

        std::size_t failures = 0;
        for (const auto& r : records) failures += r.error ? 1 : 0;
        json summary{{"models", models.size()},
                     {"accepted", dataset.trace_set.traces.size()},
                     {"attempts", records.size()},
                     {"client_errors", failures},
                     {"generator", client->id()},
                     {"output_dir", dir.string()}};
        out_ << summary.dump(2) << "\n";
        return 0;
    }

    auto mix() -> int {
        auto human = load_traces(o_.input, InputFormat::automatic, true);
        auto synthetic = load_traces(o_.second_input, InputFormat::automatic, true);
        auto seed = effective_seed();
        if (!seed) throw Error(Errc::invalid_config, "--seed is required for mix");
        auto mixed = synth::mix_datasets(human.dataset.trace_set, synthetic.dataset.trace_set, o_.ratio, *seed,
                                         o_.name.value_or("mixed"));
        emit(out_, o_.output, write_dataset_xes(mixed));
        if (o_.output) {
            out_ << json{{"traces", mixed.trace_set.traces.size()},
                         {"synthetic_ratio", mixed.synthetic_ratio},
                         {"seed", *seed}}
                        .dump(2)
                 << "\n";
        }
        return 0;
    }

    auto train() -> int {
        auto schema = load_schema(require_schema());
        auto loaded = load_traces(o_.input, InputFormat::automatic, true);
        adopt_metamodel(loaded.dataset, schema);
        auto index = traceforge::train(loaded.dataset.trace_set, schema, {o_.trained_at, effective_seed()});
        emit(out_, o_.output, json(index).dump() + "\n");
        return 0;
    }

    auto recommend() -> int {
        if (!o_.context) throw Error(Errc::invalid_config, "--context is required");
        auto index = index_from_json(load_json(o_.input));
        auto context = load_traces(*o_.context, InputFormat::automatic, true).dataset.trace_set.traces.at(0).events;
        RecConfig config;
        config.cutoff = o_.co;
        config.neighbors = o_.neighbors;
        if (o_.cr) {
            config.context_ratio = *o_.cr;
            config.validate();
            context.resize(eval::context_length(*o_.cr, context.size()));
        }
        std::vector<RecommendationKind> kinds;
        if (o_.kind == "both") {
            kinds.assign(kRecommendationKinds.begin(), kRecommendationKinds.end());
        } else if (auto kind = parse_recommendation_kind(o_.kind)) {
            kinds.push_back(*kind);
        } else {
            throw Error(Errc::invalid_config, "unknown kind '" + o_.kind + "'");
        }
        json result{{"context_events", context.size()}, {"recommendations", json::object()}};
        for (auto kind : kinds) {
            auto rec = traceforge::recommend(context, index, config, kind);
            json items = json::array();
            for (const auto& item : rec.items) {
                items.push_back({{"class", item.operation.class_name},
                                 {"feature", item.operation.feature_name},
                                 {"type", to_string_view(item.operation.event_type)},
                                 {"score", item.score}});
            }
            result["recommendations"][std::string(to_string_view(kind))] = std::move(items);
        }
        emit(out_, o_.output, result.dump(2) + "\n");
        return 0;
    }

    auto evaluate() -> int {
        auto schema = load_schema(require_schema());
        auto loaded = load_traces(o_.input, InputFormat::automatic, true);
        adopt_metamodel(loaded.dataset, schema);
        auto grid = o_.grid ? load_json(*o_.grid).get<eval::ConfigGrid>() : cfg_.grid;
        auto seed = effective_seed();
        if (!seed) throw Error(Errc::invalid_config, "--seed is required for evaluate");
        auto report = eval::run_grid(loaded.dataset, schema, grid, {o_.k.value_or(cfg_.k_folds), *seed, o_.jobs});
        write_report(report);
        return 0;
    }

    auto xval() -> int {
        auto schema = load_schema(require_schema());
        auto grid = o_.grid ? load_json(*o_.grid).get<eval::ConfigGrid>() : cfg_.grid;
        auto config = grid.by_name(o_.config_name);
        auto validation = load_traces(o_.second_input, InputFormat::automatic, true);
        adopt_metamodel(validation.dataset, schema);
        eval::EvalReport report;
        if (o_.index) {
            auto index = index_from_json(load_json(*o_.index));
            report = eval::cross_dataset_eval(Dataset{}, validation.dataset, schema, config, o_.config_name, &index);
        } else {
            if (o_.input.empty()) throw Error(Errc::invalid_config, "xval needs --train or --index");
            auto training = load_traces(o_.input, InputFormat::automatic, true);
            adopt_metamodel(training.dataset, schema);
            report = eval::cross_dataset_eval(training.dataset, validation.dataset, schema, config, o_.config_name);
        }
        write_report(report);
        return 0;
    }

private:
    auto require_schema() const -> fs::path {
        if (o_.schema) return *o_.schema;
        if (cfg_.schema_path) return *cfg_.schema_path;
        throw Error(Errc::invalid_config, "--schema is required");
    }

    auto effective_seed() const -> std::optional<std::uint64_t> { return o_.seed ? o_.seed : cfg_.seed; }

    auto output_dir() const -> fs::path {
        if (o_.output) return *o_.output;
        if (cfg_.output_dir) return *cfg_.output_dir;
        return ".";
    }

    void write_report(const eval::EvalReport& report) {
        const auto csv = eval::to_csv(report);
        if (o_.output) {
            io::write_file_atomic(*o_.output / "report.csv", csv);
            io::write_file_atomic(*o_.output / "report.json", eval::to_json(report, !o_.no_timing).dump(2) + "\n");
        }
        out_ << csv;
    }

    Options o_;
    PipelineConfig cfg_;
    std::ostream& out_;
    std::ostream& err_;
};

/// Entry point shared by the executable and the in-process tests.
inline auto run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int {
    CLI::App app{"traceforge: modeling-trace tooling (parse, synthesize, assess, recommend, evaluate)", "traceforge"};
    app.require_subcommand(1);
    Options o;
    std::string pipeline;
    app.add_option("--pipeline", pipeline, "Pipeline config JSON supplying defaults")->check(CLI::ExistingFile);
    app.add_option("-j,--jobs", o.jobs, "Worker thread cap")->check(CLI::PositiveNumber);

    auto path_opt = [](CLI::App* sub, const char* name, std::optional<fs::path>& target, const char* help) {
        return sub->add_option_function<std::string>(name, [&target](const std::string& v) { target = v; }, help);
    };

    auto* parse = app.add_subcommand("parse", "Parse XES or event lines and write a normalized trace file");
    parse->add_option("input", o.input, "Input file")->required();
    auto* xes_flag = parse->add_flag("--xes", o.xes, "Force XES input");
    parse->add_flag("--lines", o.lines, "Force event-line input")->excludes(xes_flag);
    parse->add_flag("--strict", o.strict, "Fail on the first malformed record");
    parse->add_option("--to", o.to_format, "Output format")->check(CLI::IsMember({"xes", "lines"}));
    parse->add_option("--synthetic", o.synthetic_generator, "Tag traces as synthetic from this generator");
    path_opt(parse, "-o,--output", o.output, "Normalized output file");
    path_opt(parse, "--report", o.report, "Parse report JSON file");

    auto* validate = app.add_subcommand("validate", "Report grammar correctness and schema validity per event");
    validate->add_option("traces", o.input, "Trace file")->required();
    path_opt(validate, "--schema", o.schema, "Metamodel schema JSON");
    path_opt(validate, "-o,--output", o.output, "Report file");

    auto* metrics = app.add_subcommand("metrics", "Assess synthetic traces against paired references");
    metrics->add_option("synthetic", o.input, "Synthetic traces")->required();
    metrics->add_option("reference", o.second_input, "Reference traces")->required();
    path_opt(metrics, "--pairs", o.pairs, "JSON map from synthetic to reference trace id");
    path_opt(metrics, "--schema", o.schema, "Metamodel schema JSON");
    path_opt(metrics, "--records", o.records, "Generation records; raw responses feed correctness");
    metrics->add_option("--q", o.q, "q-gram size")->check(CLI::PositiveNumber);
    path_opt(metrics, "--csv", o.csv, "Summary table CSV");
    path_opt(metrics, "-o,--output", o.output, "Report JSON file");

    auto* generate = app.add_subcommand("generate", "Generate synthetic traces with few-shot prompting");
    generate->add_option("models", o.input, "Model summaries JSON")->required();
    path_opt(generate, "--demos", o.demos, "Demonstrations JSON");
    generate->add_option("--config", pipeline, "Pipeline config JSON")->check(CLI::ExistingFile);
    generate->add_flag("--mock", o.mock, "Use the offline mock generator");
    generate->add_option("--seed", o.seed, "Mock generator seed");
    generate->add_option("--name", o.name, "Dataset name");
    path_opt(generate, "-o,--output", o.output, "Output directory");

    auto* mix = app.add_subcommand("mix", "Mix human and synthetic traces at a synthetic ratio");
    mix->add_option("human", o.input, "Human traces")->required();
    mix->add_option("synthetic", o.second_input, "Synthetic traces")->required();
    mix->add_option("--ratio", o.ratio, "Synthetic fraction")->check(CLI::Range(0.0, 1.0));
    mix->add_option("--seed", o.seed, "Shuffle seed");
    mix->add_option("--name", o.name, "Dataset name");
    path_opt(mix, "-o,--output", o.output, "Output XES file");

    auto* train = app.add_subcommand("train", "Build a recommender index");
    train->add_option("traces", o.input, "Training traces")->required();
    path_opt(train, "--schema", o.schema, "Metamodel schema JSON");
    train->add_option("--seed", o.seed, "Seed recorded in the index");
    train->add_option("--trained-at", o.trained_at, "Timestamp recorded in the index");
    path_opt(train, "-o,--output", o.output, "Index file");

    auto* recommend = app.add_subcommand("recommend", "Recommend next operations for a partial trace");
    recommend->add_option("index", o.input, "Index file")->required();
    path_opt(recommend, "--context", o.context, "Context trace");
    recommend->add_option("--cr", o.cr, "Use only this leading fraction of the context");
    recommend->add_option("--co", o.co, "Cutoff")->check(CLI::PositiveNumber);
    recommend->add_option("--neighbors", o.neighbors, "Neighbor count")->check(CLI::PositiveNumber);
    recommend->add_option("--kind", o.kind, "class, attribute or both");
    path_opt(recommend, "-o,--output", o.output, "Output file");

    auto* evaluate = app.add_subcommand("evaluate", "k-fold evaluation over the configuration grid");
    evaluate->add_option("dataset", o.input, "Dataset")->required();
    path_opt(evaluate, "--schema", o.schema, "Metamodel schema JSON");
    path_opt(evaluate, "--grid", o.grid, "Grid JSON");
    evaluate->add_option("--k", o.k, "Fold count");
    evaluate->add_option("--seed", o.seed, "Fold seed");
    evaluate->add_flag("--no-timing", o.no_timing, "Omit timing from report.json");
    path_opt(evaluate, "-o,--output", o.output, "Output directory for report.csv and report.json");

    auto* xval = app.add_subcommand("xval", "Train on one dataset and validate on another");
    xval->add_option("--train", o.input, "Training dataset");
    xval->add_option("--validate", o.second_input, "Validation dataset")->required();
    xval->add_option("--config", o.config_name, "Grid configuration name");
    path_opt(xval, "--index", o.index, "Prebuilt index instead of --train");
    path_opt(xval, "--schema", o.schema, "Metamodel schema JSON");
    path_opt(xval, "--grid", o.grid, "Grid JSON");
    xval->add_flag("--no-timing", o.no_timing, "Omit timing from report.json");
    path_opt(xval, "-o,--output", o.output, "Output directory for report.csv and report.json");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("UsageError", e.what()) << "\n";
        return 2;
    }
    if (!pipeline.empty()) o.pipeline = pipeline;

    try {
        Runner runner(std::move(o), out, err);
        if (parse->parsed()) return runner.parse();
        if (validate->parsed()) return runner.validate();
        if (metrics->parsed()) return runner.metrics();
        if (generate->parsed()) return runner.generate();
        if (mix->parsed()) return runner.mix();
        if (train->parsed()) return runner.train();
        if (recommend->parsed()) return runner.recommend();
        if (evaluate->parsed()) return runner.evaluate();
        if (xval->parsed()) return runner.xval();
    } catch (const Error& e) {
        err << error_json(to_string_view(e.code()), e.what(), e.location()) << "\n";
        return exit_code(e.code());
    } catch (const nlohmann::json::exception& e) {
        err << error_json("FormatError", e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << error_json("RuntimeError", e.what()) << "\n";
        return 1;
    }
    return 2;
}

}  // namespace traceforge::cli

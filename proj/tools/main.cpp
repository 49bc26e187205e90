#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "derec/csv.hpp"
#include "derec/datagen.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/num.hpp"
#include "derec/pipeline.hpp"
#include "derec/plotdata.hpp"
#include "derec/simpro.hpp"
#include "derec/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace derec;

namespace {

// Every run ends with a manifest.json next to the artifacts: the command,
// the fully resolved config, and digests of everything read and written.
// Reruns via --from-manifest must reproduce the output digests byte for
// byte, so nothing time- or host-dependent belongs in here.
struct Manifest {
    std::string command;
    ordered_json config;
    ordered_json inputs = ordered_json::object();
    ordered_json outputs = ordered_json::object();

    void note_input(const fs::path& path) {
        inputs[path.generic_string()] = file_digest(path);
    }
    void note_output(const fs::path& out_dir, const fs::path& path) {
        outputs[fs::relative(path, out_dir).generic_string()] = file_digest(path);
    }
    void write(const fs::path& out_dir) const {
        ordered_json doc;
        doc["command"] = command;
        doc["config"] = config;
        doc["inputs"] = inputs;
        doc["outputs"] = outputs;
        atomic_write_text(out_dir / "manifest.json", doc.dump(2) + "\n");
    }
};

std::vector<fs::path> bundle_files(const fs::path& dir, const DerecBundle& bundle) {
    std::vector<fs::path> files = {dir / "parent.csv", dir / "parent.schema.json"};
    for (const auto& [tag, child] : bundle.children) {
        files.push_back(dir / ("child_" + tag + ".csv"));
        files.push_back(dir / ("child_" + tag + ".schema.json"));
    }
    files.push_back(dir / "partition.json");
    return files;
}

DerecBundle load_bundle_noted(const fs::path& dir, Manifest& manifest) {
    auto bundle = load_bundle(dir);
    for (const auto& path : bundle_files(dir, bundle)) manifest.note_input(path);
    return bundle;
}

void save_bundle_noted(const fs::path& out_dir, const fs::path& dir, const DerecBundle& bundle,
                       Manifest& manifest) {
    save_bundle(dir, bundle);
    for (const auto& path : bundle_files(dir, bundle)) manifest.note_output(out_dir, path);
}

DataTable load_table_noted(const std::string& csv_path, const std::string& schema_path,
                           const std::string& id, Manifest& manifest) {
    Schema schema = load_schema(schema_path);
    if (!id.empty() && schema.identifier != id) {
        throw SchemaMismatch("schema '" + schema_path + "' names identifier '" +
                             schema.identifier + "', not '" + id + "'");
    }
    manifest.note_input(schema_path);
    manifest.note_input(csv_path);
    return load_csv(csv_path, schema);
}

std::string cfg_str(const ordered_json& cfg, const std::string& key) {
    if (!cfg.contains(key) || !cfg.at(key).is_string() ||
        cfg.at(key).get<std::string>().empty()) {
        std::string flag = "--" + key;
        for (auto& c : flag) {
            if (c == '_') c = '-';
        }
        throw InputError("missing required option '" + flag + "'");
    }
    return cfg.at(key).get<std::string>();
}

SynthesizerSpec synth_spec_from_cfg(const ordered_json& cfg, SynthMethod method,
                                    std::uint64_t seed) {
    SynthesizerSpec spec;
    spec.method = method;
    spec.seed = seed;
    if (method == SynthMethod::External) {
        spec.exchange_dir = cfg_str(cfg, "exchange_dir");
        spec.poll_seconds = cfg.value("poll_seconds", 0.5);
        spec.timeout_seconds = cfg.value("timeout_seconds", 60.0);
    }
    return spec;
}

std::string pairs_to_csv_text(const Comparison& cmp) {
    std::string out =
        "given_table,given_column,target_table,target_column,kind,delta_p,q_p,delta_w,q_w\n";
    for (const auto& o : cmp.pairs) {
        const bool marginal = o.pair.is_marginal();
        out += marginal ? "-" : o.pair.given_table;
        out += ',';
        out += marginal ? "-" : o.pair.given_column;
        out += ',';
        out += o.pair.target_table + ',' + o.pair.target_column + ',';
        out += marginal ? "marginal" : "conditional";
        out += ',';
        out += format_double(o.delta_p);
        out += ',';
        out += classification_name(o.q_p);
        out += ',';
        out += format_double(o.delta_w);
        out += ',';
        out += classification_name(o.q_w);
        out += '\n';
    }
    return out;
}

void exec_split(const ordered_json& cfg) {
    Manifest manifest{"split", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    std::string id = cfg.value("id", "");
    auto a = load_table_noted(cfg_str(cfg, "table_a"), cfg_str(cfg, "schema_a"), id, manifest);
    auto b = load_table_noted(cfg_str(cfg, "table_b"), cfg_str(cfg, "schema_b"), id, manifest);
    auto bundle = run_derec(a, b, cfg.value("threshold", 0.95));
    save_bundle_noted(out_dir, out_dir, bundle, manifest);
    manifest.write(out_dir);
    std::cout << "split: " << bundle.parent.num_subjects() << " subjects, "
              << bundle.children.size() << " child tables under " << out_dir.string() << "\n";
}

void exec_gen(const ordered_json& cfg) {
    Manifest manifest{"gen", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    std::string spec_path = cfg_str(cfg, "spec");
    auto spec = gen_spec_from_json_text(read_text_file(spec_path), spec_path);
    manifest.note_input(spec_path);

    auto result = generate(spec);
    for (const DataTable* t : {&result.a, &result.b}) {
        const std::string& name =
            t == &result.a ? spec.sources[0].table : spec.sources[1].table;
        save_csv(out_dir / (name + ".csv"), *t);
        save_schema(out_dir / (name + ".schema.json"), t->schema());
        manifest.note_output(out_dir, out_dir / (name + ".csv"));
        manifest.note_output(out_dir, out_dir / (name + ".schema.json"));
    }
    atomic_write_text(out_dir / "truth.json", truth_to_json_text(result.truth));
    manifest.note_output(out_dir, out_dir / "truth.json");
    manifest.write(out_dir);
    std::cout << "gen: " << result.truth.subjects << " subjects into " << out_dir.string()
              << "\n";
}

void exec_synthesize(const ordered_json& cfg) {
    Manifest manifest{"synthesize", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    auto bundle = load_bundle_noted(cfg_str(cfg, "bundle"), manifest);
    auto method = synth_method_from_name(cfg_str(cfg, "method"));
    auto spec = synth_spec_from_cfg(cfg, method, cfg.value("seed", std::uint64_t{0}));
    auto syn = synthesize(bundle, spec);
    save_bundle_noted(out_dir, out_dir, syn, manifest);
    manifest.write(out_dir);
    std::cout << "synthesize: " << synth_method_name(method) << " wrote "
              << syn.parent.num_subjects() << " subjects under " << out_dir.string() << "\n";
}

void exec_evaluate(const ordered_json& cfg) {
    Manifest manifest{"evaluate", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    auto orig = load_bundle_noted(cfg_str(cfg, "original"), manifest);
    auto syn = load_bundle_noted(cfg_str(cfg, "synthetic"), manifest);
    std::string label = cfg.value("label", "synthetic");
    auto report = evaluate(orig, syn, label, cfg.value("bins", 10), cfg.value("threads", 1));

    auto report_path = out_dir / (label + ".simpro.json");
    atomic_write_text(report_path, report_to_json_text(report));
    manifest.note_output(out_dir, report_path);
    if (cfg.value("format", "json") == "csv") {
        for (const CorrelationSeries* series : {&report.ks, &report.w}) {
            auto path = out_dir / (label + "_" + metric_name(series->metric) + ".csv");
            atomic_write_text(path, series_to_csv_text(*series));
            manifest.note_output(out_dir, path);
        }
    }
    manifest.write(out_dir);
    std::cout << "evaluate: " << report.ks.values.size() << " pairs, mean p "
              << format_double(report.ks_summary.mean) << ", mean W "
              << format_double(report.w_summary.mean) << " -> " << report_path.string() << "\n";
}

void exec_compare(const ordered_json& cfg) {
    Manifest manifest{"compare", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    std::string path_a = cfg_str(cfg, "report_a");
    std::string path_b = cfg_str(cfg, "report_b");
    auto a = report_from_json_text(read_text_file(path_a), path_a);
    auto b = report_from_json_text(read_text_file(path_b), path_b);
    manifest.note_input(path_a);
    manifest.note_input(path_b);

    auto mode = w_threshold_mode_from_name(cfg.value("w_threshold_mode", "abs-delta"));
    auto cmp = compare(a, b, cfg.value("t_p", 0.333), mode);
    auto stem = cmp.label_a + "_vs_" + cmp.label_b;
    auto cmp_path = out_dir / (stem + ".comparison.json");
    atomic_write_text(cmp_path, comparison_to_json_text(cmp));
    manifest.note_output(out_dir, cmp_path);
    if (cfg.value("format", "json") == "csv") {
        auto pairs_path = out_dir / (stem + ".pairs.csv");
        atomic_write_text(pairs_path, pairs_to_csv_text(cmp));
        manifest.note_output(out_dir, pairs_path);
    }
    manifest.write(out_dir);
    std::cout << "compare: " << cmp.label_a << " vs " << cmp.label_b << " net p "
              << cmp.counts_p.net() << ", net W " << cmp.counts_w.net() << ", similarity p "
              << format_double(cmp.similarity_ks) << " -> " << cmp_path.string() << "\n";
}

void exec_plotdata(const ordered_json& cfg) {
    Manifest manifest{"plotdata", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    std::string report_path = cfg.value("report", "");
    std::string comparison_path = cfg.value("comparison", "");
    if (report_path.empty() == comparison_path.empty()) {
        throw InputError("pass exactly one of --report or --comparison");
    }
    std::vector<PlotSeries> series;
    if (!report_path.empty()) {
        series = plot_report(report_from_json_text(read_text_file(report_path), report_path));
        manifest.note_input(report_path);
    } else {
        series = plot_comparison(
            comparison_from_json_text(read_text_file(comparison_path), comparison_path));
        manifest.note_input(comparison_path);
    }
    for (const auto& path : write_plot_series(series, out_dir)) {
        manifest.note_output(out_dir, path);
    }
    manifest.write(out_dir);
    std::cout << "plotdata: " << series.size() << " series under " << out_dir.string() << "\n";
}

void exec_pipeline(const ordered_json& cfg) {
    Manifest manifest{"pipeline", cfg};
    fs::path out_dir = cfg_str(cfg, "out_dir");
    std::string id = cfg.value("id", "");
    auto a = load_table_noted(cfg_str(cfg, "table_a"), cfg_str(cfg, "schema_a"), id, manifest);
    auto b = load_table_noted(cfg_str(cfg, "table_b"), cfg_str(cfg, "schema_b"), id, manifest);
    auto bundle = run_derec(a, b, cfg.value("threshold", 0.95));
    save_bundle_noted(out_dir, out_dir / "bundle", bundle, manifest);

    auto method = synth_method_from_name(cfg_str(cfg, "method"));
    auto baseline = synth_method_from_name(cfg.value("baseline", "independent"));
    if (baseline == SynthMethod::External) {
        throw InputError("the baseline must be a built-in synthesizer");
    }
    std::uint64_t seed = cfg.value("seed", std::uint64_t{0});
    std::string label_m = synth_method_name(method);
    std::string label_b = synth_method_name(baseline);
    if (label_m == label_b) label_b += "_baseline";

    // the baseline gets its own stream so equal methods still differ
    auto syn_m = synthesize(bundle, synth_spec_from_cfg(cfg, method, seed));
    auto syn_b = synthesize(bundle, synth_spec_from_cfg(cfg, baseline, seed + 1));
    save_bundle_noted(out_dir, out_dir / ("synthetic_" + label_m), syn_m, manifest);
    save_bundle_noted(out_dir, out_dir / ("synthetic_" + label_b), syn_b, manifest);

    int bins = cfg.value("bins", 10);
    int threads = cfg.value("threads", 1);
    auto report_m = evaluate(bundle, syn_m, label_m, bins, threads);
    auto report_b = evaluate(bundle, syn_b, label_b, bins, threads);
    for (const SimproReport* report : {&report_m, &report_b}) {
        auto path = out_dir / (report->synthesizer + ".simpro.json");
        atomic_write_text(path, report_to_json_text(*report));
        manifest.note_output(out_dir, path);
    }

    auto mode = w_threshold_mode_from_name(cfg.value("w_threshold_mode", "abs-delta"));
    auto cmp = compare(report_m, report_b, cfg.value("t_p", 0.333), mode);
    auto cmp_path = out_dir / (label_m + "_vs_" + label_b + ".comparison.json");
    atomic_write_text(cmp_path, comparison_to_json_text(cmp));
    manifest.note_output(out_dir, cmp_path);
    manifest.write(out_dir);
    std::cout << "pipeline: " << label_m << " vs " << label_b << " net p " << cmp.counts_p.net()
              << ", net W " << cmp.counts_w.net() << " -> " << cmp_path.string() << "\n";
}

// Resolves the subcommand's config: straight from flags, or from a prior
// manifest with only --out-dir eligible for override.
ordered_json resolve_config(const std::string& command, const std::string& from_manifest,
                            const ordered_json& flags, bool out_dir_given) {
    if (from_manifest.empty()) return flags;
    nlohmann::json doc = nlohmann::json::parse(read_text_file(from_manifest), nullptr, false);
    if (doc.is_discarded() || !doc.contains("command") || !doc.contains("config")) {
        throw ParseError("invalid manifest document " + from_manifest);
    }
    if (doc.at("command").get<std::string>() != command) {
        throw InputError("manifest records a '" + doc.at("command").get<std::string>() +
                         "' run, not '" + command + "'");
    }
    ordered_json cfg = doc.at("config");
    if (out_dir_given) cfg["out_dir"] = flags.at("out_dir");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decoupled synthesis pipeline for two-party tabular data"};
    app.require_subcommand(1);

    // shared holders; each subcommand binds the subset it uses
    std::string table_a, table_b, schema_a, schema_b, id, out_dir = ".";
    std::string method, baseline = "independent", label = "synthetic";
    std::string bundle_dir, original_dir, synthetic_dir, report_a, report_b;
    std::string report_path, comparison_path, spec_path, exchange_dir;
    std::string format = "json", w_mode = "abs-delta", from_manifest;
    double threshold = 0.95, t_p = 0.333, poll_seconds = 0.5, timeout_seconds = 60.0;
    int bins = 10, threads = 1;
    std::uint64_t seed = 0;

    int exit_code = 0;
    auto guard = [&exit_code](auto&& fn) {
        return [&exit_code, fn = std::forward<decltype(fn)>(fn)]() {
            fn();
            exit_code = 0;
        };
    };

    auto add_out_dir = [&](CLI::App* cmd) {
        return cmd->add_option("--out-dir", out_dir, "Output directory (default: .)");
    };
    auto add_manifest = [&](CLI::App* cmd) {
        cmd->add_option("--from-manifest", from_manifest,
                        "Rerun with the config recorded in a prior manifest.json; only "
                        "--out-dir may be overridden");
    };

    auto* split = app.add_subcommand("split", "Partition two tables into parent and children");
    split->add_option("--table-a", table_a, "First source CSV");
    split->add_option("--table-b", table_b, "Second source CSV");
    split->add_option("--schema-a", schema_a, "Schema JSON for the first source");
    split->add_option("--schema-b", schema_b, "Schema JSON for the second source");
    split->add_option("--id", id, "Assert the shared identifier column name");
    split->add_option("--threshold", threshold,
                      "Constant-within-subject fraction for contextual (default 0.95)");
    auto* split_out = add_out_dir(split);
    add_manifest(split);
    split->callback(guard([&] {
        ordered_json flags{{"table_a", table_a}, {"table_b", table_b}, {"schema_a", schema_a},
                           {"schema_b", schema_b}, {"id", id},         {"threshold", threshold},
                           {"out_dir", out_dir}};
        exec_split(resolve_config("split", from_manifest, flags, !!*split_out));
    }));

    auto* gen = app.add_subcommand("gen", "Generate planted two-party data");
    gen->add_option("--spec", spec_path, "Generator spec JSON");
    auto* gen_out = add_out_dir(gen);
    add_manifest(gen);
    gen->callback(guard([&] {
        ordered_json flags{{"spec", spec_path}, {"out_dir", out_dir}};
        exec_gen(resolve_config("gen", from_manifest, flags, !!*gen_out));
    }));

    auto* synth = app.add_subcommand("synthesize", "Synthesize a bundle with a chosen method");
    synth->add_option("--bundle", bundle_dir, "Bundle directory from split");
    synth->add_option("--method", method, "copy | independent | conditional | external")
        ->check(CLI::IsMember({"copy", "independent", "conditional", "external"}));
    synth->add_option("--seed", seed, "Synthesizer seed (default 0)");
    synth->add_option("--exchange-dir", exchange_dir, "Exchange directory (external only)");
    synth->add_option("--poll-seconds", poll_seconds,
                      "External poll interval in seconds (default 0.5)");
    synth->add_option("--timeout-seconds", timeout_seconds,
                      "External wait budget in seconds (default 60)");
    auto* synth_out = add_out_dir(synth);
    add_manifest(synth);
    synth->callback(guard([&] {
        ordered_json flags{{"bundle", bundle_dir},
                           {"method", method},
                           {"seed", seed},
                           {"exchange_dir", exchange_dir},
                           {"poll_seconds", poll_seconds},
                           {"timeout_seconds", timeout_seconds},
                           {"out_dir", out_dir}};
        exec_synthesize(resolve_config("synthesize", from_manifest, flags, !!*synth_out));
    }));

    auto* eval = app.add_subcommand("evaluate", "Score a synthetic bundle against the original");
    eval->add_option("--original", original_dir, "Original bundle directory");
    eval->add_option("--synthetic", synthetic_dir, "Synthetic bundle directory");
    eval->add_option("--label", label, "Synthesizer label for the report (default: synthetic)");
    eval->add_option("--bins", bins, "Quantile bins for numeric given columns (default 10)");
    eval->add_option("--threads", threads, "Worker threads (default 1)");
    eval->add_option("--format", format, "Report format: json | csv extras (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* eval_out = add_out_dir(eval);
    add_manifest(eval);
    eval->callback(guard([&] {
        ordered_json flags{{"original", original_dir},
                           {"synthetic", synthetic_dir},
                           {"label", label},
                           {"bins", bins},
                           {"threads", threads},
                           {"format", format},
                           {"out_dir", out_dir}};
        exec_evaluate(resolve_config("evaluate", from_manifest, flags, !!*eval_out));
    }));

    auto* cmp = app.add_subcommand("compare", "Compare two evaluation reports");
    cmp->add_option("--report-a", report_a, "First report (.simpro.json)");
    cmp->add_option("--report-b", report_b, "Second report (.simpro.json)");
    cmp->add_option("--t-p", t_p, "No-change band for p-value deltas (default 0.333)");
    cmp->add_option("--w-threshold-mode", w_mode,
                    "W band rule: abs-delta | pooled-median (default abs-delta)")
        ->check(CLI::IsMember({"abs-delta", "pooled-median"}));
    cmp->add_option("--format", format, "Output format: json | csv extras (default json)")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* cmp_out = add_out_dir(cmp);
    add_manifest(cmp);
    cmp->callback(guard([&] {
        ordered_json flags{{"report_a", report_a},
                           {"report_b", report_b},
                           {"t_p", t_p},
                           {"w_threshold_mode", w_mode},
                           {"format", format},
                           {"out_dir", out_dir}};
        exec_compare(resolve_config("compare", from_manifest, flags, !!*cmp_out));
    }));

    auto* plot = app.add_subcommand("plotdata", "Emit plot-ready series from a report");
    plot->add_option("--report", report_path, "Evaluation report (.simpro.json)");
    plot->add_option("--comparison", comparison_path, "Comparison document (.comparison.json)");
    auto* plot_out = add_out_dir(plot);
    add_manifest(plot);
    plot->callback(guard([&] {
        ordered_json flags{
            {"report", report_path}, {"comparison", comparison_path}, {"out_dir", out_dir}};
        exec_plotdata(resolve_config("plotdata", from_manifest, flags, !!*plot_out));
    }));

    auto* pipe = app.add_subcommand("pipeline",
                                    "split, synthesize, evaluate, and compare in one run");
    pipe->add_option("--table-a", table_a, "First source CSV");
    pipe->add_option("--table-b", table_b, "Second source CSV");
    pipe->add_option("--schema-a", schema_a, "Schema JSON for the first source");
    pipe->add_option("--schema-b", schema_b, "Schema JSON for the second source");
    pipe->add_option("--id", id, "Assert the shared identifier column name");
    pipe->add_option("--threshold", threshold,
                     "Constant-within-subject fraction for contextual (default 0.95)");
    pipe->add_option("--method", method, "copy | independent | conditional | external")
        ->check(CLI::IsMember({"copy", "independent", "conditional", "external"}));
    pipe->add_option("--baseline", baseline,
                     "Built-in baseline synthesizer (default independent)")
        ->check(CLI::IsMember({"copy", "independent", "conditional"}));
    pipe->add_option("--seed", seed, "Synthesizer seed; the baseline uses seed + 1");
    pipe->add_option("--bins", bins, "Quantile bins for numeric given columns (default 10)");
    pipe->add_option("--threads", threads, "Worker threads (default 1)");
    pipe->add_option("--t-p", t_p, "No-change band for p-value deltas (default 0.333)");
    pipe->add_option("--w-threshold-mode", w_mode,
                     "W band rule: abs-delta | pooled-median (default abs-delta)")
        ->check(CLI::IsMember({"abs-delta", "pooled-median"}));
    pipe->add_option("--exchange-dir", exchange_dir, "Exchange directory (external only)");
    pipe->add_option("--poll-seconds", poll_seconds,
                     "External poll interval in seconds (default 0.5)");
    pipe->add_option("--timeout-seconds", timeout_seconds,
                     "External wait budget in seconds (default 60)");
    auto* pipe_out = add_out_dir(pipe);
    add_manifest(pipe);
    pipe->callback(guard([&] {
        ordered_json flags{{"table_a", table_a},
                           {"table_b", table_b},
                           {"schema_a", schema_a},
                           {"schema_b", schema_b},
                           {"id", id},
                           {"threshold", threshold},
                           {"method", method},
                           {"baseline", baseline},
                           {"seed", seed},
                           {"bins", bins},
                           {"threads", threads},
                           {"t_p", t_p},
                           {"w_threshold_mode", w_mode},
                           {"exchange_dir", exchange_dir},
                           {"poll_seconds", poll_seconds},
                           {"timeout_seconds", timeout_seconds},
                           {"out_dir", out_dir}};
        exec_pipeline(resolve_config("pipeline", from_manifest, flags, !!*pipe_out));
    }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "derec: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "derec: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

// eigenexpr: command-line front end for the eigenfaces expression pipeline.
// Exit codes: 0 success, 1 usage error, 2 runtime/data error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigenexpr/classify.hpp"
#include "eigenexpr/eval.hpp"
#include "eigenexpr/ingest.hpp"
#include "eigenexpr/pca.hpp"
#include "eigenexpr/synth.hpp"

using namespace eigenexpr;

namespace {

// Prefixes errors with the pipeline stage that raised them.
template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(stage + ": " + e.what());
    }
}

unsigned env_threads() {
    const char* raw = std::getenv("EIGENEXPR_THREADS");
    if (raw == nullptr || *raw == '\0') return 0; // auto
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (end == raw || *end != '\0')
        throw ValueError("EIGENEXPR_THREADS: not a number: '" + std::string(raw) +
                         "'");
    return static_cast<unsigned>(v);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct TrainArgs {
    std::string manifest;
    std::string model;
    std::size_t width = 64;
    std::size_t height = 64;
    double variance = 0.95;
    std::size_t max_components = 0;
};

void run_train(const TrainArgs& args) {
    IngestConfig icfg;
    icfg.width = args.width;
    icfg.height = args.height;
    const Dataset ds =
        with_stage("ingest", [&] { return load_manifest(args.manifest, icfg); });

    TrainConfig tcfg;
    tcfg.variance_threshold = args.variance;
    tcfg.max_components = args.max_components;
    const EigenModel model = with_stage("train", [&] { return train(ds, tcfg); });
    with_stage("save", [&] { save_model(model, args.model); });

    std::cout << "trained: M=" << model.sample_count()
              << " N=" << model.pixel_count() << " k=" << model.component_count()
              << "\n"
              << "cumulative variance at k: "
              << fmt(explained_variance(model, model.component_count())) << "\n"
              << "model written to " << args.model << "\n";
}

struct ClassifyArgs {
    std::string model;
    std::string image;
    std::string metric = "euclidean";
    std::string method = "nearest_neighbor";
    std::size_t top = 3;
    bool json = false;
};

ClassifierConfig classifier_config(const std::string& method,
                                   const std::string& metric) {
    ClassifierConfig cfg;
    if (method == "nearest_neighbor") {
        cfg.method = Method::nearest_neighbor;
    } else if (method == "nearest_centroid") {
        cfg.method = Method::nearest_centroid;
    } else {
        throw ValueError("unknown method '" + method +
                         "' (nearest_neighbor or nearest_centroid)");
    }
    if (metric == "euclidean") {
        cfg.metric = Metric::euclidean;
    } else if (metric == "eigen_weighted") {
        cfg.metric = Metric::eigen_weighted;
    } else {
        throw ValueError("unknown metric '" + metric +
                         "' (euclidean or eigen_weighted)");
    }
    return cfg;
}

void run_classify(const ClassifyArgs& args) {
    const EigenModel model =
        with_stage("model", [&] { return load_model(args.model); });
    IngestConfig icfg;
    icfg.width = model.width;
    icfg.height = model.height;
    const Vec pixels =
        with_stage("image", [&] { return load_image(args.image, icfg); });
    const ClassifierConfig cfg = classifier_config(args.method, args.metric);
    const ClassificationResult result =
        with_stage("classify", [&] { return classify(model, pixels, cfg); });

    const std::size_t shown = std::min(args.top, result.ranked.size());
    if (args.json) {
        nlohmann::ordered_json j;
        j["label"] = result.label;
        j["distance"] = result.distance;
        j["rejected"] = result.rejected;
        j["ranked"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < shown; ++i) {
            nlohmann::ordered_json m;
            m["index"] = result.ranked[i].index;
            m["label"] = result.ranked[i].label;
            m["distance"] = result.ranked[i].distance;
            j["ranked"].push_back(m);
        }
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::cout << "label: " << result.label << "\n"
              << "distance: " << fmt(result.distance) << "\n"
              << "top " << shown << ":\n";
    for (std::size_t i = 0; i < shown; ++i)
        std::cout << "  " << i + 1 << ". " << result.ranked[i].label << " (index "
                  << result.ranked[i].index << ", distance "
                  << fmt(result.ranked[i].distance) << ")\n";
}

struct EvaluateArgs {
    std::string model;
    std::string manifest;
    std::string report_path;
    std::string chart_path;
    std::string format = "text";
    bool json = false;
};

void run_evaluate(const EvaluateArgs& args) {
    const EigenModel model =
        with_stage("model", [&] { return load_model(args.model); });
    IngestConfig icfg;
    icfg.width = model.width;
    icfg.height = model.height;
    const Dataset ds =
        with_stage("ingest", [&] { return load_manifest(args.manifest, icfg); });

    bool any_test = false;
    std::map<std::string, std::size_t> totals;
    for (const Sample& s : ds.samples) {
        ++totals[s.label];
        any_test = any_test || s.split == Split::test;
    }
    if (!any_test) throw ValueError("evaluate: manifest has no test-split samples");

    const auto batch = with_stage("classify", [&] {
        return batch_classify(model, ds, ClassifierConfig{}, env_threads());
    });
    const EvaluationReport report =
        with_stage("score", [&] { return score(batch, totals); });

    std::string format = args.format;
    if (args.json) format = "json";
    TableStyle style;
    if (format == "text") {
        style = TableStyle::text;
    } else if (format == "csv") {
        style = TableStyle::csv;
    } else if (format == "json") {
        style = TableStyle::json;
    } else {
        throw ValueError("unknown format '" + format + "' (text, csv, or json)");
    }
    std::cout << render_table(report, style, 2);

    if (!args.report_path.empty()) {
        with_stage("report", [&] {
            std::ofstream out(args.report_path, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError(args.report_path + ": cannot open for writing");
            out << render_table(report, TableStyle::csv, 2);
            if (!out) throw IoError(args.report_path + ": write failed");
        });
    }
    if (!args.chart_path.empty())
        with_stage("chart", [&] { emit_chart_data(report, args.chart_path); });
}

struct InspectArgs {
    std::string model;
};

void run_inspect(const InspectArgs& args) {
    const EigenModel model =
        with_stage("model", [&] { return load_model(args.model); });

    std::cout << "model: " << args.model << "\n"
              << "dims: " << model.width << "x" << model.height
              << " (N=" << model.pixel_count() << ")\n"
              << "training samples: M=" << model.sample_count() << "\n"
              << "components: k=" << model.component_count() << "\n"
              << "variance threshold: " << fmt(model.config.variance_threshold)
              << "\n"
              << "eigenvalue spectrum (descending, cumulative variance):\n";
    for (std::size_t i = 0; i < model.component_count(); ++i) {
        char line[96];
        std::snprintf(line, sizeof(line), "  %3zu: %.9e  %8.4f%%\n", i + 1,
                      model.eigenvalues[i],
                      100.0 * explained_variance(model, i + 1));
        std::cout << line;
    }
    std::cout << "training labels:\n";
    std::map<std::string, std::size_t> counts;
    for (const std::string& label : model.train_labels) ++counts[label];
    for (const auto& [label, count] : counts)
        std::cout << "  " << label << ": " << count << "\n";
}

struct SynthArgs {
    SynthConfig cfg;
    std::string out;
};

void run_synth(const SynthArgs& args) {
    const std::string manifest =
        with_stage("synth", [&] { return generate_synthetic(args.cfg, args.out); });
    std::cout << "dataset written to " << args.out << "\n"
              << "manifest: " << manifest << "\n"
              << "rows: " << args.cfg.classes * (args.cfg.per_class_train +
                                                 args.cfg.per_class_test)
              << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenfaces facial-expression recognition toolkit"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* cmd_train = app.add_subcommand("train", "Train an eigenfaces model");
    cmd_train->add_option("--manifest", train_args.manifest, "Dataset manifest CSV")
        ->required();
    cmd_train->add_option("--model", train_args.model, "Output model path")
        ->required();
    cmd_train->add_option("--width", train_args.width, "Working image width");
    cmd_train->add_option("--height", train_args.height, "Working image height");
    cmd_train->add_option("--variance", train_args.variance,
                          "Cumulative variance threshold in (0,1]");
    cmd_train->add_option("--max-components", train_args.max_components,
                          "Component cap (0 = none)");

    ClassifyArgs classify_args;
    CLI::App* cmd_classify =
        app.add_subcommand("classify", "Classify a single image");
    cmd_classify->add_option("--model", classify_args.model, "Model path")
        ->required();
    cmd_classify->add_option("--image", classify_args.image, "Probe image")
        ->required();
    cmd_classify->add_option("--metric", classify_args.metric,
                             "euclidean or eigen_weighted");
    cmd_classify->add_option("--method", classify_args.method,
                             "nearest_neighbor or nearest_centroid");
    cmd_classify->add_option("--top", classify_args.top, "Ranked matches to print");
    cmd_classify->add_flag("--json", classify_args.json, "Machine-readable output");

    EvaluateArgs eval_args;
    CLI::App* cmd_evaluate =
        app.add_subcommand("evaluate", "Score a test split against a model");
    cmd_evaluate->add_option("--model", eval_args.model, "Model path")->required();
    cmd_evaluate->add_option("--manifest", eval_args.manifest, "Dataset manifest")
        ->required();
    cmd_evaluate->add_option("--report", eval_args.report_path,
                             "Write the table as CSV here");
    cmd_evaluate->add_option("--chart", eval_args.chart_path,
                             "Write chart data CSV here");
    cmd_evaluate->add_option("--format", eval_args.format, "text, csv, or json");
    cmd_evaluate->add_flag("--json", eval_args.json, "Shortcut for --format json");

    SynthArgs synth_args;
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "Generate a synthetic dataset");
    cmd_synth->add_option("--classes", synth_args.cfg.classes, "Class count");
    cmd_synth->add_option("--train", synth_args.cfg.per_class_train,
                          "Training images per class");
    cmd_synth->add_option("--test", synth_args.cfg.per_class_test,
                          "Test images per class");
    cmd_synth->add_option("--width", synth_args.cfg.width, "Image width");
    cmd_synth->add_option("--height", synth_args.cfg.height, "Image height");
    cmd_synth->add_option("--noise", synth_args.cfg.noise_sigma,
                          "Gaussian pixel noise sigma");
    cmd_synth->add_option("--seed", synth_args.cfg.seed, "RNG seed");
    cmd_synth->add_option("--out", synth_args.out, "Output directory")->required();

    InspectArgs inspect_args;
    CLI::App* cmd_inspect =
        app.add_subcommand("inspect", "Summarize a model file");
    cmd_inspect->add_option("--model", inspect_args.model, "Model path")
        ->required();

    try {
        app.parse(argc, argv);
        if (cmd_train->parsed()) run_train(train_args);
        if (cmd_classify->parsed()) run_classify(classify_args);
        if (cmd_evaluate->parsed()) run_evaluate(eval_args);
        if (cmd_synth->parsed()) run_synth(synth_args);
        if (cmd_inspect->parsed()) run_inspect(inspect_args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

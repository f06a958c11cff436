// Copyright 2026 The seizeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: synth, ingest, partition, features, run, score, plot.

#include "seizeval/edf.hpp"
#include "seizeval/error.hpp"
#include "seizeval/experiment.hpp"
#include "seizeval/score.hpp"
#include "seizeval/svg.hpp"
#include "seizeval/synthgen.hpp"
#include "seizeval/text.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace {

using namespace seizeval;

// Raw option values; defaults come from the library's config structs.
struct Options {
    ExperimentConfig exp;
    std::string data_dir;
    std::string channels = "all";
    std::string arrangement = "fact_k";
    std::string cv = "l1o";
    std::string scope = "personalized";
    std::string predictor = "tree_ensemble";
    std::string aggregation = "fold_average";
    int max_depth = -1;
    long long permutation_seed = -1;
    std::string out;
};

std::vector<std::string> parse_channels(const std::string& spec)
{
    if (spec.empty() || spec == "all") return {};
    if (spec == "chbmit") return chbmit_common_channels();
    std::vector<std::string> out;
    for (auto& c : split_csv_line(spec))
        if (!trim(c).empty()) out.push_back(trim(c));
    return out;
}

void add_common(CLI::App* app, Options& o)
{
    app->set_config("--config", "", "Read options from a key = value config file");
    app->add_option("--seed", o.exp.seed, "Master seed")->capture_default_str();
    app->add_option("--jobs", o.exp.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--out", o.out, "Output directory or file");
}

void add_source(CLI::App* app, Options& o)
{
    auto& s = o.exp.source.synth;
    app->add_option("--data", o.data_dir, "Directory of EDF files and annotations.csv (default: synthetic data)");
    app->add_option("--channels", o.channels, "all, chbmit, or a comma-separated label list")->capture_default_str();
    app->add_option("--subjects", s.n_subjects, "Synthetic subjects")->capture_default_str();
    app->add_option("--hours", s.hours_per_subject, "Synthetic hours per subject")->capture_default_str();
    app->add_option("--fs", s.fs, "Synthetic sampling rate (Hz)")->capture_default_str();
    app->add_option("--n-channels", s.n_channels, "Synthetic channel count")->capture_default_str();
    app->add_option("--seizure-gain", s.seizure_gain, "Synthetic seizure amplitude gain")->capture_default_str();
    app->add_option("--seizure-freq", s.seizure_freq_hz, "Synthetic seizure rhythm (Hz)")->capture_default_str();
    app->add_option("--freq-spread", s.freq_spread, "Relative spread of subject rhythms")->capture_default_str();
    app->add_option("--amplitude-ratio", s.amplitude_ratio, "Subject amplitude ratio")->capture_default_str();
    app->add_option("--artifact-rate", s.artifact_rate_per_h, "Artifacts per hour")->capture_default_str();
    app->add_option("--artifact-gain", s.artifact_gain, "Artifact amplitude gain")->capture_default_str();
    app->add_option("--state-sd", s.state_sd, "Background log-amplitude drift sd")->capture_default_str();
    app->add_option("--strength-spread", s.seizure_strength_spread, "Per-seizure strength spread")
        ->capture_default_str();
    app->add_option("--focal-width", s.focal_width_channels, "Seizure focal width in channels (0: global)")
        ->capture_default_str();
    app->add_option("--synth-seed", s.rng_seed, "Synthetic data seed")->capture_default_str();
}

void add_arrangement(CLI::App* app, Options& o)
{
    auto& a = o.exp.arrangement;
    app->add_option("--arrangement", o.arrangement, "fact_k, stos or win_h")->capture_default_str();
    app->add_option("--factor", a.factor_k, "k of the Fact-k subset")->capture_default_str();
    app->add_option("--window-hours", a.window.window_h, "File length of win_h")->capture_default_str();
    app->add_option("--first-fold-hours", a.window.first_fold_min_h, "Minimum first file of win_h")
        ->capture_default_str();
    app->add_option("--first-fold-seizures", a.window.first_fold_min_seizures, "Seizures in first file of win_h")
        ->capture_default_str();
    app->add_option("--cv", o.cv, "l1o or tscv")->capture_default_str();
    app->add_option("--scope", o.scope, "personalized or generalized")->capture_default_str();
}

void add_windowing(CLI::App* app, Options& o)
{
    app->add_option("--ws", o.exp.windowing.window_s, "Window size (s)")->capture_default_str();
    app->add_option("--wss", o.exp.windowing.step_s, "Window step size (s)")->capture_default_str();
    app->add_option("--band-lo", o.exp.bandpass.lo_hz, "Band-pass low edge (Hz)")->capture_default_str();
    app->add_option("--band-hi", o.exp.bandpass.hi_hz, "Band-pass high edge (Hz)")->capture_default_str();
    app->add_option("--band-order", o.exp.bandpass.order, "Butterworth order")->capture_default_str();
}

void add_model(CLI::App* app, Options& o)
{
    auto& p = o.exp.predictor;
    auto& pp = o.exp.postprocess;
    app->add_option("--smooth", pp.smooth_window_s, "Majority smoothing window (s)")->capture_default_str();
    app->add_option("--merge-gap", pp.merge_gap_s, "Merge events closer than this (s)")->capture_default_str();
    app->add_option("--min-event", pp.min_event_s, "Drop events shorter than this (s)")->capture_default_str();
    app->add_option("--predictor", o.predictor, "tree_ensemble or threshold_baseline")->capture_default_str();
    app->add_option("--trees", p.n_trees, "Trees in the ensemble")->capture_default_str();
    app->add_option("--max-depth", o.max_depth, "Tree depth limit (-1: none)")->capture_default_str();
    app->add_option("--max-bins", p.max_bins, "Split candidates per feature")->capture_default_str();
    app->add_option("--predictor-seed", p.rng_seed, "Extra seed mixed into tree seeds")->capture_default_str();
    app->add_option("--threshold-feature", p.threshold_feature, "Baseline feature")->capture_default_str();
    app->add_option("--threshold-value", p.threshold_value, "Baseline threshold")->capture_default_str();
    app->add_option("--aggregation", o.aggregation, "fold_average or pooled")->capture_default_str();
    app->add_option("--permutation-seed", o.permutation_seed, "Rotate training labels per file (negative control; -1: off)")
        ->capture_default_str();
}

// Turns raw option text into the typed config.
ExperimentConfig finish(Options& o)
{
    auto cfg = o.exp;
    if (!o.data_dir.empty()) {
        cfg.source.kind = DataSource::Kind::directory;
        cfg.source.dir = o.data_dir;
        cfg.source.channels = parse_channels(o.channels);
    }
    cfg.arrangement.kind = parse_arrangement_kind(o.arrangement);
    cfg.cv = parse_cv_scheme(o.cv);
    cfg.scope = parse_scope(o.scope);
    cfg.predictor.kind = parse_predictor_kind(o.predictor);
    cfg.predictor.max_depth = o.max_depth < 0 ? std::nullopt : std::optional<int>(o.max_depth);
    cfg.aggregation = parse_aggregation(o.aggregation);
    if (o.permutation_seed >= 0) cfg.label_permutation_seed = static_cast<std::uint64_t>(o.permutation_seed);
    cfg.out_dir = o.out;
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) fail(ErrorKind::io, "cli", "cannot write '" + path.string() + "'");
}

std::filesystem::path require_out(const Options& o, const char* what)
{
    if (o.out.empty()) fail(ErrorKind::validation, "cli", std::string("--out is required for ") + what);
    return o.out;
}

int cmd_synth(Options& o)
{
    const auto dir = require_out(o, "synth");
    auto cfg = o.exp.source.synth;
    const auto result = generate(cfg, o.exp.jobs);
    write_recording_dir(dir, result.recordings, o.exp.jobs);
    nlohmann::ordered_json j;
    j["config"] = to_json(cfg);
    auto subjects = nlohmann::ordered_json::array();
    for (const auto& s : result.subjects) {
        auto events = nlohmann::ordered_json::array();
        for (const auto& e : s.seizures) events.push_back({e.start(), e.end()});
        subjects.push_back({{"subject", s.subject_id},
                            {"background_uv", s.background_uv},
                            {"seizure_freq_hz", s.seizure_freq_hz},
                            {"seizures_s", events},
                            {"artifacts", s.artifacts.size()}});
    }
    j["subjects"] = std::move(subjects);
    write_file(dir / "synth.json", j.dump(2) + "\n");
    std::cout << "wrote " << result.recordings.recordings().size() << " recordings, " << result.annotations.size()
              << " seizures to " << dir.string() << '\n';
    return 0;
}

int cmd_ingest(Options& o)
{
    if (o.data_dir.empty()) fail(ErrorKind::validation, "cli", "--data is required for ingest");
    const auto set = load_recording_dir(o.data_dir, IngestOptions{parse_channels(o.channels), o.exp.jobs});
    std::ostringstream spans;
    spans << kFileSpanHeader << '\n';
    std::size_t seizures = 0;
    for (const auto& subject : set.subjects()) {
        for (auto i : set.indices_of(subject)) {
            const auto& r = set.recordings()[i];
            spans << r.meta.subject_id << ',' << r.meta.file_id << ',' << format_double(r.meta.duration_s) << '\n';
            seizures += r.seizures.size();
        }
    }
    if (o.out.empty())
        std::cout << spans.str();
    else
        write_file(o.out, spans.str());
    std::cerr << set.subjects().size() << " subjects, " << set.recordings().size() << " files, " << seizures
              << " seizures\n";
    return 0;
}

PreparedData load(const ExperimentConfig& cfg) { return prepare_data(cfg.source, cfg.bandpass, cfg.jobs); }

int cmd_partition(Options& o)
{
    const auto cfg = finish(o);
    const auto dir = require_out(o, "partition");
    const auto data = load(cfg);
    const auto files = build_arrangement(cfg.arrangement, data.layouts, cfg.seed);
    const FoldPlan plan = cfg.scope == Scope::generalized ? make_scope_generalized(files)
                          : cfg.cv == CvScheme::l1o       ? make_folds_l1o(files)
                                                          : make_folds_tscv(files);
    validate_plan(plan, files);
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : files) arr.push_back(to_json(f));
    write_file(dir / "files.json", arr.dump(2) + "\n");
    write_file(dir / "foldplan.json", to_json(plan).dump(2) + "\n");
    std::cout << files.size() << " files, " << plan.folds.size() << " folds\n";
    return 0;
}

int cmd_features(Options& o)
{
    const auto cfg = finish(o);
    const auto dir = require_out(o, "features");
    const auto data = load(cfg);
    const auto files = build_arrangement(cfg.arrangement, data.layouts, cfg.seed);
    std::filesystem::create_directories(dir);
    for (const auto& f : files) {
        const auto m = extract_features(f, data.signals_of(f.meta.subject_id), cfg.windowing, cfg.jobs);
        std::ofstream out(dir / (f.meta.file_id + ".csv"));
        write_features_csv(out, m);
        if (!out) fail(ErrorKind::io, "cli", "cannot write features for " + f.meta.file_id);
    }
    std::cout << "wrote features of " << files.size() << " files to " << dir.string() << '\n';
    return 0;
}

int cmd_run(Options& o, const CLI::App& sub)
{
    const auto cfg = finish(o);
    require_out(o, "run");
    std::filesystem::create_directories(cfg.out_dir);
    write_file(cfg.out_dir / "config.ini", sub.config_to_str(true, false));
    const auto result = run_experiment(cfg);
    std::cout << report_csv_header() << '\n' << report_csv_row(result.average) << '\n';
    return 0;
}

struct ScoreOptions {
    std::string ref;
    std::string hyp;
    std::string labels;
    double duration = 0.0;
    std::string durations;
    double fs = 256.0;
    std::string format = "json";
    std::string aggregation = "pooled";
};

int cmd_score(const ScoreOptions& s, Options& o)
{
    const auto mode = parse_aggregation(s.aggregation);
    const auto ref = read_annotations_file(s.ref);
    ScoreReport report;
    if (!s.labels.empty()) {
        std::ifstream in(s.labels);
        if (!in) fail(ErrorKind::io, "cli", "cannot open '" + s.labels + "'");
        report = score_label_tracks(ref, read_label_tracks(in), mode);
    } else {
        if (s.hyp.empty()) fail(ErrorKind::validation, "cli", "score needs --hyp or --labels");
        const auto hyp = read_annotations_file(s.hyp);
        std::vector<FileSpan> spans;
        if (!s.durations.empty()) {
            std::ifstream in(s.durations);
            if (!in) fail(ErrorKind::io, "cli", "cannot open '" + s.durations + "'");
            spans = read_file_spans(in);
        }
        report = score_annotations(ref, hyp, spans, s.duration > 0.0 ? std::optional(s.duration) : std::nullopt, s.fs,
                                   mode);
    }
    std::string text;
    if (s.format == "csv")
        text = report_csv_header() + "\n" + report_csv_row(report) + "\n";
    else if (s.format == "json")
        text = to_json(report).dump(2) + "\n";
    else
        fail(ErrorKind::validation, "cli", "--format must be json or csv");
    if (o.out.empty())
        std::cout << text;
    else
        write_file(o.out, text);
    return 0;
}

int cmd_plot(const std::vector<std::string>& reports, const std::vector<std::string>& names, const std::string& title,
             Options& o)
{
    require_out(o, "plot");
    std::vector<PanelSeries> series;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::ifstream in(reports[i]);
        if (!in) fail(ErrorKind::io, "cli", "cannot open '" + reports[i] + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::parse, "cli", reports[i] + ": " + e.what());
        }
        PanelSeries s;
        s.name = i < names.size() ? names[i] : std::filesystem::path(reports[i]).parent_path().filename().string();
        s.average = report_from_json(j.at("average"));
        for (const auto& sub : j.at("subjects")) s.subjects.push_back(report_from_json(sub.at("report")));
        series.push_back(std::move(s));
    }
    write_file(o.out, render_metric_panel(series, title));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Validation toolkit for seizure-detection experiments"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Options o;
    ScoreOptions score;
    std::vector<std::string> plot_reports, plot_names;
    std::string plot_title = "seizure detection performance";

    auto* synth = app.add_subcommand("synth", "Generate synthetic recordings with planted seizures");
    add_common(synth, o);
    add_source(synth, o);

    auto* ingest = app.add_subcommand("ingest", "Check an EDF directory and list file spans");
    add_common(ingest, o);
    add_source(ingest, o);

    auto* partition = app.add_subcommand("partition", "Build arrangement files and the fold plan");
    add_common(partition, o);
    add_source(partition, o);
    add_arrangement(partition, o);
    add_windowing(partition, o);

    auto* features = app.add_subcommand("features", "Extract window features per arrangement file");
    add_common(features, o);
    add_source(features, o);
    add_arrangement(features, o);
    add_windowing(features, o);

    auto* run = app.add_subcommand("run", "Run a full experiment");
    add_common(run, o);
    add_source(run, o);
    add_arrangement(run, o);
    add_windowing(run, o);
    add_model(run, o);

    auto* sc = app.add_subcommand("score", "Score hypothesis annotations or labels against a reference");
    add_common(sc, o);
    sc->add_option("--ref", score.ref, "Reference annotation CSV")->required();
    sc->add_option("--hyp", score.hyp, "Hypothesis annotation CSV");
    sc->add_option("--labels", score.labels, "Hypothesis label file (subject,file,fs,labels)");
    sc->add_option("--duration", score.duration, "Duration of every file (s)");
    sc->add_option("--durations", score.durations, "CSV of subject,file,duration_s");
    sc->add_option("--fs", score.fs, "Scoring resolution for annotation inputs (Hz)")->capture_default_str();
    sc->add_option("--aggregation", score.aggregation, "pooled or fold_average (one fold per file)")->capture_default_str();
    sc->add_option("--format", score.format, "json or csv")->capture_default_str();

    auto* plot = app.add_subcommand("plot", "Draw report.json files as an SVG bar panel");
    add_common(plot, o);
    plot->add_option("--report", plot_reports, "report.json of a run (repeatable)")->required();
    plot->add_option("--name", plot_names, "Series name per report (repeatable)");
    plot->add_option("--title", plot_title, "Panel title");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*synth) return cmd_synth(o);
        if (*ingest) return cmd_ingest(o);
        if (*partition) return cmd_partition(o);
        if (*features) return cmd_features(o);
        if (*run) return cmd_run(o, *run);
        if (*sc) return cmd_score(score, o);
        if (*plot) return cmd_plot(plot_reports, plot_names, plot_title, o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

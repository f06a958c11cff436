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

#include "seizeval/experiment.hpp"

#include "seizeval/edf.hpp"
#include "seizeval/error.hpp"
#include "seizeval/filter.hpp"
#include "seizeval/parallel.hpp"
#include "seizeval/rng.hpp"
#include "seizeval/svg.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace seizeval {

namespace {

constexpr const char* kModule = "cli";

template <typename T>
void write_text(const std::filesystem::path& path, const T& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) fail(ErrorKind::io, kModule, "cannot write '" + path.string() + "'");
}

nlohmann::ordered_json predictor_json(const PredictorConfig& p)
{
    return {
        {"kind", to_string(p.kind)},
        {"n_trees", p.n_trees},
        {"max_depth", p.max_depth ? nlohmann::ordered_json(*p.max_depth) : nlohmann::ordered_json(nullptr)},
        {"max_bins", p.max_bins},
        {"rng_seed", p.rng_seed},
        {"threshold_feature", p.threshold_feature},
        {"threshold_value", p.threshold_value},
    };
}

std::uint64_t fold_seed(const ExperimentConfig& cfg, std::size_t fold)
{
    return splitmix64(cfg.seed ^ splitmix64(cfg.predictor.rng_seed + fold + 1));
}

}  // namespace

std::string Arrangement::name() const
{
    switch (kind) {
    case ArrangementKind::fact_k: return "fact" + std::to_string(factor_k);
    case ArrangementKind::stos: return "stos";
    case ArrangementKind::win_h: return "win" + format_double(window.window_h) + "h";
    }
    return {};
}

std::string_view to_string(ArrangementKind kind) noexcept
{
    switch (kind) {
    case ArrangementKind::fact_k: return "fact_k";
    case ArrangementKind::stos: return "stos";
    case ArrangementKind::win_h: return "win_h";
    }
    return "?";
}

ArrangementKind parse_arrangement_kind(std::string_view text)
{
    if (text == "fact_k" || text == "fact") return ArrangementKind::fact_k;
    if (text == "stos") return ArrangementKind::stos;
    if (text == "win_h" || text == "win") return ArrangementKind::win_h;
    fail(ErrorKind::parse, kModule, "unknown arrangement '" + std::string(text) + "' (expected fact_k, stos or win_h)");
}

void ExperimentConfig::validate() const
{
    if (arrangement.kind == ArrangementKind::fact_k && arrangement.factor_k < 1)
        fail(ErrorKind::validation, kModule, "factor must be >= 1");
    if (arrangement.kind == ArrangementKind::win_h && !(arrangement.window.window_h > 0.0))
        fail(ErrorKind::validation, kModule, "window hours must be positive");
    if (scope == Scope::personalized && cv == CvScheme::l1o && arrangement.kind == ArrangementKind::win_h)
        fail(ErrorKind::validation, kModule,
             "l1o needs one seizure per file; use arrangement fact_k or stos, or cv tscv");
    if (jobs < 1) fail(ErrorKind::validation, kModule, "jobs must be >= 1");
    if (source.kind == DataSource::Kind::directory && source.dir.empty())
        fail(ErrorKind::validation, kModule, "directory source needs a path");
    if (source.kind == DataSource::Kind::synthetic) source.synth.validate();
    windowing.validate();
    postprocess.validate();
    predictor.validate();
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg)
{
    nlohmann::ordered_json source;
    if (cfg.source.kind == DataSource::Kind::synthetic) {
        source["kind"] = "synthetic";
        source["synth"] = to_json(cfg.source.synth);
    } else {
        source["kind"] = "directory";
        source["dir"] = cfg.source.dir.string();
        source["channels"] = cfg.source.channels;
    }
    nlohmann::ordered_json j;
    j["source"] = std::move(source);
    j["arrangement"] = {
        {"kind", to_string(cfg.arrangement.kind)},
        {"factor_k", cfg.arrangement.factor_k},
        {"window_h", cfg.arrangement.window.window_h},
        {"first_fold_min_h", cfg.arrangement.window.first_fold_min_h},
        {"first_fold_min_seizures", cfg.arrangement.window.first_fold_min_seizures},
    };
    j["cv"] = to_string(cfg.cv);
    j["scope"] = to_string(cfg.scope);
    j["windowing"] = {{"ws", cfg.windowing.window_s}, {"wss", cfg.windowing.step_s}};
    j["postprocess"] = {{"smooth_s", cfg.postprocess.smooth_window_s},
                        {"merge_gap_s", cfg.postprocess.merge_gap_s},
                        {"min_event_s", cfg.postprocess.min_event_s}};
    j["predictor"] = predictor_json(cfg.predictor);
    j["aggregation"] = to_string(cfg.aggregation);
    j["bandpass"] = {{"lo_hz", cfg.bandpass.lo_hz}, {"hi_hz", cfg.bandpass.hi_hz}, {"order", cfg.bandpass.order}};
    j["seed"] = cfg.seed;
    j["label_permutation_seed"] = cfg.label_permutation_seed ? nlohmann::ordered_json(*cfg.label_permutation_seed)
                                                             : nlohmann::ordered_json(nullptr);
    return j;
}

const SubjectSignals& PreparedData::signals_of(const std::string& subject) const
{
    for (const auto& s : signals)
        if (s.subject_id == subject) return s;
    fail(ErrorKind::lookup, kModule, "no signals for subject '" + subject + "'");
}

PreparedData prepare_data(RecordingSet set, const BandpassConfig& bandpass, int jobs)
{
    PreparedData out;
    out.bandpass = bandpass;
    out.layouts = make_layouts(set);
    for (const auto& l : out.layouts) out.signals.push_back(take_signals(set, l.subject_id));

    std::vector<std::pair<std::size_t, std::size_t>> work;
    for (std::size_t s = 0; s < out.signals.size(); ++s)
        for (std::size_t c = 0; c < out.signals[s].channels.size(); ++c) work.emplace_back(s, c);
    parallel_for(work.size(), jobs, [&](std::size_t i) {
        auto& sig = out.signals[work[i].first];
        bandpass_filter_inplace(sig.channels[work[i].second], sig.fs, bandpass.lo_hz, bandpass.hi_hz, bandpass.order);
    });
    return out;
}

PreparedData prepare_data(const DataSource& source, const BandpassConfig& bandpass, int jobs)
{
    RecordingSet set;
    if (source.kind == DataSource::Kind::synthetic)
        set = generate(source.synth, jobs).recordings;
    else
        set = load_recording_dir(source.dir, IngestOptions{source.channels, jobs});
    auto out = prepare_data(std::move(set), bandpass, jobs);
    out.source = source;
    return out;
}

std::vector<DataFile> build_arrangement(const Arrangement& arrangement, std::span<const SubjectLayout> layouts,
                                        std::uint64_t seed)
{
    switch (arrangement.kind) {
    case ArrangementKind::fact_k: return build_fact_subset(layouts, arrangement.factor_k, seed);
    case ArrangementKind::stos: return build_seizure_to_seizure(layouts);
    case ArrangementKind::win_h: return build_fixed_windows(layouts, arrangement.window);
    }
    return {};
}

RunResult run_experiment(const ExperimentConfig& cfg, const PreparedData& data)
{
    cfg.validate();
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_text(cfg.out_dir / kIncompleteMarker, "run started; outputs in this directory are partial\n");
    }
    try {
        RunResult result;
        const auto files = build_arrangement(cfg.arrangement, data.layouts, cfg.seed);
        if (cfg.scope == Scope::generalized)
            result.plan = make_scope_generalized(files);
        else
            result.plan = cfg.cv == CvScheme::l1o ? make_folds_l1o(files) : make_folds_tscv(files);
        validate_plan(result.plan, files);

        std::map<std::string, std::size_t> file_index;
        for (std::size_t i = 0; i < files.size(); ++i) file_index[files[i].meta.file_id] = i;

        std::vector<FeatureMatrix> features(files.size());
        parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
            features[i] = extract_features(files[i], data.signals_of(files[i].meta.subject_id), cfg.windowing);
        });

        for (std::size_t f = 0; f < result.plan.folds.size(); ++f) {
            const auto& fold = result.plan.folds[f];
            FeatureMatrix train;
            std::optional<Rng> rotation;
            if (cfg.label_permutation_seed) rotation = Rng::derive(*cfg.label_permutation_seed, f);
            for (const auto& id : fold.train) {
                const std::size_t begin = train.labels.size();
                train.append(features[file_index.at(id)]);
                // A random rotation per file keeps the labels' run structure,
                // unlike an i.i.d. shuffle, so the null model still sees
                // contiguous "seizures" of the right length.
                if (rotation && train.labels.size() > begin) {
                    const auto first = train.labels.begin() + static_cast<std::ptrdiff_t>(begin);
                    const auto shift = rotation->below(train.labels.size() - begin);
                    std::rotate(first, first + static_cast<std::ptrdiff_t>(shift), train.labels.end());
                }
            }
            PredictorConfig pc = cfg.predictor;
            pc.rng_seed = fold_seed(cfg, f);
            const Model model = fit(train, pc, cfg.jobs);

            FoldResult fr;
            fr.subject_id = fold.subject_id;
            fr.index = f;
            fr.test_files = fold.test;
            for (const auto& id : fold.test) {
                const auto& file = files[file_index.at(id)];
                const double fs = file.meta.fs;
                const std::size_t n = file.n_samples();
                const auto window_labels = predict(model, features[file_index.at(id)], cfg.jobs);
                const LabelSeries raw(project_window_labels(window_labels, n, fs, cfg.windowing), fs);
                const LabelSeries hyp = postprocess(raw, cfg.postprocess);
                const LabelSeries ref = events_to_labels(file.events, fs, static_cast<double>(n) / fs);
                fr.counts += count_file(ref, hyp);
                for (const auto& e : labels_to_events(hyp)) fr.detections.push_back({file.meta.subject_id, id, e});
            }
            fr.report = finalize_report(fr.counts.dur, fr.counts.ep, fr.counts.duration_s);
            result.folds.push_back(std::move(fr));
        }

        std::vector<std::string> subjects;
        for (const auto& fr : result.folds)
            if (std::find(subjects.begin(), subjects.end(), fr.subject_id) == subjects.end())
                subjects.push_back(fr.subject_id);
        std::sort(subjects.begin(), subjects.end());
        std::vector<ScoreReport> reports;
        for (const auto& s : subjects) {
            std::vector<FoldCounts> counts;
            for (const auto& fr : result.folds)
                if (fr.subject_id == s) counts.push_back(fr.counts);
            result.subjects.push_back({s, aggregate_counts(counts, cfg.aggregation)});
            reports.push_back(result.subjects.back().report);
        }
        result.average = average_reports(reports);

        if (!cfg.out_dir.empty()) {
            write_run_outputs(cfg.out_dir, result, cfg);
            std::filesystem::remove(cfg.out_dir / kIncompleteMarker);
        }
        return result;
    } catch (const std::exception& e) {
        if (!cfg.out_dir.empty()) {
            std::ofstream marker(cfg.out_dir / kIncompleteMarker, std::ios::app);
            marker << "failed: " << e.what() << '\n';
        }
        throw;
    }
}

RunResult run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    const auto data = prepare_data(cfg.source, cfg.bandpass, cfg.jobs);
    return run_experiment(cfg, data);
}

nlohmann::ordered_json to_json(const RunResult& result, const ExperimentConfig& cfg)
{
    nlohmann::ordered_json j;
    j["format"] = "seizeval-report";
    j["tool_version"] = kToolVersion;
    j["report_csv_version"] = kReportCsvVersion;
    j["config"] = to_json(cfg);
    j["seed"] = cfg.seed;
    j["average"] = to_json(result.average);
    auto subjects = nlohmann::ordered_json::array();
    for (const auto& s : result.subjects) subjects.push_back({{"subject", s.subject_id}, {"report", to_json(s.report)}});
    j["subjects"] = std::move(subjects);
    auto folds = nlohmann::ordered_json::array();
    for (const auto& f : result.folds)
        folds.push_back({{"subject", f.subject_id},
                         {"fold", f.index},
                         {"test_files", f.test_files},
                         {"report", to_json(f.report)}});
    j["folds"] = std::move(folds);
    return j;
}

void write_run_outputs(const std::filesystem::path& dir, const RunResult& result, const ExperimentConfig& cfg)
{
    std::filesystem::create_directories(dir);
    std::string folds = "subject,fold,test_files," + report_csv_header() + "\n";
    for (const auto& f : result.folds) {
        std::string tests;
        for (const auto& t : f.test_files) tests += (tests.empty() ? "" : ";") + t;
        folds += f.subject_id + "," + std::to_string(f.index) + "," + tests + "," + report_csv_row(f.report) + "\n";
    }
    write_text(dir / "folds.csv", folds);

    std::vector<Annotation> detections;
    for (const auto& f : result.folds) detections.insert(detections.end(), f.detections.begin(), f.detections.end());
    std::ostringstream det;
    write_annotations(det, detections);
    write_text(dir / "detections.csv", det.str());

    std::string subjects = "subject," + report_csv_header() + "\n";
    for (const auto& s : result.subjects) subjects += s.subject_id + "," + report_csv_row(s.report) + "\n";
    subjects += "average," + report_csv_row(result.average) + "\n";
    write_text(dir / "subjects.csv", subjects);

    write_text(dir / "report.json", to_json(result, cfg).dump(2) + "\n");
    write_text(dir / "foldplan.json", to_json(result.plan).dump(2) + "\n");

    PanelSeries series{cfg.arrangement.name() + " " + std::string(to_string(cfg.cv)), result.average, {}};
    for (const auto& s : result.subjects) series.subjects.push_back(s.report);
    const std::string title = cfg.arrangement.name() + ", " + std::string(to_string(cfg.cv)) + ", " +
                              std::string(to_string(cfg.scope)) + ", " + std::string(to_string(cfg.aggregation));
    write_text(dir / "panel.svg", render_metric_panel(std::span(&series, 1), title));
}

}  // namespace seizeval
